// SPDX-License-Identifier: Apache-2.0
#include "policybench/captdata/dataset.hpp"

#include "policybench/error.hpp"

#include <fstream>

namespace policybench::captdata {

DatasetFormat dataset_format_from_string(const std::string& name) {
    if (name == "chat_jsonl") {
        return DatasetFormat::ChatJsonl;
    }
    if (name == "plain_jsonl") {
        return DatasetFormat::PlainJsonl;
    }
    throw ConfigError("format", "expected chat_jsonl or plain_jsonl, got '" + name + "'");
}

std::string to_string(DatasetFormat format) {
    return format == DatasetFormat::ChatJsonl ? "chat_jsonl" : "plain_jsonl";
}

json to_json(const DatasetManifest& manifest) {
    return json{{"path", manifest.path},         {"format", manifest.format},
                {"total", manifest.total},       {"per_kind", manifest.per_kind},
                {"seed", manifest.seed},         {"content_hash", manifest.content_hash}};
}

json example_line(const TrainingExample& example, DatasetFormat format) {
    json line{{"kind", to_string(example.kind)}, {"pid", example.pid}, {"provenance", example.provenance}};
    if (format == DatasetFormat::ChatJsonl) {
        json messages = json::array();
        if (!example.system.empty()) {
            messages.push_back({{"role", "system"}, {"content", example.system}});
        }
        messages.push_back({{"role", "user"}, {"content", example.prompt}});
        messages.push_back({{"role", "assistant"}, {"content", example.response}});
        line["messages"] = std::move(messages);
    } else {
        if (!example.system.empty()) {
            line["system"] = example.system;
        }
        line["prompt"] = example.prompt;
        line["response"] = example.response;
    }
    return line;
}

DatasetManifest emit_dataset(const std::vector<TrainingExample>& examples, const std::filesystem::path& path,
                             DatasetFormat format, std::uint64_t seed) {
    if (examples.empty()) {
        throw InputError("refusing to write an empty dataset");
    }
    std::error_code ec;
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    DatasetManifest manifest;
    manifest.path = path.string();
    manifest.format = to_string(format);
    manifest.seed = seed;
    std::uint64_t hash = fnv1a64("");
    for (const auto& example : examples) {
        const auto text = example_line(example, format).dump() + "\n";
        out << text;
        // Chain the per-line hashes so the digest covers line order too.
        hash = fnv1a64(hex64(hash) + text);
        ++manifest.per_kind[to_string(example.kind)];
    }
    out.flush();
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
    manifest.total = examples.size();
    manifest.content_hash = hex64(hash);
    return manifest;
}

} // namespace policybench::captdata
