// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "policybench/captdata/synth.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace policybench::captdata {

enum class DatasetFormat { ChatJsonl, PlainJsonl };

DatasetFormat dataset_format_from_string(const std::string& name);
std::string to_string(DatasetFormat format);

struct DatasetManifest {
    std::string path;
    std::string format;
    std::size_t total = 0;
    std::map<std::string, std::size_t> per_kind;
    std::uint64_t seed = 0;
    std::string content_hash;
};

json to_json(const DatasetManifest& manifest);

json example_line(const TrainingExample& example, DatasetFormat format);

/// Throws InputError for an empty list and IoError when `path` cannot be
/// written.
DatasetManifest emit_dataset(const std::vector<TrainingExample>& examples, const std::filesystem::path& path,
                             DatasetFormat format, std::uint64_t seed);

} // namespace policybench::captdata
