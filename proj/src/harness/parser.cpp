// SPDX-License-Identifier: Apache-2.0
#include "policybench/harness/parser.hpp"

#include <cmath>
#include <vector>

namespace policybench::harness {

namespace {

using ordered = nlohmann::ordered_json;

/// Bodies of every ``` fenced block, language tag stripped.
std::vector<std::string_view> fenced_blocks(std::string_view text, bool& unterminated) {
    std::vector<std::string_view> blocks;
    unterminated = false;
    std::size_t pos = 0;
    for (;;) {
        const auto open = text.find("```", pos);
        if (open == std::string_view::npos) {
            return blocks;
        }
        auto body_start = open + 3;
        const auto newline = text.find('\n', body_start);
        const auto close = text.find("```", body_start);
        if (close == std::string_view::npos) {
            unterminated = true;
            return blocks;
        }
        // A tag such as "json" sits between the fence and the first newline.
        if (newline != std::string_view::npos && newline < close) {
            const auto tag = text.substr(body_start, newline - body_start);
            if (tag.find_first_of("{[") == std::string_view::npos) {
                body_start = newline + 1;
            }
        }
        blocks.push_back(text.substr(body_start, close - body_start));
        pos = close + 3;
    }
}

json normalise(const ordered& value) {
    if (value.is_array()) {
        json out = json::array();
        for (const auto& v : value) {
            out.push_back(normalise(v));
        }
        return out;
    }
    if (value.is_object()) {
        json out = json::object();
        for (const auto& [k, v] : value.items()) {
            out[k] = normalise(v);
        }
        return out;
    }
    if (value.is_number_float()) {
        const double d = value.get<double>();
        if (std::isfinite(d) && std::floor(d) == d && std::fabs(d) < 9.0e15) {
            return json(static_cast<std::int64_t>(d));
        }
        return json(d);
    }
    if (value.is_number_unsigned()) {
        return json(value.get<std::uint64_t>());
    }
    if (value.is_number_integer()) {
        return json(value.get<std::int64_t>());
    }
    if (value.is_string()) {
        return json(value.get<std::string>());
    }
    if (value.is_boolean()) {
        return json(value.get<bool>());
    }
    return json(nullptr);
}

} // namespace

ParseResult parse_tool_call(std::string_view assistant_text) {
    bool unterminated = false;
    const auto blocks = fenced_blocks(assistant_text, unterminated);
    if (unterminated) {
        return ParseError{"unterminated fenced block"};
    }
    if (blocks.empty()) {
        return FinalResponse{std::string(assistant_text)};
    }
    if (blocks.size() > 1) {
        return ParseError{"multiple tool calls"};
    }
    ordered object;
    try {
        object = ordered::parse(blocks.front());
    } catch (const ordered::parse_error& e) {
        return ParseError{std::string("block is not valid JSON: ") + e.what()};
    }
    if (!object.is_object()) {
        return ParseError{"block must hold a JSON object"};
    }
    const auto tool = object.find("tool");
    if (tool == object.end() || !tool->is_string() || tool->get<std::string>().empty()) {
        return ParseError{"missing string field \"tool\""};
    }
    engine::ToolCall call;
    call.name = tool->get<std::string>();
    const auto arguments = object.find("arguments");
    if (arguments == object.end() || arguments->is_null()) {
        return call;
    }
    if (arguments->is_object()) {
        for (const auto& [key, value] : arguments->items()) {
            call.args.push_back(normalise(value));
        }
    } else if (arguments->is_array()) {
        for (const auto& value : *arguments) {
            call.args.push_back(normalise(value));
        }
    } else {
        return ParseError{"\"arguments\" must be an object or a list"};
    }
    return call;
}

json to_json(const ParseResult& result) {
    if (const auto* call = std::get_if<engine::ToolCall>(&result)) {
        return json{{"type", "tool_call"}, {"call", engine::to_json(*call)}};
    }
    if (const auto* final_response = std::get_if<FinalResponse>(&result)) {
        return json{{"type", "final_response"}, {"text", final_response->text}};
    }
    return json{{"type", "parse_error"}, {"diagnostic", std::get<ParseError>(result).diagnostic}};
}

ParseResult parse_result_from_json(const json& j) {
    const auto type = j.at("type").get<std::string>();
    if (type == "tool_call") {
        return engine::tool_call_from_json(j.at("call"));
    }
    if (type == "final_response") {
        return FinalResponse{j.at("text").get<std::string>()};
    }
    return ParseError{j.at("diagnostic").get<std::string>()};
}

} // namespace policybench::harness
