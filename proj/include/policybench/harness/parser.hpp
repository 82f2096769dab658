// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "policybench/engine/tools.hpp"

#include <string>
#include <string_view>
#include <variant>

namespace policybench::harness {

struct FinalResponse {
    std::string text;
    friend bool operator==(const FinalResponse&, const FinalResponse&) = default;
};

struct ParseError {
    std::string diagnostic;
    friend bool operator==(const ParseError&, const ParseError&) = default;
};

using ParseResult = std::variant<engine::ToolCall, FinalResponse, ParseError>;

/// One fenced block holding {"tool": name, "arguments": object|list} gives a
/// ToolCall; no block gives FinalResponse; anything else gives ParseError.
/// Object arguments become positional in their written order.
ParseResult parse_tool_call(std::string_view assistant_text);

json to_json(const ParseResult& result);
ParseResult parse_result_from_json(const json& j);

} // namespace policybench::harness
