// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "policybench/benchgen/environment.hpp"
#include "policybench/benchgen/policy.hpp"
#include "policybench/json_io.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace policybench::engine {

struct ToolCall {
    std::string name;
    /// Positional arguments: strings, integers, or one list for finish-task.
    std::vector<json> args;

    friend bool operator==(const ToolCall&, const ToolCall&) = default;
};

json to_json(const ToolCall& call);
ToolCall tool_call_from_json(const json& j);

/// Canonical fenced-block rendering used in prompts and training data.
std::string render_tool_call_block(const ToolCall& call);

struct Observation {
    json payload;
    bool is_error = false;

    static Observation error(std::string code, std::string message);

    friend bool operator==(const Observation&, const Observation&) = default;
};

enum class ToolKind { Get, Search, Finish, Conflict };

struct ToolParameter {
    std::string name;
    std::string type;
    std::string description;
};

struct ToolSignature {
    std::string name;
    ToolKind kind = ToolKind::Get;
    /// Layer for Get/Search, task for finish, 0 for Tool-Conflict.
    int index = 0;
    std::string description;
    std::vector<ToolParameter> parameters;
};

std::string tool_get_name(int layer);
std::string tool_search_name(int layer);
std::string tool_finish_name(int task);
inline constexpr const char* kToolConflict = "Tool-Conflict";

/// Read-only tool set over an environment. Safe to share across threads.
class ToolRegistry {
public:
    ToolRegistry(const benchgen::PolicyDocument& policy, const benchgen::Environment& env);

    const std::vector<ToolSignature>& signatures() const { return signatures_; }
    const ToolSignature* find(const std::string& name) const;
    std::size_t size() const { return signatures_.size(); }

    /// Throws ProtocolError for unknown tools. Argument-shape problems and
    /// missing profiles come back as error observations.
    Observation execute(const ToolCall& call) const;

private:
    const benchgen::Environment* env_;
    std::vector<ToolSignature> signatures_;
    std::map<std::string, std::size_t> by_name_;
    std::map<int, std::size_t> arg_counts_;
};

/// Throws ConfigError when the policy declares more layers than env has.
ToolRegistry register_tools(const benchgen::PolicyDocument& policy, const benchgen::Environment& env);

/// The agent-facing record of an instance, as Get returns it.
json instance_payload(const benchgen::ProfileInstance& instance);

/// Compact text listing of every signature, for system prompts.
std::string render_signatures(const std::vector<ToolSignature>& signatures);

} // namespace policybench::engine
