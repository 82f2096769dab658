// SPDX-License-Identifier: Apache-2.0
#include "policybench/engine/tools.hpp"

#include "policybench/error.hpp"

namespace policybench::engine {

using benchgen::Environment;
using benchgen::PolicyDocument;
using benchgen::ProfileInstance;

json to_json(const ToolCall& call) {
    return json{{"name", call.name}, {"args", call.args}};
}

ToolCall tool_call_from_json(const json& j) {
    ToolCall call;
    call.name = j.at("name").get<std::string>();
    for (const auto& arg : j.at("args")) {
        call.args.push_back(arg);
    }
    return call;
}

std::string render_tool_call_block(const ToolCall& call) {
    json arguments = json::object();
    if (call.name.rfind("Get-Profile-Layer-", 0) == 0 && call.args.size() == 1) {
        arguments["index-value"] = call.args[0];
    } else if (call.name.rfind("Search-Profile-Layer-", 0) == 0 && call.args.size() == 1) {
        arguments["key-value"] = call.args[0];
    } else if (call.name.rfind("finish-task-", 0) == 0 && call.args.size() == 1) {
        arguments["attributes"] = call.args[0];
    } else if (!call.args.empty()) {
        arguments = call.args;
    }
    return "```json\n" + json{{"tool", call.name}, {"arguments", arguments}}.dump() + "\n```";
}

Observation Observation::error(std::string code, std::string message) {
    return Observation{json{{"error", {{"code", std::move(code)}, {"message", std::move(message)}}}}, true};
}

std::string tool_get_name(int layer) { return "Get-Profile-Layer-" + std::to_string(layer); }
std::string tool_search_name(int layer) { return "Search-Profile-Layer-" + std::to_string(layer); }
std::string tool_finish_name(int task) { return "finish-task-" + std::to_string(task); }

json instance_payload(const ProfileInstance& instance) {
    json j;
    j["primary_key"] = instance.primary_key;
    for (const auto& [attr, value] : instance.cond_attrs) {
        j["attribute-" + std::to_string(attr)] = value;
    }
    j["attribute-" + std::to_string(benchgen::kLookupAttribute)] = instance.lookup;
    for (const auto& [attr, keys] : instance.refs) {
        j["attribute-" + std::to_string(attr)] = keys;
    }
    return j;
}

ToolRegistry::ToolRegistry(const PolicyDocument& policy, const Environment& env) : env_(&env) {
    if (policy.layer_count > env.layer_count()) {
        throw ConfigError("environment_k", "policy declares " + std::to_string(policy.layer_count) +
                                               " layers but the environment has " +
                                               std::to_string(env.layer_count()));
    }
    for (int l = 1; l <= policy.layer_count; ++l) {
        signatures_.push_back({tool_get_name(l), ToolKind::Get, l,
                               "Access a layer-" + std::to_string(l) + " profile instance by primary key.",
                               {{"index-value", "string", "full primary key, e.g. \"profile-" +
                                                              std::to_string(l) + "-5\""}}});
    }
    for (int l = 1; l <= policy.layer_count; ++l) {
        signatures_.push_back({tool_search_name(l), ToolKind::Search, l,
                               "Find layer-" + std::to_string(l) + " profile instances by lookup value.",
                               {{"key-value", "string", "exact attribute-3 value"}}});
    }
    for (const auto& task : policy.tasks) {
        signatures_.push_back({tool_finish_name(task.task_index), ToolKind::Finish, task.task_index,
                               "Complete " + task.name() + " with its computed arguments.",
                               {{"attributes", "list",
                                 std::to_string(task.args.size()) + " values in task argument order"}}});
        arg_counts_[task.task_index] = task.args.size();
    }
    signatures_.push_back({kToolConflict, ToolKind::Conflict, 0,
                           "Declare that the request cannot be handled within the policy.", {}});
    for (std::size_t i = 0; i < signatures_.size(); ++i) {
        by_name_[signatures_[i].name] = i;
    }
}

const ToolSignature* ToolRegistry::find(const std::string& name) const {
    const auto it = by_name_.find(name);
    return it == by_name_.end() ? nullptr : &signatures_[it->second];
}

Observation ToolRegistry::execute(const ToolCall& call) const {
    const auto* sig = find(call.name);
    if (sig == nullptr) {
        throw ProtocolError("unknown tool '" + call.name + "'");
    }
    auto shape_error = [&](const std::string& expected) {
        return Observation::error("arg_shape", call.name + " expects " + expected);
    };
    switch (sig->kind) {
    case ToolKind::Get: {
        if (call.args.size() != 1 || !call.args[0].is_string()) {
            return shape_error("one string argument (index-value)");
        }
        const auto key = call.args[0].get<std::string>();
        const auto* instance = env_->find_in_layer(sig->index, key);
        if (instance == nullptr) {
            return Observation::error("not_found", "no layer-" + std::to_string(sig->index) +
                                                       " profile with primary key '" + key + "'");
        }
        return Observation{instance_payload(*instance), false};
    }
    case ToolKind::Search: {
        if (call.args.size() != 1 || !call.args[0].is_string()) {
            return shape_error("one string argument (key-value)");
        }
        json results = json::array();
        for (const auto* instance : env_->search(sig->index, call.args[0].get<std::string>())) {
            results.push_back(instance_payload(*instance));
        }
        return Observation{json{{"results", std::move(results)}}, false};
    }
    case ToolKind::Finish: {
        const auto expected = arg_counts_.at(sig->index);
        if (call.args.size() != 1 || !call.args[0].is_array() || call.args[0].size() != expected) {
            return shape_error("one list of " + std::to_string(expected) + " values (attributes)");
        }
        for (const auto& v : call.args[0]) {
            if (!v.is_number_integer() && !v.is_string()) {
                return shape_error("integer or string list elements");
            }
        }
        return Observation{json{{"status", "acknowledged"}, {"tool", call.name}, {"attributes", call.args[0]}},
                           false};
    }
    case ToolKind::Conflict:
        if (!call.args.empty()) {
            return shape_error("no arguments");
        }
        return Observation{json{{"status", "acknowledged"}, {"tool", call.name}}, false};
    }
    return Observation::error("internal", "unhandled tool kind");
}

ToolRegistry register_tools(const PolicyDocument& policy, const Environment& env) {
    return ToolRegistry(policy, env);
}

std::string render_signatures(const std::vector<ToolSignature>& signatures) {
    std::string out;
    for (const auto& sig : signatures) {
        out += "- " + sig.name + "(";
        for (std::size_t i = 0; i < sig.parameters.size(); ++i) {
            const auto& p = sig.parameters[i];
            out += (i == 0 ? "" : ", ") + p.name + ": " + p.type;
        }
        out += "): " + sig.description + "\n";
    }
    return out;
}

} // namespace policybench::engine
