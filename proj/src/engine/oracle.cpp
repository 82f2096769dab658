// SPDX-License-Identifier: Apache-2.0
#include "policybench/engine/oracle.hpp"

#include "policybench/error.hpp"

#include <set>

namespace policybench::engine {

using benchgen::ById;
using benchgen::ByLookup;
using benchgen::Environment;
using benchgen::PolicyDocument;
using benchgen::ProfileInstance;
using benchgen::Query;
using benchgen::TaskSpec;

bool GoldTrajectory::conflict() const { return !actions.empty() && actions.back().name == kToolConflict; }

json to_json(const GoldTrajectory& gold) {
    json actions = json::array();
    for (const auto& a : gold.actions) {
        actions.push_back(to_json(a));
    }
    return json{{"query_id", gold.query_id},
                {"actions", std::move(actions)},
                {"rationales", gold.rationales},
                {"final_args", gold.final_args}};
}

GoldTrajectory gold_from_json(const json& j) {
    GoldTrajectory gold;
    gold.query_id = j.at("query_id").get<std::string>();
    for (const auto& a : j.at("actions")) {
        gold.actions.push_back(tool_call_from_json(a));
    }
    gold.rationales = j.at("rationales").get<std::vector<std::string>>();
    for (const auto& args : j.at("final_args")) {
        gold.final_args.push_back(args.get<std::vector<json>>());
    }
    return gold;
}

namespace {

struct Access {
    ToolCall call;
    std::string rationale;
};

/// Actions and per-combination instances, or a failure reason.
struct Plan {
    std::vector<Access> accesses;
    std::vector<std::map<int, const ProfileInstance*>> combinations;
    std::string failure;
};

Plan plan_query(const Environment& env, const TaskSpec& task, const Query& query) {
    Plan plan;
    const int c = query.combinations;
    if (c < 1) {
        plan.failure = "the query requests no attribute combination";
        return plan;
    }

    std::vector<const ProfileInstance*> layer1(static_cast<std::size_t>(c), nullptr);
    if (const auto* by_id = std::get_if<ById>(&query.entry)) {
        const auto* instance = env.find_in_layer(1, by_id->primary_key);
        if (instance == nullptr) {
            plan.failure = "no layer-1 profile has primary key " + by_id->primary_key;
            return plan;
        }
        plan.accesses.push_back({{tool_get_name(1), {by_id->primary_key}},
                                 "General Policy 1: the user gave the layer-1 primary key " + by_id->primary_key +
                                     ", so access it directly."});
        if (!task.multi_layer() && c > 1) {
            plan.failure = "a single profile-id cannot supply " + std::to_string(c) + " layer-1 combinations";
            return plan;
        }
        std::fill(layer1.begin(), layer1.end(), instance);
    } else {
        const auto& lookup = std::get<ByLookup>(query.entry);
        if (lookup.layer != 1) {
            plan.failure = "General Policy 1 only allows searching layer 1";
            return plan;
        }
        const auto matches = env.search(1, lookup.value);
        if (matches.empty()) {
            plan.failure = "no layer-1 profile has lookup value '" + lookup.value + "'";
            return plan;
        }
        plan.accesses.push_back({{tool_search_name(1), {lookup.value}},
                                 "General Policy 1: the user gave the lookup value '" + lookup.value +
                                     "', so search layer 1 for it."});
        const int used = task.multi_layer() ? 1 : c;
        if (used > static_cast<int>(matches.size())) {
            plan.failure = "the search returned " + std::to_string(matches.size()) + " instance(s) but " +
                           std::to_string(c) + " combinations were requested";
            return plan;
        }
        for (int k = 0; k < used; ++k) {
            const auto* m = matches[static_cast<std::size_t>(k)];
            plan.accesses.push_back({{tool_get_name(1), {m->primary_key}},
                                     "The search returned " + std::to_string(matches.size()) +
                                         " instance(s); combination " + std::to_string(k + 1) + " uses " +
                                         m->primary_key + "."});
        }
        for (int k = 0; k < c; ++k) {
            layer1[static_cast<std::size_t>(k)] = matches[static_cast<std::size_t>(task.multi_layer() ? 0 : k)];
        }
    }

    plan.combinations.resize(static_cast<std::size_t>(c));
    for (int k = 0; k < c; ++k) {
        plan.combinations[static_cast<std::size_t>(k)][1] = layer1[static_cast<std::size_t>(k)];
    }
    std::set<std::string> fetched;
    for (int layer : task.required_layers) {
        if (layer == 1) {
            continue;
        }
        const int source_layer = layer <= 3 ? 1 : layer - 1;
        const int attribute = layer == 3 ? benchgen::kNextNextLayerRef : benchgen::kNextLayerRef;
        for (int k = 0; k < c; ++k) {
            auto& combo = plan.combinations[static_cast<std::size_t>(k)];
            const auto source_it = combo.find(source_layer);
            if (source_it == combo.end()) {
                plan.failure = "layer " + std::to_string(layer) + " is reached through layer " +
                               std::to_string(source_layer) + ", which the task does not access";
                return plan;
            }
            const auto* source = source_it->second;
            const auto& keys = source->refs.at(attribute);
            if (k >= static_cast<int>(keys.size())) {
                plan.failure = source->primary_key + " attribute-" + std::to_string(attribute) + " lists only " +
                               std::to_string(keys.size()) + " key(s), fewer than the " + std::to_string(c) +
                               " combinations requested";
                return plan;
            }
            const auto& key = keys[static_cast<std::size_t>(k)];
            const auto* target = env.find_in_layer(layer, key);
            if (target == nullptr) {
                plan.failure = "reference " + key + " does not resolve in layer " + std::to_string(layer);
                return plan;
            }
            combo[layer] = target;
            if (fetched.insert(key).second) {
                plan.accesses.push_back({{tool_get_name(layer), {key}},
                                         task.name() + " needs layer " + std::to_string(layer) + "; attribute-" +
                                             std::to_string(attribute) + " of " + source->primary_key +
                                             " gives " + key + " for combination " + std::to_string(k + 1) + "."});
            }
        }
    }
    return plan;
}

ProfileBinding make_binding(const PolicyDocument& policy, const std::map<int, const ProfileInstance*>& combo) {
    ProfileBinding binding;
    binding.instances = combo;
    binding.globals = policy.globals;
    return binding;
}

} // namespace

std::optional<std::vector<ProfileBinding>> resolve_combinations(const PolicyDocument& policy, const Environment& env,
                                                                const Query& query, std::string* reason) {
    const auto& task = policy.task(query.task_index);
    const auto plan = plan_query(env, task, query);
    if (!plan.failure.empty()) {
        if (reason != nullptr) {
            *reason = plan.failure;
        }
        return std::nullopt;
    }
    std::vector<ProfileBinding> bindings;
    for (const auto& combo : plan.combinations) {
        bindings.push_back(make_binding(policy, combo));
    }
    return bindings;
}

GoldTrajectory solve_query(const PolicyDocument& policy, const Environment& env, const Query& query) {
    const auto& task = policy.task(query.task_index);
    GoldTrajectory gold;
    gold.query_id = query.id;
    const auto plan = plan_query(env, task, query);
    if (!plan.failure.empty()) {
        // An entry point that resolves to nothing yields exactly [Tool-Conflict].
        const bool entry_resolved = !plan.accesses.empty();
        if (entry_resolved) {
            for (const auto& access : plan.accesses) {
                gold.actions.push_back(access.call);
                gold.rationales.push_back(access.rationale);
            }
        }
        gold.actions.push_back({kToolConflict, {}});
        gold.rationales.push_back("The request cannot be handled within the policy: " + plan.failure +
                                  ", so call Tool-Conflict.");
        return gold;
    }
    for (const auto& access : plan.accesses) {
        gold.actions.push_back(access.call);
        gold.rationales.push_back(access.rationale);
    }
    for (std::size_t k = 0; k < plan.combinations.size(); ++k) {
        const auto binding = make_binding(policy, plan.combinations[k]);
        std::vector<json> args;
        std::string rationale = "General Policy 2: finish " + task.name() + " for combination " +
                                std::to_string(k + 1) + " of " + std::to_string(plan.combinations.size()) + ".";
        for (const auto& arg : task.args) {
            args.push_back(to_json(eval_expression(arg.expression, binding)));
            rationale += " arg-" + std::to_string(arg.arg_index) + ": " + explain_expression(arg.expression, binding) + ".";
        }
        gold.actions.push_back({task.finish_tool(), {json(args)}});
        gold.rationales.push_back(std::move(rationale));
        gold.final_args.push_back(std::move(args));
    }
    return gold;
}

} // namespace policybench::engine
