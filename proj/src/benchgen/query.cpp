// SPDX-License-Identifier: Apache-2.0
#include "policybench/benchgen/query.hpp"

#include "policybench/error.hpp"
#include "policybench/rng.hpp"

#include <algorithm>
#include <cstdio>

namespace policybench::benchgen {

namespace {

/// Largest combination count the oracle can serve for this entry.
int combination_capacity(const TaskSpec& task, const Environment& env, const QueryEntry& entry,
                         const ProfileInstance& first) {
    if (!task.multi_layer()) {
        if (std::holds_alternative<ById>(entry)) {
            return 1;
        }
        const auto& lookup = std::get<ByLookup>(entry);
        return static_cast<int>(env.search(lookup.layer, lookup.value).size());
    }
    int capacity = static_cast<int>(first.refs.at(kNextLayerRef).size());
    if (env.layer_count() >= 3) {
        capacity = std::min(capacity, static_cast<int>(first.refs.at(kNextNextLayerRef).size()));
    }
    return capacity;
}

std::string query_id(int ordinal) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "q%05d", ordinal);
    return buf;
}

} // namespace

std::string render_query_text(const TaskSpec& task, const QueryEntry& entry, int combinations) {
    std::string text;
    if (const auto* by_id = std::get_if<ById>(&entry)) {
        text = "My profile-id is " + by_id->primary_key + ".";
    } else {
        text = "My profile-info is '" + std::get<ByLookup>(entry).value + "'.";
    }
    text += " Please do " + task.name() + " for me.";
    if (combinations > 1) {
        const auto n = std::to_string(combinations);
        if (task.multi_layer()) {
            text += " I need " + n + " attribute combinations: for the k-th combination, use the k-th primary "
                    "key of every reference attribute you follow.";
        } else {
            text += " I need " + n + " attribute combinations: one for each of the first " + n +
                    " matching profile instances.";
        }
    }
    return text;
}

std::vector<Query> generate_queries(const PolicyDocument& policy, const Environment& env, int n,
                                    std::uint64_t seed, const QueryOptions& options) {
    if (n < 1) {
        throw ConfigError("num_queries", "must be >= 1");
    }
    if (policy.tasks.empty()) {
        throw ConfigError("tasks", "policy has no tasks");
    }
    if (env.layers.empty() || env.layers.front().instances.empty()) {
        throw GenerationError("environment has no layer-1 instances");
    }
    const auto& layer1 = env.layers.front().instances;
    Rng rng(seed);
    std::vector<Query> queries;
    queries.reserve(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) {
        const auto& task = policy.tasks[rng.index(policy.tasks.size())];
        const auto& instance = rng.pick(layer1);
        QueryEntry entry = ById{instance.primary_key};
        const ProfileInstance* first = &instance;
        if (!rng.bernoulli(options.p_by_id)) {
            entry = ByLookup{1, instance.lookup};
            first = env.search(1, instance.lookup).front();
        }
        const int capacity = std::max(1, combination_capacity(task, env, entry, *first));
        const int combinations =
            static_cast<int>(rng.uniform(1, std::max(1, std::min(options.max_combinations, capacity))));
        Query query;
        query.id = query_id(i);
        query.task_index = task.task_index;
        query.entry = std::move(entry);
        query.combinations = combinations;
        query.text = render_query_text(task, query.entry, combinations);
        queries.push_back(std::move(query));
    }
    return queries;
}

} // namespace policybench::benchgen
