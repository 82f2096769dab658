// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "policybench/benchgen/environment.hpp"
#include "policybench/benchgen/policy.hpp"

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace policybench::benchgen {

struct ById {
    std::string primary_key;
    friend bool operator==(const ById&, const ById&) = default;
};

struct ByLookup {
    int layer = 1;
    std::string value;
    friend bool operator==(const ByLookup&, const ByLookup&) = default;
};

using QueryEntry = std::variant<ById, ByLookup>;

/// A single-turn user request.
///
/// `combinations` counts the attribute combinations requested. For a
/// multi-layer task, combination k pairs the entry's layer-1 instance with the
/// k-th key of every reference list followed. For a layer-1-only task,
/// combination k is the k-th layer-1 instance matched by the entry.
struct Query {
    std::string id;
    std::string text;
    int task_index = 1;
    QueryEntry entry;
    int combinations = 1;

    friend bool operator==(const Query&, const Query&) = default;
};

struct QueryOptions {
    double p_by_id = 0.7;
    int max_combinations = 3;
};

/// The fixed phrase template for a query.
std::string render_query_text(const TaskSpec& task, const QueryEntry& entry, int combinations);

/// Throws GenerationError when env has no layer-1 instances, ConfigError when
/// n < 1 or the policy has no tasks.
std::vector<Query> generate_queries(const PolicyDocument& policy, const Environment& env, int n,
                                    std::uint64_t seed, const QueryOptions& options = {});

} // namespace policybench::benchgen
