// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "policybench/benchgen/environment.hpp"
#include "policybench/benchgen/policy.hpp"
#include "policybench/benchgen/query.hpp"
#include "policybench/engine/evaluator.hpp"
#include "policybench/engine/tools.hpp"

#include <optional>
#include <string>
#include <vector>

namespace policybench::engine {

struct GoldTrajectory {
    std::string query_id;
    std::vector<ToolCall> actions;
    std::vector<std::string> rationales;
    /// One argument list per finish call, in call order.
    std::vector<std::vector<json>> final_args;

    /// True when the trajectory ends in Tool-Conflict.
    bool conflict() const;

    friend bool operator==(const GoldTrajectory&, const GoldTrajectory&) = default;
};

json to_json(const GoldTrajectory& gold);
GoldTrajectory gold_from_json(const json& j);

/// Per combination, the instance chosen at each required layer. nullopt
/// (with `reason` filled) when the request cannot be served.
std::optional<std::vector<ProfileBinding>> resolve_combinations(const benchgen::PolicyDocument& policy,
                                                                const benchgen::Environment& env,
                                                                const benchgen::Query& query,
                                                                std::string* reason = nullptr);

/// Canonical gold trajectory. Throws InputError for an unknown task index.
GoldTrajectory solve_query(const benchgen::PolicyDocument& policy, const benchgen::Environment& env,
                           const benchgen::Query& query);

} // namespace policybench::engine
