// SPDX-License-Identifier: Apache-2.0
#pragma once

// Reference evaluator and solver written against the serialized artifacts
// only. Shares no code with the engine so the two can check each other.

#include <json.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace testsupport {

/// layer -> serialized ProfileInstance.
using JsonBinding = std::map<int, nlohmann::json>;

nlohmann::json bf_eval(const nlohmann::json& expr, const JsonBinding& binding, const std::vector<std::int64_t>& globals);

struct BfAnswer {
    bool conflict = false;
    /// One JSON array of argument values per combination.
    std::vector<nlohmann::json> finish_args;
};

BfAnswer bf_solve(const nlohmann::json& policy, const nlohmann::json& env, const nlohmann::json& query);

/// The instance with `key` in `layer`, or null.
const nlohmann::json* bf_find(const nlohmann::json& env, int layer, const std::string& key);

} // namespace testsupport
