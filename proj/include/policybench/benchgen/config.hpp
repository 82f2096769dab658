// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace policybench::benchgen {

/// The three complexity dials plus query count and seed.
///
/// task_k couples the number of tasks and the number of arguments per task.
/// workflow_k is the conditional-tree depth of every argument formula.
struct ComplexityConfig {
    int environment_k = 3;
    int task_k = 5;
    int workflow_k = 1;
    int num_queries = 100;
    std::uint64_t seed = 0;

    /// Throws ConfigError naming the first invalid field.
    void validate() const;
};

struct EnvConfig {
    int layers = 3;
    int instances_per_layer = 20;
    std::int64_t value_lo = 0;
    std::int64_t value_hi = 99;
    std::vector<std::string> lookup_vocab;
    int ref_fanout = 2;

    /// Defaults with the built-in 50-entry department vocabulary.
    static EnvConfig defaults(int layers);

    void validate() const;
};

/// Fifty distinct department-style lookup strings.
const std::vector<std::string>& default_lookup_vocab();

} // namespace policybench::benchgen
