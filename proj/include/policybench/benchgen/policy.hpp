// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "policybench/benchgen/config.hpp"
#include "policybench/benchgen/environment.hpp"
#include "policybench/benchgen/expression.hpp"

#include <cstdint>
#include <mutex>
#include <set>
#include <string>
#include <vector>

namespace policybench::benchgen {

struct ArgSpec {
    int arg_index = 1;
    Expression expression;
    std::string prose;

    friend bool operator==(const ArgSpec&, const ArgSpec&) = default;
};

struct TaskSpec {
    int task_index = 1;
    std::vector<int> required_layers; // ascending, always contains 1
    std::vector<ArgSpec> args;

    bool multi_layer() const { return required_layers.size() > 1; }
    std::string name() const { return "Task-Type-" + std::to_string(task_index); }
    std::string finish_tool() const { return "finish-task-" + std::to_string(task_index); }

    friend bool operator==(const TaskSpec&, const TaskSpec&) = default;
};

struct PolicyDocument {
    std::string pid;
    int layer_count = 0;
    GlobalAttributes globals;
    std::vector<std::string> general_policies;
    std::vector<std::string> tool_instructions;
    std::vector<TaskSpec> tasks;
    std::string rendered;

    const TaskSpec& task(int task_index) const;

    friend bool operator==(const PolicyDocument&, const PolicyDocument&) = default;
};

/// What measure_complexity recovers from a policy.
struct ComplexityProfile {
    int task_count = 0;
    int args_per_task = 0;
    int max_depth = 0;
    int min_depth = 0;
    int layer_count = 0;

    /// Task count = args per task = task_k, uniform depth = workflow_k and
    /// layer count = environment_k.
    bool matches(const ComplexityConfig& cc) const;

    friend bool operator==(const ComplexityProfile&, const ComplexityProfile&) = default;
};

/// Hands out unique "#P" + 5-digit identifiers. Thread-safe.
class PidRegistry {
public:
    /// Draws from a stream derived from `seed`, redrawing on collision.
    std::string allocate(std::uint64_t seed);

    /// Records an externally chosen pid; false if already taken.
    bool claim(const std::string& pid);

    std::size_t size() const;

private:
    mutable std::mutex mutex_;
    std::set<std::string> taken_;
};

bool is_valid_pid(std::string_view pid);

/// Generates a policy over `env` honouring every dial of `cc`.
/// Throws ConfigError when env's layer count differs from cc.environment_k.
PolicyDocument generate_policy(const ComplexityConfig& cc, const Environment& env,
                               std::uint64_t seed, PidRegistry* registry = nullptr);

/// Throws StructuralError for an empty task list, an empty task, or tasks
/// with differing argument counts.
ComplexityProfile measure_complexity(const PolicyDocument& policy);

/// Rebuilds `policy.rendered` (and every arg's prose) from the structured
/// fields.
void render_policy(PolicyDocument& policy);

std::string render_policy_markdown(const PolicyDocument& policy);

/// Fixed template bullets, shared by renderer and analysis.
std::vector<std::string> general_rule_lines();
std::vector<std::string> general_policy_lines();
std::string layer_requirement_line(const TaskSpec& task);
std::string reference_rule_line(int layer_count);
std::vector<std::string> tool_instruction_blocks();

} // namespace policybench::benchgen
