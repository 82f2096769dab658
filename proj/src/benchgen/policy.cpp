// SPDX-License-Identifier: Apache-2.0
#include "policybench/benchgen/policy.hpp"

#include "policybench/error.hpp"
#include "policybench/rng.hpp"

#include <algorithm>

namespace policybench::benchgen {

namespace {

constexpr std::uint64_t kPidStream = 0x706964;
constexpr std::uint64_t kStructureStream = 0x737472;
constexpr std::int64_t kConstLo = 0;
constexpr std::int64_t kConstHi = 99;

std::string format_pid(std::int64_t number) { return "#P" + std::to_string(number); }

class PolicyBuilder {
public:
    PolicyBuilder(Rng& rng, int global_count) : rng_(rng), global_count_(global_count) {}

    Expression numeric_arg(const std::vector<int>& layers, int depth) {
        if (depth == 0) {
            return aggregate(layers);
        }
        return make_conditional(condition(layers), subtree(layers, depth - 1, true),
                                subtree(layers, depth - 1, false));
    }

    Expression lookup_arg(const std::vector<int>& layers, int depth) {
        if (depth == 0) {
            return LookupRef{1};
        }
        return make_conditional(condition(layers), lookup_arg(layers, depth - 1),
                                lookup_arg(layers, depth - 1));
    }

private:
    Expression subtree(const std::vector<int>& layers, int depth, bool then_side) {
        if (depth > 0) {
            return make_conditional(condition(layers), subtree(layers, depth - 1, true),
                                    subtree(layers, depth - 1, false));
        }
        if (rng_.bernoulli(0.4)) {
            if (then_side) {
                return attr(layers);
            }
            return Const{rng_.uniform(kConstLo, kConstHi)};
        }
        return aggregate(layers);
    }

    Comparison condition(const std::vector<int>& layers) {
        AttrRef lhs{rng_.pick(layers), rng_.pick(std::vector<int>(kConditionAttributes.begin(),
                                                                  kConditionAttributes.end()))};
        return Comparison{lhs, CompareOp::Greater, rng_.uniform(kConstLo, kConstHi)};
    }

    AttrRef attr(const std::vector<int>& layers) {
        if (global_count_ > 0 && rng_.bernoulli(0.25)) {
            return AttrRef::global(static_cast<int>(rng_.uniform(1, global_count_)));
        }
        return AttrRef{rng_.pick(layers), rng_.pick(std::vector<int>(kConditionAttributes.begin(),
                                                                     kConditionAttributes.end()))};
    }

    Expression operand(const std::vector<int>& layers) {
        if (rng_.bernoulli(0.5)) {
            return attr(layers);
        }
        return Const{rng_.uniform(kConstLo, kConstHi)};
    }

    Expression aggregate(const std::vector<int>& layers) {
        static constexpr AggregateKind kinds[] = {
            AggregateKind::AvgIntDiv, AggregateKind::Sum,     AggregateKind::Max,
            AggregateKind::Min,       AggregateKind::Range,   AggregateKind::Product,
            AggregateKind::Mod,       AggregateKind::CountGt, AggregateKind::SumEven,
        };
        Aggregate agg;
        agg.kind = kinds[rng_.index(std::size(kinds))];
        if (agg.kind == AggregateKind::Product) {
            agg.operands.push_back(attr(layers));
            agg.operands.push_back(Const{rng_.uniform(2, 9)});
            if (rng_.bernoulli(0.5)) {
                std::swap(agg.operands[0], agg.operands[1]);
            }
            return agg;
        }
        int lo = 3;
        int hi = 4;
        switch (agg.kind) {
        case AggregateKind::Max:
        case AggregateKind::Min:
            lo = 2;
            break;
        case AggregateKind::Range:
        case AggregateKind::CountGt:
            hi = 5;
            break;
        default:
            break;
        }
        if (agg.kind == AggregateKind::Mod) {
            agg.parameter = 100;
        } else if (agg.kind == AggregateKind::CountGt) {
            agg.parameter = 50;
        }
        const auto count = static_cast<std::size_t>(rng_.uniform(lo, hi));
        for (std::size_t i = 0; i < count; ++i) {
            agg.operands.push_back(operand(layers));
        }
        const bool has_attr = std::any_of(agg.operands.begin(), agg.operands.end(),
                                          [](const Expression& e) { return e.is<AttrRef>(); });
        if (!has_attr) {
            agg.operands[rng_.index(count)] = attr(layers);
        }
        return agg;
    }

    Rng& rng_;
    int global_count_;
};

} // namespace

const TaskSpec& PolicyDocument::task(int task_index) const {
    for (const auto& t : tasks) {
        if (t.task_index == task_index) {
            return t;
        }
    }
    throw InputError("policy " + pid + " has no Task-Type-" + std::to_string(task_index));
}

bool ComplexityProfile::matches(const ComplexityConfig& cc) const {
    return task_count == cc.task_k && args_per_task == cc.task_k && max_depth == cc.workflow_k &&
           min_depth == cc.workflow_k && layer_count == cc.environment_k;
}

std::string PidRegistry::allocate(std::uint64_t seed) {
    Rng rng(derive_seed(seed, kPidStream));
    std::lock_guard lock(mutex_);
    if (taken_.size() >= 90000) {
        throw GenerationError("pid space exhausted");
    }
    for (;;) {
        auto pid = format_pid(rng.uniform(10000, 99999));
        if (taken_.insert(pid).second) {
            return pid;
        }
    }
}

bool PidRegistry::claim(const std::string& pid) {
    std::lock_guard lock(mutex_);
    return taken_.insert(pid).second;
}

std::size_t PidRegistry::size() const {
    std::lock_guard lock(mutex_);
    return taken_.size();
}

bool is_valid_pid(std::string_view pid) {
    if (pid.size() != 7 || pid.substr(0, 2) != "#P") {
        return false;
    }
    return std::all_of(pid.begin() + 2, pid.end(), [](char c) { return c >= '0' && c <= '9'; });
}

PolicyDocument generate_policy(const ComplexityConfig& cc, const Environment& env, std::uint64_t seed,
                               PidRegistry* registry) {
    cc.validate();
    if (env.layer_count() != cc.environment_k) {
        throw ConfigError("environment_k", "environment has " + std::to_string(env.layer_count()) +
                                               " layers but environment_k is " +
                                               std::to_string(cc.environment_k));
    }
    if (env.globals.values.empty()) {
        throw ConfigError("globals", "environment has no global attributes");
    }

    PolicyDocument policy;
    if (registry != nullptr) {
        policy.pid = registry->allocate(seed);
    } else {
        Rng pid_rng(derive_seed(seed, kPidStream));
        policy.pid = format_pid(pid_rng.uniform(10000, 99999));
    }
    policy.layer_count = cc.environment_k;
    policy.globals = env.globals;
    policy.general_policies = general_policy_lines();

    Rng rng(derive_seed(seed, kStructureStream));
    PolicyBuilder builder(rng, static_cast<int>(env.globals.values.size()));
    std::vector<int> all_layers;
    for (int l = 1; l <= cc.environment_k; ++l) {
        all_layers.push_back(l);
    }

    for (int t = 1; t <= cc.task_k; ++t) {
        TaskSpec task;
        task.task_index = t;
        task.required_layers = (cc.environment_k > 1 && rng.bernoulli(0.5)) ? all_layers : std::vector<int>{1};
        const int lookup_arg = task.multi_layer() ? static_cast<int>(rng.uniform(1, cc.task_k)) : 0;
        for (int a = 1; a <= cc.task_k; ++a) {
            ArgSpec arg{a, Const{0}, {}};
            arg.expression = a == lookup_arg ? builder.lookup_arg(task.required_layers, cc.workflow_k)
                                             : builder.numeric_arg(task.required_layers, cc.workflow_k);
            task.args.push_back(std::move(arg));
        }
        policy.tasks.push_back(std::move(task));
    }
    render_policy(policy);
    return policy;
}

ComplexityProfile measure_complexity(const PolicyDocument& policy) {
    if (policy.tasks.empty()) {
        throw StructuralError("policy has no tasks");
    }
    ComplexityProfile profile;
    profile.task_count = static_cast<int>(policy.tasks.size());
    profile.args_per_task = static_cast<int>(policy.tasks.front().args.size());
    profile.layer_count = policy.layer_count;
    profile.min_depth = -1;
    for (const auto& task : policy.tasks) {
        if (task.args.empty()) {
            throw StructuralError(task.name() + " has no arguments");
        }
        if (static_cast<int>(task.args.size()) != profile.args_per_task) {
            throw StructuralError(task.name() + " has " + std::to_string(task.args.size()) +
                                  " arguments, expected " + std::to_string(profile.args_per_task));
        }
        for (const auto& arg : task.args) {
            validate_expression(arg.expression);
            for (int layer : referenced_layers(arg.expression)) {
                if (layer > policy.layer_count) {
                    throw StructuralError(task.name() + " references layer " + std::to_string(layer) +
                                          " beyond the declared " + std::to_string(policy.layer_count));
                }
            }
            const int depth = conditional_depth(arg.expression);
            profile.max_depth = std::max(profile.max_depth, depth);
            profile.min_depth = profile.min_depth < 0 ? depth : std::min(profile.min_depth, depth);
        }
    }
    return profile;
}

void render_policy(PolicyDocument& policy) {
    for (auto& task : policy.tasks) {
        for (auto& arg : task.args) {
            arg.prose = render_prose(arg.expression);
        }
    }
    policy.tool_instructions = tool_instruction_blocks();
    policy.rendered = render_policy_markdown(policy);
}

} // namespace policybench::benchgen
