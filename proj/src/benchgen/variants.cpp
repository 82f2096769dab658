// SPDX-License-Identifier: Apache-2.0
#include "policybench/benchgen/variants.hpp"

#include "policybench/engine/evaluator.hpp"
#include "policybench/error.hpp"
#include "policybench/rng.hpp"

#include <algorithm>
#include <set>

namespace policybench::benchgen {

namespace {

constexpr int kMaxAttempts = 200;
constexpr int kProbeBindings = 64;

/// A numeric constant or threshold inside an expression, addressable by
/// pre-order position.
std::vector<std::int64_t*> numeric_sites(Expression& expr) {
    std::vector<std::int64_t*> sites;
    if (expr.is<Const>()) {
        sites.push_back(&expr.as<Const>().value);
    } else if (expr.is<Aggregate>()) {
        auto& agg = expr.as<Aggregate>();
        if (agg.kind == AggregateKind::CountGt) {
            sites.push_back(&agg.parameter);
        }
        for (auto& operand : agg.operands) {
            auto inner = numeric_sites(operand);
            sites.insert(sites.end(), inner.begin(), inner.end());
        }
    } else if (expr.is<Conditional>()) {
        auto& cond = expr.as<Conditional>();
        sites.push_back(&cond.condition.threshold);
        for (auto* branch : {&*cond.then_branch, &*cond.else_branch}) {
            auto inner = numeric_sites(*branch);
            sites.insert(sites.end(), inner.begin(), inner.end());
        }
    }
    return sites;
}

/// Synthetic instances for every layer, condition attributes in [0, 99].
std::vector<ProfileInstance> probe_instances(int layers, Rng& rng) {
    std::vector<ProfileInstance> instances;
    for (int l = 1; l <= layers; ++l) {
        ProfileInstance instance;
        instance.primary_key = primary_key(l, 1);
        instance.layer = l;
        instance.index = 1;
        for (int attr : kConditionAttributes) {
            instance.cond_attrs[attr] = rng.uniform(0, 99);
        }
        instance.lookup = "probe";
        instances.push_back(std::move(instance));
    }
    return instances;
}

bool answers_differ(const Expression& a, const Expression& b, const PolicyDocument& policy, Rng& rng) {
    for (int i = 0; i < kProbeBindings; ++i) {
        const auto instances = probe_instances(std::max(1, policy.layer_count), rng);
        engine::ProfileBinding binding;
        binding.globals = policy.globals;
        for (const auto& instance : instances) {
            binding.instances[instance.layer] = &instance;
        }
        if (engine::eval_expression(a, binding) != engine::eval_expression(b, binding)) {
            return true;
        }
    }
    return false;
}

std::string layers_answer(const TaskSpec& task) {
    std::string out;
    for (std::size_t i = 0; i < task.required_layers.size(); ++i) {
        out += (i == 0 ? "layer " : ", layer ") + std::to_string(task.required_layers[i]);
    }
    return out;
}

} // namespace

std::pair<OverrideDelta, PolicyDocument> generate_override(const PolicyDocument& policy, std::uint64_t seed) {
    if (policy.tasks.empty()) {
        throw StructuralError("override needs a policy with at least one task");
    }
    std::vector<std::pair<std::size_t, std::size_t>> candidates;
    for (std::size_t t = 0; t < policy.tasks.size(); ++t) {
        for (std::size_t a = 0; a < policy.tasks[t].args.size(); ++a) {
            Expression copy = policy.tasks[t].args[a].expression;
            if (!numeric_sites(copy).empty()) {
                candidates.emplace_back(t, a);
            }
        }
    }
    if (candidates.empty()) {
        throw StructuralError("policy " + policy.pid + " has no numeric constant to override");
    }

    Rng rng(seed);
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        const auto [t, a] = rng.pick(candidates);
        const auto& original = policy.tasks[t].args[a];
        Expression mutated = original.expression;
        auto sites = numeric_sites(mutated);
        std::int64_t* site = sites[rng.index(sites.size())];
        const std::int64_t old_value = *site;
        std::int64_t new_value = rng.uniform(0, 99);
        if (new_value == old_value) {
            continue;
        }
        *site = new_value;
        if (!answers_differ(original.expression, mutated, policy, rng)) {
            continue;
        }
        PolicyDocument changed = policy;
        auto& arg = changed.tasks[t].args[a];
        arg.expression = std::move(mutated);
        render_policy(changed);

        OverrideDelta delta;
        delta.task_index = policy.tasks[t].task_index;
        delta.arg_index = original.arg_index;
        delta.old_value = old_value;
        delta.new_value = new_value;
        delta.old_prose = original.prose;
        delta.new_prose = arg.prose;
        delta.text = "In " + policy.tasks[t].name() + ", arg-" + std::to_string(delta.arg_index) +
                     " is now computed as: " + delta.new_prose + " (previously: " + delta.old_prose + ")";
        return {std::move(delta), std::move(changed)};
    }
    throw StructuralError("no answer-changing override found after " + std::to_string(kMaxAttempts) + " attempts");
}

std::vector<ReferralQa> referral_question_pool(const PolicyDocument& policy) {
    std::vector<ReferralQa> pool;
    for (const auto& task : policy.tasks) {
        const auto name = task.name();
        pool.push_back({"Which tool finishes " + name + "?", task.finish_tool()});
        pool.push_back({"Which layers must be accessed for " + name + "?", layers_answer(task)});
        pool.push_back({"How many arguments does " + task.finish_tool() + " take?", std::to_string(task.args.size())});
        for (const auto& arg : task.args) {
            pool.push_back({"How is arg-" + std::to_string(arg.arg_index) + " of " + name + " computed?", arg.prose});
        }
    }
    for (std::size_t g = 0; g < policy.globals.values.size(); ++g) {
        pool.push_back({"What is the value of Global-Attribute-Value" + std::to_string(g + 1) + "?",
                        std::to_string(policy.globals.values[g])});
    }
    for (int l = 1; l <= policy.layer_count; ++l) {
        const auto layer = std::to_string(l);
        pool.push_back({"Which attributes of a layer-" + layer + " profile can serve as conditions?",
                        "attribute-1, attribute-2, attribute-7 and attribute-8"});
        pool.push_back({"Which attribute of a layer-" + layer + " profile is used when searching?", "attribute-3"});
        pool.push_back({"Which tool accesses a layer-" + layer + " profile by primary key?",
                        "Get-Profile-Layer-" + layer});
        pool.push_back({"Which tool searches layer-" + layer + " profiles by lookup value?",
                        "Search-Profile-Layer-" + layer});
        for (int attr : kReferenceAttributes) {
            pool.push_back({"Which layer do the primary keys in attribute-" + std::to_string(attr) + " of a layer-" +
                                layer + " profile point to?",
                            "layer " + std::to_string(reference_target_layer(l, attr, policy.layer_count))});
        }
    }
    return pool;
}

std::vector<ReferralQa> generate_referral_qas(const PolicyDocument& policy, int n, std::uint64_t seed) {
    if (n < 1) {
        throw ConfigError("n", "must be >= 1");
    }
    const auto pool = referral_question_pool(policy);
    if (static_cast<std::size_t>(n) > pool.size()) {
        throw ConfigError("n", "only " + std::to_string(pool.size()) + " distinct questions exist for " + policy.pid);
    }
    Rng rng(seed);
    std::vector<ReferralQa> out;
    for (std::size_t i : rng.sample_indices(pool.size(), static_cast<std::size_t>(n))) {
        out.push_back(pool[i]);
    }
    return out;
}

} // namespace policybench::benchgen
