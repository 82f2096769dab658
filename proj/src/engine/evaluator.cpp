// SPDX-License-Identifier: Apache-2.0
#include "policybench/engine/evaluator.hpp"

#include "policybench/error.hpp"

#include <algorithm>
#include <numeric>

namespace policybench::engine {

using benchgen::Aggregate;
using benchgen::AggregateKind;
using benchgen::AttrRef;
using benchgen::Conditional;
using benchgen::Const;
using benchgen::LookupRef;

json to_json(const Value& value) {
    return std::visit([](const auto& v) { return json(v); }, value);
}

std::string to_string(const Value& value) {
    if (const auto* i = std::get_if<std::int64_t>(&value)) {
        return std::to_string(*i);
    }
    return std::get<std::string>(value);
}

namespace {

const ProfileInstance& bound_instance(const ProfileBinding& binding, int layer) {
    const auto it = binding.instances.find(layer);
    if (it == binding.instances.end() || it->second == nullptr) {
        throw BindingError("no profile bound for layer " + std::to_string(layer));
    }
    return *it->second;
}

std::int64_t resolve(const AttrRef& ref, const ProfileBinding& binding) {
    if (ref.is_global()) {
        const auto& values = binding.globals.values;
        if (ref.attribute < 1 || ref.attribute > static_cast<int>(values.size())) {
            throw BindingError("global-attribute-" + std::to_string(ref.attribute) + " is not defined");
        }
        return values[static_cast<std::size_t>(ref.attribute - 1)];
    }
    const auto& instance = bound_instance(binding, ref.layer);
    const auto it = instance.cond_attrs.find(ref.attribute);
    if (it == instance.cond_attrs.end()) {
        throw BindingError(benchgen::render_atom(ref) + " is not a numeric attribute");
    }
    return it->second;
}

std::int64_t apply(AggregateKind kind, std::int64_t parameter, const std::vector<std::int64_t>& xs) {
    const std::int64_t sum = std::accumulate(xs.begin(), xs.end(), std::int64_t{0});
    switch (kind) {
    case AggregateKind::AvgIntDiv: {
        const auto n = static_cast<std::int64_t>(xs.size());
        // Floor, not truncation, so negative sums round down.
        return sum >= 0 ? sum / n : -((-sum + n - 1) / n);
    }
    case AggregateKind::Sum:
        return sum;
    case AggregateKind::Max:
        return *std::max_element(xs.begin(), xs.end());
    case AggregateKind::Min:
        return *std::min_element(xs.begin(), xs.end());
    case AggregateKind::Range:
        return *std::max_element(xs.begin(), xs.end()) - *std::min_element(xs.begin(), xs.end());
    case AggregateKind::Product:
        return std::accumulate(xs.begin(), xs.end(), std::int64_t{1}, std::multiplies<>());
    case AggregateKind::Mod: {
        const std::int64_t r = sum % parameter;
        return r < 0 ? r + parameter : r;
    }
    case AggregateKind::CountGt:
        return std::count_if(xs.begin(), xs.end(), [&](std::int64_t x) { return x > parameter; });
    case AggregateKind::SumEven:
        return std::accumulate(xs.begin(), xs.end(), std::int64_t{0},
                               [](std::int64_t acc, std::int64_t x) { return x % 2 == 0 ? acc + x : acc; });
    }
    return 0;
}

std::string join_values(const std::vector<std::int64_t>& xs, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        out += (i == 0 ? "" : sep) + std::to_string(xs[i]);
    }
    return out;
}

} // namespace

Value eval_expression(const Expression& expr, const ProfileBinding& binding) {
    if (expr.is<Const>()) {
        return expr.as<Const>().value;
    }
    if (expr.is<AttrRef>()) {
        return resolve(expr.as<AttrRef>(), binding);
    }
    if (expr.is<LookupRef>()) {
        return bound_instance(binding, expr.as<LookupRef>().layer).lookup;
    }
    if (expr.is<Conditional>()) {
        const auto& cond = expr.as<Conditional>();
        const bool taken = cond.condition.holds(resolve(cond.condition.lhs, binding));
        return eval_expression(taken ? *cond.then_branch : *cond.else_branch, binding);
    }
    const auto& agg = expr.as<Aggregate>();
    if (agg.operands.empty()) {
        throw BindingError(std::string(benchgen::to_string(agg.kind)) + " aggregate has no operands");
    }
    if (agg.kind == AggregateKind::Mod && agg.parameter <= 0) {
        throw BindingError("mod aggregate needs a positive modulus");
    }
    std::vector<std::int64_t> xs;
    xs.reserve(agg.operands.size());
    for (const auto& operand : agg.operands) {
        xs.push_back(eval_integer(operand, binding));
    }
    return apply(agg.kind, agg.parameter, xs);
}

std::int64_t eval_integer(const Expression& expr, const ProfileBinding& binding) {
    const Value v = eval_expression(expr, binding);
    if (const auto* i = std::get_if<std::int64_t>(&v)) {
        return *i;
    }
    throw BindingError("lookup string used where a number is required");
}

int expression_depth(const Expression& expr) { return benchgen::conditional_depth(expr); }

std::string explain_expression(const Expression& expr, const ProfileBinding& binding) {
    if (expr.is<Const>() || expr.is<AttrRef>() || expr.is<LookupRef>()) {
        const Value v = eval_expression(expr, binding);
        if (expr.is<AttrRef>()) {
            return benchgen::render_atom(expr.as<AttrRef>()) + " = " + to_string(v);
        }
        if (expr.is<LookupRef>()) {
            return "layer-" + std::to_string(expr.as<LookupRef>().layer) + "-attribute-3 = '" + to_string(v) + "'";
        }
        return to_string(v);
    }
    if (expr.is<Conditional>()) {
        const auto& cond = expr.as<Conditional>();
        const auto lhs = resolve(cond.condition.lhs, binding);
        const bool taken = cond.condition.holds(lhs);
        return benchgen::render_atom(cond.condition.lhs) + " = " + std::to_string(lhs) + (taken ? " is " : " is not ") +
               std::string(benchgen::to_string(cond.condition.op)) + " " + std::to_string(cond.condition.threshold) +
               ", so " + explain_expression(taken ? *cond.then_branch : *cond.else_branch, binding);
    }
    const auto& agg = expr.as<Aggregate>();
    std::vector<std::int64_t> xs;
    for (const auto& operand : agg.operands) {
        xs.push_back(eval_integer(operand, binding));
    }
    const auto result = std::to_string(apply(agg.kind, agg.parameter, xs));
    const auto p = std::to_string(agg.parameter);
    switch (agg.kind) {
    case AggregateKind::AvgIntDiv:
        return "(" + join_values(xs, " + ") + ") / " + std::to_string(xs.size()) + " = " + result;
    case AggregateKind::Sum:
        return join_values(xs, " + ") + " = " + result;
    case AggregateKind::Max:
        return "max(" + join_values(xs, ", ") + ") = " + result;
    case AggregateKind::Min:
        return "min(" + join_values(xs, ", ") + ") = " + result;
    case AggregateKind::Range:
        return "max - min of (" + join_values(xs, ", ") + ") = " + result;
    case AggregateKind::Product:
        return join_values(xs, " * ") + " = " + result;
    case AggregateKind::Mod:
        return "(" + join_values(xs, " + ") + ") mod " + p + " = " + result;
    case AggregateKind::CountGt:
        return "count of (" + join_values(xs, ", ") + ") above " + p + " = " + result;
    case AggregateKind::SumEven:
        return "sum of even values in (" + join_values(xs, ", ") + ") = " + result;
    }
    return result;
}

} // namespace policybench::engine
