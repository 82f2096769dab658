// SPDX-License-Identifier: Apache-2.0
#include "policybench/benchgen/expression.hpp"

#include <algorithm>
#include <array>
#include <set>

namespace policybench::benchgen {

namespace {

constexpr std::array<std::pair<AggregateKind, std::string_view>, 9> kAggregateNames{{
    {AggregateKind::AvgIntDiv, "avg_intdiv"},
    {AggregateKind::Sum, "sum"},
    {AggregateKind::Max, "max"},
    {AggregateKind::Min, "min"},
    {AggregateKind::Range, "range"},
    {AggregateKind::Product, "product"},
    {AggregateKind::Mod, "mod"},
    {AggregateKind::CountGt, "count_gt"},
    {AggregateKind::SumEven, "sum_even"},
}};

constexpr std::array<std::pair<CompareOp, std::string_view>, 5> kCompareSymbols{{
    {CompareOp::Greater, ">"},
    {CompareOp::Less, "<"},
    {CompareOp::Equal, "="},
    {CompareOp::GreaterEqual, ">="},
    {CompareOp::LessEqual, "<="},
}};

template <typename Visit>
void walk(const Expression& expr, Visit&& visit) {
    visit(expr);
    if (expr.is<Aggregate>()) {
        for (const auto& operand : expr.as<Aggregate>().operands) {
            walk(operand, visit);
        }
    } else if (expr.is<Conditional>()) {
        const auto& cond = expr.as<Conditional>();
        walk(*cond.then_branch, visit);
        walk(*cond.else_branch, visit);
    }
}

} // namespace

std::string_view to_string(AggregateKind kind) {
    for (const auto& [k, name] : kAggregateNames) {
        if (k == kind) {
            return name;
        }
    }
    return "unknown";
}

AggregateKind aggregate_kind_from_string(std::string_view name) {
    for (const auto& [k, n] : kAggregateNames) {
        if (n == name) {
            return k;
        }
    }
    throw StructuralError("unknown aggregate kind '" + std::string(name) + "'");
}

std::string_view to_string(CompareOp op) {
    for (const auto& [o, symbol] : kCompareSymbols) {
        if (o == op) {
            return symbol;
        }
    }
    return "?";
}

CompareOp compare_op_from_string(std::string_view symbol) {
    if (symbol == "≥") {
        return CompareOp::GreaterEqual;
    }
    if (symbol == "≤") {
        return CompareOp::LessEqual;
    }
    for (const auto& [o, s] : kCompareSymbols) {
        if (s == symbol) {
            return o;
        }
    }
    throw StructuralError("unknown comparison operator '" + std::string(symbol) + "'");
}

bool Comparison::holds(std::int64_t value) const {
    switch (op) {
    case CompareOp::Greater:
        return value > threshold;
    case CompareOp::Less:
        return value < threshold;
    case CompareOp::Equal:
        return value == threshold;
    case CompareOp::GreaterEqual:
        return value >= threshold;
    case CompareOp::LessEqual:
        return value <= threshold;
    }
    return false;
}

Expression make_conditional(Comparison condition, Expression then_branch, Expression else_branch) {
    return Expression(Conditional{condition, Box<Expression>(std::move(then_branch)),
                                  Box<Expression>(std::move(else_branch))});
}

int conditional_depth(const Expression& expr) {
    if (expr.is<Conditional>()) {
        const auto& cond = expr.as<Conditional>();
        return 1 + std::max(conditional_depth(*cond.then_branch), conditional_depth(*cond.else_branch));
    }
    if (expr.is<Aggregate>()) {
        int depth = 0;
        for (const auto& operand : expr.as<Aggregate>().operands) {
            depth = std::max(depth, conditional_depth(operand));
        }
        return depth;
    }
    return 0;
}

std::vector<AttrRef> collect_attr_refs(const Expression& expr) {
    std::vector<AttrRef> refs;
    walk(expr, [&](const Expression& e) {
        if (e.is<AttrRef>()) {
            refs.push_back(e.as<AttrRef>());
        } else if (e.is<Conditional>()) {
            refs.push_back(e.as<Conditional>().condition.lhs);
        }
    });
    return refs;
}

std::vector<int> referenced_layers(const Expression& expr) {
    std::set<int> layers;
    for (const auto& ref : collect_attr_refs(expr)) {
        if (!ref.is_global()) {
            layers.insert(ref.layer);
        }
    }
    walk(expr, [&](const Expression& e) {
        if (e.is<LookupRef>()) {
            layers.insert(e.as<LookupRef>().layer);
        }
    });
    return {layers.begin(), layers.end()};
}

void validate_expression(const Expression& expr) {
    walk(expr, [](const Expression& e) {
        if (!e.is<Aggregate>()) {
            return;
        }
        const auto& agg = e.as<Aggregate>();
        if (agg.operands.empty()) {
            throw StructuralError(std::string(to_string(agg.kind)) + " aggregate has no operands");
        }
        if (agg.kind == AggregateKind::Mod && agg.parameter <= 0) {
            throw StructuralError("mod aggregate needs a positive modulus");
        }
    });
}

} // namespace policybench::benchgen
