// SPDX-License-Identifier: Apache-2.0
#pragma once

// Hand-rolled generators for the property tests.

#include "policybench/benchgen/config.hpp"
#include "policybench/benchgen/environment.hpp"
#include "policybench/benchgen/expression.hpp"
#include "policybench/rng.hpp"

#include <vector>

namespace testsupport {

using policybench::Rng;
namespace bg = policybench::benchgen;

inline bg::AttrRef random_attr(Rng& rng, const std::vector<int>& layers, bool allow_global = true) {
    if (allow_global && rng.bernoulli(0.2)) {
        return bg::AttrRef::global(static_cast<int>(rng.uniform(1, 3)));
    }
    static const std::vector<int> attrs{1, 2, 7, 8};
    return bg::AttrRef{rng.pick(layers), rng.pick(attrs)};
}

inline bg::Expression random_leaf(Rng& rng, const std::vector<int>& layers) {
    return rng.bernoulli(0.5) ? bg::Expression(random_attr(rng, layers)) : bg::Expression(bg::Const{rng.uniform(0, 99)});
}

inline bg::Expression random_aggregate(Rng& rng, const std::vector<int>& layers) {
    static const std::vector<bg::AggregateKind> kinds{
        bg::AggregateKind::AvgIntDiv, bg::AggregateKind::Sum,     bg::AggregateKind::Max,
        bg::AggregateKind::Min,       bg::AggregateKind::Range,   bg::AggregateKind::Product,
        bg::AggregateKind::Mod,       bg::AggregateKind::CountGt, bg::AggregateKind::SumEven};
    bg::Aggregate agg;
    agg.kind = rng.pick(kinds);
    if (agg.kind == bg::AggregateKind::Product) {
        agg.operands = {bg::Expression(random_attr(rng, layers)), bg::Expression(bg::Const{rng.uniform(2, 9)})};
        return agg;
    }
    const int n = agg.kind == bg::AggregateKind::Max || agg.kind == bg::AggregateKind::Min
                      ? static_cast<int>(rng.uniform(2, 4))
                      : static_cast<int>(rng.uniform(3, 5));
    agg.operands.push_back(bg::Expression(random_attr(rng, layers)));
    for (int i = 1; i < n; ++i) {
        agg.operands.push_back(random_leaf(rng, layers));
    }
    if (agg.kind == bg::AggregateKind::Mod) {
        agg.parameter = rng.uniform(2, 100);
    } else if (agg.kind == bg::AggregateKind::CountGt) {
        agg.parameter = rng.uniform(0, 99);
    }
    return agg;
}

/// A full binary if/else tree of exactly `depth` levels.
inline bg::Expression random_expression(Rng& rng, int depth, const std::vector<int>& layers) {
    if (depth == 0) {
        return rng.bernoulli(0.3) ? random_leaf(rng, layers) : random_aggregate(rng, layers);
    }
    static const std::vector<bg::CompareOp> ops{bg::CompareOp::Greater, bg::CompareOp::Less, bg::CompareOp::Equal,
                                                bg::CompareOp::GreaterEqual, bg::CompareOp::LessEqual};
    bg::Comparison c{random_attr(rng, layers), rng.pick(ops), rng.uniform(0, 99)};
    return bg::make_conditional(c, random_expression(rng, depth - 1, layers), random_expression(rng, depth - 1, layers));
}

inline bg::ComplexityConfig random_complexity(Rng& rng) {
    bg::ComplexityConfig cc;
    cc.environment_k = static_cast<int>(rng.uniform(1, 5));
    cc.task_k = static_cast<int>(rng.uniform(1, 12));
    cc.workflow_k = static_cast<int>(rng.uniform(0, 4));
    cc.num_queries = static_cast<int>(rng.uniform(1, 30));
    cc.seed = rng.next();
    return cc;
}

/// Instances for layers 1..n with random condition attributes.
inline std::vector<bg::ProfileInstance> random_instances(Rng& rng, int n) {
    std::vector<bg::ProfileInstance> out;
    for (int l = 1; l <= n; ++l) {
        bg::ProfileInstance inst;
        inst.primary_key = bg::primary_key(l, 1);
        inst.layer = l;
        inst.index = 1;
        for (int a : bg::kConditionAttributes) {
            inst.cond_attrs[a] = rng.uniform(-20, 120);
        }
        inst.lookup = "vocab-" + std::to_string(rng.uniform(0, 9));
        out.push_back(inst);
    }
    return out;
}

} // namespace testsupport
