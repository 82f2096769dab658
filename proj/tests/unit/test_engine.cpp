// SPDX-License-Identifier: Apache-2.0
#include "brute_force.hpp"
#include "generators.hpp"

#include "policybench/benchgen/policy.hpp"
#include "policybench/benchgen/query.hpp"
#include "policybench/benchgen/serialize.hpp"
#include "policybench/engine/evaluator.hpp"
#include "policybench/engine/oracle.hpp"
#include "policybench/engine/tools.hpp"
#include "policybench/error.hpp"

#include <doctest.h>

using namespace policybench;
using namespace policybench::benchgen;
using namespace policybench::engine;

namespace {

ProfileInstance instance(int layer, std::map<int, std::int64_t> attrs, std::string lookup = "sales") {
    ProfileInstance inst;
    inst.primary_key = primary_key(layer, 1);
    inst.layer = layer;
    inst.index = 1;
    inst.cond_attrs = std::move(attrs);
    inst.lookup = std::move(lookup);
    return inst;
}

Aggregate agg(AggregateKind kind, std::vector<Expression> operands, std::int64_t parameter = 0) {
    Aggregate a;
    a.kind = kind;
    a.operands = std::move(operands);
    a.parameter = parameter;
    return a;
}

} // namespace

TEST_SUITE("engine") {

TEST_CASE("aggregates match hand computation") {
    const auto l1 = instance(1, {{1, 58}, {2, 26}, {7, 96}, {8, 7}});
    ProfileBinding b;
    b.instances[1] = &l1;
    b.globals.values = {30, 60, 7};
    const Expression a1 = AttrRef{1, 1};
    const Expression a2 = AttrRef{1, 2};
    const Expression a7 = AttrRef{1, 7};
    const Expression a8 = AttrRef{1, 8};
    // (58 + 26 + 96) / 3 = 60
    CHECK(eval_integer(agg(AggregateKind::AvgIntDiv, {a1, a2, a7}), b) == 60);
    // (58 + 26 + 7) / 3 = 30.33 -> 30
    CHECK(eval_integer(agg(AggregateKind::AvgIntDiv, {a1, a2, a8}), b) == 30);
    CHECK(eval_integer(agg(AggregateKind::AvgIntDiv, {Const{-7}, Const{0}}), b) == -4);
    CHECK(eval_integer(agg(AggregateKind::Sum, {a1, Const{10}}), b) == 68);
    CHECK(eval_integer(agg(AggregateKind::Max, {a1, a7}), b) == 96);
    CHECK(eval_integer(agg(AggregateKind::Min, {a2, a8, Const{50}}), b) == 7);
    CHECK(eval_integer(agg(AggregateKind::Range, {a1, a2, a7}), b) == 70);
    CHECK(eval_integer(agg(AggregateKind::Product, {a8, Const{3}}), b) == 21);
    CHECK(eval_integer(agg(AggregateKind::Mod, {a1, a7}, 100), b) == 54);
    CHECK(eval_integer(agg(AggregateKind::Mod, {Const{-3}}, 10), b) == 7);
    CHECK(eval_integer(agg(AggregateKind::CountGt, {a1, a2, a7, a8}, 50), b) == 2);
    CHECK(eval_integer(agg(AggregateKind::SumEven, {a1, a2, a7, a8}), b) == 58 + 26 + 96);
    CHECK(eval_integer(AttrRef::global(2), b) == 60);
    CHECK(std::get<std::string>(eval_expression(LookupRef{1}, b)) == "sales");
}

TEST_CASE("conditionals pick the branch named by the comparison") {
    const auto l1 = instance(1, {{1, 40}, {2, 10}, {7, 0}, {8, 0}});
    ProfileBinding b;
    b.instances[1] = &l1;
    const auto e = make_conditional({AttrRef{1, 1}, CompareOp::Greater, 40}, Const{1}, Const{2});
    CHECK(eval_integer(e, b) == 2);
    const auto ge = make_conditional({AttrRef{1, 1}, CompareOp::GreaterEqual, 40}, Const{1}, Const{2});
    CHECK(eval_integer(ge, b) == 1);
    const auto nested = make_conditional({AttrRef{1, 2}, CompareOp::Less, 11}, ge, Const{3});
    CHECK(eval_integer(nested, b) == 1);
    CHECK(expression_depth(nested) == 2);
    CHECK(explain_expression(e, b).find("is not > 40") != std::string::npos);
}

TEST_CASE("missing bindings raise BindingError") {
    ProfileBinding b;
    CHECK_THROWS_AS(eval_expression(AttrRef{2, 1}, b), BindingError);
    CHECK_THROWS_AS(eval_expression(AttrRef::global(1), b), BindingError);
    const auto l1 = instance(1, {{1, 1}});
    b.instances[1] = &l1;
    CHECK_THROWS_AS(eval_integer(LookupRef{1}, b), BindingError);
}

TEST_CASE("property: evaluator agrees with the reference evaluator") {
    Rng rng(5);
    for (int i = 0; i < 500; ++i) {
        const auto instances = testsupport::random_instances(rng, 3);
        ProfileBinding b;
        b.globals.values = {30, 60, 7};
        testsupport::JsonBinding jb;
        for (const auto& inst : instances) {
            b.instances[inst.layer] = &inst;
            jb[inst.layer] = to_json(inst);
        }
        const auto expr = testsupport::random_expression(rng, static_cast<int>(rng.uniform(0, 3)), {1, 2, 3});
        CHECK(to_json(eval_expression(expr, b)) == testsupport::bf_eval(to_json(expr), jb, b.globals.values));
    }
}

TEST_CASE("tool registry exposes the expected tools and behaviours") {
    ComplexityConfig cc;
    cc.environment_k = 3;
    cc.task_k = 3;
    const auto env = generate_environment(EnvConfig::defaults(3), 1);
    const auto policy = generate_policy(cc, env, 2);
    const auto registry = register_tools(policy, env);
    CHECK(registry.size() == 3 + 3 + 3 + 1);
    CHECK(registry.signatures().back().name == kToolConflict);

    const auto got = registry.execute({"Get-Profile-Layer-2", {"profile-2-3"}});
    CHECK_FALSE(got.is_error);
    CHECK(got.payload.at("primary_key") == "profile-2-3");
    CHECK(got.payload.contains("attribute-5"));

    const auto missing = registry.execute({"Get-Profile-Layer-2", {"profile-1-3"}});
    CHECK(missing.is_error);
    CHECK(missing.payload.at("error").at("code") == "not_found");

    const auto lookup = env.layers[0].instances[0].lookup;
    const auto found = registry.execute({"Search-Profile-Layer-1", {lookup}});
    CHECK(found.payload.at("results").size() == env.search(1, lookup).size());
    CHECK(registry.execute({"Search-Profile-Layer-1", {"no-such-value"}}).payload.at("results").empty());

    const auto bad_shape = registry.execute({"finish-task-1", {json::array({1, 2})}});
    CHECK(bad_shape.payload.at("error").at("code") == "arg_shape");
    const auto ok = registry.execute({"finish-task-1", {json::array({1, 2, "x"})}});
    CHECK_FALSE(ok.is_error);
    CHECK_FALSE(registry.execute({kToolConflict, {}}).is_error);
    CHECK_THROWS_AS(registry.execute({"Delete-Everything", {}}), ProtocolError);

    ComplexityConfig four = cc;
    four.environment_k = 4;
    const auto env4 = generate_environment(EnvConfig::defaults(4), 1);
    const auto policy4 = generate_policy(four, env4, 2);
    CHECK_THROWS_AS(register_tools(policy4, env), ConfigError);
}

TEST_CASE("tool call blocks use the documented argument names") {
    CHECK(render_tool_call_block({"Get-Profile-Layer-1", {"profile-1-5"}}) ==
          "```json\n{\"arguments\":{\"index-value\":\"profile-1-5\"},\"tool\":\"Get-Profile-Layer-1\"}\n```");
    CHECK(render_tool_call_block({"Tool-Conflict", {}}).find("\"arguments\":{}") != std::string::npos);
}

TEST_CASE("unresolvable entry points give a lone Tool-Conflict") {
    ComplexityConfig cc;
    const auto env = generate_environment(EnvConfig::defaults(3), 1);
    const auto policy = generate_policy(cc, env, 2);
    Query q;
    q.id = "q1";
    q.task_index = 1;
    q.entry = ById{"profile-1-999"};
    const auto gold = solve_query(policy, env, q);
    REQUIRE(gold.actions.size() == 1);
    CHECK(gold.actions[0].name == kToolConflict);
    CHECK(gold.conflict());
    CHECK(gold.final_args.empty());
    q.entry = ByLookup{1, "no-such-department"};
    CHECK(solve_query(policy, env, q).actions.size() == 1);
}

TEST_CASE("gold trajectories call Get for every required layer and finish once per combination") {
    ComplexityConfig cc;
    cc.task_k = 5;
    cc.workflow_k = 2;
    const auto env = generate_environment(EnvConfig::defaults(3), 4);
    const auto policy = generate_policy(cc, env, 5);
    for (const auto& q : generate_queries(policy, env, 100, 6)) {
        const auto gold = solve_query(policy, env, q);
        CHECK(gold.actions.size() == gold.rationales.size());
        if (gold.conflict()) {
            continue;
        }
        const auto& task = policy.task(q.task_index);
        CHECK(static_cast<int>(gold.final_args.size()) == q.combinations);
        for (int layer : task.required_layers) {
            const auto name = tool_get_name(layer);
            CHECK(std::any_of(gold.actions.begin(), gold.actions.end(),
                              [&](const ToolCall& c) { return c.name == name; }));
        }
        CHECK(gold.actions.back().name == task.finish_tool());
        CHECK(gold_from_json(to_json(gold)) == gold);
    }
}

TEST_CASE("property: oracle final args equal the brute-force solver") {
    Rng rng(23);
    for (int cell = 0; cell < 12; ++cell) {
        auto cc = testsupport::random_complexity(rng);
        cc.environment_k = static_cast<int>(rng.uniform(1, 4));
        const auto env = generate_environment(EnvConfig::defaults(cc.environment_k), rng.next());
        const auto policy = generate_policy(cc, env, rng.next());
        const auto penv = to_json(env);
        const auto ppol = to_json(policy);
        for (const auto& q : generate_queries(policy, env, 40, rng.next())) {
            const auto gold = solve_query(policy, env, q);
            const auto bf = testsupport::bf_solve(ppol, penv, to_json(q));
            CHECK(gold.conflict() == bf.conflict);
            REQUIRE(gold.final_args.size() == bf.finish_args.size());
            for (std::size_t k = 0; k < bf.finish_args.size(); ++k) {
                CHECK(json(gold.final_args[k]) == bf.finish_args[k]);
            }
        }
    }
}

} // TEST_SUITE
