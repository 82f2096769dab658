// SPDX-License-Identifier: Apache-2.0
#include "generators.hpp"

#include "policybench/benchgen/policy.hpp"
#include "policybench/benchgen/query.hpp"
#include "policybench/benchgen/serialize.hpp"
#include "policybench/benchgen/variants.hpp"
#include "policybench/engine/evaluator.hpp"
#include "policybench/error.hpp"

#include <doctest.h>

#include <regex>
#include <set>
#include <thread>

using namespace policybench;
using namespace policybench::benchgen;

namespace {

struct Cell {
    ComplexityConfig cc;
    Environment env;
    PolicyDocument policy;
};

Cell make_cell(int e, int t, int w, std::uint64_t seed) {
    Cell c;
    c.cc.environment_k = e;
    c.cc.task_k = t;
    c.cc.workflow_k = w;
    c.cc.seed = seed;
    c.env = generate_environment(EnvConfig::defaults(e), seed);
    c.policy = generate_policy(c.cc, c.env, seed + 1);
    return c;
}

} // namespace

TEST_SUITE("benchgen") {

TEST_CASE("environment is deterministic and referentially intact") {
    const auto a = generate_environment(EnvConfig::defaults(3), 42);
    const auto b = generate_environment(EnvConfig::defaults(3), 42);
    CHECK(a == b);
    CHECK(to_json(a).dump() == to_json(b).dump());
    CHECK_FALSE(check_referential_integrity(a).has_value());
    CHECK(a.layer_count() == 3);
    CHECK(a.layers[0].instances.size() == 20);
    CHECK(a.layers[1].instances[4].primary_key == "profile-2-5");
    CHECK(generate_environment(EnvConfig::defaults(3), 43) != a);
}

TEST_CASE("reference rotation for three layers") {
    // attribute-4 same layer, attribute-5 next layer, attribute-6 the one after.
    CHECK(reference_target_layer(1, 4, 3) == 1);
    CHECK(reference_target_layer(1, 5, 3) == 2);
    CHECK(reference_target_layer(1, 6, 3) == 3);
    CHECK(reference_target_layer(2, 5, 3) == 3);
    CHECK(reference_target_layer(3, 5, 3) == 1);
    CHECK(reference_target_layer(3, 6, 3) == 2);
}

TEST_CASE("property: every generated environment passes the integrity check") {
    Rng rng(7);
    for (int i = 0; i < 40; ++i) {
        const int layers = static_cast<int>(rng.uniform(1, 6));
        auto cfg = EnvConfig::defaults(layers);
        cfg.instances_per_layer = static_cast<int>(rng.uniform(1, 30));
        cfg.ref_fanout = static_cast<int>(rng.uniform(1, std::min(4, cfg.instances_per_layer)));
        const auto env = generate_environment(cfg, rng.next());
        const auto problem = check_referential_integrity(env);
        CHECK_MESSAGE(!problem.has_value(), problem.value_or(""));
        for (const auto& layer : env.layers) {
            for (const auto& inst : layer.instances) {
                for (const auto& [attr, value] : inst.cond_attrs) {
                    CHECK(value >= cfg.value_lo);
                    CHECK(value <= cfg.value_hi);
                }
            }
        }
    }
}

TEST_CASE("invalid configs raise ConfigError naming the field") {
    ComplexityConfig cc;
    cc.task_k = 0;
    try {
        cc.validate();
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.field() == "task_k");
    }
    auto cfg = EnvConfig::defaults(3);
    cfg.layers = 0;
    CHECK_THROWS_AS(generate_environment(cfg, 1), ConfigError);
    const auto env = generate_environment(EnvConfig::defaults(2), 1);
    ComplexityConfig three;
    three.environment_k = 3;
    CHECK_THROWS_AS(generate_policy(three, env, 1), ConfigError);
}

TEST_CASE("prose round-trips for random expressions") {
    Rng rng(11);
    for (int i = 0; i < 300; ++i) {
        const auto expr = testsupport::random_expression(rng, static_cast<int>(rng.uniform(0, 3)), {1, 2, 3});
        const auto prose = render_prose(expr);
        CHECK(!prose.empty());
        CHECK(prose.back() == '.');
        const auto parsed = parse_prose(prose);
        CHECK_MESSAGE(parsed == expr, prose);
    }
}

TEST_CASE("prose accepts the hand-written max/min form") {
    const auto e = parse_prose("The maximum between layer-1-attribute-2 and layer-2-attribute-7.");
    REQUIRE(e.is<Aggregate>());
    CHECK(e.as<Aggregate>().kind == AggregateKind::Max);
    CHECK(e.as<Aggregate>().operands.size() == 2);
    CHECK_THROWS_AS(parse_prose("Something unrelated."), ProseParseError);
}

TEST_CASE("conditional depth counts nested if/else levels") {
    Rng rng(3);
    for (int d = 0; d <= 4; ++d) {
        CHECK(conditional_depth(testsupport::random_expression(rng, d, {1})) == d);
    }
}

TEST_CASE("property: measure_complexity recovers the generating config") {
    Rng rng(19);
    for (int i = 0; i < 60; ++i) {
        const auto cc = testsupport::random_complexity(rng);
        const auto env = generate_environment(EnvConfig::defaults(cc.environment_k), rng.next());
        const auto policy = generate_policy(cc, env, rng.next());
        const auto profile = measure_complexity(policy);
        CHECK(profile.task_count == cc.task_k);
        CHECK(profile.args_per_task == cc.task_k);
        CHECK(profile.max_depth == cc.workflow_k);
        CHECK(profile.min_depth == cc.workflow_k);
        CHECK(profile.layer_count == cc.environment_k);
        CHECK(profile.matches(cc));
    }
}

TEST_CASE("policy generation is deterministic and tasks are well formed") {
    const auto a = make_cell(3, 5, 2, 9);
    const auto b = make_cell(3, 5, 2, 9);
    CHECK(a.policy == b.policy);
    CHECK(is_valid_pid(a.policy.pid));
    for (const auto& task : a.policy.tasks) {
        REQUIRE(!task.required_layers.empty());
        CHECK(task.required_layers.front() == 1);
        CHECK(std::is_sorted(task.required_layers.begin(), task.required_layers.end()));
        for (const auto& arg : task.args) {
            for (int layer : referenced_layers(arg.expression)) {
                CHECK(std::find(task.required_layers.begin(), task.required_layers.end(), layer) !=
                      task.required_layers.end());
            }
            CHECK(arg.prose == render_prose(arg.expression));
        }
    }
}

TEST_CASE("measure_complexity rejects malformed policies") {
    auto cell = make_cell(3, 3, 1, 5);
    auto empty = cell.policy;
    empty.tasks.clear();
    CHECK_THROWS_AS(measure_complexity(empty), StructuralError);
    auto ragged = cell.policy;
    ragged.tasks[1].args.pop_back();
    CHECK_THROWS_AS(measure_complexity(ragged), StructuralError);
}

TEST_CASE("pids are unique, well formed and safe to allocate concurrently") {
    CHECK(is_valid_pid("#P71067"));
    CHECK_FALSE(is_valid_pid("#P7106"));
    CHECK_FALSE(is_valid_pid("P71067"));
    CHECK_FALSE(is_valid_pid("#Q71067"));
    PidRegistry registry;
    std::vector<std::string> pids(400);
    std::vector<std::thread> threads;
    for (int t = 0; t < 4; ++t) {
        threads.emplace_back([&, t] {
            for (int i = t; i < 400; i += 4) {
                pids[static_cast<std::size_t>(i)] = registry.allocate(static_cast<std::uint64_t>(i % 7));
            }
        });
    }
    for (auto& t : threads) {
        t.join();
    }
    const std::set<std::string> distinct(pids.begin(), pids.end());
    CHECK(distinct.size() == pids.size());
    for (const auto& pid : pids) {
        CHECK(is_valid_pid(pid));
    }
    CHECK_FALSE(registry.claim(pids.front()));
}

TEST_CASE("policy markdown follows the template section order") {
    const auto cell = make_cell(3, 5, 1, 21);
    const auto& md = cell.policy.rendered;
    const std::vector<std::string> headings{"## General Instructions", "## Domain Basic", "### Profile Structure",
                                            "### Attribute Definitions", "### Profile Access Pattern",
                                            "## Tool Calling Instructions", "### Available Tools",
                                            "## Policy Specifications", "### General Policy 1",
                                            "### General Policy 2", "## Task Specifications", "### Task-Type-1",
                                            "### Task-Type-5"};
    std::size_t last = 0;
    for (const auto& h : headings) {
        const auto pos = md.find(h);
        REQUIRE_MESSAGE(pos != std::string::npos, h);
        CHECK_MESSAGE(pos >= last, h);
        last = pos;
    }
    CHECK(md.find(cell.policy.pid) != std::string::npos);
    CHECK(md.find("Global-Attribute-Value1 = 30") != std::string::npos);
    CHECK(md.find("Global-Attribute-Value3 = 7") != std::string::npos);
    for (const auto& task : cell.policy.tasks) {
        for (const auto& arg : task.args) {
            CHECK(md.find(arg.prose) != std::string::npos);
        }
    }
}

TEST_CASE("queries use the fixed phrase templates and respect capacity") {
    const auto cell = make_cell(3, 5, 1, 33);
    const auto queries = generate_queries(cell.policy, cell.env, 200, 4);
    REQUIRE(queries.size() == 200);
    const std::regex pattern(
        R"(^My profile-(id is profile-1-\d+|info is '[^']+')\. Please do Task-Type-\d+ for me\.( I need \d+ attribute combinations: .*)?$)");
    std::set<std::string> ids;
    for (const auto& q : queries) {
        CHECK_MESSAGE(std::regex_match(q.text, pattern), q.text);
        CHECK(q.combinations >= 1);
        CHECK(q.combinations <= 3);
        CHECK(q.task_index >= 1);
        CHECK(q.task_index <= 5);
        ids.insert(q.id);
        if (q.combinations == 1) {
            CHECK(q.text.find("combinations") == std::string::npos);
        }
    }
    CHECK(ids.size() == queries.size());
    CHECK(generate_queries(cell.policy, cell.env, 200, 4) == queries);
    CHECK_THROWS_AS(generate_queries(cell.policy, cell.env, 0, 4), ConfigError);
}

TEST_CASE("serialization round-trips every artifact") {
    const auto cell = make_cell(4, 3, 2, 8);
    CHECK(environment_from_json(to_json(cell.env)) == cell.env);
    CHECK(policy_from_json(to_json(cell.policy)) == cell.policy);
    for (const auto& q : generate_queries(cell.policy, cell.env, 30, 2)) {
        CHECK(query_from_json(to_json(q)) == q);
    }
    CHECK_THROWS_AS(expression_from_json(json{{"type", "bogus"}}), StructuralError);
    CHECK_THROWS_AS(policy_from_json(json{{"pid", 3}}), StructuralError);
}

TEST_CASE("override changes a constant and the answer") {
    const auto cell = make_cell(3, 5, 2, 12);
    const auto [delta, mutated] = generate_override(cell.policy, 99);
    CHECK(delta.old_value != delta.new_value);
    CHECK(mutated.pid == cell.policy.pid);
    CHECK(mutated != cell.policy);
    CHECK(delta.text.find("Task-Type-" + std::to_string(delta.task_index)) != std::string::npos);
    CHECK(delta.text.find(delta.new_prose) != std::string::npos);
    int differing_tasks = 0;
    for (std::size_t t = 0; t < mutated.tasks.size(); ++t) {
        differing_tasks += mutated.tasks[t] != cell.policy.tasks[t] ? 1 : 0;
    }
    CHECK(differing_tasks == 1);
    CHECK(mutated.rendered.find(delta.new_prose) != std::string::npos);
    CHECK(override_delta_from_json(to_json(delta)) == delta);
}

TEST_CASE("referral questions are distinct and bounded by the pool") {
    const auto cell = make_cell(3, 5, 1, 14);
    const auto pool = referral_question_pool(cell.policy);
    CHECK(pool.size() >= 50);
    const auto qas = generate_referral_qas(cell.policy, 50, 1);
    REQUIRE(qas.size() == 50);
    std::set<std::string> questions;
    for (const auto& qa : qas) {
        questions.insert(qa.question);
        CHECK(!qa.reference_answer.empty());
    }
    CHECK(questions.size() == 50);
    CHECK_THROWS_AS(generate_referral_qas(cell.policy, static_cast<int>(pool.size()) + 1, 1), ConfigError);
}

} // TEST_SUITE
