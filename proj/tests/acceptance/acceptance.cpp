// SPDX-License-Identifier: Apache-2.0
// Prints one PASS/FAIL line per acceptance criterion; exits 1 on any FAIL.

#include "brute_force.hpp"

#include "policybench/benchgen/policy.hpp"
#include "policybench/benchgen/query.hpp"
#include "policybench/benchgen/serialize.hpp"
#include "policybench/captdata/analysis.hpp"
#include "policybench/captdata/synth.hpp"
#include "policybench/cli/commands.hpp"
#include "policybench/engine/oracle.hpp"
#include "policybench/harness/episode.hpp"
#include "policybench/harness/mock_clients.hpp"
#include "policybench/json_io.hpp"
#include "policybench/rng.hpp"
#include "policybench/scoring/scoring.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>

using namespace policybench;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void criterion(const char* name, const std::function<Outcome()>& check) {
    const auto start = Clock::now();
    Outcome out;
    try {
        out = check();
    } catch (const std::exception& e) {
        out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    std::printf("%s %s (%.2fs) %s\n", out.pass ? "PASS" : "FAIL", name, secs, out.detail.c_str());
    std::fflush(stdout);
    failures += out.pass ? 0 : 1;
}

double elapsed(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

std::vector<benchgen::ComplexityConfig> table_grid() {
    std::vector<benchgen::ComplexityConfig> cells;
    std::uint64_t seed = 100;
    for (int t : {3, 5, 8, 12}) {
        for (int w : {1, 2, 3}) {
            benchgen::ComplexityConfig cc;
            cc.environment_k = 3;
            cc.task_k = t;
            cc.workflow_k = w;
            cc.num_queries = 100;
            cc.seed = seed++;
            cells.push_back(cc);
        }
    }
    return cells;
}

struct Generated {
    benchgen::Environment env;
    benchgen::PolicyDocument policy;
    std::vector<benchgen::Query> queries;
};

Generated generate(const benchgen::ComplexityConfig& cc) {
    Generated g;
    g.env = benchgen::generate_environment(benchgen::EnvConfig::defaults(cc.environment_k), derive_seed(cc.seed, 1));
    g.policy = benchgen::generate_policy(cc, g.env, derive_seed(cc.seed, 2));
    g.queries = benchgen::generate_queries(g.policy, g.env, cc.num_queries, derive_seed(cc.seed, 3));
    return g;
}

Outcome complexity_round_trip() {
    const auto start = Clock::now();
    int matched = 0;
    const auto grid = table_grid();
    for (const auto& cc : grid) {
        const auto g = generate(cc);
        matched += benchgen::measure_complexity(g.policy).matches(cc) ? 1 : 0;
    }
    const double secs = elapsed(start);
    return {matched == static_cast<int>(grid.size()) && secs < 10.0,
            std::to_string(matched) + "/" + std::to_string(grid.size()) + " cells match"};
}

Outcome oracle_equivalence() {
    const auto start = Clock::now();
    std::size_t compared = 0;
    std::size_t mismatches = 0;
    for (auto cc : table_grid()) {
        cc.num_queries = 150;
        const auto g = generate(cc);
        const auto penv = benchgen::to_json(g.env);
        const auto ppol = benchgen::to_json(g.policy);
        for (const auto& q : g.queries) {
            const auto gold = engine::solve_query(g.policy, g.env, q);
            const auto bf = testsupport::bf_solve(ppol, penv, benchgen::to_json(q));
            bool same = gold.conflict() == bf.conflict && gold.final_args.size() == bf.finish_args.size();
            for (std::size_t k = 0; same && k < bf.finish_args.size(); ++k) {
                same = json(gold.final_args[k]) == bf.finish_args[k];
            }
            ++compared;
            mismatches += same ? 0 : 1;
        }
    }
    const double secs = elapsed(start);
    return {mismatches == 0 && secs < 60.0,
            std::to_string(compared) + " queries over 12 cells, " + std::to_string(mismatches) + " mismatches"};
}

Outcome closed_loop() {
    std::size_t bundles = 0;
    std::size_t affected = 0;
    std::size_t affected_ok = 0;
    bool oracle_perfect = true;
    for (const auto& cc : table_grid()) {
        const auto g = generate(cc);
        std::map<std::string, engine::GoldTrajectory> golds;
        std::vector<engine::GoldTrajectory> per_query;
        for (const auto& q : g.queries) {
            per_query.push_back(engine::solve_query(g.policy, g.env, q));
            golds.emplace(q.text, per_query.back());
        }
        harness::OracleReplayClient oracle(golds);
        harness::CorruptingClient corrupt(golds);
        std::vector<scoring::Scorecard> cards;
        for (std::size_t i = 0; i < g.queries.size(); ++i) {
            const auto& q = g.queries[i];
            const auto& gold = per_query[i];
            const auto t = harness::run_episode(oracle, {harness::PromptModeKind::FullPolicy, ""}, g.policy, g.env, q, {});
            cards.push_back(scoring::score_episode(t, gold));
            const bool has_finish = !gold.final_args.empty();
            if (has_finish) {
                ++affected;
                const auto c = harness::run_episode(corrupt, {harness::PromptModeKind::FullPolicy, ""}, g.policy, g.env,
                                                    q, {});
                const auto card = scoring::score_episode(c, gold);
                affected_ok += card.sr == 0 && card.psr < 1.0 ? 1 : 0;
            }
        }
        const auto s = scoring::aggregate(cards);
        oracle_perfect = oracle_perfect && s.mean_sr == 1.0 && s.mean_psr == 1.0;
        ++bundles;
    }
    std::ostringstream d;
    d << bundles << " bundles oracle " << (oracle_perfect ? "sr=psr=1" : "IMPERFECT") << "; corruption sr=0,psr<1 on "
      << affected_ok << "/" << affected << " affected episodes";
    return {oracle_perfect && affected > 0 && affected_ok == affected, d.str()};
}

Outcome psr_example() {
    engine::GoldTrajectory gold;
    gold.query_id = "worked-example";
    gold.actions = {{"finish-task-1", {json::array({1, 2, 3, 4, 5})}}, {"finish-task-1", {json::array({6, 7, 8, 9, 10})}}};
    const scoring::CallList calls{{"finish-task-1", {json::array({1, 2, 3, 4, 99})}},
                                  {"finish-task-1", {json::array({6, 7, 8, 9, 10})}}};
    const auto p = scoring::score_partial(calls, gold);
    char buf[64];
    std::snprintf(buf, sizeof buf, "psr=%.12f matched=%d", p.psr, p.matched);
    return {std::fabs(p.psr - 0.9) < 1e-12 && p.matched == 2, buf};
}

double round2(double x) { return std::round(x * 100.0) / 100.0; }

Outcome f1_fixtures() {
    // First fixture straight from the rates. The second reports rates rounded
    // to two places; 6 correct of 7 predicted against 11 gold reproduces them.
    const double first = scoring::f1_score(1.0, 0.6);
    const auto counts = scoring::prf_from_counts(6, 7, 11);
    const double from_rounded = scoring::f1_score(0.86, 0.55);
    const bool rates_round = round2(counts.precision) == 0.86 && round2(counts.recall) == 0.55;
    char buf[200];
    std::snprintf(buf, sizeof buf, "f1(1.00,0.60)=%.4f; counts 6/7/11 -> P=%.4f R=%.4f F1=%.4f (f1 of the rounded rates=%.4f)",
                  first, counts.precision, counts.recall, counts.f1, from_rounded);
    return {std::fabs(first - 0.75) <= 0.001 && rates_round && std::fabs(counts.f1 - 0.667) <= 0.001, buf};
}

Outcome compression() {
    const auto start = Clock::now();
    const harness::WhitespaceTokenCounter counter;
    double lowest = 1.0;
    double highest = 0.0;
    for (std::uint64_t seed : {1, 2, 3}) {
        benchgen::ComplexityConfig cc;
        cc.task_k = 5;
        cc.workflow_k = 3;
        cc.seed = seed;
        const auto g = generate(cc);
        for (const auto& q : g.queries) {
            const auto full = harness::build_prompt({harness::PromptModeKind::FullPolicy, ""}, g.policy, q.text);
            const auto pid = harness::build_prompt({harness::PromptModeKind::PidOnly, ""}, g.policy, q.text);
            const double r = scoring::compression_ratio(harness::count_message_tokens(full, counter),
                                                        harness::count_message_tokens(pid, counter));
            lowest = std::min(lowest, r);
            highest = std::max(highest, r);
        }
    }
    const double secs = elapsed(start);
    char buf[128];
    std::snprintf(buf, sizeof buf, "min=%.4f max=%.4f over 3 bundles (%s tokens)", lowest, highest,
                  counter.name().c_str());
    return {lowest >= 0.90 && secs < 5.0, buf};
}

Outcome cap_cpt_volumes() {
    benchgen::ComplexityConfig cc;
    cc.task_k = 5;
    cc.workflow_k = 2;
    cc.seed = 1;
    const auto g = generate(cc);
    const auto analysis = captdata::analyze_policy(g.policy);
    std::size_t conditional = 0;
    for (const auto& r : analysis.records) {
        conditional += r.category == captdata::Category::CondSimple || r.category == captdata::Category::CondComplex;
    }
    const auto examples = captdata::synth_scenario_simulation(analysis, g.policy, g.env,
                                                              captdata::kDefaultScenarioPerSpec, 7);
    const auto penv = benchgen::to_json(g.env);
    const auto ppol = benchgen::to_json(g.policy);
    Rng rng(2024);
    std::size_t mismatches = 0;
    const auto sample = rng.sample_indices(examples.size(), 1000);
    for (std::size_t i : sample) {
        const auto& p = examples[i].provenance;
        testsupport::JsonBinding binding;
        for (const auto& [layer, key] : p.at("binding").items()) {
            const auto* inst = testsupport::bf_find(penv, std::stoi(layer), key.get<std::string>());
            if (inst == nullptr) {
                ++mismatches;
                continue;
            }
            binding[std::stoi(layer)] = *inst;
        }
        const auto& task = ppol.at("tasks")[p.at("task_index").get<std::size_t>() - 1];
        const auto& expr = task.at("args")[p.at("arg_index").get<std::size_t>() - 1].at("expression");
        try {
            const auto v = testsupport::bf_eval(expr, binding, g.policy.globals.values);
            mismatches += (v.is_string() ? v.get<std::string>() : v.dump()) == examples[i].response ? 0 : 1;
        } catch (const std::exception&) {
            ++mismatches;
        }
    }
    std::ostringstream d;
    d << examples.size() << " scenario examples for " << conditional << " conditional specs; " << mismatches
      << " mismatches in " << sample.size() << " re-verified";
    return {examples.size() == captdata::kDefaultScenarioPerSpec * conditional && conditional == 25 &&
                examples.size() == 125000 && sample.size() == 1000 && mismatches == 0,
            d.str()};
}

std::map<std::string, std::string> tree_contents(const fs::path& root) {
    std::map<std::string, std::string> out;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (entry.is_regular_file()) {
            out[fs::relative(entry.path(), root).generic_string()] = read_text_file(entry.path());
        }
    }
    return out;
}

Outcome determinism() {
    const auto base = fs::temp_directory_path() / "policybench-acceptance-determinism";
    fs::remove_all(base);
    std::vector<std::map<std::string, std::string>> trees;
    for (const char* run : {"a", "b"}) {
        cli::RunConfig c;
        c.output_dir = (base / run).string();
        c.seeds = {1};
        c.mock_llm = true;
        for (const auto& dir : cli::cmd_generate(c)) {
            cli::cmd_synth(c, dir);
        }
        trees.push_back(tree_contents(base / run));
    }
    fs::remove_all(base);
    std::size_t differing = 0;
    for (const auto& [name, bytes] : trees[0]) {
        const auto it = trees[1].find(name);
        differing += it == trees[1].end() || it->second != bytes ? 1 : 0;
    }
    differing += trees[1].size() - std::min(trees[1].size(), trees[0].size());
    return {differing == 0 && trees[0].size() == trees[1].size() && !trees[0].empty(),
            std::to_string(trees[0].size()) + " files compared, " + std::to_string(differing) + " differ"};
}

Outcome categorization() {
    using captdata::SpecKind;
    const auto fact = captdata::categorize(
        {"The refund will go to original payment methods in 5 to 7 business days.", SpecKind::Statement, 0, {}});
    const auto simple =
        captdata::categorize({"If the trip is flown, you cannot cancel the flight.", SpecKind::Workflow, 1, {}});
    const auto complex = captdata::categorize(
        {"Meal service eligibility: If the passenger is flying internationally and in business class, they are "
         "eligible for a full-course meal and two beverages.",
         SpecKind::Workflow, 5, {}});
    const bool ok = fact.category == captdata::Category::Fact && simple.category == captdata::Category::CondSimple &&
                    complex.category == captdata::Category::CondComplex && complex.complexity_level == 5;
    return {ok, to_string(fact.category) + " / " + to_string(simple.category) + " / " + to_string(complex.category) +
                    " level " + std::to_string(complex.complexity_level.value_or(-1))};
}

} // namespace

int main() {
    criterion("complexity-round-trip", complexity_round_trip);
    criterion("oracle-equivalence", oracle_equivalence);
    criterion("closed-loop-sr", closed_loop);
    criterion("psr-worked-example", psr_example);
    criterion("f1-fixtures", f1_fixtures);
    criterion("compression", compression);
    criterion("cap-cpt-volumes", cap_cpt_volumes);
    criterion("determinism", determinism);
    criterion("categorization-fixtures", categorization);
    return failures == 0 ? 0 : 1;
}
