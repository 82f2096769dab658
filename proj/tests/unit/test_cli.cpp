// SPDX-License-Identifier: Apache-2.0
#include "policybench/cli/commands.hpp"
#include "policybench/cli/run_config.hpp"
#include "policybench/error.hpp"
#include "policybench/json_io.hpp"

#include <doctest.h>

#include <filesystem>

using namespace policybench;
using namespace policybench::cli;
using harness::PromptModeKind;
namespace fs = std::filesystem;

namespace {

std::string config_error_field(const json& j) {
    try {
        run_config_from_json(j);
    } catch (const ConfigError& e) {
        return e.field();
    }
    return "";
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("policybench-cli-" + name)) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

RunConfig small_config(const fs::path& out) {
    RunConfig c;
    c.output_dir = out.string();
    c.num_queries = 12;
    c.mock_llm = true;
    c.seeds = {1};
    c.synth.qa_budget = 20;
    c.synth.role_model_per_spec = 2;
    c.synth.scenario_per_spec = 3;
    return c;
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("config errors name the offending field") {
    CHECK(config_error_field(json{{"grid", {{"task_k", json::array({0})}}}}) == "grid.task_k");
    CHECK(config_error_field(json{{"grid", {{"workflow_k", json::array()}}}}) == "grid.workflow_k");
    CHECK(config_error_field(json{{"limits", {{"max_steps", 0}}}}) == "limits.max_steps");
    CHECK(config_error_field(json{{"limits", {{"max_steps", "many"}}}}) == "limits.max_steps");
    CHECK(config_error_field(json{{"colour", "blue"}}) == "colour");
    CHECK(config_error_field(json{{"mode", "sideways"}}) == "mode");
    CHECK(config_error_field(json{{"synth", {{"format", "csv"}}}}) == "synth.format");
    CHECK(config_error_field(json::array()) == "<root>");
    CHECK(config_error_field(json{{"num_queries", 5}}).empty());
}

TEST_CASE("inline credentials are rejected") {
    for (const char* key : {"api_key", "key", "token", "password", "secret", "credential", "authorization"}) {
        CHECK(config_error_field(json{{"endpoint", {{"url", "http://x/v1"}, {key, "sk-123"}}}}) ==
              std::string("endpoint.") + key);
    }
    const auto ok = run_config_from_json(json{{"endpoint", {{"url", "http://x/v1"}, {"credential_env", "MY_KEY"}}}});
    CHECK(ok.endpoint.credential_env == "MY_KEY");
    CHECK(to_json(ok).dump().find("sk-") == std::string::npos);
}

TEST_CASE("config hash ignores runtime-only fields") {
    RunConfig a;
    RunConfig b = a;
    b.output_dir = "elsewhere";
    b.parallel = 4;
    b.mock_llm = true;
    CHECK(config_hash(a) == config_hash(b));
    b.num_queries = 7;
    CHECK(config_hash(a) != config_hash(b));
    CHECK(run_config_from_json(to_json(a)).num_queries == a.num_queries);
}

TEST_CASE("generate writes one bundle per grid cell, deterministically") {
    TempDir tmp("generate");
    auto c = small_config(tmp.path / "a");
    c.grid.task_k = {3, 5};
    const auto dirs = cmd_generate(c);
    REQUIRE(dirs.size() == 2);
    CHECK(dirs[0].filename() == "E3-T3-W1-s1");
    CHECK(resolve_bundles(c.output_dir).size() == 2);
    for (const auto& d : dirs) {
        for (const char* f : {"environment.json", "policy.json", "policy.md", "queries.jsonl", "trajectories.jsonl",
                              "manifest.json"}) {
            CHECK(fs::exists(d / f));
        }
        const auto b = load_bundle(d);
        CHECK(b.queries.size() == 12);
        CHECK(b.golds.size() == 12);
    }
    auto c2 = c;
    c2.output_dir = (tmp.path / "b").string();
    const auto again = cmd_generate(c2);
    for (std::size_t i = 0; i < dirs.size(); ++i) {
        for (const char* f : {"manifest.json", "policy.json", "queries.jsonl", "trajectories.jsonl"}) {
            CHECK(read_text_file(dirs[i] / f) == read_text_file(again[i] / f));
        }
    }
    CHECK(load_bundle(dirs[0]).policy.pid != load_bundle(dirs[1]).policy.pid);
    CHECK_THROWS_AS(load_bundle(tmp.path), InputError);
}

TEST_CASE("mock evaluation across prompt modes") {
    TempDir tmp("eval");
    auto c = small_config(tmp.path);
    const auto dir = cmd_generate(c).front();

    const auto full = cmd_eval(c, dir, PromptModeKind::FullPolicy);
    CHECK(full.at("mean_sr") == 1.0);
    CHECK(full.at("mean_psr") == 1.0);
    CHECK(read_jsonl_file(dir / "eval-full" / "transcripts.jsonl").size() == 12);

    const auto pid = cmd_eval(c, dir, PromptModeKind::PidOnly);
    CHECK(pid.at("mean_compression").get<double>() > 0.0);

    const auto over = cmd_eval(c, dir, PromptModeKind::Override);
    CHECK(over.at("mean_sr") == 1.0);
    const auto sub = cmd_eval(c, dir, PromptModeKind::Substitute);
    CHECK(sub.at("mean_sr") == 1.0);
    CHECK(sub.at("pid") != full.at("pid"));

    const auto ref = cmd_eval(c, dir, PromptModeKind::ReferralQA);
    CHECK(ref.at("mean_score").get<double>() >= 0.0);
    CHECK(ref.at("mean_score").get<double>() <= 100.0);
    const auto rows = read_jsonl_file(dir / "eval-referral" / "referral.jsonl");
    CHECK(rows.size() == 50);
    for (const auto& row : rows) {
        const auto s = row.at("score").get<int>();
        CHECK(s >= 0);
        CHECK(s <= 100);
    }

    c.mock_client = "corrupt";
    const auto bad = cmd_eval(c, dir, PromptModeKind::FullPolicy);
    CHECK(bad.at("mean_sr").get<double>() < 1.0);
    CHECK(cmd_score(c, dir, PromptModeKind::FullPolicy).at("mean_sr") == bad.at("mean_sr"));

    RunConfig live = c;
    live.mock_llm = false;
    CHECK_THROWS_AS(cmd_eval(live, dir, PromptModeKind::FullPolicy), ConfigError);
}

TEST_CASE("variants") {
    TempDir tmp("variant");
    const auto c = small_config(tmp.path);
    const auto dir = cmd_generate(c).front();
    const auto over = cmd_variant(c, dir, PromptModeKind::Override);
    CHECK(over.at("changed_queries").get<int>() >= 1);
    CHECK(fs::exists(dir / "variant-override" / "delta.json"));
    const auto b = load_bundle(dir);
    const auto v = make_override(b);
    std::size_t differing = 0;
    for (std::size_t i = 0; i < b.golds.size(); ++i) {
        differing += v.golds[i].final_args != b.golds[i].final_args ? 1 : 0;
    }
    CHECK(differing == v.changed_queries);
    CHECK(differing >= 1);

    cmd_variant(c, dir, PromptModeKind::Substitute);
    CHECK(make_substitute(b).policy.pid != b.policy.pid);
    cmd_variant(c, dir, PromptModeKind::ReferralQA);
    CHECK(read_jsonl_file(dir / "variant-referral" / "referral_qa.jsonl").size() == 50);
    CHECK_THROWS_AS(cmd_variant(c, dir, PromptModeKind::FullPolicy), ConfigError);
}

TEST_CASE("synth volumes and determinism") {
    TempDir tmp("synth");
    auto c = small_config(tmp.path / "a");
    c.synth.scenario_per_spec = 10;
    c.synth.role_model_per_spec = 10;
    const auto dir = cmd_generate(c).front();
    const auto m = cmd_synth(c, dir);
    const auto& cats = m.at("spec_categories");
    const auto conditional = cats.value("cond_simple", 0) + cats.value("cond_complex", 0);
    CHECK(m.at("dataset").at("per_kind").at("scenario_sim") == 10 * conditional);
    CHECK(m.at("dataset").at("per_kind").at("role_model") == 10 * cats.value("behavior", 0));
    CHECK(fs::exists(dir / "synth" / "dataset.jsonl"));
    CHECK(read_json_file(dir / "synth" / "category_scores.json").at("micro").at("f1") == 1.0);

    auto c2 = c;
    c2.output_dir = (tmp.path / "b").string();
    const auto dir2 = cmd_generate(c2).front();
    cmd_synth(c2, dir2);
    CHECK(read_text_file(dir / "synth" / "dataset.jsonl") == read_text_file(dir2 / "synth" / "dataset.jsonl"));
    CHECK(read_text_file(dir / "synth" / "manifest.json") == read_text_file(dir2 / "synth" / "manifest.json"));

    // A reviewed analysis with one record removed shrinks the dataset.
    auto review = read_json_file(dir / "synth" / "review.json");
    for (auto& r : review.at("records")) {
        if (r.at("category") == "behavior") {
            r["approved"] = false;
            break;
        }
    }
    write_json_file(tmp.path / "review.json", review);
    const auto reviewed = cmd_synth(c, dir, tmp.path / "review.json");
    CHECK(reviewed.at("dataset").at("per_kind").at("role_model") == 10 * (cats.value("behavior", 0) - 1));
    const auto scores = read_json_file(dir / "synth" / "category_scores.json");
    CHECK(scores.at("micro").at("recall").get<double>() < 1.0);
    CHECK(scores.at("micro").at("precision") == 1.0);
}

TEST_CASE("inspect prints artifacts") {
    TempDir tmp("inspect");
    const auto c = small_config(tmp.path);
    const auto dir = cmd_generate(c).front();
    CHECK(cmd_inspect(dir).find("\"kind\": \"bundle\"") != std::string::npos);
    CHECK(cmd_inspect(dir / "policy.md").find("Task-Type-1") != std::string::npos);
}

} // TEST_SUITE
