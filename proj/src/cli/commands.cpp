// SPDX-License-Identifier: Apache-2.0
#include "policybench/cli/commands.hpp"

#include "policybench/benchgen/serialize.hpp"
#include "policybench/captdata/analysis.hpp"
#include "policybench/captdata/dataset.hpp"
#include "policybench/captdata/synth.hpp"
#include "policybench/engine/tools.hpp"
#include "policybench/error.hpp"
#include "policybench/harness/episode.hpp"
#include "policybench/harness/http_client.hpp"
#include "policybench/harness/mock_clients.hpp"
#include "policybench/rng.hpp"
#include "policybench/scoring/scoring.hpp"

#include <atomic>
#include <cstdlib>
#include <ctime>
#include <exception>
#include <iomanip>
#include <memory>
#include <mutex>
#include <sstream>
#include <thread>

#ifndef POLICYBENCH_VERSION
#define POLICYBENCH_VERSION "0.0.0"
#endif

namespace policybench::cli {

using benchgen::PolicyDocument;
using harness::PromptModeKind;

namespace {

constexpr std::uint64_t kEnvStream = 1;
constexpr std::uint64_t kPolicyStream = 2;
constexpr std::uint64_t kQueryStream = 3;
constexpr std::uint64_t kOverrideStream = 4;
constexpr std::uint64_t kSubstituteStream = 5;
constexpr std::uint64_t kReferralStream = 6;
constexpr std::uint64_t kSynthStream = 7;
constexpr int kOverrideAttempts = 20;

json versions() { return json{{"policybench", POLICYBENCH_VERSION}, {"artifact_format", 1}}; }

/// Files written into one directory, with their content hashes.
class DirWriter {
public:
    explicit DirWriter(fs::path dir) : dir_(std::move(dir)) {}

    void text(const std::string& name, const std::string& content) {
        write_text_file(dir_ / name, content);
        files_[name] = hex64(fnv1a64(content));
    }
    void json_file(const std::string& name, const json& value) { text(name, value.dump(2) + "\n"); }
    void jsonl(const std::string& name, const std::vector<json>& rows) {
        std::string content;
        for (const auto& row : rows) {
            content += row.dump() + "\n";
        }
        text(name, content);
    }
    void record(const std::string& name, const std::string& hash) { files_[name] = hash; }

    const fs::path& dir() const { return dir_; }
    const json& files() const { return files_; }

private:
    fs::path dir_;
    json files_ = json::object();
};

/// Builds `target` in a sibling temp directory and renames it into place, so
/// a failure never leaves a half-written directory behind.
template <typename Fn>
void write_atomically(const fs::path& target, Fn&& fill) {
    const auto tmp = target.parent_path() / (".tmp-" + target.filename().string());
    std::error_code ec;
    fs::remove_all(tmp, ec);
    fs::create_directories(tmp, ec);
    if (ec) {
        throw IoError("cannot create " + tmp.string() + ": " + ec.message());
    }
    try {
        DirWriter writer(tmp);
        fill(writer);
        fs::remove_all(target, ec);
        fs::rename(tmp, target, ec);
        if (ec) {
            throw IoError("cannot move " + tmp.string() + " to " + target.string() + ": " + ec.message());
        }
    } catch (...) {
        fs::remove_all(tmp, ec);
        throw;
    }
}

std::vector<json> rows_of(const std::vector<benchgen::Query>& queries) {
    std::vector<json> rows;
    for (const auto& q : queries) {
        rows.push_back(benchgen::to_json(q));
    }
    return rows;
}

std::vector<json> rows_of(const std::vector<engine::GoldTrajectory>& golds) {
    std::vector<json> rows;
    for (const auto& g : golds) {
        rows.push_back(engine::to_json(g));
    }
    return rows;
}

std::vector<engine::GoldTrajectory> solve_all(const PolicyDocument& policy, const benchgen::Environment& env,
                                              const std::vector<benchgen::Query>& queries) {
    std::vector<engine::GoldTrajectory> golds;
    golds.reserve(queries.size());
    for (const auto& q : queries) {
        golds.push_back(engine::solve_query(policy, env, q));
    }
    return golds;
}

std::vector<engine::GoldTrajectory> read_golds(const fs::path& path) {
    std::vector<engine::GoldTrajectory> golds;
    for (const auto& row : read_jsonl_file(path)) {
        golds.push_back(engine::gold_from_json(row));
    }
    return golds;
}

std::string mode_dir(PromptModeKind mode) { return harness::to_string(mode); }

} // namespace

json manifest_timestamp() {
    const char* epoch = std::getenv("SOURCE_DATE_EPOCH");
    if (epoch == nullptr || *epoch == '\0') {
        return nullptr;
    }
    const std::time_t t = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream out;
    out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return out.str();
}

Bundle build_bundle(const benchgen::ComplexityConfig& cc, benchgen::PidRegistry* registry) {
    cc.validate();
    Bundle b;
    b.config = cc;
    b.env = benchgen::generate_environment(benchgen::EnvConfig::defaults(cc.environment_k),
                                           derive_seed(cc.seed, kEnvStream));
    b.policy = benchgen::generate_policy(cc, b.env, derive_seed(cc.seed, kPolicyStream), registry);
    b.queries = benchgen::generate_queries(b.policy, b.env, cc.num_queries, derive_seed(cc.seed, kQueryStream));
    b.golds = solve_all(b.policy, b.env, b.queries);
    return b;
}

Bundle load_bundle(const fs::path& dir) {
    const auto manifest_path = dir / "manifest.json";
    if (!fs::exists(manifest_path)) {
        throw InputError(dir.string() + " is not a bundle (no manifest.json)");
    }
    const auto manifest = read_json_file(manifest_path);
    if (manifest.value("kind", "") != "bundle") {
        throw InputError(dir.string() + " is not a bundle directory");
    }
    Bundle b;
    b.dir = dir;
    try {
        const auto& c = manifest.at("config");
        b.config.environment_k = c.at("environment_k").get<int>();
        b.config.task_k = c.at("task_k").get<int>();
        b.config.workflow_k = c.at("workflow_k").get<int>();
        b.config.num_queries = c.at("num_queries").get<int>();
        b.config.seed = c.at("seed").get<std::uint64_t>();
    } catch (const json::exception& e) {
        throw InputError("bundle manifest has a malformed config: " + std::string(e.what()));
    }
    b.env = benchgen::environment_from_json(read_json_file(dir / "environment.json"));
    b.policy = benchgen::policy_from_json(read_json_file(dir / "policy.json"));
    for (const auto& row : read_jsonl_file(dir / "queries.jsonl")) {
        b.queries.push_back(benchgen::query_from_json(row));
    }
    b.golds = read_golds(dir / "trajectories.jsonl");
    if (b.golds.size() != b.queries.size()) {
        throw InputError("bundle " + dir.string() + " has " + std::to_string(b.queries.size()) + " queries but " +
                         std::to_string(b.golds.size()) + " trajectories");
    }
    return b;
}

std::vector<fs::path> resolve_bundles(const fs::path& path) {
    const auto manifest_path = path / "manifest.json";
    if (!fs::exists(manifest_path)) {
        throw InputError(path.string() + " has no manifest.json");
    }
    const auto manifest = read_json_file(manifest_path);
    const auto kind = manifest.value("kind", "");
    if (kind == "bundle") {
        return {path};
    }
    if (kind != "run") {
        throw InputError(path.string() + " is neither a bundle nor a run directory");
    }
    std::vector<fs::path> out;
    for (const auto& cell : manifest.at("cells")) {
        out.push_back(path / cell.at("dir").get<std::string>());
    }
    return out;
}

std::vector<fs::path> cmd_generate(const RunConfig& config) {
    config.validate();
    const fs::path root(config.output_dir);
    std::error_code ec;
    fs::create_directories(root, ec);
    if (ec || !fs::is_directory(root)) {
        throw ConfigError("output_dir", "cannot create " + root.string());
    }
    const auto hash = config_hash(config);
    benchgen::PidRegistry registry;
    std::vector<fs::path> dirs;
    json cells = json::array();
    for (const auto& cc : config.cells()) {
        const auto b = build_bundle(cc, &registry);
        const auto name = cell_name(cc);
        const auto dir = root / name;
        json manifest;
        write_atomically(dir, [&](DirWriter& w) {
            w.json_file("environment.json", benchgen::to_json(b.env));
            w.json_file("policy.json", benchgen::to_json(b.policy));
            w.text("policy.md", b.policy.rendered + "\n");
            w.jsonl("queries.jsonl", rows_of(b.queries));
            w.jsonl("trajectories.jsonl", rows_of(b.golds));
            std::size_t conflicts = 0;
            for (const auto& g : b.golds) {
                conflicts += g.conflict() ? 1 : 0;
            }
            manifest = json{{"kind", "bundle"},
                            {"cell", name},
                            {"pid", b.policy.pid},
                            {"config", benchgen::to_json(cc)},
                            {"config_hash", hash},
                            {"complexity", benchgen::to_json(benchgen::measure_complexity(b.policy))},
                            {"files", w.files()},
                            {"versions", versions()},
                            {"created", manifest_timestamp()},
                            {"summary", {{"queries", b.queries.size()}, {"conflict_queries", conflicts}}}};
            w.json_file("manifest.json", manifest);
        });
        cells.push_back(json{{"cell", name}, {"dir", name}, {"pid", b.policy.pid}});
        dirs.push_back(dir);
    }
    json run_config = to_json(config);
    run_config.erase("output_dir");
    const json run_manifest{{"kind", "run"},
                            {"config", run_config},
                            {"config_hash", hash},
                            {"cells", std::move(cells)},
                            {"versions", versions()},
                            {"created", manifest_timestamp()}};
    write_text_file(root / "manifest.json", run_manifest.dump(2) + "\n");
    return dirs;
}

OverrideVariant make_override(const Bundle& b) {
    OverrideVariant best;
    const auto base = derive_seed(b.config.seed, kOverrideStream);
    for (int attempt = 0; attempt < kOverrideAttempts; ++attempt) {
        auto [delta, mutated] = benchgen::generate_override(b.policy, derive_seed(base, static_cast<std::uint64_t>(attempt)));
        OverrideVariant v;
        v.golds = solve_all(mutated, b.env, b.queries);
        for (std::size_t i = 0; i < v.golds.size(); ++i) {
            v.changed_queries += v.golds[i].final_args != b.golds[i].final_args ? 1 : 0;
        }
        v.delta = std::move(delta);
        v.policy = std::move(mutated);
        if (v.changed_queries > 0 || attempt == 0) {
            best = std::move(v);
        }
        if (best.changed_queries > 0) {
            break;
        }
    }
    return best;
}

SubstituteVariant make_substitute(const Bundle& b) {
    benchgen::PidRegistry registry;
    registry.claim(b.policy.pid);
    SubstituteVariant v;
    v.policy = benchgen::generate_policy(b.config, b.env, derive_seed(b.config.seed, kSubstituteStream), &registry);
    v.golds = solve_all(v.policy, b.env, b.queries);
    return v;
}

std::vector<benchgen::ReferralQa> make_referral(const Bundle& b, int n) {
    const auto pool = benchgen::referral_question_pool(b.policy).size();
    const int clamped = std::min<int>(n, static_cast<int>(pool));
    return benchgen::generate_referral_qas(b.policy, clamped, derive_seed(b.config.seed, kReferralStream));
}

namespace {

OverrideVariant load_override(const Bundle& b) {
    const auto dir = b.dir / "variant-override";
    if (!fs::exists(dir / "manifest.json")) {
        return make_override(b);
    }
    OverrideVariant v;
    v.delta = benchgen::override_delta_from_json(read_json_file(dir / "delta.json"));
    v.policy = benchgen::policy_from_json(read_json_file(dir / "policy.json"));
    v.golds = read_golds(dir / "trajectories.jsonl");
    v.changed_queries = read_json_file(dir / "manifest.json").value("changed_queries", std::size_t{0});
    return v;
}

SubstituteVariant load_substitute(const Bundle& b) {
    const auto dir = b.dir / "variant-substitute";
    if (!fs::exists(dir / "manifest.json")) {
        return make_substitute(b);
    }
    SubstituteVariant v;
    v.policy = benchgen::policy_from_json(read_json_file(dir / "policy.json"));
    v.golds = read_golds(dir / "trajectories.jsonl");
    return v;
}

std::vector<benchgen::ReferralQa> load_referral(const Bundle& b, int n) {
    const auto path = b.dir / "variant-referral" / "referral_qa.jsonl";
    if (!fs::exists(path)) {
        return make_referral(b, n);
    }
    std::vector<benchgen::ReferralQa> qas;
    for (const auto& row : read_jsonl_file(path)) {
        qas.push_back(benchgen::referral_qa_from_json(row));
    }
    return qas;
}

/// Everything an evaluation in one mode runs against.
struct EvalSetup {
    harness::PromptMode mode;
    const PolicyDocument* prompt_policy = nullptr;
    const PolicyDocument* tool_policy = nullptr;
    const std::vector<engine::GoldTrajectory>* golds = nullptr;
    std::optional<OverrideVariant> override_variant;
    std::optional<SubstituteVariant> substitute_variant;
};

void prepare(EvalSetup& s, const Bundle& b, PromptModeKind kind) {
    s.mode.kind = kind;
    s.prompt_policy = &b.policy;
    s.tool_policy = &b.policy;
    s.golds = &b.golds;
    if (kind == PromptModeKind::Override) {
        s.override_variant = load_override(b);
        s.mode.delta = s.override_variant->delta.text;
        s.tool_policy = &s.override_variant->policy;
        s.golds = &s.override_variant->golds;
    } else if (kind == PromptModeKind::Substitute) {
        s.substitute_variant = load_substitute(b);
        s.prompt_policy = &s.substitute_variant->policy;
        s.tool_policy = &s.substitute_variant->policy;
        s.golds = &s.substitute_variant->golds;
    }
}

std::unique_ptr<harness::CompletionClient> remote_client(const RunConfig& config) {
    if (config.endpoint.url.empty()) {
        throw ConfigError("endpoint.url", "required unless --mock-llm is given");
    }
    return std::make_unique<harness::HttpChatClient>(config.endpoint);
}

std::unique_ptr<harness::CompletionClient> task_agent(const RunConfig& config, const Bundle& b,
                                                      const std::vector<engine::GoldTrajectory>& golds) {
    if (!config.mock_llm) {
        return remote_client(config);
    }
    std::map<std::string, engine::GoldTrajectory> by_text;
    for (std::size_t i = 0; i < b.queries.size(); ++i) {
        by_text.emplace(b.queries[i].text, golds[i]);
    }
    if (config.mock_client == "corrupt") {
        return std::make_unique<harness::CorruptingClient>(std::move(by_text));
    }
    return std::make_unique<harness::OracleReplayClient>(std::move(by_text));
}

std::vector<scoring::Scorecard> score_all(const Bundle& b, const EvalSetup& s,
                                          const std::vector<harness::Transcript>& transcripts) {
    const harness::WhitespaceTokenCounter counter;
    const bool internalized = s.mode.kind == PromptModeKind::PidOnly || s.mode.kind == PromptModeKind::Override;
    std::vector<scoring::Scorecard> cards;
    for (std::size_t i = 0; i < transcripts.size(); ++i) {
        std::optional<double> compression;
        if (internalized) {
            const auto& text = b.queries[i].text;
            const auto full = harness::count_message_tokens(
                harness::build_prompt({PromptModeKind::FullPolicy, ""}, b.policy, text), counter);
            const auto mine = harness::count_message_tokens(harness::build_prompt(s.mode, *s.prompt_policy, text), counter);
            compression = scoring::compression_ratio(full, mine);
        }
        cards.push_back(scoring::score_episode(transcripts[i], (*s.golds)[i], compression));
    }
    return cards;
}

std::string csv_number(const json& v) {
    if (v.is_null()) {
        return "";
    }
    std::ostringstream out;
    out << std::setprecision(6) << v.get<double>();
    return out.str();
}

std::string plot_header() { return "cell,environment_k,task_k,workflow_k,seed,mode,n,mean_sr,mean_psr,mean_compression\n"; }

std::string plot_row(const Bundle& b, const json& summary) {
    const auto& c = b.config;
    return cell_name(c) + "," + std::to_string(c.environment_k) + "," + std::to_string(c.task_k) + "," +
           std::to_string(c.workflow_k) + "," + std::to_string(c.seed) + "," + summary.at("mode").get<std::string>() +
           "," + std::to_string(summary.at("n").get<std::size_t>()) + "," + csv_number(summary.at("mean_sr")) + "," +
           csv_number(summary.at("mean_psr")) + "," + csv_number(summary.at("mean_compression")) + "\n";
}

/// Scores, summary, plot row and manifest for a finished task-mode run.
json write_task_eval(const fs::path& dir, const Bundle& b, const EvalSetup& s,
                     const std::vector<harness::Transcript>& transcripts) {
    const auto cards = score_all(b, s, transcripts);
    json summary = scoring::to_json(scoring::aggregate(cards));
    summary["mode"] = harness::to_string(s.mode.kind);
    summary["bundle"] = cell_name(b.config);
    summary["pid"] = s.prompt_policy->pid;
    summary["client"] = transcripts.empty() ? "" : transcripts.front().client;
    json terminals = json::object();
    for (const auto& t : transcripts) {
        const auto key = harness::to_string(t.terminal);
        terminals[key] = terminals.value(key, 0) + 1;
    }
    summary["terminals"] = terminals;
    summary["client_errors"] = terminals.value(harness::to_string(harness::Terminal::ClientError), 0);

    DirWriter w(dir);
    std::vector<json> transcript_rows;
    std::vector<json> score_rows;
    for (const auto& t : transcripts) {
        transcript_rows.push_back(harness::to_json(t));
    }
    for (const auto& c : cards) {
        score_rows.push_back(scoring::to_json(c));
    }
    w.jsonl("transcripts.jsonl", transcript_rows);
    w.jsonl("scores.jsonl", score_rows);
    w.json_file("summary.json", summary);
    w.text("plot_data.csv", plot_header() + plot_row(b, summary));
    w.json_file("manifest.json", json{{"kind", "eval"},
                                      {"mode", summary["mode"]},
                                      {"bundle", summary["bundle"]},
                                      {"files", w.files()},
                                      {"versions", versions()},
                                      {"created", manifest_timestamp()}});
    return summary;
}

json summarize_referral(const Bundle& b, const std::vector<json>& rows) {
    double total = 0.0;
    int flagged = 0;
    int failures = 0;
    for (const auto& row : rows) {
        total += row.at("score").get<double>();
        flagged += row.value("flagged", false) ? 1 : 0;
        failures += row.contains("error") ? 1 : 0;
    }
    return json{{"mode", "referral"},
                {"bundle", cell_name(b.config)},
                {"pid", b.policy.pid},
                {"n", rows.size()},
                {"mean_score", rows.empty() ? 0.0 : total / static_cast<double>(rows.size())},
                {"flagged", flagged},
                {"failures", failures}};
}

json write_referral_eval(const fs::path& dir, const Bundle& b, const std::vector<json>& rows) {
    const auto summary = summarize_referral(b, rows);
    DirWriter w(dir);
    w.jsonl("referral.jsonl", rows);
    w.json_file("summary.json", summary);
    w.json_file("manifest.json", json{{"kind", "eval"},
                                      {"mode", "referral"},
                                      {"bundle", summary["bundle"]},
                                      {"files", w.files()},
                                      {"versions", versions()},
                                      {"created", manifest_timestamp()}});
    return summary;
}

json eval_referral(const RunConfig& config, const Bundle& b, const ClientOverrides& clients) {
    std::unique_ptr<harness::CompletionClient> owned_agent;
    std::unique_ptr<harness::CompletionClient> owned_judge;
    harness::CompletionClient* agent = clients.agent;
    harness::CompletionClient* judge = clients.judge;
    if (agent == nullptr) {
        owned_agent = config.mock_llm ? std::make_unique<harness::ReferralAnswerClient>(b.policy) : remote_client(config);
        agent = owned_agent.get();
    }
    if (judge == nullptr) {
        owned_judge = config.mock_llm ? std::make_unique<harness::MockJudgeClient>() : remote_client(config);
        judge = owned_judge.get();
    }
    const harness::PromptMode mode{PromptModeKind::ReferralQA, ""};
    harness::ChatParams params{config.temperature, config.max_tokens};
    std::vector<json> rows;
    for (const auto& qa : load_referral(b, config.referral_n)) {
        json row{{"question", qa.question}, {"reference", qa.reference_answer}};
        try {
            const auto answer = agent->chat(harness::build_prompt(mode, b.policy, qa.question), params);
            row["answer"] = answer;
            const auto grade = scoring::score_referral(answer, qa.reference_answer, *judge, qa.question);
            row["score"] = grade.score;
            row["flagged"] = grade.flagged;
            row["judge_output"] = grade.judge_output;
        } catch (const ClientError& e) {
            row["score"] = 0;
            row["error"] = e.what();
        } catch (const ScoringError& e) {
            row["score"] = 0;
            row["error"] = e.what();
        }
        rows.push_back(std::move(row));
    }
    json summary;
    write_atomically(b.dir / ("eval-" + mode_dir(PromptModeKind::ReferralQA)),
                     [&](DirWriter& w) { summary = write_referral_eval(w.dir(), b, rows); });
    return summary;
}

} // namespace

json cmd_eval(const RunConfig& config, const fs::path& bundle_dir, PromptModeKind kind, const ClientOverrides& clients) {
    const auto b = load_bundle(bundle_dir);
    if (kind == PromptModeKind::ReferralQA) {
        return eval_referral(config, b, clients);
    }
    EvalSetup s;
    prepare(s, b, kind);
    std::unique_ptr<harness::CompletionClient> owned;
    harness::CompletionClient* agent = clients.agent;
    if (agent == nullptr) {
        owned = task_agent(config, b, *s.golds);
        agent = owned.get();
    }
    harness::EpisodeLimits limits;
    limits.max_steps = config.max_steps;
    limits.params = harness::ChatParams{config.temperature, config.max_tokens};

    const std::size_t n = b.queries.size();
    std::vector<harness::Transcript> transcripts(n);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    const harness::WhitespaceTokenCounter counter;
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                transcripts[i] = harness::run_episode(*agent, s.mode, *s.prompt_policy, *s.tool_policy, b.env,
                                                      b.queries[i], limits, counter, derive_seed(b.config.seed, i));
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        }
    };
    const std::size_t workers =
        agent->concurrent_safe() ? std::max<std::size_t>(1, std::min<std::size_t>(config.parallel, n)) : 1;
    std::vector<std::thread> threads;
    for (std::size_t t = 1; t < workers; ++t) {
        threads.emplace_back(worker);
    }
    worker();
    for (auto& t : threads) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    const auto dir = b.dir / ("eval-" + mode_dir(kind));
    json summary;
    write_atomically(dir, [&](DirWriter& w) { summary = write_task_eval(w.dir(), b, s, transcripts); });
    return summary;
}

json cmd_eval_path(const RunConfig& config, const fs::path& path, PromptModeKind mode, const ClientOverrides& clients) {
    const auto bundles = resolve_bundles(path);
    json summaries = json::array();
    std::string csv = plot_header();
    for (const auto& dir : bundles) {
        auto summary = cmd_eval(config, dir, mode, clients);
        if (mode != PromptModeKind::ReferralQA) {
            csv += plot_row(load_bundle(dir), summary);
        }
        summaries.push_back(std::move(summary));
    }
    const bool run_dir = bundles.size() != 1 || bundles.front() != path;
    if (run_dir && mode != PromptModeKind::ReferralQA) {
        const auto name = "plot_data-" + mode_dir(mode) + ".csv";
        write_text_file(path / name, csv);
        auto manifest = read_json_file(path / "manifest.json");
        manifest["plots"][name] = hex64(fnv1a64(csv));
        write_text_file(path / "manifest.json", manifest.dump(2) + "\n");
    }
    return summaries;
}

json cmd_score(const RunConfig& config, const fs::path& bundle_dir, PromptModeKind kind) {
    (void)config;
    const auto b = load_bundle(bundle_dir);
    const auto dir = b.dir / ("eval-" + mode_dir(kind));
    if (kind == PromptModeKind::ReferralQA) {
        const auto rows = read_jsonl_file(dir / "referral.jsonl");
        return write_referral_eval(dir, b, rows);
    }
    EvalSetup s;
    prepare(s, b, kind);
    std::vector<harness::Transcript> transcripts;
    for (const auto& row : read_jsonl_file(dir / "transcripts.jsonl")) {
        transcripts.push_back(harness::transcript_from_json(row));
    }
    if (transcripts.size() != b.queries.size()) {
        throw InputError(dir.string() + " holds " + std::to_string(transcripts.size()) + " transcripts for " +
                         std::to_string(b.queries.size()) + " queries");
    }
    return write_task_eval(dir, b, s, transcripts);
}

json cmd_variant(const RunConfig& config, const fs::path& bundle_dir, PromptModeKind kind) {
    const auto b = load_bundle(bundle_dir);
    json manifest;
    switch (kind) {
    case PromptModeKind::Override: {
        const auto v = make_override(b);
        write_atomically(b.dir / "variant-override", [&](DirWriter& w) {
            w.json_file("delta.json", benchgen::to_json(v.delta));
            w.json_file("policy.json", benchgen::to_json(v.policy));
            w.text("policy.md", v.policy.rendered + "\n");
            w.jsonl("trajectories.jsonl", rows_of(v.golds));
            manifest = json{{"kind", "variant"},          {"variant", "override"},
                            {"pid", v.policy.pid},        {"changed_queries", v.changed_queries},
                            {"files", w.files()},         {"versions", versions()},
                            {"created", manifest_timestamp()}};
            w.json_file("manifest.json", manifest);
        });
        return manifest;
    }
    case PromptModeKind::Substitute: {
        const auto v = make_substitute(b);
        write_atomically(b.dir / "variant-substitute", [&](DirWriter& w) {
            w.json_file("policy.json", benchgen::to_json(v.policy));
            w.text("policy.md", v.policy.rendered + "\n");
            w.jsonl("trajectories.jsonl", rows_of(v.golds));
            manifest = json{{"kind", "variant"},  {"variant", "substitute"}, {"pid", v.policy.pid},
                            {"previous_pid", b.policy.pid}, {"files", w.files()}, {"versions", versions()},
                            {"created", manifest_timestamp()}};
            w.json_file("manifest.json", manifest);
        });
        return manifest;
    }
    case PromptModeKind::ReferralQA: {
        const auto qas = make_referral(b, config.referral_n);
        write_atomically(b.dir / "variant-referral", [&](DirWriter& w) {
            std::vector<json> rows;
            for (const auto& qa : qas) {
                rows.push_back(benchgen::to_json(qa));
            }
            w.jsonl("referral_qa.jsonl", rows);
            manifest = json{{"kind", "variant"},   {"variant", "referral"}, {"pid", b.policy.pid},
                            {"count", qas.size()}, {"requested", config.referral_n}, {"files", w.files()},
                            {"versions", versions()}, {"created", manifest_timestamp()}};
            w.json_file("manifest.json", manifest);
        });
        return manifest;
    }
    default:
        throw ConfigError("mode", "variant kinds are override, substitute and referral");
    }
}

json cmd_synth(const RunConfig& config, const fs::path& bundle_dir, const std::optional<fs::path>& review,
               harness::CompletionClient* gen) {
    const auto b = load_bundle(bundle_dir);
    auto analysis = review ? captdata::import_review(read_json_file(*review)) : captdata::analyze_policy(b.policy);
    if (analysis.pid != b.policy.pid) {
        throw InputError("review file is for " + analysis.pid + " but the bundle holds " + b.policy.pid);
    }
    std::unique_ptr<harness::CompletionClient> owned;
    if (gen == nullptr) {
        owned = config.mock_llm ? std::make_unique<harness::MockGenClient>() : remote_client(config);
        gen = owned.get();
    }
    captdata::SynthReport report;
    std::vector<captdata::TrainingExample> examples;
    auto append = [&](std::vector<captdata::TrainingExample>&& part) {
        examples.insert(examples.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    };
    append(captdata::synth_paraphrase_qa(analysis, &b.policy, *gen, config.synth.qa_budget, &report));
    append(captdata::synth_role_model(analysis, *gen, config.synth.role_model_per_spec, &report));
    const auto synth_seed = derive_seed(b.config.seed, kSynthStream);
    append(captdata::synth_scenario_simulation(analysis, b.policy, b.env, config.synth.scenario_per_spec, synth_seed,
                                               &report));
    const engine::ToolRegistry registry(b.policy, b.env);
    append(captdata::synth_trajectory_familiarization(b.golds, b.queries, b.policy, registry));

    json per_category = json::object();
    for (const auto& r : analysis.records) {
        const auto key = captdata::to_string(r.category);
        per_category[key] = per_category.value(key, 0) + 1;
    }
    json manifest;
    write_atomically(b.dir / "synth", [&](DirWriter& w) {
        w.json_file("analysis.json", captdata::to_json(analysis));
        w.json_file("review.json", captdata::export_review(analysis));
        // Scored against introspection, the ground truth for generated policies.
        w.json_file("category_scores.json",
                    scoring::to_json(scoring::classification_f1(analysis.records,
                                                                captdata::analyze_policy(b.policy).records)));
        const auto dataset = captdata::emit_dataset(examples, w.dir() / "dataset.jsonl",
                                                    captdata::dataset_format_from_string(config.synth.format),
                                                    synth_seed);
        w.record("dataset.jsonl", dataset.content_hash);
        json dataset_json = captdata::to_json(dataset);
        dataset_json["path"] = "dataset.jsonl";
        manifest = json{{"kind", "synth"},
                        {"pid", b.policy.pid},
                        {"generator", gen->identity()},
                        {"dataset", dataset_json},
                        {"spec_categories", per_category},
                        {"volumes",
                         {{"qa_budget", config.synth.qa_budget},
                          {"role_model_per_spec", config.synth.role_model_per_spec},
                          {"scenario_per_spec", config.synth.scenario_per_spec}}},
                        {"report", {{"failures", report.failures}, {"skipped", report.skipped}}},
                        {"files", w.files()},
                        {"versions", versions()},
                        {"created", manifest_timestamp()}};
        w.json_file("manifest.json", manifest);
    });
    return manifest;
}

std::string cmd_inspect(const fs::path& path) {
    if (fs::is_directory(path)) {
        return read_json_file(path / "manifest.json").dump(2) + "\n";
    }
    const auto ext = path.extension().string();
    if (ext == ".json") {
        return read_json_file(path).dump(2) + "\n";
    }
    if (ext == ".jsonl") {
        std::string out;
        for (const auto& row : read_jsonl_file(path)) {
            out += row.dump(2) + "\n";
        }
        return out;
    }
    return read_text_file(path);
}

} // namespace policybench::cli
