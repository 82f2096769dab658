// SPDX-License-Identifier: Apache-2.0
#include "policybench/cli/commands.hpp"
#include "policybench/error.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>

namespace fs = std::filesystem;
using namespace policybench;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

struct Flags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string mode;
    int parallel = 0;
    bool mock_llm = false;
    std::string mock_client;
    int count_per_spec = -1;
    int max_steps = 0;
};

cli::RunConfig effective_config(const Flags& f) {
    cli::RunConfig config = f.config.empty() ? cli::RunConfig{} : cli::load_run_config(f.config);
    if (f.seed) {
        config.seeds = {*f.seed};
    }
    if (!f.out.empty()) {
        config.output_dir = f.out;
    }
    if (!f.mode.empty()) {
        config.mode = f.mode;
    }
    if (f.parallel > 0) {
        config.parallel = f.parallel;
    }
    if (f.mock_llm) {
        config.mock_llm = true;
    }
    if (!f.mock_client.empty()) {
        config.mock_client = f.mock_client;
    }
    if (f.count_per_spec >= 0) {
        config.synth.scenario_per_spec = f.count_per_spec;
        config.synth.role_model_per_spec = f.count_per_spec;
    }
    if (f.max_steps > 0) {
        config.max_steps = f.max_steps;
    }
    config.validate();
    return config;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Policy benchmark generator, evaluation harness and training-data synthesizer"};
    app.require_subcommand(1);
    Flags flags;
    std::string target;
    std::string review;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", flags.config, "JSON run configuration")->check(CLI::ExistingFile);
        sub->add_option("--seed", flags.seed, "Replace the configured seed list with one seed");
        sub->add_option("--out", flags.out, "Output directory");
        sub->add_option("--max-steps", flags.max_steps, "Per-episode step limit")->check(CLI::PositiveNumber);
    };
    const auto modes = CLI::IsMember({"full", "pid", "override", "substitute", "referral"});

    auto* generate = app.add_subcommand("generate", "Generate a bundle for every grid cell");
    add_common(generate);

    auto* eval = app.add_subcommand("eval", "Run and score episodes on a bundle or run directory");
    add_common(eval);
    eval->add_option("bundle", target, "Bundle or run directory")->required()->check(CLI::ExistingDirectory);
    eval->add_option("--mode", flags.mode, "Prompt mode")->check(modes);
    eval->add_option("--parallel", flags.parallel, "Concurrent episodes")->check(CLI::PositiveNumber);
    eval->add_flag("--mock-llm", flags.mock_llm, "Use the deterministic mock clients");
    eval->add_option("--mock-client", flags.mock_client, "Mock agent for task modes")
        ->check(CLI::IsMember({"oracle", "corrupt"}));

    auto* synth = app.add_subcommand("synth", "Synthesize the continued-pretraining dataset for a bundle");
    add_common(synth);
    synth->add_option("bundle", target, "Bundle or run directory")->required()->check(CLI::ExistingDirectory);
    synth->add_flag("--mock-llm", flags.mock_llm, "Use the deterministic mock generator");
    synth->add_option("--count-per-spec", flags.count_per_spec, "Role-model and scenario examples per spec")
        ->check(CLI::NonNegativeNumber);
    synth->add_option("--review", review, "Reviewed analysis to use instead of introspection")
        ->check(CLI::ExistingFile);

    auto* variant = app.add_subcommand("variant", "Build an override, substitute or referral evaluation set");
    add_common(variant);
    variant->add_option("bundle", target, "Bundle or run directory")->required()->check(CLI::ExistingDirectory);
    variant->add_option("--mode", flags.mode, "Variant kind")
        ->required()
        ->check(CLI::IsMember({"override", "substitute", "referral"}));

    auto* score = app.add_subcommand("score", "Re-score existing transcripts");
    add_common(score);
    score->add_option("bundle", target, "Bundle or run directory")->required()->check(CLI::ExistingDirectory);
    score->add_option("--mode", flags.mode, "Prompt mode of the evaluation to re-score")->check(modes);

    auto* inspect = app.add_subcommand("inspect", "Pretty-print an artifact");
    inspect->add_option("path", target, "Artifact file or directory")->required()->check(CLI::ExistingPath);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitUsage;
    }

    try {
        if (inspect->parsed()) {
            std::cout << cli::cmd_inspect(target);
            return 0;
        }
        const auto config = effective_config(flags);
        const auto mode = harness::prompt_mode_from_string(config.mode);
        if (generate->parsed()) {
            for (const auto& dir : cli::cmd_generate(config)) {
                std::cout << dir.string() << "\n";
            }
        } else if (eval->parsed()) {
            std::cout << cli::cmd_eval_path(config, target, mode).dump(2) << "\n";
        } else if (synth->parsed()) {
            std::optional<fs::path> review_path;
            if (!review.empty()) {
                review_path = review;
            }
            for (const auto& dir : cli::resolve_bundles(target)) {
                const auto manifest = cli::cmd_synth(config, dir, review_path);
                std::cout << dir.string() << ": " << manifest.at("dataset").dump() << "\n";
            }
        } else if (variant->parsed()) {
            for (const auto& dir : cli::resolve_bundles(target)) {
                std::cout << dir.string() << ": " << cli::cmd_variant(config, dir, mode).dump() << "\n";
            }
        } else if (score->parsed()) {
            for (const auto& dir : cli::resolve_bundles(target)) {
                std::cout << cli::cmd_score(config, dir, mode).dump() << "\n";
            }
        }
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}
