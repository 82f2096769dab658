// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "policybench/benchgen/environment.hpp"
#include "policybench/benchgen/policy.hpp"
#include "policybench/benchgen/query.hpp"
#include "policybench/benchgen/variants.hpp"
#include "policybench/cli/run_config.hpp"
#include "policybench/engine/oracle.hpp"
#include "policybench/harness/client.hpp"
#include "policybench/harness/prompt.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace policybench::cli {

namespace fs = std::filesystem;

/// A generated grid cell read back from disk.
struct Bundle {
    fs::path dir;
    benchgen::ComplexityConfig config;
    benchgen::Environment env;
    benchgen::PolicyDocument policy;
    std::vector<benchgen::Query> queries;
    std::vector<engine::GoldTrajectory> golds;
};

/// Builds one cell in memory.
Bundle build_bundle(const benchgen::ComplexityConfig& cc, benchgen::PidRegistry* registry = nullptr);

/// Throws InputError when `dir` is not a bundle.
Bundle load_bundle(const fs::path& dir);

/// `path` itself when it holds a bundle, otherwise the cells its run
/// manifest lists.
std::vector<fs::path> resolve_bundles(const fs::path& path);

/// Writes every grid cell under config.output_dir plus a run manifest.
/// Returns the cell directories.
std::vector<fs::path> cmd_generate(const RunConfig& config);

/// Explicit clients for tests; null members are built from the config.
struct ClientOverrides {
    harness::CompletionClient* agent = nullptr;
    harness::CompletionClient* judge = nullptr;
};

/// Runs and scores every query of `bundle` in `mode`, writing
/// eval-<mode>/{transcripts,scores}.jsonl, summary.json, plot_data.csv and a
/// manifest. Returns the summary.
json cmd_eval(const RunConfig& config, const fs::path& bundle, harness::PromptModeKind mode,
              const ClientOverrides& clients = {});

/// cmd_eval over every bundle `path` resolves to. For a run directory it
/// also writes plot_data-<mode>.csv at the root. Returns the summaries.
json cmd_eval_path(const RunConfig& config, const fs::path& path, harness::PromptModeKind mode,
                   const ClientOverrides& clients = {});

/// Re-scores eval-<mode>/transcripts.jsonl; rewrites scores and summary.
json cmd_score(const RunConfig& config, const fs::path& bundle, harness::PromptModeKind mode);

/// Writes synth/{analysis.json, review.json, category_scores.json,
/// dataset.jsonl, manifest.json}.
json cmd_synth(const RunConfig& config, const fs::path& bundle, const std::optional<fs::path>& review = std::nullopt,
               harness::CompletionClient* gen = nullptr);

/// kind is Override, Substitute or ReferralQA. Writes variant-<kind>/.
json cmd_variant(const RunConfig& config, const fs::path& bundle, harness::PromptModeKind kind);

/// Pretty-printed artifact, or the manifest of a directory.
std::string cmd_inspect(const fs::path& path);

/// Variant artifacts, loaded from disk when present and rebuilt otherwise.
struct OverrideVariant {
    benchgen::OverrideDelta delta;
    benchgen::PolicyDocument policy;
    std::vector<engine::GoldTrajectory> golds;
    std::size_t changed_queries = 0;
};
OverrideVariant make_override(const Bundle& bundle);

struct SubstituteVariant {
    benchgen::PolicyDocument policy;
    std::vector<engine::GoldTrajectory> golds;
};
SubstituteVariant make_substitute(const Bundle& bundle);

std::vector<benchgen::ReferralQa> make_referral(const Bundle& bundle, int n);

/// Timestamp for manifests: SOURCE_DATE_EPOCH when set, else null so that
/// reruns stay byte-identical.
json manifest_timestamp();

} // namespace policybench::cli
