// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "policybench/benchgen/environment.hpp"
#include "policybench/benchgen/policy.hpp"
#include "policybench/benchgen/query.hpp"
#include "policybench/captdata/analysis.hpp"
#include "policybench/engine/oracle.hpp"
#include "policybench/engine/tools.hpp"
#include "policybench/harness/client.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace policybench::captdata {

enum class ExampleKind { Paraphrase, Qa, RoleModel, ScenarioSim, Trajectory };

inline constexpr ExampleKind kAllExampleKinds[] = {ExampleKind::Paraphrase, ExampleKind::Qa, ExampleKind::RoleModel,
                                                   ExampleKind::ScenarioSim, ExampleKind::Trajectory};

std::string to_string(ExampleKind kind);
ExampleKind example_kind_from_string(const std::string& name);

struct TrainingExample {
    ExampleKind kind = ExampleKind::Qa;
    std::string pid;
    /// Optional system turn (trajectory examples carry the tool listing).
    std::string system;
    std::string prompt;
    std::string response;
    json provenance;
};

json to_json(const TrainingExample& example);
TrainingExample training_example_from_json(const json& j);

/// Problems met while synthesising; output is still returned.
struct SynthReport {
    std::vector<std::string> failures;
    std::vector<std::string> skipped;
};

inline constexpr int kDefaultQaBudget = 1000;
inline constexpr int kDefaultRoleModelPerSpec = 1000;
inline constexpr int kDefaultScenarioPerSpec = 5000;

/// One templated QA per branch of every located conditional spec first, then
/// an LLM paraphrase and QA per record while the budget lasts. `policy` may
/// be null when no machine-readable form exists.
std::vector<TrainingExample> synth_paraphrase_qa(const PolicyAnalysis& analysis, const benchgen::PolicyDocument* policy,
                                                 harness::CompletionClient& gen, int budget = kDefaultQaBudget,
                                                 SynthReport* report = nullptr);

/// count_per_spec examples per Behavior record, two gen calls each.
std::vector<TrainingExample> synth_role_model(const PolicyAnalysis& analysis, harness::CompletionClient& gen,
                                              int count_per_spec = kDefaultRoleModelPerSpec,
                                              SynthReport* report = nullptr);

/// count_per_spec oracle-answered sub-problems per conditional record.
/// Records that do not name an argument formula are skipped and reported.
std::vector<TrainingExample> synth_scenario_simulation(const PolicyAnalysis& analysis,
                                                       const benchgen::PolicyDocument& policy,
                                                       const benchgen::Environment& env,
                                                       int count_per_spec = kDefaultScenarioPerSpec,
                                                       std::uint64_t seed = 0, SynthReport* report = nullptr);

/// One example per gold trajectory: the pid-only prompt and the interleaved
/// rationale, tool-call block and observation for every action.
std::vector<TrainingExample> synth_trajectory_familiarization(const std::vector<engine::GoldTrajectory>& golds,
                                                              const std::vector<benchgen::Query>& queries,
                                                              const benchgen::PolicyDocument& policy,
                                                              const engine::ToolRegistry& registry);

/// The scenario prompt for one binding; shared with the re-verification path.
std::string scenario_prompt(const std::string& pid, const benchgen::TaskSpec& task, const benchgen::ArgSpec& arg,
                            const engine::ProfileBinding& binding);

} // namespace policybench::captdata
