// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "policybench/benchgen/policy.hpp"
#include "policybench/captdata/records.hpp"
#include "policybench/harness/client.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace policybench::captdata {

struct PolicyAnalysis {
    std::string pid;
    std::vector<std::string> tasks;
    std::vector<SpecRecord> records;

    friend bool operator==(const PolicyAnalysis&, const PolicyAnalysis&) = default;
};

json to_json(const PolicyAnalysis& analysis);
PolicyAnalysis analysis_from_json(const json& j);

enum class SpecKind { Statement, Behavior, Workflow };

/// What is known about a specification before categorisation: whether it
/// states a fact, prescribes behaviour, or steers the workflow, and the
/// depth of its if/else tree.
struct SpecStructure {
    std::string content;
    SpecKind kind = SpecKind::Statement;
    int conditional_depth = 0;
    std::vector<std::string> scope;
};

/// Workflow specs of depth 1 are simple, deeper ones complex with level =
/// depth; a workflow spec with no condition is a fact.
SpecRecord categorize(const SpecStructure& spec);

/// Ground truth for a generated policy, read off its structure.
PolicyAnalysis analyze_policy(const benchgen::PolicyDocument& policy);

/// The analyst prompt with the document spliced in.
std::string analyst_prompt(const std::string& policy_text);

/// Parses the four output lists. Throws AnalysisError when no list or task
/// line can be found.
PolicyAnalysis parse_analyst_output(const std::string& raw, const std::string& pid);

/// LLM path: one retry on unparseable output, then AnalysisError.
PolicyAnalysis analyze_policy_text(const std::string& policy_text, const std::string& pid,
                                   harness::CompletionClient& analyst);

/// Drops later records whose normalised content repeats an earlier one.
void deduplicate(PolicyAnalysis& analysis);

/// "Task-Type-i arg-j: ..." records name the argument formula they encode.
std::optional<std::pair<int, int>> locate_argument(const std::string& content);
std::string argument_content(const benchgen::TaskSpec& task, const benchgen::ArgSpec& arg);

/// Review round trip: every record gets "approved": true; on import,
/// records marked false are dropped and edited fields are kept.
json export_review(const PolicyAnalysis& analysis);
PolicyAnalysis import_review(const json& review);

} // namespace policybench::captdata
