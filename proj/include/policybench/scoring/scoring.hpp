// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "policybench/captdata/records.hpp"
#include "policybench/engine/oracle.hpp"
#include "policybench/harness/client.hpp"
#include "policybench/harness/episode.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace policybench::scoring {

struct Scorecard {
    std::string query_id;
    int sr = 0;
    double psr = 0.0;
    int steps_used = 0;
    int matched_calls = 0;
    std::optional<double> compression;

    friend bool operator==(const Scorecard&, const Scorecard&) = default;
};

json to_json(const Scorecard& card);
Scorecard scorecard_from_json(const json& j);

/// Tool calls in the order they reached the registry.
using CallList = std::vector<engine::ToolCall>;

/// 1 when the gold actions form an exact in-order subsequence of `calls` and
/// no other finish-task or Tool-Conflict call was made.
int score_success(const CallList& calls, const engine::GoldTrajectory& gold);

struct PartialScore {
    double psr = 0.0;
    int matched = 0;
};

/// Greedy in-order alignment by tool name. For Get and Search actions an
/// exactly equal call ahead of the cursor is preferred, which keeps
/// sr = 1 => psr = 1; finish and Tool-Conflict take the next same-name call.
PartialScore score_partial(const CallList& calls, const engine::GoldTrajectory& gold);

/// Transcript forms; throw InputError when the query ids differ.
int score_success(const harness::Transcript& transcript, const engine::GoldTrajectory& gold);
double score_partial(const harness::Transcript& transcript, const engine::GoldTrajectory& gold);

Scorecard score_episode(const harness::Transcript& transcript, const engine::GoldTrajectory& gold,
                        std::optional<double> compression = std::nullopt);

struct ReferralGrade {
    int score = 0; // 0..100
    bool flagged = false;
    std::string judge_output;
};

std::string judge_prompt(const std::string& question, const std::string& answer, const std::string& reference);

/// Parses a bare integer 0..5; nullopt otherwise.
std::optional<int> parse_judge_score(const std::string& text);

/// Throws ScoringError when the judge transport fails.
ReferralGrade score_referral(const std::string& answer, const std::string& reference, harness::CompletionClient& judge,
                             const std::string& question = {});

struct Prf {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::size_t true_positives = 0;
    std::size_t predicted = 0;
    std::size_t gold = 0;
};

struct CategoryScores {
    std::map<captdata::Category, Prf> per_category;
    Prf micro;
    /// Fraction of matched CondComplex pairs whose levels agree.
    double complexity_agreement = 1.0;
    std::size_t complexity_pairs = 0;
};

/// 0 when p + r = 0, else the harmonic mean.
double f1_score(double precision, double recall);

/// Precision, recall and F1 from counts. An empty prediction against an empty
/// gold set scores 1.
Prf prf_from_counts(std::size_t true_positives, std::size_t predicted, std::size_t gold);

CategoryScores classification_f1(const std::vector<captdata::SpecRecord>& predicted,
                                 const std::vector<captdata::SpecRecord>& gold);

json to_json(const CategoryScores& scores);

/// 1 - internalized / full. Throws InputError when full is 0.
double compression_ratio(std::size_t full_prompt_tokens, std::size_t internalized_prompt_tokens);

struct Summary {
    double mean_sr = 0.0;
    double mean_psr = 0.0;
    std::optional<double> mean_compression;
    std::size_t n = 0;
};

/// Throws InputError on an empty list.
Summary aggregate(const std::vector<Scorecard>& cards);

json to_json(const Summary& summary);

} // namespace policybench::scoring
