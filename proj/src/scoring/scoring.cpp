// SPDX-License-Identifier: Apache-2.0
#include "policybench/scoring/scoring.hpp"

#include "policybench/error.hpp"

#include <cctype>

namespace policybench::scoring {

using captdata::Category;
using captdata::SpecRecord;
using engine::GoldTrajectory;
using engine::ToolCall;

namespace {

bool is_terminal_call(const std::string& name) {
    return name == engine::kToolConflict || name.rfind("finish-task-", 0) == 0;
}

/// Matching positions over the gold arguments; finish lists compare
/// element-wise. Zero-argument tools count as one position.
std::pair<std::size_t, std::size_t> argument_agreement(const ToolCall& gold, const ToolCall& actual) {
    if (gold.args.empty()) {
        return {actual.args.empty() ? 1 : 0, 1};
    }
    if (gold.args.size() == 1 && gold.args[0].is_array()) {
        const auto& expected = gold.args[0];
        const json empty = json::array();
        const auto& got = actual.args.size() == 1 && actual.args[0].is_array() ? actual.args[0] : empty;
        std::size_t equal = 0;
        for (std::size_t i = 0; i < expected.size() && i < got.size(); ++i) {
            equal += expected[i] == got[i] ? 1 : 0;
        }
        return {equal, expected.size()};
    }
    std::size_t equal = 0;
    for (std::size_t i = 0; i < gold.args.size() && i < actual.args.size(); ++i) {
        equal += gold.args[i] == actual.args[i] ? 1 : 0;
    }
    return {equal, gold.args.size()};
}

void require_same_query(const harness::Transcript& transcript, const GoldTrajectory& gold) {
    if (transcript.query_id != gold.query_id) {
        throw InputError("transcript is for " + transcript.query_id + " but gold is for " + gold.query_id);
    }
}

} // namespace

json to_json(const Scorecard& card) {
    return json{{"query_id", card.query_id},
                {"sr", card.sr},
                {"psr", card.psr},
                {"steps_used", card.steps_used},
                {"matched_calls", card.matched_calls},
                {"compression", card.compression ? json(*card.compression) : json(nullptr)}};
}

Scorecard scorecard_from_json(const json& j) {
    Scorecard card;
    card.query_id = j.at("query_id").get<std::string>();
    card.sr = j.at("sr").get<int>();
    card.psr = j.at("psr").get<double>();
    card.steps_used = j.at("steps_used").get<int>();
    card.matched_calls = j.at("matched_calls").get<int>();
    if (j.contains("compression") && !j["compression"].is_null()) {
        card.compression = j["compression"].get<double>();
    }
    return card;
}

int score_success(const CallList& calls, const GoldTrajectory& gold) {
    std::size_t next = 0;
    for (const auto& call : calls) {
        if (next < gold.actions.size() && call == gold.actions[next]) {
            ++next;
        }
    }
    if (next != gold.actions.size()) {
        return 0;
    }
    const auto terminal_count = [](const auto& list) {
        std::size_t n = 0;
        for (const auto& c : list) {
            n += is_terminal_call(c.name) ? 1 : 0;
        }
        return n;
    };
    return terminal_count(calls) == terminal_count(gold.actions) ? 1 : 0;
}

PartialScore score_partial(const CallList& calls, const GoldTrajectory& gold) {
    PartialScore result;
    double total = 0.0;
    std::size_t cursor = 0;
    for (const auto& expected : gold.actions) {
        // Extra reads are tolerated, so a read may skip ahead to its exact
        // counterpart. Terminal calls always take the next same-name call.
        const bool look_ahead = !is_terminal_call(expected.name);
        std::size_t chosen = calls.size();
        for (std::size_t i = cursor; i < calls.size(); ++i) {
            if (calls[i].name != expected.name) {
                continue;
            }
            if (chosen == calls.size()) {
                chosen = i;
                if (!look_ahead) {
                    break;
                }
            }
            if (calls[i] == expected) {
                chosen = i;
                break;
            }
        }
        if (chosen == calls.size()) {
            continue;
        }
        const auto [equal, count] = argument_agreement(expected, calls[chosen]);
        total += static_cast<double>(equal) / static_cast<double>(count);
        ++result.matched;
        cursor = chosen + 1;
    }
    result.psr = result.matched == 0 ? 0.0 : total / result.matched;
    return result;
}

int score_success(const harness::Transcript& transcript, const GoldTrajectory& gold) {
    require_same_query(transcript, gold);
    return score_success(transcript.executed_calls(), gold);
}

double score_partial(const harness::Transcript& transcript, const GoldTrajectory& gold) {
    require_same_query(transcript, gold);
    return score_partial(transcript.executed_calls(), gold).psr;
}

Scorecard score_episode(const harness::Transcript& transcript, const GoldTrajectory& gold,
                        std::optional<double> compression) {
    require_same_query(transcript, gold);
    const auto calls = transcript.executed_calls();
    const auto partial = score_partial(calls, gold);
    Scorecard card;
    card.query_id = gold.query_id;
    card.sr = score_success(calls, gold);
    card.psr = partial.psr;
    card.steps_used = static_cast<int>(transcript.steps.size());
    card.matched_calls = partial.matched;
    card.compression = compression;
    return card;
}

std::string judge_prompt(const std::string& question, const std::string& answer, const std::string& reference) {
    return "Grade how faithfully an answer about a policy document matches the reference answer.\n"
           "Scale: 5 = same meaning with every detail correct; 4 = correct apart from a minor omission; "
           "3 = partly correct; 2 = mostly wrong but with a relevant detail; 1 = on topic but wrong; "
           "0 = wrong or missing.\n"
           "Reply with one integer from 0 to 5 and nothing else.\n"
           "Question: " + question + "\n<reference>" + reference + "</reference>\n<answer>" + answer + "</answer>";
}

std::optional<int> parse_judge_score(const std::string& text) {
    std::string s;
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) {
            s += c;
        }
    }
    if (s.size() == 2 && s[1] == '.') {
        s.pop_back();
    }
    if (s.size() != 1 || s[0] < '0' || s[0] > '5') {
        return std::nullopt;
    }
    return s[0] - '0';
}

ReferralGrade score_referral(const std::string& answer, const std::string& reference, harness::CompletionClient& judge,
                             const std::string& question) {
    const std::vector<harness::ChatMessage> messages{{"user", judge_prompt(question, answer, reference)}};
    ReferralGrade grade;
    for (int attempt = 0; attempt < 2; ++attempt) {
        try {
            grade.judge_output = judge.chat(messages, harness::ChatParams{0.0, 8});
        } catch (const std::exception& e) {
            throw ScoringError(std::string("judge call failed: ") + e.what());
        }
        if (const auto score = parse_judge_score(grade.judge_output)) {
            grade.score = *score * 20;
            return grade;
        }
    }
    grade.score = 0;
    grade.flagged = true;
    return grade;
}

double f1_score(double precision, double recall) {
    const double sum = precision + recall;
    return sum == 0.0 ? 0.0 : 2.0 * precision * recall / sum;
}

Prf prf_from_counts(std::size_t true_positives, std::size_t predicted, std::size_t gold) {
    Prf prf;
    prf.true_positives = true_positives;
    prf.predicted = predicted;
    prf.gold = gold;
    if (predicted == 0 && gold == 0) {
        prf.precision = prf.recall = prf.f1 = 1.0;
        return prf;
    }
    prf.precision = predicted == 0 ? 0.0 : static_cast<double>(true_positives) / static_cast<double>(predicted);
    prf.recall = gold == 0 ? 0.0 : static_cast<double>(true_positives) / static_cast<double>(gold);
    prf.f1 = f1_score(prf.precision, prf.recall);
    return prf;
}

CategoryScores classification_f1(const std::vector<SpecRecord>& predicted, const std::vector<SpecRecord>& gold) {
    CategoryScores scores;
    std::vector<bool> used(gold.size(), false);
    std::map<Category, std::size_t> tp, n_pred, n_gold;
    std::size_t level_agree = 0;
    for (const auto& g : gold) {
        ++n_gold[g.category];
    }
    for (const auto& p : predicted) {
        ++n_pred[p.category];
        const auto content = captdata::normalize_content(p.content);
        for (std::size_t i = 0; i < gold.size(); ++i) {
            if (used[i] || gold[i].category != p.category || captdata::normalize_content(gold[i].content) != content) {
                continue;
            }
            used[i] = true;
            ++tp[p.category];
            if (p.category == Category::CondComplex) {
                ++scores.complexity_pairs;
                level_agree += (!p.complexity_uncertain && p.complexity_level == gold[i].complexity_level) ? 1 : 0;
            }
            break;
        }
    }
    std::size_t tp_all = 0;
    for (auto category : captdata::kAllCategories) {
        scores.per_category[category] = prf_from_counts(tp[category], n_pred[category], n_gold[category]);
        tp_all += tp[category];
    }
    scores.micro = prf_from_counts(tp_all, predicted.size(), gold.size());
    scores.complexity_agreement =
        scores.complexity_pairs == 0 ? 1.0 : static_cast<double>(level_agree) / static_cast<double>(scores.complexity_pairs);
    return scores;
}

json to_json(const CategoryScores& scores) {
    auto prf_json = [](const Prf& prf) {
        return json{{"precision", prf.precision}, {"recall", prf.recall},   {"f1", prf.f1},
                    {"true_positives", prf.true_positives}, {"predicted", prf.predicted}, {"gold", prf.gold}};
    };
    json per = json::object();
    for (const auto& [category, prf] : scores.per_category) {
        per[captdata::to_string(category)] = prf_json(prf);
    }
    return json{{"per_category", std::move(per)},
                {"micro", prf_json(scores.micro)},
                {"complexity_agreement", scores.complexity_agreement},
                {"complexity_pairs", scores.complexity_pairs}};
}

double compression_ratio(std::size_t full_prompt_tokens, std::size_t internalized_prompt_tokens) {
    if (full_prompt_tokens == 0) {
        throw InputError("full prompt token count must be positive");
    }
    return 1.0 - static_cast<double>(internalized_prompt_tokens) / static_cast<double>(full_prompt_tokens);
}

Summary aggregate(const std::vector<Scorecard>& cards) {
    if (cards.empty()) {
        throw InputError("cannot aggregate an empty scorecard list");
    }
    Summary summary;
    summary.n = cards.size();
    double sr = 0.0;
    double psr = 0.0;
    double compression = 0.0;
    std::size_t with_compression = 0;
    for (const auto& card : cards) {
        sr += card.sr;
        psr += card.psr;
        if (card.compression) {
            compression += *card.compression;
            ++with_compression;
        }
    }
    summary.mean_sr = sr / static_cast<double>(cards.size());
    summary.mean_psr = psr / static_cast<double>(cards.size());
    if (with_compression > 0) {
        summary.mean_compression = compression / static_cast<double>(with_compression);
    }
    return summary;
}

json to_json(const Summary& summary) {
    return json{{"mean_sr", summary.mean_sr},
                {"mean_psr", summary.mean_psr},
                {"mean_compression", summary.mean_compression ? json(*summary.mean_compression) : json(nullptr)},
                {"n", summary.n}};
}

} // namespace policybench::scoring
