// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "policybench/benchgen/environment.hpp"
#include "policybench/benchgen/policy.hpp"
#include "policybench/benchgen/query.hpp"
#include "policybench/engine/tools.hpp"
#include "policybench/harness/client.hpp"
#include "policybench/harness/parser.hpp"
#include "policybench/harness/prompt.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace policybench::harness {

struct EpisodeLimits {
    int max_steps = 30;
    ChatParams params;
};

enum class Terminal { Finished, StepLimit, ClientError };

std::string to_string(Terminal terminal);

struct Step {
    std::string assistant_text;
    ParseResult parsed;
    /// Present when a ToolCall was executed or an error was fed back.
    std::optional<engine::Observation> observation;
    /// True when parsed is a ToolCall naming a registered tool.
    bool executed = false;
};

struct TokenCounts {
    std::size_t prompt = 0;
    std::size_t completion = 0;
};

struct Transcript {
    std::string query_id;
    std::string mode;
    std::string client;
    std::uint64_t seed = 0;
    EpisodeLimits limits;
    std::vector<Step> steps;
    Terminal terminal = Terminal::StepLimit;
    std::string terminal_message;
    TokenCounts token_counts;
    std::string tokenizer;

    /// Tool calls that reached the registry, in order.
    std::vector<engine::ToolCall> executed_calls() const;
};

json to_json(const Transcript& transcript);
Transcript transcript_from_json(const json& j);

/// Runs one episode. `prompt_policy` feeds the prompt (for Override it is the
/// original, for Substitute the new document); tools come from `tool_policy`
/// over `env`.
Transcript run_episode(CompletionClient& client, const PromptMode& mode,
                       const benchgen::PolicyDocument& prompt_policy,
                       const benchgen::PolicyDocument& tool_policy, const benchgen::Environment& env,
                       const benchgen::Query& query, const EpisodeLimits& limits,
                       const TokenCounter& counter = WhitespaceTokenCounter{}, std::uint64_t seed = 0);

/// Shorthand for the common case where prompt and tools share one policy.
Transcript run_episode(CompletionClient& client, const PromptMode& mode, const benchgen::PolicyDocument& policy,
                       const benchgen::Environment& env, const benchgen::Query& query,
                       const EpisodeLimits& limits);

} // namespace policybench::harness
