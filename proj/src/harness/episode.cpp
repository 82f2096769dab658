// SPDX-License-Identifier: Apache-2.0
#include "policybench/harness/episode.hpp"

#include "policybench/error.hpp"

#include <cctype>

namespace policybench::harness {

using engine::Observation;
using engine::ToolCall;

std::size_t WhitespaceTokenCounter::count(std::string_view text) const {
    std::size_t tokens = 0;
    bool in_token = false;
    for (char c : text) {
        const bool space = std::isspace(static_cast<unsigned char>(c)) != 0;
        if (!space && !in_token) {
            ++tokens;
        }
        in_token = !space;
    }
    return tokens;
}

std::size_t count_message_tokens(const std::vector<ChatMessage>& messages, const TokenCounter& counter) {
    std::size_t total = 0;
    for (const auto& m : messages) {
        total += counter.count(m.content);
    }
    return total;
}

std::string to_string(Terminal terminal) {
    switch (terminal) {
    case Terminal::Finished:
        return "Finished";
    case Terminal::StepLimit:
        return "StepLimit";
    case Terminal::ClientError:
        return "ClientError";
    }
    return "unknown";
}

namespace {

Terminal terminal_from_string(const std::string& s) {
    for (auto t : {Terminal::Finished, Terminal::StepLimit, Terminal::ClientError}) {
        if (to_string(t) == s) {
            return t;
        }
    }
    throw StructuralError("unknown terminal '" + s + "'");
}

bool is_finish(const std::string& name) { return name.rfind("finish-task-", 0) == 0; }

const char* const kNudge = "No tool was called. Continue the task by replying with exactly one fenced JSON tool call.";

} // namespace

std::vector<ToolCall> Transcript::executed_calls() const {
    std::vector<ToolCall> calls;
    for (const auto& step : steps) {
        if (step.executed) {
            calls.push_back(std::get<ToolCall>(step.parsed));
        }
    }
    return calls;
}

json to_json(const Transcript& transcript) {
    json steps = json::array();
    for (const auto& step : transcript.steps) {
        json s{{"assistant_text", step.assistant_text}, {"parsed", to_json(step.parsed)}, {"executed", step.executed}};
        s["observation"] = step.observation ? json{{"payload", step.observation->payload},
                                                   {"is_error", step.observation->is_error}}
                                            : json(nullptr);
        steps.push_back(std::move(s));
    }
    return json{{"query_id", transcript.query_id},
                {"mode", transcript.mode},
                {"client", transcript.client},
                {"seed", transcript.seed},
                {"limits",
                 {{"max_steps", transcript.limits.max_steps},
                  {"temperature", transcript.limits.params.temperature},
                  {"max_tokens", transcript.limits.params.max_tokens}}},
                {"steps", std::move(steps)},
                {"terminal", to_string(transcript.terminal)},
                {"terminal_message", transcript.terminal_message},
                {"token_counts", {{"prompt", transcript.token_counts.prompt}, {"completion", transcript.token_counts.completion}}},
                {"tokenizer", transcript.tokenizer}};
}

Transcript transcript_from_json(const json& j) {
    try {
        Transcript t;
        t.query_id = j.at("query_id").get<std::string>();
        t.mode = j.at("mode").get<std::string>();
        t.client = j.at("client").get<std::string>();
        t.seed = j.at("seed").get<std::uint64_t>();
        const auto& limits = j.at("limits");
        t.limits.max_steps = limits.at("max_steps").get<int>();
        t.limits.params.temperature = limits.at("temperature").get<double>();
        t.limits.params.max_tokens = limits.at("max_tokens").get<int>();
        for (const auto& s : j.at("steps")) {
            Step step{s.at("assistant_text").get<std::string>(), parse_result_from_json(s.at("parsed")), std::nullopt,
                      s.at("executed").get<bool>()};
            if (!s.at("observation").is_null()) {
                step.observation = Observation{s["observation"].at("payload"), s["observation"].at("is_error").get<bool>()};
            }
            t.steps.push_back(std::move(step));
        }
        t.terminal = terminal_from_string(j.at("terminal").get<std::string>());
        t.terminal_message = j.at("terminal_message").get<std::string>();
        t.token_counts.prompt = j.at("token_counts").at("prompt").get<std::size_t>();
        t.token_counts.completion = j.at("token_counts").at("completion").get<std::size_t>();
        t.tokenizer = j.at("tokenizer").get<std::string>();
        return t;
    } catch (const json::exception& e) {
        throw StructuralError(std::string("malformed transcript: ") + e.what());
    }
}

Transcript run_episode(CompletionClient& client, const PromptMode& mode, const benchgen::PolicyDocument& prompt_policy,
                       const benchgen::PolicyDocument& tool_policy, const benchgen::Environment& env,
                       const benchgen::Query& query, const EpisodeLimits& limits, const TokenCounter& counter,
                       std::uint64_t seed) {
    const auto registry = engine::register_tools(tool_policy, env);
    auto messages = build_prompt(mode, prompt_policy, query.text);

    Transcript transcript;
    transcript.query_id = query.id;
    transcript.mode = to_string(mode.kind);
    transcript.client = client.identity();
    transcript.seed = seed;
    transcript.limits = limits;
    transcript.tokenizer = counter.name();
    transcript.token_counts.prompt = count_message_tokens(messages, counter);
    transcript.terminal = Terminal::StepLimit;

    int finishes = 0;
    while (static_cast<int>(transcript.steps.size()) < limits.max_steps) {
        std::string reply;
        try {
            reply = client.chat(messages, limits.params);
        } catch (const std::exception& e) {
            transcript.terminal = Terminal::ClientError;
            transcript.terminal_message = e.what();
            return transcript;
        }
        transcript.token_counts.completion += counter.count(reply);
        messages.push_back({"assistant", reply});

        Step step{reply, parse_tool_call(reply), std::nullopt, false};
        bool stop = false;
        if (const auto* call = std::get_if<ToolCall>(&step.parsed)) {
            try {
                step.observation = registry.execute(*call);
                step.executed = true;
                if (call->name == engine::kToolConflict) {
                    stop = true;
                } else if (is_finish(call->name) && ++finishes >= query.combinations) {
                    stop = true;
                }
            } catch (const ProtocolError& e) {
                step.observation = Observation::error("unknown_tool", e.what());
            }
            messages.push_back({"tool", step.observation->payload.dump()});
        } else if (const auto* error = std::get_if<ParseError>(&step.parsed)) {
            step.observation = Observation::error(
                "parse_error", error->diagnostic +
                                   ". Reply with exactly one fenced block holding {\"tool\": ..., \"arguments\": ...}.");
            messages.push_back({"tool", step.observation->payload.dump()});
        } else if (finishes > 0) {
            stop = true;
        } else {
            messages.push_back({"user", kNudge});
        }
        transcript.steps.push_back(std::move(step));
        if (stop) {
            transcript.terminal = Terminal::Finished;
            return transcript;
        }
    }
    transcript.terminal_message = "step limit of " + std::to_string(limits.max_steps) + " reached";
    return transcript;
}

Transcript run_episode(CompletionClient& client, const PromptMode& mode, const benchgen::PolicyDocument& policy,
                       const benchgen::Environment& env, const benchgen::Query& query, const EpisodeLimits& limits) {
    return run_episode(client, mode, policy, policy, env, query, limits);
}

} // namespace policybench::harness
