// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "policybench/benchgen/variants.hpp"
#include "policybench/engine/oracle.hpp"
#include "policybench/harness/client.hpp"

#include <atomic>
#include <map>
#include <string>
#include <vector>

namespace policybench::harness {

/// Number of assistant turns already in the conversation.
std::size_t assistant_turns(const std::vector<ChatMessage>& messages);

/// Replays the gold trajectory for the query found in the prompt, one action
/// per turn. Stateless, so safe to share.
class OracleReplayClient : public CompletionClient {
public:
    /// Keys are query texts.
    explicit OracleReplayClient(std::map<std::string, engine::GoldTrajectory> golds);

    std::string chat(const std::vector<ChatMessage>& messages, const ChatParams& params) override;
    std::string identity() const override { return "mock:oracle"; }

protected:
    const engine::GoldTrajectory* gold_for(const std::vector<ChatMessage>& messages) const;
    std::string render_step(const engine::GoldTrajectory& gold, std::size_t step,
                            const engine::ToolCall& call) const;

private:
    std::map<std::string, engine::GoldTrajectory> golds_;
};

/// Oracle replay that alters exactly one argument of the first finish call.
class CorruptingClient : public OracleReplayClient {
public:
    using OracleReplayClient::OracleReplayClient;
    std::string chat(const std::vector<ChatMessage>& messages, const ChatParams& params) override;
    std::string identity() const override { return "mock:corrupt-one-arg"; }
};

/// The finish call with one argument changed, chosen by query id.
engine::ToolCall corrupt_one_argument(const engine::ToolCall& call, const std::string& query_id);

/// Always answers in prose, never calling a tool.
class ProseOnlyClient : public CompletionClient {
public:
    std::string chat(const std::vector<ChatMessage>&, const ChatParams&) override;
    std::string identity() const override { return "mock:prose"; }
};

/// Returns responses[i] on the i-th assistant turn (the last one repeats).
class ScriptedClient : public CompletionClient {
public:
    explicit ScriptedClient(std::vector<std::string> responses, std::string name = "mock:scripted");
    std::string chat(const std::vector<ChatMessage>& messages, const ChatParams& params) override;
    std::string identity() const override { return name_; }
    std::size_t calls() const { return calls_.load(); }

private:
    std::vector<std::string> responses_;
    std::string name_;
    std::atomic<std::size_t> calls_{0};
};

/// Throws ClientError on every call.
class FailingClient : public CompletionClient {
public:
    explicit FailingClient(std::string message = "connection refused") : message_(std::move(message)) {}
    std::string chat(const std::vector<ChatMessage>&, const ChatParams&) override;
    std::string identity() const override { return "mock:failing"; }

private:
    std::string message_;
};

/// Judge for referral grading: 5 for a normalised exact match with the
/// reference, 3 when one contains the other, else 0.
class MockJudgeClient : public CompletionClient {
public:
    std::string chat(const std::vector<ChatMessage>& messages, const ChatParams& params) override;
    std::string identity() const override { return "mock:judge"; }
};

/// Answers referral questions from the policy's own question pool.
class ReferralAnswerClient : public CompletionClient {
public:
    explicit ReferralAnswerClient(const benchgen::PolicyDocument& policy);
    std::string chat(const std::vector<ChatMessage>& messages, const ChatParams& params) override;
    std::string identity() const override { return "mock:referral"; }

private:
    std::map<std::string, std::string> answers_;
};

/// Deterministic stand-in for a generative model. Reads the "Task:" and
/// "Content:" lines of the last user message and answers from a template.
class MockGenClient : public CompletionClient {
public:
    std::string chat(const std::vector<ChatMessage>& messages, const ChatParams& params) override;
    std::string identity() const override { return "mock:gen"; }
};

} // namespace policybench::harness
