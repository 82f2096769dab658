// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace policybench::harness {

struct ChatMessage {
    std::string role; // system, user, assistant or tool
    std::string content;

    friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

struct ChatParams {
    double temperature = 0.0;
    int max_tokens = 1024;
};

/// A chat-completion backend. chat() throws ClientError on transport failure.
class CompletionClient {
public:
    virtual ~CompletionClient() = default;
    virtual std::string chat(const std::vector<ChatMessage>& messages, const ChatParams& params) = 0;
    virtual std::string identity() const = 0;
    /// False when the client must not be called from several threads at once.
    virtual bool concurrent_safe() const { return true; }
};

class TokenCounter {
public:
    virtual ~TokenCounter() = default;
    virtual std::size_t count(std::string_view text) const = 0;
    virtual std::string name() const = 0;
};

/// Counts maximal runs of non-whitespace characters.
class WhitespaceTokenCounter : public TokenCounter {
public:
    std::size_t count(std::string_view text) const override;
    std::string name() const override { return "whitespace"; }
};

std::size_t count_message_tokens(const std::vector<ChatMessage>& messages, const TokenCounter& counter);

} // namespace policybench::harness
