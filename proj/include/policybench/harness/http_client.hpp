// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "policybench/harness/client.hpp"

#include <string>

namespace policybench::harness {

struct EndpointConfig {
    std::string url;            // e.g. http://localhost:8000/v1/chat/completions
    std::string credential_env; // name of the variable holding the API key
    std::string model;
    int timeout_seconds = 120;
};

/// OpenAI-style chat-completion client over HTTP(S). Each call opens its own
/// connection, so instances are safe to share between threads.
class HttpChatClient : public CompletionClient {
public:
    /// Reads the credential from the environment now; an unset variable means
    /// no Authorization header.
    explicit HttpChatClient(EndpointConfig config);

    std::string chat(const std::vector<ChatMessage>& messages, const ChatParams& params) override;
    std::string identity() const override { return "http:" + config_.model; }

private:
    EndpointConfig config_;
    std::string scheme_host_port_;
    std::string path_;
    std::string api_key_;
};

/// Pulls the assistant text out of a completion response body. Accepts the
/// choices[0].message.content shape and the flatter message.content shape.
std::string extract_completion_text(const std::string& body);

} // namespace policybench::harness
