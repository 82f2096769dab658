// SPDX-License-Identifier: Apache-2.0
#include "policybench/harness/http_client.hpp"

#include "policybench/error.hpp"
#include "policybench/json_io.hpp"

#include <httplib.h>

#include <cstdlib>

namespace policybench::harness {

HttpChatClient::HttpChatClient(EndpointConfig config) : config_(std::move(config)) {
    const auto& url = config_.url;
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
        throw ConfigError("endpoint.url", "expected scheme://host[:port]/path, got '" + url + "'");
    }
    const auto path_start = url.find('/', scheme_end + 3);
    scheme_host_port_ = url.substr(0, path_start);
    path_ = path_start == std::string::npos ? "/" : url.substr(path_start);
    if (!config_.credential_env.empty()) {
        if (const char* key = std::getenv(config_.credential_env.c_str())) {
            api_key_ = key;
        }
    }
}

std::string HttpChatClient::chat(const std::vector<ChatMessage>& messages, const ChatParams& params) {
    json wire = json::array();
    for (const auto& m : messages) {
        // Plain chat endpoints know no "tool" role without function calling.
        if (m.role == "tool") {
            wire.push_back({{"role", "user"}, {"content", "Observation: " + m.content}});
        } else {
            wire.push_back({{"role", m.role}, {"content", m.content}});
        }
    }
    const json request{{"model", config_.model},
                       {"messages", std::move(wire)},
                       {"temperature", params.temperature},
                       {"max_tokens", params.max_tokens}};

    httplib::Client http(scheme_host_port_);
    http.set_connection_timeout(config_.timeout_seconds, 0);
    http.set_read_timeout(config_.timeout_seconds, 0);
    httplib::Headers headers;
    if (!api_key_.empty()) {
        headers.emplace("Authorization", "Bearer " + api_key_);
    }
    const auto response = http.Post(path_, headers, request.dump(), "application/json");
    if (!response) {
        throw ClientError("request to " + scheme_host_port_ + path_ + " failed: " + httplib::to_string(response.error()));
    }
    if (response->status != 200) {
        throw ClientError("endpoint returned HTTP " + std::to_string(response->status) + ": " +
                          response->body.substr(0, 200));
    }
    return extract_completion_text(response->body);
}

std::string extract_completion_text(const std::string& body) {
    json j;
    try {
        j = json::parse(body);
    } catch (const json::parse_error& e) {
        throw ClientError(std::string("completion response is not JSON: ") + e.what());
    }
    const json* message = nullptr;
    if (j.contains("choices") && j["choices"].is_array() && !j["choices"].empty()) {
        const auto& choice = j["choices"][0];
        if (choice.contains("message")) {
            message = &choice["message"];
        } else if (choice.contains("text") && choice["text"].is_string()) {
            return choice["text"].get<std::string>();
        }
    } else if (j.contains("message")) {
        message = &j["message"];
    }
    if (message != nullptr && message->contains("content") && (*message)["content"].is_string()) {
        return (*message)["content"].get<std::string>();
    }
    if (j.contains("error")) {
        throw ClientError("endpoint error: " + j["error"].dump());
    }
    throw ClientError("completion response has no assistant text");
}

} // namespace policybench::harness
