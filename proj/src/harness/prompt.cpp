// SPDX-License-Identifier: Apache-2.0
#include "policybench/harness/prompt.hpp"

#include "policybench/engine/tools.hpp"
#include "policybench/error.hpp"

#include <cctype>

namespace policybench::harness {

std::string to_string(PromptModeKind kind) {
    switch (kind) {
    case PromptModeKind::FullPolicy:
        return "full";
    case PromptModeKind::PidOnly:
        return "pid";
    case PromptModeKind::Override:
        return "override";
    case PromptModeKind::Substitute:
        return "substitute";
    case PromptModeKind::ReferralQA:
        return "referral";
    }
    return "unknown";
}

PromptModeKind prompt_mode_from_string(const std::string& name) {
    for (auto kind : {PromptModeKind::FullPolicy, PromptModeKind::PidOnly, PromptModeKind::Override,
                      PromptModeKind::Substitute, PromptModeKind::ReferralQA}) {
        if (to_string(kind) == name) {
            return kind;
        }
    }
    throw ConfigError("mode", "unknown prompt mode '" + name + "' (expected full, pid, override, substitute or referral)");
}

std::string general_instructions() {
    return "You are an assistant that serves user requests by calling tools step by step.\n"
           "To call a tool, reply with one fenced block containing a JSON object "
           "{\"tool\": \"<tool name>\", \"arguments\": {...}}. Put at most one such block in a reply. "
           "The tool result comes back in the next message as an observation.\n"
           "When no tool call is needed, answer in plain text without a fenced block.";
}

namespace {

std::string task_system_message(const benchgen::PolicyDocument& policy) {
    std::vector<engine::ToolSignature> signatures;
    for (int l = 1; l <= policy.layer_count; ++l) {
        signatures.push_back({engine::tool_get_name(l), engine::ToolKind::Get, l,
                              "Access a layer-" + std::to_string(l) + " profile instance by primary key.",
                              {{"index-value", "string", ""}}});
    }
    for (int l = 1; l <= policy.layer_count; ++l) {
        signatures.push_back({engine::tool_search_name(l), engine::ToolKind::Search, l,
                              "Find layer-" + std::to_string(l) + " profile instances by lookup value.",
                              {{"key-value", "string", ""}}});
    }
    for (const auto& task : policy.tasks) {
        signatures.push_back({engine::tool_finish_name(task.task_index), engine::ToolKind::Finish, task.task_index,
                              "Complete " + task.name() + " with its computed arguments.",
                              {{"attributes", "list", ""}}});
    }
    signatures.push_back({engine::kToolConflict, engine::ToolKind::Conflict, 0,
                          "Declare that the request cannot be handled within the policy.", {}});
    return general_instructions() + "\n\nTools:\n" + engine::render_signatures(signatures);
}

void require_pid(const benchgen::PolicyDocument& policy) {
    if (!benchgen::is_valid_pid(policy.pid)) {
        throw ConfigError("pid", "prompt mode needs a pid of the form #P12345, got '" + policy.pid + "'");
    }
}

} // namespace

std::vector<ChatMessage> build_prompt(const PromptMode& mode, const benchgen::PolicyDocument& policy,
                                      const std::string& query_or_question) {
    std::string user;
    switch (mode.kind) {
    case PromptModeKind::FullPolicy:
    case PromptModeKind::Substitute:
        user = "Based on the Policy document below, answer the user query.\nPolicy Document:\n" + policy.rendered +
               "\nUser query: " + query_or_question;
        break;
    case PromptModeKind::PidOnly:
        require_pid(policy);
        user = "Based on the policy document " + policy.pid +
               " you previously learnt about, answer the user query.\nUser query: " + query_or_question;
        break;
    case PromptModeKind::Override:
        require_pid(policy);
        if (mode.delta.empty()) {
            throw ConfigError("delta", "override mode needs a non-empty delta");
        }
        user = "Based on the policy document " + policy.pid +
               " you previously learnt about, note that the following parts of the Policy has been changed: " +
               mode.delta + "\nUser query: " + query_or_question;
        break;
    case PromptModeKind::ReferralQA:
        require_pid(policy);
        user = "Based on the Policy document " + policy.pid +
               " you have previously learnt about, answer questions about the details of the policy.\nUser query: " +
               query_or_question;
        break;
    }
    const std::string system = mode.task_mode() ? task_system_message(policy) : general_instructions();
    return {{"system", system}, {"user", user}};
}

std::optional<std::string> extract_user_query(const std::vector<ChatMessage>& messages) {
    for (const auto& m : messages) {
        if (m.role != "user") {
            continue;
        }
        constexpr std::string_view marker = "\nUser query: ";
        const auto pos = m.content.rfind(marker);
        if (pos == std::string::npos) {
            return std::nullopt;
        }
        return m.content.substr(pos + marker.size());
    }
    return std::nullopt;
}

} // namespace policybench::harness
