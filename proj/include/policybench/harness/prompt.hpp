// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "policybench/benchgen/policy.hpp"
#include "policybench/harness/client.hpp"

#include <optional>
#include <string>
#include <vector>

namespace policybench::harness {

enum class PromptModeKind { FullPolicy, PidOnly, Override, Substitute, ReferralQA };

std::string to_string(PromptModeKind kind);
/// Accepts the CLI spellings full, pid, override, substitute, referral.
PromptModeKind prompt_mode_from_string(const std::string& name);

struct PromptMode {
    PromptModeKind kind = PromptModeKind::FullPolicy;
    /// Override only: the changed-parts block.
    std::string delta;

    bool task_mode() const { return kind != PromptModeKind::ReferralQA; }
};

/// General instructions placed in the system message.
std::string general_instructions();

/// For Substitute, `policy` is the new document. Throws ConfigError when
/// PidOnly, Override or ReferralQA lack a valid pid, or Override lacks a delta.
std::vector<ChatMessage> build_prompt(const PromptMode& mode, const benchgen::PolicyDocument& policy,
                                      const std::string& query_or_question);

/// Text following "User query:" in the first user message, if any.
std::optional<std::string> extract_user_query(const std::vector<ChatMessage>& messages);

} // namespace policybench::harness
