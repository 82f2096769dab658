// SPDX-License-Identifier: Apache-2.0
#include "policybench/harness/mock_clients.hpp"

#include "policybench/error.hpp"
#include "policybench/harness/prompt.hpp"

#include <algorithm>
#include <cctype>

namespace policybench::harness {

using engine::GoldTrajectory;
using engine::ToolCall;

std::size_t assistant_turns(const std::vector<ChatMessage>& messages) {
    return static_cast<std::size_t>(std::count_if(messages.begin(), messages.end(),
                                                  [](const ChatMessage& m) { return m.role == "assistant"; }));
}

namespace {

std::string last_user_message(const std::vector<ChatMessage>& messages) {
    for (auto it = messages.rbegin(); it != messages.rend(); ++it) {
        if (it->role == "user") {
            return it->content;
        }
    }
    return {};
}

std::string between(const std::string& text, const std::string& open, const std::string& close) {
    const auto start = text.find(open);
    if (start == std::string::npos) {
        return {};
    }
    const auto end = text.find(close, start + open.size());
    return text.substr(start + open.size(), end == std::string::npos ? std::string::npos : end - start - open.size());
}

std::string normalised(const std::string& text) {
    std::string out;
    bool space = false;
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            space = !out.empty();
            continue;
        }
        if (space) {
            out += ' ';
            space = false;
        }
        out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    while (!out.empty() && (out.back() == '.' || out.back() == '!' || out.back() == '?')) {
        out.pop_back();
    }
    return out;
}

std::string line_value(const std::string& text, const std::string& key) {
    const auto start = text.find(key);
    if (start == std::string::npos) {
        return {};
    }
    const auto end = text.find('\n', start);
    return text.substr(start + key.size(), end == std::string::npos ? std::string::npos : end - start - key.size());
}

} // namespace

OracleReplayClient::OracleReplayClient(std::map<std::string, GoldTrajectory> golds) : golds_(std::move(golds)) {}

const GoldTrajectory* OracleReplayClient::gold_for(const std::vector<ChatMessage>& messages) const {
    const auto query = extract_user_query(messages);
    if (!query) {
        return nullptr;
    }
    const auto it = golds_.find(*query);
    return it == golds_.end() ? nullptr : &it->second;
}

std::string OracleReplayClient::render_step(const GoldTrajectory& gold, std::size_t step, const ToolCall& call) const {
    const std::string rationale = step < gold.rationales.size() ? gold.rationales[step] : std::string();
    return rationale + "\n" + engine::render_tool_call_block(call);
}

std::string OracleReplayClient::chat(const std::vector<ChatMessage>& messages, const ChatParams&) {
    const auto* gold = gold_for(messages);
    if (gold == nullptr) {
        return "I could not find this request.";
    }
    const auto step = assistant_turns(messages);
    if (step >= gold->actions.size()) {
        return "All requested work is complete.";
    }
    return render_step(*gold, step, gold->actions[step]);
}

ToolCall corrupt_one_argument(const ToolCall& call, const std::string& query_id) {
    ToolCall out = call;
    if (out.args.empty() || !out.args[0].is_array() || out.args[0].empty()) {
        return out;
    }
    auto& values = out.args[0];
    const auto position = fnv1a64(query_id) % values.size();
    auto& value = values[position];
    if (value.is_number_integer()) {
        value = value.get<std::int64_t>() + 1;
    } else if (value.is_string()) {
        value = value.get<std::string>() + "-x";
    } else {
        value = 0;
    }
    return out;
}

std::string CorruptingClient::chat(const std::vector<ChatMessage>& messages, const ChatParams& params) {
    const auto* gold = gold_for(messages);
    const auto step = assistant_turns(messages);
    if (gold == nullptr || step >= gold->actions.size()) {
        return OracleReplayClient::chat(messages, params);
    }
    const auto& call = gold->actions[step];
    std::size_t first_finish = gold->actions.size();
    for (std::size_t i = 0; i < gold->actions.size(); ++i) {
        if (gold->actions[i].name.rfind("finish-task-", 0) == 0) {
            first_finish = i;
            break;
        }
    }
    if (step == first_finish) {
        return render_step(*gold, step, corrupt_one_argument(call, gold->query_id));
    }
    return render_step(*gold, step, call);
}

std::string ProseOnlyClient::chat(const std::vector<ChatMessage>&, const ChatParams&) {
    return "I have looked at your request and will take care of it.";
}

ScriptedClient::ScriptedClient(std::vector<std::string> responses, std::string name)
    : responses_(std::move(responses)), name_(std::move(name)) {}

std::string ScriptedClient::chat(const std::vector<ChatMessage>& messages, const ChatParams&) {
    ++calls_;
    if (responses_.empty()) {
        return {};
    }
    return responses_[std::min(assistant_turns(messages), responses_.size() - 1)];
}

std::string FailingClient::chat(const std::vector<ChatMessage>&, const ChatParams&) { throw ClientError(message_); }

std::string MockJudgeClient::chat(const std::vector<ChatMessage>& messages, const ChatParams&) {
    const auto prompt = last_user_message(messages);
    const auto reference = normalised(between(prompt, "<reference>", "</reference>"));
    const auto answer = normalised(between(prompt, "<answer>", "</answer>"));
    if (!reference.empty() && reference == answer) {
        return "5";
    }
    if (!reference.empty() && !answer.empty() &&
        (answer.find(reference) != std::string::npos || reference.find(answer) != std::string::npos)) {
        return "3";
    }
    return "0";
}

ReferralAnswerClient::ReferralAnswerClient(const benchgen::PolicyDocument& policy) {
    for (const auto& qa : benchgen::referral_question_pool(policy)) {
        answers_.emplace(qa.question, qa.reference_answer);
    }
}

std::string ReferralAnswerClient::chat(const std::vector<ChatMessage>& messages, const ChatParams&) {
    const auto question = extract_user_query(messages);
    if (question) {
        const auto it = answers_.find(*question);
        if (it != answers_.end()) {
            return it->second;
        }
    }
    return "I do not know.";
}

std::string MockGenClient::chat(const std::vector<ChatMessage>& messages, const ChatParams&) {
    const auto prompt = last_user_message(messages);
    const auto task = line_value(prompt, "Task: ");
    const auto content = line_value(prompt, "Content: ");
    const auto pid = line_value(prompt, "Policy: ");
    const auto variant = line_value(prompt, "Variant: ");
    // Generated prompts quote at most the opening words of a rule.
    std::string opening;
    int words = 0;
    for (std::size_t i = 0; i < content.size() && words < 8; ++i) {
        if (content[i] == ' ') {
            ++words;
        }
        if (words < 8) {
            opening += content[i];
        }
    }
    if (task == "paraphrase") {
        return "In other words, policy " + pid + " states: " + content;
    }
    if (task == "question") {
        return "Question: What does policy " + pid + " specify in the rule that begins '" + opening +
               "'?\nAnswer: " + content;
    }
    if (task == "role_model_prompt") {
        return "Case " + variant + ": a user of policy " + pid + " makes a request covered by the rule that begins '" +
               opening + "'.";
    }
    if (task == "role_model_response") {
        return "Under policy " + pid + ", I follow this rule: " + content;
    }
    return content;
}

} // namespace policybench::harness
