// SPDX-License-Identifier: Apache-2.0
#include "policybench/benchgen/policy.hpp"
#include "policybench/benchgen/query.hpp"
#include "policybench/engine/oracle.hpp"
#include "policybench/error.hpp"
#include "policybench/harness/episode.hpp"
#include "policybench/harness/http_client.hpp"
#include "policybench/harness/mock_clients.hpp"
#include "policybench/harness/parser.hpp"
#include "policybench/harness/prompt.hpp"

#include <doctest.h>
#include <httplib.h>

#include <cstdlib>
#include <thread>

using namespace policybench;
using namespace policybench::harness;
using policybench::engine::ToolCall;

namespace {

struct Fixture {
    benchgen::Environment env;
    benchgen::PolicyDocument policy;
    std::vector<benchgen::Query> queries;
    std::map<std::string, engine::GoldTrajectory> golds;

    explicit Fixture(int task_k = 5, int workflow_k = 1, int n = 20) {
        benchgen::ComplexityConfig cc;
        cc.task_k = task_k;
        cc.workflow_k = workflow_k;
        env = benchgen::generate_environment(benchgen::EnvConfig::defaults(3), 11);
        policy = benchgen::generate_policy(cc, env, 12);
        queries = benchgen::generate_queries(policy, env, n, 13);
        for (const auto& q : queries) {
            golds.emplace(q.text, engine::solve_query(policy, env, q));
        }
    }
};

} // namespace

TEST_SUITE("harness") {

TEST_CASE("parser accepts one fenced tool call") {
    const auto r = parse_tool_call("Thinking.\n```json\n{\"tool\": \"Get-Profile-Layer-1\", \"arguments\": "
                                   "{\"index-value\": \"profile-1-4\"}}\n```");
    const auto* call = std::get_if<ToolCall>(&r);
    REQUIRE(call != nullptr);
    CHECK(call->name == "Get-Profile-Layer-1");
    REQUIRE(call->args.size() == 1);
    CHECK(call->args[0] == "profile-1-4");

    const auto list = parse_tool_call("```\n{\"tool\": \"finish-task-2\", \"arguments\": {\"attributes\": [1, 2.0, \"x\"]}}\n```");
    REQUIRE(std::holds_alternative<ToolCall>(list));
    CHECK(std::get<ToolCall>(list).args[0] == json::array({1, 2, "x"}));

    const auto ordered = parse_tool_call("```json\n{\"tool\": \"t\", \"arguments\": {\"b\": 1, \"a\": 2}}\n```");
    CHECK(std::get<ToolCall>(ordered).args == std::vector<json>{1, 2});

    const auto bare = parse_tool_call("```json\n{\"tool\": \"Tool-Conflict\"}\n```");
    CHECK(std::get<ToolCall>(bare).args.empty());
}

TEST_CASE("parser separates prose from malformed calls") {
    CHECK(std::holds_alternative<FinalResponse>(parse_tool_call("The answer is 42.")));
    CHECK(std::get<ParseError>(parse_tool_call("```json\n{\"tool\": \"x\"")).diagnostic == "unterminated fenced block");
    CHECK(std::get<ParseError>(parse_tool_call("```\n{\"tool\":\"a\"}\n```\n```\n{\"tool\":\"b\"}\n```")).diagnostic ==
          "multiple tool calls");
    CHECK(std::holds_alternative<ParseError>(parse_tool_call("```json\n{not json}\n```")));
    CHECK(std::holds_alternative<ParseError>(parse_tool_call("```json\n[1, 2]\n```")));
    CHECK(std::holds_alternative<ParseError>(parse_tool_call("```json\n{\"arguments\": {}}\n```")));
    CHECK(std::holds_alternative<ParseError>(parse_tool_call("```json\n{\"tool\": \"a\", \"arguments\": 3}\n```")));
    for (const auto& text : {std::string("plain"), std::string("```\n{\"tool\":\"a\",\"arguments\":[1]}\n```"),
                             std::string("```\n{}\n```")}) {
        const auto r = parse_tool_call(text);
        CHECK(parse_result_from_json(to_json(r)) == r);
    }
}

TEST_CASE("prompt templates carry the fixed sentences") {
    Fixture f;
    const auto q = f.queries.front().text;
    const auto full = build_prompt({PromptModeKind::FullPolicy, ""}, f.policy, q);
    REQUIRE(full.size() == 2);
    CHECK(full[1].content.rfind("Based on the Policy document below, answer the user query.", 0) == 0);
    CHECK(full[1].content.find(f.policy.rendered) != std::string::npos);
    CHECK(extract_user_query(full) == q);

    const auto pid = build_prompt({PromptModeKind::PidOnly, ""}, f.policy, q);
    CHECK(pid[1].content.find("Based on the policy document " + f.policy.pid + " you previously learnt about") !=
          std::string::npos);
    CHECK(pid[1].content.find(f.policy.rendered.substr(0, 200)) == std::string::npos);
    CHECK(pid[1].content.find("Global-Attribute") == std::string::npos);
    CHECK(pid[0].content.find("finish-task-1") != std::string::npos);

    const auto over = build_prompt({PromptModeKind::Override, "arg-1 changed"}, f.policy, q);
    CHECK(over[1].content.find("note that the following parts of the Policy has been changed: arg-1 changed") !=
          std::string::npos);
    CHECK_THROWS_AS(build_prompt({PromptModeKind::Override, ""}, f.policy, q), ConfigError);

    const auto referral = build_prompt({PromptModeKind::ReferralQA, ""}, f.policy, "Which tool?");
    CHECK(referral[1].content.find("answer questions about the details of the policy") != std::string::npos);
    CHECK(referral[0].content.find("Tools:") == std::string::npos);

    auto no_pid = f.policy;
    no_pid.pid = "P123";
    CHECK_THROWS_AS(build_prompt({PromptModeKind::PidOnly, ""}, no_pid, q), ConfigError);
    CHECK_NOTHROW(build_prompt({PromptModeKind::FullPolicy, ""}, no_pid, q));
    CHECK_THROWS_AS(prompt_mode_from_string("everything"), ConfigError);
    CHECK(prompt_mode_from_string("referral") == PromptModeKind::ReferralQA);
}

TEST_CASE("oracle replay reproduces every gold action") {
    Fixture f(5, 2, 30);
    OracleReplayClient client(f.golds);
    for (const auto& q : f.queries) {
        const auto t = run_episode(client, {PromptModeKind::FullPolicy, ""}, f.policy, f.env, q, {});
        const auto& gold = f.golds.at(q.text);
        CHECK(t.terminal == Terminal::Finished);
        CHECK(t.executed_calls() == gold.actions);
        CHECK(t.steps.size() == gold.actions.size());
        CHECK(t.token_counts.prompt > 0);
    }
}

TEST_CASE("episodes stop at the step limit and on client errors") {
    Fixture f;
    const auto& q = f.queries.front();
    ProseOnlyClient prose;
    EpisodeLimits one;
    one.max_steps = 1;
    const auto t = run_episode(prose, {PromptModeKind::FullPolicy, ""}, f.policy, f.env, q, one);
    CHECK(t.steps.size() == 1);
    CHECK(t.terminal == Terminal::StepLimit);

    FailingClient failing;
    const auto e = run_episode(failing, {PromptModeKind::FullPolicy, ""}, f.policy, f.env, q, {});
    CHECK(e.terminal == Terminal::ClientError);
    CHECK(e.terminal_message == "connection refused");
    CHECK(e.steps.empty());
}

TEST_CASE("unknown tools and bad blocks are fed back, not fatal") {
    Fixture f;
    ScriptedClient client({"```json\n{\"tool\": \"Drop-Table\", \"arguments\": {}}\n```", "```json\n{oops}\n```",
                           "```json\n{\"tool\": \"Tool-Conflict\", \"arguments\": {}}\n```"});
    const auto t = run_episode(client, {PromptModeKind::FullPolicy, ""}, f.policy, f.env, f.queries.front(), {});
    REQUIRE(t.steps.size() == 3);
    CHECK_FALSE(t.steps[0].executed);
    CHECK(t.steps[0].observation->payload.at("error").at("code") == "unknown_tool");
    CHECK(t.steps[1].observation->payload.at("error").at("code") == "parse_error");
    CHECK(t.steps[2].executed);
    CHECK(t.terminal == Terminal::Finished);
    CHECK(t.executed_calls().size() == 1);
}

TEST_CASE("transcripts replay byte-identically") {
    Fixture f;
    OracleReplayClient client(f.golds);
    const auto& q = f.queries[3];
    const auto a = run_episode(client, {PromptModeKind::PidOnly, ""}, f.policy, f.env, q, {});
    const auto b = run_episode(client, {PromptModeKind::PidOnly, ""}, f.policy, f.env, q, {});
    CHECK(to_json(a).dump() == to_json(b).dump());
    CHECK(to_json(transcript_from_json(to_json(a))).dump() == to_json(a).dump());
}

TEST_CASE("completion text extraction") {
    CHECK(extract_completion_text(R"({"choices":[{"message":{"role":"assistant","content":"hi"}}]})") == "hi");
    CHECK(extract_completion_text(R"({"message":{"content":"flat"}})") == "flat");
    CHECK_THROWS_AS(extract_completion_text("not json"), ClientError);
    CHECK_THROWS_AS(extract_completion_text(R"({"choices":[]})"), ClientError);
}

TEST_CASE("http client talks to an OpenAI-style endpoint") {
    httplib::Server server;
    json seen;
    std::string auth;
    server.Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
        seen = json::parse(req.body);
        auth = req.get_header_value("Authorization");
        res.set_content(R"({"choices":[{"message":{"role":"assistant","content":"pong"}}]})", "application/json");
    });
    server.Post("/broken", [](const httplib::Request&, httplib::Response& res) {
        res.status = 500;
        res.set_content("boom", "text/plain");
    });
    const int port = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    std::thread thread([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    ::setenv("POLICYBENCH_TEST_KEY", "sk-test", 1);
    const auto base = "http://127.0.0.1:" + std::to_string(port);
    HttpChatClient client({base + "/v1/chat/completions", "POLICYBENCH_TEST_KEY", "m1", 5});
    const auto reply = client.chat({{"system", "s"}, {"user", "ping"}, {"tool", "{}"}}, ChatParams{0.0, 64});
    CHECK(reply == "pong");
    CHECK(seen.at("model") == "m1");
    CHECK(seen.at("max_tokens") == 64);
    CHECK(seen.at("messages").size() == 3);
    CHECK(seen.at("messages")[2].at("role") == "user");
    CHECK(auth == "Bearer sk-test");

    HttpChatClient anonymous({base + "/v1/chat/completions", "POLICYBENCH_UNSET_VARIABLE", "m1", 5});
    CHECK(anonymous.chat({{"user", "ping"}}, {}) == "pong");
    CHECK(auth.empty());

    HttpChatClient broken({base + "/broken", "", "m1", 5});
    CHECK_THROWS_AS(broken.chat({{"user", "ping"}}, {}), ClientError);

    server.stop();
    thread.join();
    HttpChatClient gone({base + "/v1/chat/completions", "", "m1", 1});
    CHECK_THROWS_AS(gone.chat({{"user", "ping"}}, {}), ClientError);
    CHECK_THROWS_AS(HttpChatClient({"localhost:80", "", "m", 1}), ConfigError);
}

} // TEST_SUITE
