// SPDX-License-Identifier: Apache-2.0
#include "policybench/cli/run_config.hpp"

#include "policybench/error.hpp"

#include <set>

namespace policybench::cli {

std::vector<benchgen::ComplexityConfig> RunConfig::cells() const {
    std::vector<benchgen::ComplexityConfig> out;
    for (int e : grid.environment_k) {
        for (int t : grid.task_k) {
            for (int w : grid.workflow_k) {
                for (auto seed : seeds) {
                    benchgen::ComplexityConfig cc;
                    cc.environment_k = e;
                    cc.task_k = t;
                    cc.workflow_k = w;
                    cc.num_queries = num_queries;
                    cc.seed = seed;
                    out.push_back(cc);
                }
            }
        }
    }
    return out;
}

void RunConfig::validate() const {
    const auto nonempty = [](const auto& v, const char* field) {
        if (v.empty()) {
            throw ConfigError(field, "must list at least one value");
        }
    };
    nonempty(grid.environment_k, "grid.environment_k");
    nonempty(grid.task_k, "grid.task_k");
    nonempty(grid.workflow_k, "grid.workflow_k");
    nonempty(seeds, "seeds");
    for (const auto& cc : cells()) {
        try {
            cc.validate();
        } catch (const ConfigError& e) {
            throw ConfigError("grid." + e.field(), std::string(e.what()).substr(e.field().size() + 2) +
                                                       " (cell " + cell_name(cc) + ")");
        }
    }
    if (max_steps < 1) {
        throw ConfigError("limits.max_steps", "must be >= 1");
    }
    if (max_tokens < 1) {
        throw ConfigError("limits.max_tokens", "must be >= 1");
    }
    if (temperature < 0.0) {
        throw ConfigError("limits.temperature", "must be >= 0");
    }
    if (parallel < 1) {
        throw ConfigError("parallel", "must be >= 1");
    }
    if (output_dir.empty()) {
        throw ConfigError("output_dir", "must not be empty");
    }
    static const std::set<std::string> modes{"full", "pid", "override", "substitute", "referral"};
    if (modes.count(mode) == 0) {
        throw ConfigError("mode", "expected full, pid, override, substitute or referral");
    }
    if (mock_client != "oracle" && mock_client != "corrupt") {
        throw ConfigError("mock_client", "expected oracle or corrupt");
    }
    if (synth.qa_budget < 0 || synth.role_model_per_spec < 0 || synth.scenario_per_spec < 0) {
        throw ConfigError("synth", "counts must be >= 0");
    }
    if (synth.format != "chat_jsonl" && synth.format != "plain_jsonl") {
        throw ConfigError("synth.format", "expected chat_jsonl or plain_jsonl");
    }
    if (referral_n < 1) {
        throw ConfigError("referral_n", "must be >= 1");
    }
}

json to_json(const RunConfig& c) {
    return json{{"grid",
                 {{"environment_k", c.grid.environment_k},
                  {"task_k", c.grid.task_k},
                  {"workflow_k", c.grid.workflow_k}}},
                {"seeds", c.seeds},
                {"num_queries", c.num_queries},
                {"endpoint",
                 {{"url", c.endpoint.url},
                  {"credential_env", c.endpoint.credential_env},
                  {"model", c.endpoint.model},
                  {"timeout_seconds", c.endpoint.timeout_seconds}}},
                {"limits", {{"max_steps", c.max_steps}, {"temperature", c.temperature}, {"max_tokens", c.max_tokens}}},
                {"output_dir", c.output_dir},
                {"mode", c.mode},
                {"parallel", c.parallel},
                {"mock_llm", c.mock_llm},
                {"mock_client", c.mock_client},
                {"synth",
                 {{"qa_budget", c.synth.qa_budget},
                  {"role_model_per_spec", c.synth.role_model_per_spec},
                  {"scenario_per_spec", c.synth.scenario_per_spec},
                  {"format", c.synth.format}}},
                {"referral_n", c.referral_n}};
}

namespace {

void check_keys(const json& j, const std::string& path, const std::set<std::string>& allowed) {
    if (!j.is_object()) {
        throw ConfigError(path.empty() ? "<root>" : path, "must be an object");
    }
    for (const auto& [key, value] : j.items()) {
        if (allowed.count(key) == 0) {
            throw ConfigError(path.empty() ? key : path + "." + key, "unknown key");
        }
    }
}

template <typename T>
void read(const json& j, const std::string& key, const std::string& path, T& out) {
    if (!j.contains(key)) {
        return;
    }
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(path.empty() ? key : path + "." + key, "has the wrong type");
    }
}

} // namespace

RunConfig run_config_from_json(const json& j) {
    RunConfig c;
    check_keys(j, "", {"grid", "seeds", "num_queries", "endpoint", "limits", "output_dir", "mode", "parallel",
                       "mock_llm", "mock_client", "synth", "referral_n"});
    if (j.contains("grid")) {
        const auto& g = j.at("grid");
        check_keys(g, "grid", {"environment_k", "task_k", "workflow_k"});
        read(g, "environment_k", "grid", c.grid.environment_k);
        read(g, "task_k", "grid", c.grid.task_k);
        read(g, "workflow_k", "grid", c.grid.workflow_k);
    }
    read(j, "seeds", "", c.seeds);
    read(j, "num_queries", "", c.num_queries);
    if (j.contains("endpoint")) {
        const auto& e = j.at("endpoint");
        static const std::set<std::string> secrets{"api_key", "key", "token", "password", "secret", "credential",
                                                   "authorization"};
        for (const auto& [key, value] : e.items()) {
            if (secrets.count(key) != 0) {
                throw ConfigError("endpoint." + key, "credentials are not accepted in config files; set "
                                                     "endpoint.credential_env to the name of an environment variable");
            }
        }
        check_keys(e, "endpoint", {"url", "credential_env", "model", "timeout_seconds"});
        read(e, "url", "endpoint", c.endpoint.url);
        read(e, "credential_env", "endpoint", c.endpoint.credential_env);
        read(e, "model", "endpoint", c.endpoint.model);
        read(e, "timeout_seconds", "endpoint", c.endpoint.timeout_seconds);
    }
    if (j.contains("limits")) {
        const auto& l = j.at("limits");
        check_keys(l, "limits", {"max_steps", "temperature", "max_tokens"});
        read(l, "max_steps", "limits", c.max_steps);
        read(l, "temperature", "limits", c.temperature);
        read(l, "max_tokens", "limits", c.max_tokens);
    }
    read(j, "output_dir", "", c.output_dir);
    read(j, "mode", "", c.mode);
    read(j, "parallel", "", c.parallel);
    read(j, "mock_llm", "", c.mock_llm);
    read(j, "mock_client", "", c.mock_client);
    if (j.contains("synth")) {
        const auto& s = j.at("synth");
        check_keys(s, "synth", {"qa_budget", "role_model_per_spec", "scenario_per_spec", "format"});
        read(s, "qa_budget", "synth", c.synth.qa_budget);
        read(s, "role_model_per_spec", "synth", c.synth.role_model_per_spec);
        read(s, "scenario_per_spec", "synth", c.synth.scenario_per_spec);
        read(s, "format", "synth", c.synth.format);
    }
    read(j, "referral_n", "", c.referral_n);
    c.validate();
    return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    json j;
    try {
        j = read_json_file(path);
    } catch (const IoError& e) {
        throw ConfigError("--config", e.what());
    }
    return run_config_from_json(j);
}

std::string config_hash(const RunConfig& config) {
    json j = to_json(config);
    for (const char* runtime_only : {"output_dir", "parallel", "mode", "endpoint", "mock_llm", "mock_client"}) {
        j.erase(runtime_only);
    }
    return hex64(fnv1a64(j.dump()));
}

std::string cell_name(const benchgen::ComplexityConfig& cc) {
    return "E" + std::to_string(cc.environment_k) + "-T" + std::to_string(cc.task_k) + "-W" +
           std::to_string(cc.workflow_k) + "-s" + std::to_string(cc.seed);
}

} // namespace policybench::cli
