// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "policybench/benchgen/config.hpp"
#include "policybench/harness/http_client.hpp"
#include "policybench/json_io.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace policybench::cli {

struct Grid {
    std::vector<int> environment_k{3};
    std::vector<int> task_k{5};
    std::vector<int> workflow_k{1};
};

struct SynthSettings {
    int qa_budget = 1000;
    int role_model_per_spec = 1000;
    int scenario_per_spec = 5000;
    std::string format = "chat_jsonl";
};

/// One JSON document; command-line flags override its values. The endpoint
/// names the environment variable holding the credential, never the value.
struct RunConfig {
    Grid grid;
    std::vector<std::uint64_t> seeds{0};
    int num_queries = 100;
    harness::EndpointConfig endpoint;
    int max_steps = 30;
    double temperature = 0.0;
    int max_tokens = 1024;
    std::string output_dir = "runs";
    std::string mode = "full";
    int parallel = 1;
    bool mock_llm = false;
    /// Which scripted agent --mock-llm uses for task modes: oracle or corrupt.
    std::string mock_client = "oracle";
    SynthSettings synth;
    int referral_n = 50;

    /// Grid product in (environment, task, workflow, seed) order.
    std::vector<benchgen::ComplexityConfig> cells() const;

    /// Throws ConfigError naming the field path.
    void validate() const;
};

json to_json(const RunConfig& config);

/// Throws ConfigError for unknown keys, wrong types and inline credentials.
RunConfig run_config_from_json(const json& j);
RunConfig load_run_config(const std::filesystem::path& path);

/// Hash over everything that affects generated artifacts.
std::string config_hash(const RunConfig& config);

/// "E3-T5-W1-s1".
std::string cell_name(const benchgen::ComplexityConfig& cc);

} // namespace policybench::cli
