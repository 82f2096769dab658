// SPDX-License-Identifier: Apache-2.0
#include "policybench/captdata/synth.hpp"

#include "policybench/engine/evaluator.hpp"
#include "policybench/error.hpp"
#include "policybench/harness/prompt.hpp"
#include "policybench/rng.hpp"

#include <algorithm>

namespace policybench::captdata {

using benchgen::Comparison;
using benchgen::CompareOp;
using benchgen::Conditional;
using benchgen::Expression;
using benchgen::PolicyDocument;

std::string to_string(ExampleKind kind) {
    switch (kind) {
    case ExampleKind::Paraphrase:
        return "paraphrase";
    case ExampleKind::Qa:
        return "qa";
    case ExampleKind::RoleModel:
        return "role_model";
    case ExampleKind::ScenarioSim:
        return "scenario_sim";
    case ExampleKind::Trajectory:
        return "trajectory";
    }
    return "qa";
}

ExampleKind example_kind_from_string(const std::string& name) {
    for (ExampleKind kind : kAllExampleKinds) {
        if (to_string(kind) == name) {
            return kind;
        }
    }
    throw InputError("unknown example kind '" + name + "'");
}

json to_json(const TrainingExample& example) {
    return json{{"kind", to_string(example.kind)}, {"pid", example.pid},           {"system", example.system},
                {"prompt", example.prompt},        {"response", example.response}, {"provenance", example.provenance}};
}

TrainingExample training_example_from_json(const json& j) {
    try {
        TrainingExample example;
        example.kind = example_kind_from_string(j.at("kind").get<std::string>());
        example.pid = j.at("pid").get<std::string>();
        example.system = j.value("system", std::string());
        example.prompt = j.at("prompt").get<std::string>();
        example.response = j.at("response").get<std::string>();
        example.provenance = j.value("provenance", json::object());
        return example;
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed training example: ") + e.what());
    }
}

namespace {

void note(SynthReport* report, bool failure, std::string message) {
    if (report != nullptr) {
        (failure ? report->failures : report->skipped).push_back(std::move(message));
    }
}

std::string single_line(std::string text) {
    std::replace(text.begin(), text.end(), '\n', ' ');
    return text;
}

std::string gen_request(const std::string& task, const std::string& pid, const std::string& content,
                        const std::string& instruction, int variant = 0) {
    return "Task: " + task + "\nPolicy: " + pid + "\nContent: " + single_line(content) +
           "\nVariant: " + std::to_string(variant) + "\n" + instruction;
}

std::string ask(harness::CompletionClient& gen, const std::string& request) {
    harness::ChatParams params;
    params.temperature = 0.7;
    return gen.chat({{"user", request}}, params);
}

std::string negated_symbol(CompareOp op) {
    switch (op) {
    case CompareOp::Greater:
        return "<=";
    case CompareOp::Less:
        return ">=";
    case CompareOp::Equal:
        return "!=";
    case CompareOp::GreaterEqual:
        return "<";
    case CompareOp::LessEqual:
        return ">";
    }
    return "!=";
}

std::string condition_text(const Comparison& c, bool holds) {
    return benchgen::render_atom(c.lhs) + " " +
           (holds ? std::string(benchgen::to_string(c.op)) : negated_symbol(c.op)) + " " + std::to_string(c.threshold);
}

struct Branch {
    std::vector<std::string> conditions;
    const Expression* leaf = nullptr;
};

void collect_branches(const Expression& expr, std::vector<std::string>& path, std::vector<Branch>& out) {
    if (!expr.is<Conditional>()) {
        out.push_back({path, &expr});
        return;
    }
    const auto& cond = expr.as<Conditional>();
    path.push_back(condition_text(cond.condition, true));
    collect_branches(*cond.then_branch, path, out);
    path.back() = condition_text(cond.condition, false);
    collect_branches(*cond.else_branch, path, out);
    path.pop_back();
}

std::string join(const std::vector<std::string>& items, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        out += (i == 0 ? "" : sep) + items[i];
    }
    return out;
}

bool is_conditional(const SpecRecord& record) {
    return record.category == Category::CondSimple || record.category == Category::CondComplex;
}

const benchgen::ArgSpec* find_arg(const PolicyDocument& policy, int task_index, int arg_index) {
    for (const auto& task : policy.tasks) {
        if (task.task_index != task_index) {
            continue;
        }
        for (const auto& arg : task.args) {
            if (arg.arg_index == arg_index) {
                return &arg;
            }
        }
    }
    return nullptr;
}

void lookup_layers_into(const Expression& expr, std::vector<int>& out) {
    if (expr.is<benchgen::LookupRef>()) {
        const int layer = expr.as<benchgen::LookupRef>().layer;
        if (std::find(out.begin(), out.end(), layer) == out.end()) {
            out.push_back(layer);
        }
    } else if (expr.is<benchgen::Aggregate>()) {
        for (const auto& operand : expr.as<benchgen::Aggregate>().operands) {
            lookup_layers_into(operand, out);
        }
    } else if (expr.is<Conditional>()) {
        lookup_layers_into(*expr.as<Conditional>().then_branch, out);
        lookup_layers_into(*expr.as<Conditional>().else_branch, out);
    }
}

std::vector<int> lookup_layers(const Expression& expr) {
    std::vector<int> out;
    lookup_layers_into(expr, out);
    return out;
}

} // namespace

std::vector<TrainingExample> synth_paraphrase_qa(const PolicyAnalysis& analysis, const PolicyDocument* policy,
                                                 harness::CompletionClient& gen, int budget, SynthReport* report) {
    if (budget < 0) {
        throw ConfigError("qa_budget", "must be >= 0");
    }
    std::vector<TrainingExample> out;
    const auto room = [&] { return static_cast<int>(out.size()) < budget; };

    if (policy != nullptr) {
        for (const auto& record : analysis.records) {
            if (!is_conditional(record)) {
                continue;
            }
            const auto loc = locate_argument(record.content);
            const auto* arg = loc ? find_arg(*policy, loc->first, loc->second) : nullptr;
            if (arg == nullptr) {
                note(report, false, "no formula behind conditional spec: " + record.content);
                continue;
            }
            std::vector<std::string> path;
            std::vector<Branch> branches;
            collect_branches(arg->expression, path, branches);
            for (const auto& branch : branches) {
                if (!room()) {
                    note(report, false, "qa budget exhausted before a branch of: " + record.content);
                    continue;
                }
                TrainingExample ex;
                ex.kind = ExampleKind::Qa;
                ex.pid = analysis.pid;
                ex.prompt = "Under policy " + analysis.pid + ", in Task-Type-" + std::to_string(loc->first) +
                            ", when " + join(branch.conditions, " and ") + ", how is arg-" +
                            std::to_string(loc->second) + " computed?";
                ex.response = benchgen::render_prose(*branch.leaf);
                ex.provenance = json{{"source", "branch_template"},
                                     {"task_index", loc->first},
                                     {"arg_index", loc->second},
                                     {"conditions", branch.conditions}};
                out.push_back(std::move(ex));
            }
        }
    }

    for (const auto& record : analysis.records) {
        if (!room()) {
            note(report, false, "qa budget exhausted before: " + record.content);
            continue;
        }
        const json provenance{{"source", "generator"}, {"generator", gen.identity()},
                              {"category", to_string(record.category)}};
        try {
            const auto text = ask(gen, gen_request("paraphrase", analysis.pid, record.content,
                                                   "Rewrite the specification above in different words without "
                                                   "changing its meaning. Mention the policy identifier."));
            out.push_back({ExampleKind::Paraphrase, analysis.pid, "", "Restate a rule of policy " + analysis.pid + ".",
                           text, provenance});
        } catch (const ClientError& e) {
            note(report, true, std::string("paraphrase: ") + e.what());
        }
        if (!room()) {
            continue;
        }
        try {
            const auto text = ask(gen, gen_request("question", analysis.pid, record.content,
                                                   "Write one question a user could ask about the specification "
                                                   "above and its answer, formatted as 'Question: ...' and "
                                                   "'Answer: ...' on separate lines."));
            const auto q = text.find("Question:");
            const auto a = text.find("\nAnswer:");
            if (q == std::string::npos || a == std::string::npos || a < q) {
                note(report, true, "unparseable question for: " + record.content);
                continue;
            }
            auto question = text.substr(q + 9, a - q - 9);
            auto answer = text.substr(a + 8);
            auto trim = [](std::string s) {
                s.erase(0, s.find_first_not_of(" \n"));
                s.erase(s.find_last_not_of(" \n") + 1);
                return s;
            };
            question = trim(question);
            if (question.find(analysis.pid) == std::string::npos) {
                question = "Regarding policy " + analysis.pid + ": " + question;
            }
            out.push_back({ExampleKind::Qa, analysis.pid, "", question, trim(answer), provenance});
        } catch (const ClientError& e) {
            note(report, true, std::string("question: ") + e.what());
        }
    }
    return out;
}

std::vector<TrainingExample> synth_role_model(const PolicyAnalysis& analysis, harness::CompletionClient& gen,
                                              int count_per_spec, SynthReport* report) {
    if (count_per_spec < 0) {
        throw ConfigError("count_per_spec", "must be >= 0");
    }
    std::vector<TrainingExample> out;
    for (const auto& record : analysis.records) {
        if (record.category != Category::Behavior) {
            continue;
        }
        for (int k = 0; k < count_per_spec; ++k) {
            try {
                auto situation = ask(gen, gen_request("role_model_prompt", analysis.pid, record.content,
                                                      "Describe a realistic user request in which the rule above "
                                                      "applies. Mention the policy identifier and do not quote the "
                                                      "rule.",
                                                      k));
                if (situation.find(analysis.pid) == std::string::npos) {
                    situation = "Policy " + analysis.pid + ". " + situation;
                }
                const auto response =
                    ask(gen, gen_request("role_model_response", analysis.pid, record.content,
                                         "Write the agent's reply to this request, complying with the rule above.\n"
                                         "Request: " + single_line(situation),
                                         k));
                out.push_back({ExampleKind::RoleModel, analysis.pid, "", situation, response,
                               json{{"source", "generator"}, {"generator", gen.identity()}, {"variant", k}}});
            } catch (const ClientError& e) {
                note(report, true, std::string("role model: ") + e.what());
            }
        }
    }
    return out;
}

std::string scenario_prompt(const std::string& pid, const benchgen::TaskSpec& task, const benchgen::ArgSpec& arg,
                            const engine::ProfileBinding& binding) {
    std::vector<std::string> facts;
    std::vector<std::string> seen;
    for (const auto& ref : benchgen::collect_attr_refs(arg.expression)) {
        const auto name = benchgen::render_atom(ref);
        if (std::find(seen.begin(), seen.end(), name) != seen.end()) {
            continue;
        }
        seen.push_back(name);
        facts.push_back(name + " = " + engine::to_string(engine::eval_expression(Expression(ref), binding)));
    }
    for (int layer : lookup_layers(arg.expression)) {
        const auto it = binding.instances.find(layer);
        if (it != binding.instances.end() && it->second != nullptr) {
            facts.push_back("layer-" + std::to_string(layer) + "-attribute-3 = '" + it->second->lookup + "'");
        }
    }
    std::string text = "Under policy " + pid + ", compute arg-" + std::to_string(arg.arg_index) + " of " +
                       task.name() + " for a profile combination with " +
                       (facts.empty() ? std::string("no attribute values needed") : join(facts, ", ")) + ".";
    return text;
}

std::vector<TrainingExample> synth_scenario_simulation(const PolicyAnalysis& analysis, const PolicyDocument& policy,
                                                       const benchgen::Environment& env, int count_per_spec,
                                                       std::uint64_t seed, SynthReport* report) {
    if (count_per_spec < 0) {
        throw ConfigError("count_per_spec", "must be >= 0");
    }
    std::vector<TrainingExample> out;
    for (const auto& record : analysis.records) {
        if (!is_conditional(record)) {
            continue;
        }
        const auto loc = locate_argument(record.content);
        const auto* arg = loc ? find_arg(policy, loc->first, loc->second) : nullptr;
        if (arg == nullptr) {
            note(report, false, "no formula behind conditional spec: " + record.content);
            continue;
        }
        const auto& task = policy.task(loc->first);
        for (int layer : task.required_layers) {
            if (layer > env.layer_count() || env.layers[static_cast<std::size_t>(layer - 1)].instances.empty()) {
                throw ConfigError("environment", "layer " + std::to_string(layer) + " has no instances");
            }
        }
        const auto spec_hash = fnv1a64(record.content);
        const auto spec_seed = derive_seed(seed, spec_hash);
        Rng rng(spec_seed);
        out.reserve(out.size() + static_cast<std::size_t>(count_per_spec));
        for (int k = 0; k < count_per_spec; ++k) {
            engine::ProfileBinding binding;
            binding.globals = policy.globals;
            json keys = json::object();
            for (int layer : task.required_layers) {
                const auto& instance = rng.pick(env.layers[static_cast<std::size_t>(layer - 1)].instances);
                binding.instances[layer] = &instance;
                keys[std::to_string(layer)] = instance.primary_key;
            }
            TrainingExample ex;
            ex.kind = ExampleKind::ScenarioSim;
            ex.pid = analysis.pid;
            ex.prompt = scenario_prompt(analysis.pid, task, *arg, binding);
            ex.response = engine::to_string(engine::eval_expression(arg->expression, binding));
            ex.provenance = json{{"source", "oracle"},
                                 {"seed", spec_seed},
                                 {"spec_hash", hex64(spec_hash)},
                                 {"task_index", loc->first},
                                 {"arg_index", loc->second},
                                 {"sample", k},
                                 {"binding", std::move(keys)}};
            out.push_back(std::move(ex));
        }
    }
    return out;
}

std::vector<TrainingExample> synth_trajectory_familiarization(const std::vector<engine::GoldTrajectory>& golds,
                                                              const std::vector<benchgen::Query>& queries,
                                                              const PolicyDocument& policy,
                                                              const engine::ToolRegistry& registry) {
    std::vector<TrainingExample> out;
    const harness::PromptMode mode{harness::PromptModeKind::PidOnly, ""};
    for (const auto& gold : golds) {
        const auto it = std::find_if(queries.begin(), queries.end(),
                                     [&](const benchgen::Query& q) { return q.id == gold.query_id; });
        if (it == queries.end()) {
            throw InputError("no query with id " + gold.query_id);
        }
        const auto messages = harness::build_prompt(mode, policy, it->text);
        TrainingExample ex;
        ex.kind = ExampleKind::Trajectory;
        ex.pid = policy.pid;
        for (const auto& m : messages) {
            (m.role == "system" ? ex.system : ex.prompt) = m.content;
        }
        std::vector<std::string> turns;
        for (std::size_t i = 0; i < gold.actions.size(); ++i) {
            const auto& action = gold.actions[i];
            const auto rationale = i < gold.rationales.size() ? gold.rationales[i] : std::string();
            turns.push_back(rationale + "\n" + engine::render_tool_call_block(action) +
                            "\nObservation: " + registry.execute(action).payload.dump());
        }
        ex.response = join(turns, "\n\n");
        ex.provenance = json{{"source", "oracle"}, {"query_id", gold.query_id}};
        out.push_back(std::move(ex));
    }
    return out;
}

} // namespace policybench::captdata
