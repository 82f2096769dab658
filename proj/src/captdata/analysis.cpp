// SPDX-License-Identifier: Apache-2.0
#include "policybench/captdata/analysis.hpp"

#include "policybench/benchgen/environment.hpp"
#include "policybench/error.hpp"

#include <algorithm>
#include <cctype>
#include <regex>
#include <set>

namespace policybench::captdata {

using benchgen::PolicyDocument;
using benchgen::TaskSpec;

json to_json(const PolicyAnalysis& analysis) {
    json records = json::array();
    for (const auto& r : analysis.records) {
        records.push_back(to_json(r));
    }
    return json{{"pid", analysis.pid}, {"tasks", analysis.tasks}, {"records", std::move(records)}};
}

PolicyAnalysis analysis_from_json(const json& j) {
    try {
        PolicyAnalysis analysis;
        analysis.pid = j.at("pid").get<std::string>();
        analysis.tasks = j.at("tasks").get<std::vector<std::string>>();
        for (const auto& r : j.at("records")) {
            analysis.records.push_back(spec_record_from_json(r));
        }
        return analysis;
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed analysis: ") + e.what());
    }
}

SpecRecord categorize(const SpecStructure& spec) {
    SpecRecord record;
    record.content = spec.content;
    record.scope = spec.scope;
    switch (spec.kind) {
    case SpecKind::Statement:
        record.category = Category::Fact;
        break;
    case SpecKind::Behavior:
        record.category = Category::Behavior;
        break;
    case SpecKind::Workflow:
        if (spec.conditional_depth <= 0) {
            record.category = Category::Fact;
        } else if (spec.conditional_depth == 1) {
            record.category = Category::CondSimple;
        } else {
            record.category = Category::CondComplex;
            record.complexity_level = spec.conditional_depth;
        }
        break;
    }
    return record;
}

std::string argument_content(const TaskSpec& task, const benchgen::ArgSpec& arg) {
    return task.name() + " arg-" + std::to_string(arg.arg_index) + ": " + arg.prose;
}

std::optional<std::pair<int, int>> locate_argument(const std::string& content) {
    static const std::regex pattern(R"(^Task-Type-(\d+) arg-(\d+): )");
    std::smatch m;
    if (!std::regex_search(content, m, pattern)) {
        return std::nullopt;
    }
    return std::make_pair(std::stoi(m[1].str()), std::stoi(m[2].str()));
}

namespace {

std::vector<std::string> task_names(const PolicyDocument& policy) {
    std::vector<std::string> names;
    for (const auto& task : policy.tasks) {
        names.push_back(task.name());
    }
    return names;
}

std::string layer_attribute_line(int layer, int layer_count) {
    std::string line = "At layer " + std::to_string(layer) +
                       ": attribute-1, attribute-2, attribute-7 and attribute-8 can serve as conditions;";
    for (int attr : benchgen::kReferenceAttributes) {
        line += " attribute-" + std::to_string(attr) + " holds primary keys of layer " +
                std::to_string(benchgen::reference_target_layer(layer, attr, layer_count)) + " profiles;";
    }
    return line + " attribute-3 is the lookup value used when searching.";
}

} // namespace

PolicyAnalysis analyze_policy(const PolicyDocument& policy) {
    PolicyAnalysis analysis;
    analysis.pid = policy.pid;
    analysis.tasks = task_names(policy);
    const auto all = analysis.tasks;

    std::vector<SpecStructure> specs;
    std::string globals = "The global attribute is currently: ";
    for (std::size_t i = 0; i < policy.globals.values.size(); ++i) {
        globals += (i == 0 ? "" : ", ") + std::string("Global-Attribute-Value") + std::to_string(i + 1) + " = " +
                   std::to_string(policy.globals.values[i]);
    }
    specs.push_back({globals + ".", SpecKind::Statement, 0, all});
    specs.push_back({"There are " + std::to_string(policy.layer_count) +
                         " layers of profiles; the jth profile instance at layer i has primary key profile-i-j.",
                     SpecKind::Statement, 0, all});
    for (int l = 1; l <= policy.layer_count; ++l) {
        specs.push_back({layer_attribute_line(l, policy.layer_count), SpecKind::Statement, 0, all});
    }
    specs.push_back({"A profile-k-id names the profile-k instance with that primary key; a profile-k-info names "
                     "the profile-k instances whose lookup attribute equals the given string.",
                     SpecKind::Statement, 0, all});
    specs.push_back({benchgen::reference_rule_line(policy.layer_count), SpecKind::Statement, 0, all});
    const auto blocks = policy.tool_instructions.empty() ? benchgen::tool_instruction_blocks() : policy.tool_instructions;
    for (const auto& block : blocks) {
        specs.push_back({block.substr(0, block.find('\n')), SpecKind::Statement, 0, all});
    }
    for (const auto& line : benchgen::general_rule_lines()) {
        specs.push_back({line, SpecKind::Behavior, 0, all});
    }
    for (const auto& line : policy.general_policies) {
        specs.push_back({line, SpecKind::Behavior, 0, all});
    }
    for (const auto& task : policy.tasks) {
        specs.push_back({task.name() + ": " + benchgen::layer_requirement_line(task), SpecKind::Statement, 0,
                         {task.name()}});
        for (const auto& arg : task.args) {
            specs.push_back({argument_content(task, arg), SpecKind::Workflow,
                             benchgen::conditional_depth(arg.expression), {task.name()}});
        }
    }
    for (const auto& spec : specs) {
        analysis.records.push_back(categorize(spec));
    }
    deduplicate(analysis);
    return analysis;
}

void deduplicate(PolicyAnalysis& analysis) {
    std::set<std::string> seen;
    std::vector<SpecRecord> kept;
    for (auto& record : analysis.records) {
        if (seen.insert(normalize_content(record.content)).second) {
            kept.push_back(std::move(record));
        }
    }
    analysis.records = std::move(kept);
}

namespace {

std::string trim(std::string s) {
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

std::string strip_quotes(std::string s) {
    s = trim(std::move(s));
    if (s.size() >= 2 && (s.front() == '\'' || s.front() == '"') && s.back() == s.front()) {
        s = s.substr(1, s.size() - 2);
    }
    return trim(std::move(s));
}

/// Index one past the bracket closing the one at `open`, or npos.
std::size_t matching_bracket(const std::string& text, std::size_t open) {
    int depth = 0;
    bool in_string = false;
    for (std::size_t i = open; i < text.size(); ++i) {
        const char c = text[i];
        if (in_string) {
            if (c == '\\') {
                ++i;
            } else if (c == '"') {
                in_string = false;
            }
            continue;
        }
        if (c == '"') {
            in_string = true;
        } else if (c == '[') {
            ++depth;
        } else if (c == ']' && --depth == 0) {
            return i + 1;
        }
    }
    return std::string::npos;
}

std::vector<std::string> parse_task_line(const std::string& raw) {
    const auto pos = raw.find("Tasks:");
    if (pos == std::string::npos) {
        throw AnalysisError("analyst output has no 'Tasks:' line", raw);
    }
    const auto open = raw.find('[', pos);
    const auto eol = raw.find('\n', pos);
    if (open == std::string::npos || (eol != std::string::npos && open > eol)) {
        throw AnalysisError("the 'Tasks:' line has no list", raw);
    }
    const auto close = raw.find(']', open);
    if (close == std::string::npos) {
        throw AnalysisError("the 'Tasks:' list is not closed", raw);
    }
    std::vector<std::string> tasks;
    const auto inner = raw.substr(open + 1, close - open - 1);
    std::size_t start = 0;
    while (start <= inner.size()) {
        const auto comma = inner.find(',', start);
        auto item = strip_quotes(inner.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
        if (!item.empty()) {
            tasks.push_back(std::move(item));
        }
        if (comma == std::string::npos) {
            break;
        }
        start = comma + 1;
    }
    return tasks;
}

struct Section {
    const char* header;
    Category category;
};

constexpr Section kSections[] = {
    {"Fact Illustration", Category::Fact},
    {"Behavior Specification", Category::Behavior},
    {"Workflow Specification (Simple)", Category::CondSimple},
    {"Workflow Specification (Complex)", Category::CondComplex},
};

bool is_uncertain(const json& v) {
    return v.is_string() && normalize_content(v.get<std::string>()) == "uncertain";
}

void read_scope(const json& entry, const std::vector<std::string>& tasks, SpecRecord& record) {
    if (!entry.contains("Valid Scope") || is_uncertain(entry.at("Valid Scope"))) {
        record.scope_uncertain = true;
        return;
    }
    const auto& v = entry.at("Valid Scope");
    std::vector<std::string> named;
    if (v.is_array()) {
        for (const auto& item : v) {
            if (item.is_string()) {
                named.push_back(trim(item.get<std::string>()));
            }
        }
    } else if (v.is_string()) {
        named.push_back(trim(v.get<std::string>()));
    }
    for (const auto& name : named) {
        const auto it = std::find_if(tasks.begin(), tasks.end(), [&](const std::string& t) {
            return normalize_content(t) == normalize_content(name);
        });
        if (it != tasks.end()) {
            record.scope.push_back(*it);
        }
    }
    record.scope_uncertain = record.scope.empty();
}

void read_complexity(const json& entry, SpecRecord& record) {
    const auto it = entry.find("Complexity Level");
    if (it != entry.end()) {
        if (it->is_number_integer()) {
            record.complexity_level = it->get<int>();
            return;
        }
        if (it->is_string()) {
            const auto text = trim(it->get<std::string>());
            if (!text.empty() && std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isdigit(c); })) {
                record.complexity_level = std::stoi(text);
                return;
            }
        }
    }
    record.complexity_uncertain = true;
}

} // namespace

PolicyAnalysis parse_analyst_output(const std::string& raw, const std::string& pid) {
    PolicyAnalysis analysis;
    analysis.pid = pid;
    analysis.tasks = parse_task_line(raw);

    std::vector<std::pair<std::size_t, const Section*>> found;
    for (const auto& section : kSections) {
        // The last mention wins: earlier ones may be echoed instructions.
        const auto pos = raw.rfind(section.header);
        if (pos != std::string::npos) {
            found.emplace_back(pos, &section);
        }
    }
    if (found.empty()) {
        throw AnalysisError("analyst output has none of the four specification lists", raw);
    }
    std::sort(found.begin(), found.end());
    for (std::size_t s = 0; s < found.size(); ++s) {
        const auto [pos, section] = found[s];
        const auto limit = s + 1 < found.size() ? found[s + 1].first : raw.size();
        const auto open = raw.find('[', pos);
        if (open == std::string::npos || open >= limit) {
            continue; // an absent list means the section is empty
        }
        const auto close = matching_bracket(raw, open);
        if (close == std::string::npos || close > limit) {
            throw AnalysisError(std::string("unterminated list after '") + section->header + "'", raw);
        }
        json list;
        try {
            list = json::parse(raw.substr(open, close - open));
        } catch (const json::exception& e) {
            throw AnalysisError(std::string("list after '") + section->header + "' is not JSON: " + e.what(), raw);
        }
        for (const auto& entry : list) {
            if (!entry.is_object() || !entry.contains("Content") || !entry.at("Content").is_string()) {
                throw AnalysisError(std::string("entry under '") + section->header + "' lacks a Content string", raw);
            }
            SpecRecord record;
            record.content = trim(entry.at("Content").get<std::string>());
            record.category = section->category;
            read_scope(entry, analysis.tasks, record);
            if (record.category == Category::CondComplex) {
                read_complexity(entry, record);
            }
            analysis.records.push_back(std::move(record));
        }
    }
    deduplicate(analysis);
    return analysis;
}

PolicyAnalysis analyze_policy_text(const std::string& policy_text, const std::string& pid,
                                   harness::CompletionClient& analyst) {
    const std::vector<harness::ChatMessage> messages{{"user", analyst_prompt(policy_text)}};
    harness::ChatParams params;
    params.max_tokens = 8192;
    std::string raw = analyst.chat(messages, params);
    try {
        return parse_analyst_output(raw, pid);
    } catch (const AnalysisError&) {
        raw = analyst.chat(messages, params);
    }
    return parse_analyst_output(raw, pid);
}

json export_review(const PolicyAnalysis& analysis) {
    json records = json::array();
    for (const auto& r : analysis.records) {
        auto j = to_json(r);
        j["approved"] = true;
        records.push_back(std::move(j));
    }
    return json{{"pid", analysis.pid}, {"tasks", analysis.tasks}, {"records", std::move(records)}};
}

PolicyAnalysis import_review(const json& review) {
    PolicyAnalysis analysis;
    try {
        analysis.pid = review.at("pid").get<std::string>();
        analysis.tasks = review.at("tasks").get<std::vector<std::string>>();
        for (const auto& r : review.at("records")) {
            if (r.value("approved", true)) {
                analysis.records.push_back(spec_record_from_json(r));
            }
        }
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed review file: ") + e.what());
    }
    deduplicate(analysis);
    return analysis;
}

} // namespace policybench::captdata
