// SPDX-License-Identifier: Apache-2.0
#include "policybench/captdata/records.hpp"

#include "policybench/error.hpp"

#include <cctype>

namespace policybench::captdata {

std::string to_string(Category category) {
    switch (category) {
    case Category::Fact:
        return "fact";
    case Category::Behavior:
        return "behavior";
    case Category::CondSimple:
        return "cond_simple";
    case Category::CondComplex:
        return "cond_complex";
    }
    return "fact";
}

Category category_from_string(std::string_view name) {
    for (Category c : kAllCategories) {
        if (to_string(c) == name) {
            return c;
        }
    }
    throw InputError("unknown category '" + std::string(name) + "'");
}

std::string normalize_content(std::string_view text) {
    std::string out;
    bool pending_space = false;
    for (char ch : text) {
        const auto c = static_cast<unsigned char>(ch);
        if (std::isspace(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out += ' ';
            pending_space = false;
        }
        out += static_cast<char>(std::tolower(c));
    }
    while (!out.empty() && (out.back() == '.' || out.back() == ',' || out.back() == ';' || out.back() == ':')) {
        out.pop_back();
    }
    while (!out.empty() && out.back() == ' ') {
        out.pop_back();
    }
    return out;
}

json to_json(const SpecRecord& record) {
    json j{{"content", record.content},
           {"category", to_string(record.category)},
           {"scope", record.scope},
           {"scope_uncertain", record.scope_uncertain},
           {"complexity_uncertain", record.complexity_uncertain}};
    j["complexity_level"] = record.complexity_level ? json(*record.complexity_level) : json(nullptr);
    return j;
}

SpecRecord spec_record_from_json(const json& j) {
    try {
        SpecRecord record;
        record.content = j.at("content").get<std::string>();
        record.category = category_from_string(j.at("category").get<std::string>());
        record.scope = j.value("scope", std::vector<std::string>{});
        record.scope_uncertain = j.value("scope_uncertain", false);
        record.complexity_uncertain = j.value("complexity_uncertain", false);
        if (j.contains("complexity_level") && !j.at("complexity_level").is_null()) {
            record.complexity_level = j.at("complexity_level").get<int>();
        }
        return record;
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed spec record: ") + e.what());
    }
}

} // namespace policybench::captdata
