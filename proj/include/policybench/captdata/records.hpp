// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "policybench/json_io.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace policybench::captdata {

enum class Category { Fact, Behavior, CondSimple, CondComplex };

inline constexpr Category kAllCategories[] = {Category::Fact, Category::Behavior, Category::CondSimple,
                                              Category::CondComplex};

std::string to_string(Category category);
Category category_from_string(std::string_view name);

/// A categorised policy statement.
struct SpecRecord {
    std::string content;
    Category category = Category::Fact;
    /// CondComplex only; nullopt with complexity_uncertain set means the
    /// level could not be determined.
    std::optional<int> complexity_level;
    bool complexity_uncertain = false;
    std::vector<std::string> scope;
    bool scope_uncertain = false;

    friend bool operator==(const SpecRecord&, const SpecRecord&) = default;
};

/// Lowercase, single spaces, trailing punctuation removed.
std::string normalize_content(std::string_view text);

json to_json(const SpecRecord& record);
SpecRecord spec_record_from_json(const json& j);

} // namespace policybench::captdata
