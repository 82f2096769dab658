// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "policybench/benchgen/environment.hpp"
#include "policybench/benchgen/expression.hpp"
#include "policybench/json_io.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <variant>

namespace policybench::engine {

using benchgen::Expression;
using benchgen::GlobalAttributes;
using benchgen::ProfileInstance;

/// Result of evaluating an argument formula: an integer, or a lookup string.
using Value = std::variant<std::int64_t, std::string>;

json to_json(const Value& value);
std::string to_string(const Value& value);

/// Evaluation context: one selected instance per layer plus the globals.
/// Instances are borrowed; the caller keeps them alive.
struct ProfileBinding {
    std::map<int, const ProfileInstance*> instances;
    GlobalAttributes globals;
};

/// Throws BindingError for references the binding cannot satisfy, or when a
/// lookup string reaches an arithmetic position.
Value eval_expression(const Expression& expr, const ProfileBinding& binding);

/// Like eval_expression but requires an integer result.
std::int64_t eval_integer(const Expression& expr, const ProfileBinding& binding);

/// Alias of benchgen::conditional_depth.
int expression_depth(const Expression& expr);

/// One-line account of the arithmetic along the branch actually taken,
/// ending in "= <value>".
std::string explain_expression(const Expression& expr, const ProfileBinding& binding);

} // namespace policybench::engine
