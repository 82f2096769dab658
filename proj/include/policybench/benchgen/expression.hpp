// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "policybench/error.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace policybench::benchgen {

/// Owning pointer with value semantics, for recursive variant members.
template <typename T>
class Box {
public:
    Box(T value) : ptr_(std::make_unique<T>(std::move(value))) {}
    Box(const Box& other) : ptr_(std::make_unique<T>(*other.ptr_)) {}
    Box(Box&&) noexcept = default;
    Box& operator=(const Box& other) {
        if (this != &other) {
            ptr_ = std::make_unique<T>(*other.ptr_);
        }
        return *this;
    }
    Box& operator=(Box&&) noexcept = default;
    ~Box() = default;

    T& operator*() { return *ptr_; }
    const T& operator*() const { return *ptr_; }
    T* operator->() { return ptr_.get(); }
    const T* operator->() const { return ptr_.get(); }

    friend bool operator==(const Box& a, const Box& b) { return *a.ptr_ == *b.ptr_; }

private:
    std::unique_ptr<T> ptr_;
};

/// Layer number used by AttrRef for the global attribute block.
inline constexpr int kGlobalScope = 0;

struct Const {
    std::int64_t value = 0;
    friend bool operator==(const Const&, const Const&) = default;
};

/// `layer-<layer>-attribute-<attribute>`, or `global-attribute-<attribute>`
/// when layer == kGlobalScope.
struct AttrRef {
    int layer = 1;
    int attribute = 1;

    bool is_global() const { return layer == kGlobalScope; }
    static AttrRef global(int index) { return AttrRef{kGlobalScope, index}; }

    friend bool operator==(const AttrRef&, const AttrRef&) = default;
};

/// Attribute-3 (the lookup string) of the bound instance at `layer`.
struct LookupRef {
    int layer = 1;
    friend bool operator==(const LookupRef&, const LookupRef&) = default;
};

enum class AggregateKind {
    AvgIntDiv,
    Sum,
    Max,
    Min,
    Range,
    Product,
    Mod,     // parameter = modulus
    CountGt, // parameter = threshold
    SumEven,
};

enum class CompareOp { Greater, Less, Equal, GreaterEqual, LessEqual };

std::string_view to_string(AggregateKind kind);
AggregateKind aggregate_kind_from_string(std::string_view name);
std::string_view to_string(CompareOp op);
CompareOp compare_op_from_string(std::string_view symbol);

struct Expression;

struct Aggregate {
    AggregateKind kind = AggregateKind::Sum;
    std::int64_t parameter = 0;
    std::vector<Expression> operands;

    friend bool operator==(const Aggregate&, const Aggregate&);
};

struct Comparison {
    AttrRef lhs;
    CompareOp op = CompareOp::Greater;
    std::int64_t threshold = 0;

    bool holds(std::int64_t value) const;

    friend bool operator==(const Comparison&, const Comparison&) = default;
};

struct Conditional {
    Comparison condition;
    Box<Expression> then_branch;
    Box<Expression> else_branch;

    friend bool operator==(const Conditional&, const Conditional&) = default;
};

/// An argument formula: constants, attribute references, aggregates and
/// binary if/else trees.
struct Expression {
    using Node = std::variant<Const, AttrRef, LookupRef, Aggregate, Conditional>;
    Node node;

    Expression(Const c) : node(c) {}
    Expression(AttrRef a) : node(a) {}
    Expression(LookupRef l) : node(l) {}
    Expression(Aggregate a) : node(std::move(a)) {}
    Expression(Conditional c) : node(std::move(c)) {}

    template <typename T>
    bool is() const { return std::holds_alternative<T>(node); }
    template <typename T>
    const T& as() const { return std::get<T>(node); }
    template <typename T>
    T& as() { return std::get<T>(node); }

    bool is_atom() const { return is<Const>() || is<AttrRef>(); }

    friend bool operator==(const Expression&, const Expression&) = default;
};

inline bool operator==(const Aggregate& a, const Aggregate& b) {
    return a.kind == b.kind && a.parameter == b.parameter && a.operands == b.operands;
}

Expression make_conditional(Comparison condition, Expression then_branch, Expression else_branch);

/// Maximum number of nested Conditional nodes along any root-to-leaf path.
int conditional_depth(const Expression& expr);

/// Every AttrRef in the tree (operands and conditions), in pre-order.
std::vector<AttrRef> collect_attr_refs(const Expression& expr);

/// Layers read by the expression through AttrRef or LookupRef (no globals).
std::vector<int> referenced_layers(const Expression& expr);

/// Throws StructuralError when an aggregate is empty or malformed.
void validate_expression(const Expression& expr);

std::string render_atom(const AttrRef& ref);

/// Deterministic prose: a full sentence, capitalised, ending in a period.
std::string render_prose(const Expression& expr);

class ProseParseError : public Error {
public:
    using Error::Error;
};

/// Inverse of render_prose (also accepts the hand-written variants such as
/// "The maximum between X and Y."). Throws ProseParseError.
Expression parse_prose(std::string_view sentence);

} // namespace policybench::benchgen
