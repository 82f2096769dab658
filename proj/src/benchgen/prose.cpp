// SPDX-License-Identifier: Apache-2.0
#include "policybench/benchgen/expression.hpp"

#include <cctype>
#include <charconv>
#include <optional>

namespace policybench::benchgen {

namespace {

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i > 0) {
            out += sep;
        }
        out += parts[i];
    }
    return out;
}

std::string render_phrase(const Expression& expr);

std::string render_operand(const Expression& expr) {
    if (expr.is<Const>()) {
        return std::to_string(expr.as<Const>().value);
    }
    if (expr.is<AttrRef>()) {
        return render_atom(expr.as<AttrRef>());
    }
    return "[" + render_phrase(expr) + "]";
}

std::vector<std::string> render_operands(const Aggregate& agg) {
    std::vector<std::string> parts;
    parts.reserve(agg.operands.size());
    for (const auto& operand : agg.operands) {
        parts.push_back(render_operand(operand));
    }
    return parts;
}

std::string render_aggregate(const Aggregate& agg) {
    const auto parts = render_operands(agg);
    switch (agg.kind) {
    case AggregateKind::AvgIntDiv:
        return "the average of all values: (" + join(parts, " + ") + ") divided by " +
               std::to_string(parts.size()) + " (integer division)";
    case AggregateKind::Sum:
        return "the sum of all values: " + join(parts, ", ");
    case AggregateKind::Max:
        return "the maximum among all values: " + join(parts, ", ");
    case AggregateKind::Min:
        return "the minimum among all values: " + join(parts, ", ");
    case AggregateKind::Range:
        return "the range (max - min) among: " + join(parts, ", ");
    case AggregateKind::Product: {
        if (parts.size() == 1) {
            return "the product of " + parts.front();
        }
        std::vector<std::string> head(parts.begin(), parts.end() - 1);
        return "the product of " + join(head, ", ") + " and " + parts.back();
    }
    case AggregateKind::Mod:
        return "the result of (" + join(parts, " + ") + ") modulo " + std::to_string(agg.parameter);
    case AggregateKind::CountGt:
        return "the count of values greater than " + std::to_string(agg.parameter) +
               " among: " + join(parts, ", ");
    case AggregateKind::SumEven:
        return "the sum of even values among: " + join(parts, ", ");
    }
    return {};
}

std::string render_phrase(const Expression& expr) {
    return std::visit(
        [](const auto& node) -> std::string {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, Const>) {
                return std::to_string(node.value);
            } else if constexpr (std::is_same_v<T, AttrRef>) {
                return render_atom(node);
            } else if constexpr (std::is_same_v<T, LookupRef>) {
                return "the original lookup value of layer-" + std::to_string(node.layer) +
                       "-attribute-3 from the selected profile";
            } else if constexpr (std::is_same_v<T, Aggregate>) {
                return render_aggregate(node);
            } else {
                return render_operand(*node.then_branch) + " if " + render_atom(node.condition.lhs) + " " +
                       std::string(to_string(node.condition.op)) + " " +
                       std::to_string(node.condition.threshold) + ", else " +
                       render_operand(*node.else_branch);
            }
        },
        expr.node);
}

// ---- parsing ---------------------------------------------------------------

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

[[noreturn]] void fail(const std::string& what, std::string_view text) {
    throw ProseParseError(what + ": '" + std::string(text) + "'");
}

bool starts_with_ci(std::string_view text, std::string_view prefix) {
    if (text.size() < prefix.size()) {
        return false;
    }
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(text[i])) !=
            std::tolower(static_cast<unsigned char>(prefix[i]))) {
            return false;
        }
    }
    return true;
}

/// Index of the ']' closing the '[' at `open`, or npos.
std::size_t matching_bracket(std::string_view text, std::size_t open) {
    int depth = 0;
    for (std::size_t i = open; i < text.size(); ++i) {
        if (text[i] == '[') {
            ++depth;
        } else if (text[i] == ']') {
            if (--depth == 0) {
                return i;
            }
        }
    }
    return std::string_view::npos;
}

/// First occurrence of `needle` outside brackets.
std::size_t find_top_level(std::string_view text, std::string_view needle, std::size_t from = 0) {
    int depth = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '[') {
            ++depth;
        } else if (text[i] == ']') {
            --depth;
        } else if (depth == 0 && i >= from && text.substr(i, needle.size()) == needle) {
            return i;
        }
    }
    return std::string_view::npos;
}

std::vector<std::string_view> split_top_level(std::string_view text, std::string_view sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = find_top_level(text, sep, start);
        if (pos == std::string_view::npos) {
            parts.push_back(trim(text.substr(start)));
            return parts;
        }
        parts.push_back(trim(text.substr(start, pos - start)));
        start = pos + sep.size();
    }
}

std::optional<std::int64_t> parse_integer(std::string_view s) {
    s = trim(s);
    std::int64_t value = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
        return std::nullopt;
    }
    return value;
}

std::int64_t require_integer(std::string_view s) {
    const auto value = parse_integer(s);
    if (!value) {
        fail("expected an integer", s);
    }
    return *value;
}

std::optional<AttrRef> parse_attr_atom(std::string_view s) {
    s = trim(s);
    constexpr std::string_view global = "global-attribute-";
    if (starts_with_ci(s, global)) {
        const auto index = parse_integer(s.substr(global.size()));
        if (!index) {
            return std::nullopt;
        }
        return AttrRef::global(static_cast<int>(*index));
    }
    constexpr std::string_view layer = "layer-";
    if (!starts_with_ci(s, layer)) {
        return std::nullopt;
    }
    s.remove_prefix(layer.size());
    const auto mid = s.find("-attribute-");
    if (mid == std::string_view::npos) {
        return std::nullopt;
    }
    const auto layer_no = parse_integer(s.substr(0, mid));
    const auto attr_no = parse_integer(s.substr(mid + 11));
    if (!layer_no || !attr_no || *layer_no < 1) {
        return std::nullopt;
    }
    return AttrRef{static_cast<int>(*layer_no), static_cast<int>(*attr_no)};
}

Expression parse_atom(std::string_view s) {
    if (auto ref = parse_attr_atom(s)) {
        return *ref;
    }
    if (auto value = parse_integer(s)) {
        return Const{*value};
    }
    fail("expected an attribute reference or integer", s);
}

Expression parse_phrase(std::string_view text);

bool fully_bracketed(std::string_view text) {
    return !text.empty() && text.front() == '[' && matching_bracket(text, 0) == text.size() - 1;
}

Expression parse_branch(std::string_view text) {
    text = trim(text);
    if (fully_bracketed(text)) {
        return parse_phrase(text.substr(1, text.size() - 2));
    }
    return parse_phrase(text);
}

std::vector<Expression> parse_list(std::string_view text, std::string_view sep) {
    std::vector<Expression> operands;
    for (auto part : split_top_level(text, sep)) {
        if (part.empty()) {
            fail("empty operand", text);
        }
        operands.push_back(parse_branch(part));
    }
    return operands;
}

Comparison parse_comparison(std::string_view text) {
    text = trim(text);
    const auto first = text.find(' ');
    const auto last = text.rfind(' ');
    if (first == std::string_view::npos || first == last) {
        fail("malformed condition", text);
    }
    const auto lhs = parse_attr_atom(text.substr(0, first));
    if (!lhs) {
        fail("condition must test an attribute", text);
    }
    Comparison cmp;
    cmp.lhs = *lhs;
    try {
        cmp.op = compare_op_from_string(trim(text.substr(first + 1, last - first - 1)));
    } catch (const StructuralError&) {
        fail("unknown comparison operator", text);
    }
    cmp.threshold = require_integer(text.substr(last + 1));
    return cmp;
}

/// Parses "(a + b + c)" and returns the inner operands plus what follows.
std::pair<std::vector<Expression>, std::string_view> parse_parenthesised_sum(std::string_view text) {
    if (text.empty() || text.front() != '(') {
        fail("expected '('", text);
    }
    // Operands are atoms or bracketed, so the first ')' outside brackets closes.
    const auto close = find_top_level(text, ")");
    if (close == std::string_view::npos) {
        fail("unbalanced parenthesis", text);
    }
    return {parse_list(text.substr(1, close - 1), " + "), trim(text.substr(close + 1))};
}

Expression aggregate_of(AggregateKind kind, std::vector<Expression> operands, std::int64_t parameter = 0) {
    return Aggregate{kind, parameter, std::move(operands)};
}

Expression parse_aggregate(std::string_view text) {
    struct ListForm {
        std::string_view prefix;
        AggregateKind kind;
    };
    static constexpr ListForm list_forms[] = {
        {"the sum of even values among: ", AggregateKind::SumEven},
        {"the sum of all values: ", AggregateKind::Sum},
        {"the maximum among all values: ", AggregateKind::Max},
        {"the minimum among all values: ", AggregateKind::Min},
        {"the range (max - min) among: ", AggregateKind::Range},
    };
    for (const auto& form : list_forms) {
        if (starts_with_ci(text, form.prefix)) {
            return aggregate_of(form.kind, parse_list(text.substr(form.prefix.size()), ", "));
        }
    }
    for (auto [prefix, kind] : {std::pair{std::string_view("the maximum between "), AggregateKind::Max},
                                std::pair{std::string_view("the minimum between "), AggregateKind::Min}}) {
        if (starts_with_ci(text, prefix)) {
            return aggregate_of(kind, parse_list(text.substr(prefix.size()), " and "));
        }
    }
    if (constexpr std::string_view prefix = "the product of "; starts_with_ci(text, prefix)) {
        auto body = text.substr(prefix.size());
        const auto last_and = body.rfind(" and ");
        std::vector<Expression> operands;
        if (last_and == std::string_view::npos || find_top_level(body, " and ", last_and) != last_and) {
            operands.push_back(parse_branch(body));
        } else {
            operands = parse_list(body.substr(0, last_and), ", ");
            operands.push_back(parse_branch(body.substr(last_and + 5)));
        }
        return aggregate_of(AggregateKind::Product, std::move(operands));
    }
    if (constexpr std::string_view prefix = "the average of all values: "; starts_with_ci(text, prefix)) {
        auto [operands, rest] = parse_parenthesised_sum(text.substr(prefix.size()));
        constexpr std::string_view divided = "divided by ";
        constexpr std::string_view suffix = " (integer division)";
        if (!starts_with_ci(rest, divided) || rest.size() < divided.size() + suffix.size() ||
            rest.substr(rest.size() - suffix.size()) != suffix) {
            fail("malformed average", text);
        }
        const auto divisor =
            require_integer(rest.substr(divided.size(), rest.size() - divided.size() - suffix.size()));
        if (divisor != static_cast<std::int64_t>(operands.size())) {
            fail("average divisor must equal the operand count", text);
        }
        return aggregate_of(AggregateKind::AvgIntDiv, std::move(operands));
    }
    if (constexpr std::string_view prefix = "the result of "; starts_with_ci(text, prefix)) {
        auto [operands, rest] = parse_parenthesised_sum(text.substr(prefix.size()));
        constexpr std::string_view modulo = "modulo ";
        if (!starts_with_ci(rest, modulo)) {
            fail("malformed modulo", text);
        }
        return aggregate_of(AggregateKind::Mod, std::move(operands), require_integer(rest.substr(modulo.size())));
    }
    if (constexpr std::string_view prefix = "the count of values greater than "; starts_with_ci(text, prefix)) {
        auto body = text.substr(prefix.size());
        const auto among = body.find(" among: ");
        if (among == std::string_view::npos) {
            fail("malformed count", text);
        }
        return aggregate_of(AggregateKind::CountGt, parse_list(body.substr(among + 8), ", "),
                            require_integer(body.substr(0, among)));
    }
    if (constexpr std::string_view prefix = "the original lookup value of "; starts_with_ci(text, prefix)) {
        auto body = text.substr(prefix.size());
        constexpr std::string_view suffix = " from the selected profile";
        if (body.size() > suffix.size() && body.substr(body.size() - suffix.size()) == suffix) {
            body.remove_suffix(suffix.size());
        }
        const auto ref = parse_attr_atom(body);
        if (!ref || ref->is_global() || ref->attribute != 3) {
            fail("lookup must name layer-<k>-attribute-3", text);
        }
        return LookupRef{ref->layer};
    }
    fail("unrecognised phrase", text);
}

Expression parse_phrase(std::string_view text) {
    text = trim(text);
    if (text.empty()) {
        fail("empty expression", text);
    }
    if (fully_bracketed(text)) {
        return parse_phrase(text.substr(1, text.size() - 2));
    }
    if (const auto if_pos = find_top_level(text, " if "); if_pos != std::string_view::npos) {
        const auto rest = text.substr(if_pos + 4);
        const auto else_pos = find_top_level(rest, ", else ");
        if (else_pos == std::string_view::npos) {
            fail("conditional without else branch", text);
        }
        return make_conditional(parse_comparison(rest.substr(0, else_pos)), parse_branch(text.substr(0, if_pos)),
                                parse_branch(rest.substr(else_pos + 7)));
    }
    if (starts_with_ci(text, "the ")) {
        return parse_aggregate(text);
    }
    return parse_atom(text);
}

} // namespace

std::string render_atom(const AttrRef& ref) {
    if (ref.is_global()) {
        return "global-attribute-" + std::to_string(ref.attribute);
    }
    return "layer-" + std::to_string(ref.layer) + "-attribute-" + std::to_string(ref.attribute);
}

std::string render_prose(const Expression& expr) {
    std::string text = render_phrase(expr);
    if (!text.empty()) {
        text.front() = static_cast<char>(std::toupper(static_cast<unsigned char>(text.front())));
    }
    text += '.';
    return text;
}

Expression parse_prose(std::string_view sentence) {
    sentence = trim(sentence);
    if (!sentence.empty() && sentence.back() == '.') {
        sentence.remove_suffix(1);
    }
    return parse_phrase(sentence);
}

} // namespace policybench::benchgen
