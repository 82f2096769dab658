// SPDX-License-Identifier: Apache-2.0
#include "brute_force.hpp"

#include <algorithm>
#include <stdexcept>

namespace testsupport {

using nlohmann::json;

namespace {

std::int64_t attr_value(const json& ref, const JsonBinding& binding, const std::vector<std::int64_t>& globals) {
    if (ref.at("type") == "global") {
        return globals.at(ref.at("index").get<std::size_t>() - 1);
    }
    const auto& inst = binding.at(ref.at("layer").get<int>());
    return inst.at("cond_attrs").at(std::to_string(ref.at("attribute").get<int>())).get<std::int64_t>();
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) {
        --q;
    }
    return q;
}

} // namespace

json bf_eval(const json& expr, const JsonBinding& binding, const std::vector<std::int64_t>& globals) {
    const auto type = expr.at("type").get<std::string>();
    if (type == "const") {
        return expr.at("value");
    }
    if (type == "attr" || type == "global") {
        return attr_value(expr, binding, globals);
    }
    if (type == "lookup") {
        return binding.at(expr.at("layer").get<int>()).at("lookup");
    }
    if (type == "conditional") {
        const auto& c = expr.at("condition");
        const auto lhs = attr_value(c.at("lhs"), binding, globals);
        const auto t = c.at("threshold").get<std::int64_t>();
        const auto op = c.at("op").get<std::string>();
        bool holds = false;
        if (op == ">") holds = lhs > t;
        else if (op == "<") holds = lhs < t;
        else if (op == "=") holds = lhs == t;
        else if (op == ">=") holds = lhs >= t;
        else if (op == "<=") holds = lhs <= t;
        else throw std::runtime_error("bf: unknown op " + op);
        return bf_eval(holds ? expr.at("then") : expr.at("else"), binding, globals);
    }
    if (type != "aggregate") {
        throw std::runtime_error("bf: unknown node " + type);
    }
    std::vector<std::int64_t> xs;
    for (const auto& o : expr.at("operands")) {
        xs.push_back(bf_eval(o, binding, globals).get<std::int64_t>());
    }
    const auto kind = expr.at("kind").get<std::string>();
    const auto p = expr.value("parameter", std::int64_t{0});
    std::int64_t sum = 0;
    for (auto x : xs) sum += x;
    if (kind == "avg_intdiv") return floor_div(sum, static_cast<std::int64_t>(xs.size()));
    if (kind == "sum") return sum;
    if (kind == "max") return *std::max_element(xs.begin(), xs.end());
    if (kind == "min") return *std::min_element(xs.begin(), xs.end());
    if (kind == "range") return *std::max_element(xs.begin(), xs.end()) - *std::min_element(xs.begin(), xs.end());
    if (kind == "product") {
        std::int64_t r = 1;
        for (auto x : xs) r *= x;
        return r;
    }
    if (kind == "mod") return ((sum % p) + p) % p;
    if (kind == "count_gt") {
        std::int64_t n = 0;
        for (auto x : xs) n += x > p ? 1 : 0;
        return n;
    }
    if (kind == "sum_even") {
        std::int64_t r = 0;
        for (auto x : xs) r += (x % 2 == 0) ? x : 0;
        return r;
    }
    throw std::runtime_error("bf: unknown aggregate " + kind);
}

const json* bf_find(const json& env, int layer, const std::string& key) {
    for (const auto& l : env.at("layers")) {
        if (l.at("index").get<int>() != layer) continue;
        for (const auto& inst : l.at("instances")) {
            if (inst.at("primary_key") == key) return &inst;
        }
    }
    return nullptr;
}

BfAnswer bf_solve(const json& policy, const json& env, const json& query) {
    BfAnswer conflict;
    conflict.conflict = true;

    const json* task = nullptr;
    for (const auto& t : policy.at("tasks")) {
        if (t.at("task_index") == query.at("task_index")) task = &t;
    }
    if (task == nullptr) return conflict;
    const auto layers = task->at("required_layers").get<std::vector<int>>();
    const bool multi = layers.size() > 1;
    const int c = query.at("combinations").get<int>();

    std::vector<const json*> starts;
    const auto& entry = query.at("entry");
    if (entry.at("type") == "by_id") {
        const auto* inst = bf_find(env, 1, entry.at("primary_key").get<std::string>());
        if (inst == nullptr) return conflict;
        starts.push_back(inst);
    } else {
        if (entry.at("layer").get<int>() != 1) return conflict;
        for (const auto& l : env.at("layers")) {
            if (l.at("index").get<int>() != 1) continue;
            for (const auto& inst : l.at("instances")) {
                if (inst.at("lookup") == entry.at("value")) starts.push_back(&inst);
            }
        }
        if (starts.empty()) return conflict;
    }
    if (!multi && c > static_cast<int>(starts.size())) return conflict;

    const auto globals = policy.at("globals").at("values").get<std::vector<std::int64_t>>();
    BfAnswer answer;
    for (int k = 0; k < c; ++k) {
        JsonBinding binding;
        binding[1] = *starts[multi ? 0 : static_cast<std::size_t>(k)];
        for (int layer : layers) {
            if (layer == 1) continue;
            // Layer 2 hangs off attribute-5 and layer 3 off attribute-6 of
            // the layer-1 profile; deeper layers chain through attribute-5.
            const int from = layer <= 3 ? 1 : layer - 1;
            const std::string attr = layer == 3 ? "6" : "5";
            if (binding.count(from) == 0) return conflict;
            const auto& keys = binding.at(from).at("refs").at(attr);
            if (k >= static_cast<int>(keys.size())) return conflict;
            const auto* target = bf_find(env, layer, keys.at(static_cast<std::size_t>(k)).get<std::string>());
            if (target == nullptr) return conflict;
            binding[layer] = *target;
        }
        json args = json::array();
        for (const auto& arg : task->at("args")) {
            args.push_back(bf_eval(arg.at("expression"), binding, globals));
        }
        answer.finish_args.push_back(std::move(args));
    }
    return answer;
}

} // namespace testsupport
