// SPDX-License-Identifier: Apache-2.0
#include "policybench/benchgen/serialize.hpp"

#include "policybench/error.hpp"

namespace policybench::benchgen {

namespace {

json attr_to_json(const AttrRef& ref) {
    if (ref.is_global()) {
        return json{{"type", "global"}, {"index", ref.attribute}};
    }
    return json{{"type", "attr"}, {"layer", ref.layer}, {"attribute", ref.attribute}};
}

AttrRef attr_from_json(const json& j) {
    const auto type = j.at("type").get<std::string>();
    if (type == "global") {
        return AttrRef::global(j.at("index").get<int>());
    }
    if (type == "attr") {
        return AttrRef{j.at("layer").get<int>(), j.at("attribute").get<int>()};
    }
    throw StructuralError("expected an attribute reference, got '" + type + "'");
}

template <typename Fn>
auto wrap(const char* what, Fn&& fn) {
    try {
        return fn();
    } catch (const json::exception& e) {
        throw StructuralError(std::string("malformed ") + what + ": " + e.what());
    }
}

} // namespace

json to_json(const Expression& expr) {
    return std::visit(
        [](const auto& node) -> json {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, Const>) {
                return json{{"type", "const"}, {"value", node.value}};
            } else if constexpr (std::is_same_v<T, AttrRef>) {
                return attr_to_json(node);
            } else if constexpr (std::is_same_v<T, LookupRef>) {
                return json{{"type", "lookup"}, {"layer", node.layer}};
            } else if constexpr (std::is_same_v<T, Aggregate>) {
                json operands = json::array();
                for (const auto& operand : node.operands) {
                    operands.push_back(to_json(operand));
                }
                return json{{"type", "aggregate"},
                            {"kind", std::string(to_string(node.kind))},
                            {"parameter", node.parameter},
                            {"operands", std::move(operands)}};
            } else {
                return json{{"type", "conditional"},
                            {"condition",
                             {{"lhs", attr_to_json(node.condition.lhs)},
                              {"op", std::string(to_string(node.condition.op))},
                              {"threshold", node.condition.threshold}}},
                            {"then", to_json(*node.then_branch)},
                            {"else", to_json(*node.else_branch)}};
            }
        },
        expr.node);
}

Expression expression_from_json(const json& j) {
    return wrap("expression", [&]() -> Expression {
        const auto type = j.at("type").get<std::string>();
        if (type == "const") {
            return Const{j.at("value").get<std::int64_t>()};
        }
        if (type == "attr" || type == "global") {
            return attr_from_json(j);
        }
        if (type == "lookup") {
            return LookupRef{j.at("layer").get<int>()};
        }
        if (type == "aggregate") {
            Aggregate agg;
            agg.kind = aggregate_kind_from_string(j.at("kind").get<std::string>());
            agg.parameter = j.value("parameter", std::int64_t{0});
            for (const auto& operand : j.at("operands")) {
                agg.operands.push_back(expression_from_json(operand));
            }
            return agg;
        }
        if (type == "conditional") {
            const auto& c = j.at("condition");
            Comparison cmp{attr_from_json(c.at("lhs")), compare_op_from_string(c.at("op").get<std::string>()),
                           c.at("threshold").get<std::int64_t>()};
            return make_conditional(cmp, expression_from_json(j.at("then")), expression_from_json(j.at("else")));
        }
        throw StructuralError("unknown expression type '" + type + "'");
    });
}

json to_json(const ProfileInstance& instance) {
    json cond = json::object();
    for (const auto& [attr, value] : instance.cond_attrs) {
        cond[std::to_string(attr)] = value;
    }
    json refs = json::object();
    for (const auto& [attr, keys] : instance.refs) {
        refs[std::to_string(attr)] = keys;
    }
    return json{{"primary_key", instance.primary_key},
                {"layer", instance.layer},
                {"index", instance.index},
                {"cond_attrs", std::move(cond)},
                {"lookup", instance.lookup},
                {"refs", std::move(refs)}};
}

ProfileInstance instance_from_json(const json& j) {
    return wrap("profile instance", [&] {
        ProfileInstance instance;
        instance.primary_key = j.at("primary_key").get<std::string>();
        instance.layer = j.at("layer").get<int>();
        instance.index = j.at("index").get<int>();
        for (const auto& [key, value] : j.at("cond_attrs").items()) {
            instance.cond_attrs[std::stoi(key)] = value.get<std::int64_t>();
        }
        instance.lookup = j.at("lookup").get<std::string>();
        for (const auto& [key, value] : j.at("refs").items()) {
            instance.refs[std::stoi(key)] = value.get<std::vector<std::string>>();
        }
        return instance;
    });
}

json to_json(const Environment& env) {
    json layers = json::array();
    for (const auto& layer : env.layers) {
        json instances = json::array();
        for (const auto& instance : layer.instances) {
            instances.push_back(to_json(instance));
        }
        layers.push_back(json{{"index", layer.index}, {"instances", std::move(instances)}});
    }
    return json{{"layers", std::move(layers)}, {"globals", {{"values", env.globals.values}}}};
}

Environment environment_from_json(const json& j) {
    return wrap("environment", [&] {
        Environment env;
        for (const auto& lj : j.at("layers")) {
            Layer layer;
            layer.index = lj.at("index").get<int>();
            for (const auto& ij : lj.at("instances")) {
                layer.instances.push_back(instance_from_json(ij));
            }
            env.layers.push_back(std::move(layer));
        }
        env.globals.values = j.at("globals").at("values").get<std::vector<std::int64_t>>();
        return env;
    });
}

json to_json(const PolicyDocument& policy) {
    json tasks = json::array();
    for (const auto& task : policy.tasks) {
        json args = json::array();
        for (const auto& arg : task.args) {
            args.push_back(json{{"arg_index", arg.arg_index}, {"expression", to_json(arg.expression)}, {"prose", arg.prose}});
        }
        tasks.push_back(json{{"task_index", task.task_index},
                             {"required_layers", task.required_layers},
                             {"args", std::move(args)}});
    }
    return json{{"pid", policy.pid},
                {"layer_count", policy.layer_count},
                {"globals", {{"values", policy.globals.values}}},
                {"general_policies", policy.general_policies},
                {"tool_instructions", policy.tool_instructions},
                {"tasks", std::move(tasks)},
                {"rendered", policy.rendered}};
}

PolicyDocument policy_from_json(const json& j) {
    return wrap("policy", [&] {
        PolicyDocument policy;
        policy.pid = j.at("pid").get<std::string>();
        policy.layer_count = j.at("layer_count").get<int>();
        policy.globals.values = j.at("globals").at("values").get<std::vector<std::int64_t>>();
        policy.general_policies = j.at("general_policies").get<std::vector<std::string>>();
        policy.tool_instructions = j.at("tool_instructions").get<std::vector<std::string>>();
        for (const auto& tj : j.at("tasks")) {
            TaskSpec task;
            task.task_index = tj.at("task_index").get<int>();
            task.required_layers = tj.at("required_layers").get<std::vector<int>>();
            for (const auto& aj : tj.at("args")) {
                task.args.push_back(ArgSpec{aj.at("arg_index").get<int>(), expression_from_json(aj.at("expression")),
                                            aj.at("prose").get<std::string>()});
            }
            policy.tasks.push_back(std::move(task));
        }
        policy.rendered = j.at("rendered").get<std::string>();
        return policy;
    });
}

json to_json(const Query& query) {
    json entry;
    if (const auto* by_id = std::get_if<ById>(&query.entry)) {
        entry = json{{"type", "by_id"}, {"primary_key", by_id->primary_key}};
    } else {
        const auto& lookup = std::get<ByLookup>(query.entry);
        entry = json{{"type", "by_lookup"}, {"layer", lookup.layer}, {"value", lookup.value}};
    }
    return json{{"id", query.id},
                {"text", query.text},
                {"task_index", query.task_index},
                {"entry", std::move(entry)},
                {"combinations", query.combinations}};
}

Query query_from_json(const json& j) {
    return wrap("query", [&] {
        Query query;
        query.id = j.at("id").get<std::string>();
        query.text = j.at("text").get<std::string>();
        query.task_index = j.at("task_index").get<int>();
        const auto& entry = j.at("entry");
        const auto type = entry.at("type").get<std::string>();
        if (type == "by_id") {
            query.entry = ById{entry.at("primary_key").get<std::string>()};
        } else if (type == "by_lookup") {
            query.entry = ByLookup{entry.at("layer").get<int>(), entry.at("value").get<std::string>()};
        } else {
            throw StructuralError("unknown query entry type '" + type + "'");
        }
        query.combinations = j.at("combinations").get<int>();
        return query;
    });
}

json to_json(const ComplexityConfig& cc) {
    return json{{"environment_k", cc.environment_k},
                {"task_k", cc.task_k},
                {"workflow_k", cc.workflow_k},
                {"num_queries", cc.num_queries},
                {"seed", cc.seed}};
}

json to_json(const ComplexityProfile& profile) {
    return json{{"task_count", profile.task_count},
                {"args_per_task", profile.args_per_task},
                {"max_depth", profile.max_depth},
                {"min_depth", profile.min_depth},
                {"layer_count", profile.layer_count}};
}

json to_json(const OverrideDelta& delta) {
    return json{{"task_index", delta.task_index}, {"arg_index", delta.arg_index},
                {"old_value", delta.old_value},   {"new_value", delta.new_value},
                {"old_prose", delta.old_prose},   {"new_prose", delta.new_prose},
                {"text", delta.text}};
}

OverrideDelta override_delta_from_json(const json& j) {
    return wrap("override delta", [&] {
        OverrideDelta delta;
        delta.task_index = j.at("task_index").get<int>();
        delta.arg_index = j.at("arg_index").get<int>();
        delta.old_value = j.at("old_value").get<std::int64_t>();
        delta.new_value = j.at("new_value").get<std::int64_t>();
        delta.old_prose = j.at("old_prose").get<std::string>();
        delta.new_prose = j.at("new_prose").get<std::string>();
        delta.text = j.at("text").get<std::string>();
        return delta;
    });
}

json to_json(const ReferralQa& qa) {
    return json{{"question", qa.question}, {"reference_answer", qa.reference_answer}};
}

ReferralQa referral_qa_from_json(const json& j) {
    return wrap("referral QA", [&] {
        return ReferralQa{j.at("question").get<std::string>(), j.at("reference_answer").get<std::string>()};
    });
}

} // namespace policybench::benchgen
