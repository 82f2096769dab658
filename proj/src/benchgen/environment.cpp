// SPDX-License-Identifier: Apache-2.0
#include "policybench/benchgen/environment.hpp"

#include "policybench/error.hpp"
#include "policybench/rng.hpp"

#include <charconv>
#include <set>

namespace policybench::benchgen {

void ComplexityConfig::validate() const {
    if (environment_k < 1) {
        throw ConfigError("environment_k", "must be >= 1");
    }
    if (task_k < 1) {
        throw ConfigError("task_k", "must be >= 1");
    }
    if (workflow_k < 0) {
        throw ConfigError("workflow_k", "must be >= 0");
    }
    if (num_queries < 1) {
        throw ConfigError("num_queries", "must be >= 1");
    }
}

const std::vector<std::string>& default_lookup_vocab() {
    static const std::vector<std::string> vocab{
        "engineering", "sales",      "marketing",   "finance",     "legal",
        "operations",  "research",   "support",     "design",      "security",
        "procurement", "logistics",  "quality",     "compliance",  "training",
        "facilities",  "analytics",  "product",     "platform",    "infrastructure",
        "payroll",     "recruiting", "billing",     "partnerships", "communications",
        "strategy",    "audit",      "treasury",    "tax",         "risk",
        "manufacturing", "warehouse", "fleet",      "retail",      "wholesale",
        "editorial",   "media",      "events",      "outreach",    "education",
        "health",      "safety",     "networking",  "database",    "mobile",
        "web",         "testing",    "documentation", "localization", "customer-success",
    };
    return vocab;
}

EnvConfig EnvConfig::defaults(int layers) {
    EnvConfig cfg;
    cfg.layers = layers;
    cfg.lookup_vocab = default_lookup_vocab();
    return cfg;
}

void EnvConfig::validate() const {
    if (layers < 1) {
        throw ConfigError("layers", "must be >= 1");
    }
    if (instances_per_layer < 1) {
        throw ConfigError("instances_per_layer", "must be >= 1");
    }
    if (value_lo > value_hi) {
        throw ConfigError("value_lo", "must be <= value_hi");
    }
    if (lookup_vocab.empty()) {
        throw ConfigError("lookup_vocab", "must not be empty");
    }
    std::set<std::string> distinct(lookup_vocab.begin(), lookup_vocab.end());
    if (distinct.size() != lookup_vocab.size()) {
        throw ConfigError("lookup_vocab", "entries must be distinct");
    }
    if (ref_fanout < 1) {
        throw ConfigError("ref_fanout", "must be >= 1");
    }
    if (ref_fanout > instances_per_layer) {
        throw ConfigError("ref_fanout", "must be <= instances_per_layer");
    }
}

int reference_target_layer(int layer, int attribute, int layer_count) {
    switch (attribute) {
    case kSameLayerRef:
        return layer;
    case kNextLayerRef:
        return layer % layer_count + 1;
    case kNextNextLayerRef:
        return (layer + 1) % layer_count + 1;
    default:
        throw InputError("attribute-" + std::to_string(attribute) + " is not a reference attribute");
    }
}

std::string primary_key(int layer, int index) {
    return "profile-" + std::to_string(layer) + "-" + std::to_string(index);
}

std::optional<std::pair<int, int>> parse_primary_key(std::string_view key) {
    constexpr std::string_view prefix = "profile-";
    if (key.substr(0, prefix.size()) != prefix) {
        return std::nullopt;
    }
    key.remove_prefix(prefix.size());
    const auto dash = key.find('-');
    if (dash == std::string_view::npos) {
        return std::nullopt;
    }
    auto parse_int = [](std::string_view s) -> std::optional<int> {
        if (s.empty() || s.front() == '0') {
            return std::nullopt;
        }
        int value = 0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
        if (ec != std::errc{} || ptr != s.data() + s.size()) {
            return std::nullopt;
        }
        return value;
    };
    const auto layer = parse_int(key.substr(0, dash));
    const auto index = parse_int(key.substr(dash + 1));
    if (!layer || !index) {
        return std::nullopt;
    }
    return std::pair{*layer, *index};
}

const ProfileInstance* Environment::find(std::string_view key) const {
    const auto parsed = parse_primary_key(key);
    if (!parsed) {
        return nullptr;
    }
    const auto [layer, index] = *parsed;
    if (layer > layer_count()) {
        return nullptr;
    }
    const auto& instances = layers[static_cast<std::size_t>(layer - 1)].instances;
    if (index > static_cast<int>(instances.size())) {
        return nullptr;
    }
    const auto& instance = instances[static_cast<std::size_t>(index - 1)];
    return instance.primary_key == key ? &instance : nullptr;
}

const ProfileInstance* Environment::find_in_layer(int layer, std::string_view key) const {
    const auto* instance = find(key);
    return instance != nullptr && instance->layer == layer ? instance : nullptr;
}

std::vector<const ProfileInstance*> Environment::search(int layer, std::string_view lookup) const {
    std::vector<const ProfileInstance*> matches;
    if (layer < 1 || layer > layer_count()) {
        return matches;
    }
    for (const auto& instance : layers[static_cast<std::size_t>(layer - 1)].instances) {
        if (instance.lookup == lookup) {
            matches.push_back(&instance);
        }
    }
    return matches;
}

Environment generate_environment(const EnvConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    Rng rng(seed);
    Environment env;
    const int layer_count = cfg.layers;
    env.layers.reserve(static_cast<std::size_t>(layer_count));
    for (int layer = 1; layer <= layer_count; ++layer) {
        Layer record{layer, {}};
        record.instances.reserve(static_cast<std::size_t>(cfg.instances_per_layer));
        for (int index = 1; index <= cfg.instances_per_layer; ++index) {
            ProfileInstance instance;
            instance.primary_key = primary_key(layer, index);
            instance.layer = layer;
            instance.index = index;
            for (int attribute : kConditionAttributes) {
                instance.cond_attrs[attribute] = rng.uniform(cfg.value_lo, cfg.value_hi);
            }
            instance.lookup = rng.pick(cfg.lookup_vocab);
            for (int attribute : kReferenceAttributes) {
                const int target = reference_target_layer(layer, attribute, layer_count);
                auto& keys = instance.refs[attribute];
                for (std::size_t pick : rng.sample_indices(static_cast<std::size_t>(cfg.instances_per_layer),
                                                           static_cast<std::size_t>(cfg.ref_fanout))) {
                    keys.push_back(primary_key(target, static_cast<int>(pick) + 1));
                }
            }
            record.instances.push_back(std::move(instance));
        }
        env.layers.push_back(std::move(record));
    }
    if (layer_count == 3) {
        env.globals.values = {30, 60, 7};
    } else {
        for (int i = 0; i < 3; ++i) {
            env.globals.values.push_back(rng.uniform(cfg.value_lo, cfg.value_hi));
        }
    }
    return env;
}

std::optional<std::string> check_referential_integrity(const Environment& env) {
    const int layer_count = env.layer_count();
    for (std::size_t li = 0; li < env.layers.size(); ++li) {
        const auto& layer = env.layers[li];
        if (layer.index != static_cast<int>(li) + 1) {
            return "layer at position " + std::to_string(li + 1) + " has index " +
                   std::to_string(layer.index);
        }
        for (std::size_t ii = 0; ii < layer.instances.size(); ++ii) {
            const auto& instance = layer.instances[ii];
            if (instance.primary_key != primary_key(layer.index, static_cast<int>(ii) + 1) ||
                instance.layer != layer.index || instance.index != static_cast<int>(ii) + 1) {
                return "instance " + instance.primary_key + " does not match its position";
            }
            for (int attribute : kConditionAttributes) {
                if (!instance.cond_attrs.contains(attribute)) {
                    return instance.primary_key + " lacks attribute-" + std::to_string(attribute);
                }
            }
            for (int attribute : kReferenceAttributes) {
                const auto it = instance.refs.find(attribute);
                if (it == instance.refs.end()) {
                    return instance.primary_key + " lacks attribute-" + std::to_string(attribute);
                }
                const int target = reference_target_layer(layer.index, attribute, layer_count);
                for (const auto& key : it->second) {
                    if (env.find_in_layer(target, key) == nullptr) {
                        return instance.primary_key + " attribute-" + std::to_string(attribute) +
                               " key " + key + " does not resolve in layer " + std::to_string(target);
                    }
                }
            }
        }
    }
    return std::nullopt;
}

} // namespace policybench::benchgen
