// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "policybench/benchgen/config.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace policybench::benchgen {

inline constexpr std::array<int, 4> kConditionAttributes{1, 2, 7, 8};
inline constexpr int kLookupAttribute = 3;
inline constexpr int kSameLayerRef = 4;
inline constexpr int kNextLayerRef = 5;
inline constexpr int kNextNextLayerRef = 6;
inline constexpr std::array<int, 3> kReferenceAttributes{4, 5, 6};

/// Layer that reference attribute `attribute` (4, 5 or 6) of a layer-`layer`
/// instance points into, for an environment with `layer_count` layers.
int reference_target_layer(int layer, int attribute, int layer_count);

std::string primary_key(int layer, int index);

/// Splits "profile-<layer>-<index>"; nullopt when the shape does not match.
std::optional<std::pair<int, int>> parse_primary_key(std::string_view key);

struct ProfileInstance {
    std::string primary_key;
    int layer = 0;
    int index = 0;
    std::map<int, std::int64_t> cond_attrs;
    std::string lookup;
    std::map<int, std::vector<std::string>> refs;

    friend bool operator==(const ProfileInstance&, const ProfileInstance&) = default;
};

struct Layer {
    int index = 0;
    std::vector<ProfileInstance> instances;

    friend bool operator==(const Layer&, const Layer&) = default;
};

struct GlobalAttributes {
    std::vector<std::int64_t> values;

    friend bool operator==(const GlobalAttributes&, const GlobalAttributes&) = default;
};

struct Environment {
    std::vector<Layer> layers;
    GlobalAttributes globals;

    int layer_count() const { return static_cast<int>(layers.size()); }

    const ProfileInstance* find(std::string_view key) const;

    /// Like find(), but only succeeds for keys in `layer`.
    const ProfileInstance* find_in_layer(int layer, std::string_view key) const;

    /// Exact, case-sensitive match on attribute-3, ascending index order.
    std::vector<const ProfileInstance*> search(int layer, std::string_view lookup) const;

    friend bool operator==(const Environment&, const Environment&) = default;
};

/// Deterministic for fixed (cfg, seed). Throws ConfigError on invalid cfg.
Environment generate_environment(const EnvConfig& cfg, std::uint64_t seed);

/// Every reference key resolves into its designated layer; primary keys match
/// their positions. Returns a description of the first violation, if any.
std::optional<std::string> check_referential_integrity(const Environment& env);

} // namespace policybench::benchgen
