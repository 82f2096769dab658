// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace policybench {

/// splitmix64 finalizer; derives independent stream seeds from (seed, stream).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Seeded generator whose outputs are identical on every platform.
///
/// std::mt19937_64 is fully specified by the standard, but the std
/// distributions are not, so all bounded draws go through the helpers here.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [lo, hi] (inclusive).
    std::int64_t uniform(std::int64_t lo, std::int64_t hi);

    /// Uniform index in [0, n).
    std::size_t index(std::size_t n);

    /// Uniform double in [0, 1) with 53 bits of precision.
    double unit();

    bool bernoulli(double p) { return unit() < p; }

    template <typename T>
    const T& pick(const std::vector<T>& items) {
        return items[index(items.size())];
    }

    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::swap(items[i - 1], items[index(i)]);
        }
    }

    /// k distinct indices from [0, n), in draw order.
    std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k);

private:
    std::mt19937_64 engine_;
};

} // namespace policybench
