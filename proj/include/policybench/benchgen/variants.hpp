// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "policybench/benchgen/policy.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace policybench::benchgen {

/// A change to one numeric constant or threshold of one argument formula.
struct OverrideDelta {
    int task_index = 1;
    int arg_index = 1;
    std::int64_t old_value = 0;
    std::int64_t new_value = 0;
    std::string old_prose;
    std::string new_prose;
    /// The block injected into override-mode prompts.
    std::string text;

    friend bool operator==(const OverrideDelta&, const OverrideDelta&) = default;
};

/// Returns the delta and the mutated copy; `policy` is left untouched. The
/// mutation is retried until the oracle answer differs on a sampled binding.
std::pair<OverrideDelta, PolicyDocument> generate_override(const PolicyDocument& policy,
                                                           std::uint64_t seed);

struct ReferralQa {
    std::string question;
    std::string reference_answer;

    friend bool operator==(const ReferralQa&, const ReferralQa&) = default;
};

/// Every distinct templated question the policy supports, in a fixed order.
std::vector<ReferralQa> referral_question_pool(const PolicyDocument& policy);

/// n distinct questions, deterministic per seed. Throws ConfigError when n
/// exceeds the pool.
std::vector<ReferralQa> generate_referral_qas(const PolicyDocument& policy, int n,
                                              std::uint64_t seed);

} // namespace policybench::benchgen
