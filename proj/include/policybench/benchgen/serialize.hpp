// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "policybench/benchgen/environment.hpp"
#include "policybench/benchgen/expression.hpp"
#include "policybench/benchgen/policy.hpp"
#include "policybench/benchgen/query.hpp"
#include "policybench/benchgen/variants.hpp"
#include "policybench/json_io.hpp"

namespace policybench::benchgen {

json to_json(const Expression& expr);
Expression expression_from_json(const json& j);

json to_json(const ProfileInstance& instance);
ProfileInstance instance_from_json(const json& j);

json to_json(const Environment& env);
Environment environment_from_json(const json& j);

json to_json(const PolicyDocument& policy);
PolicyDocument policy_from_json(const json& j);

json to_json(const Query& query);
Query query_from_json(const json& j);

json to_json(const ComplexityConfig& cc);
json to_json(const ComplexityProfile& profile);
json to_json(const OverrideDelta& delta);
OverrideDelta override_delta_from_json(const json& j);
json to_json(const ReferralQa& qa);
ReferralQa referral_qa_from_json(const json& j);

} // namespace policybench::benchgen
