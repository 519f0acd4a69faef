// Copyright 2026 The corrgraph Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Standard normal distribution function and quantile.
//
// normal_cdf and normal_upper_tail use std::erfc (glibc, correctly rounded
// to about one ulp), evaluated on the tail side so that small tail
// probabilities keep full relative accuracy. normal_quantile uses
// boost::math::erfc_inv, whose rational approximations are accurate to a few
// ulp over the whole open interval. Both are checked against a
// high-precision table in the tests.

namespace corrgraph {

/// Phi(x)
double normal_cdf(double x);

/// 1 - Phi(x), without cancellation for large x.
double normal_upper_tail(double x);

/// Phi^{-1}(p) for p in (0, 1). Throws ConfigError outside that range.
double normal_quantile(double p);

/// Phi^{-1}(1 - q), accurate for tiny q.
double normal_upper_quantile(double q);

/// Two-sided asymptotic p-value 2 (1 - Phi(|t|)).
double two_sided_p_value(double t);

}  // namespace corrgraph
