// Copyright 2026 The Semistable Authors.
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

#include <cstdint>
#include <functional>
#include <vector>

namespace semistable {

/// Two-sided one-sample Kolmogorov-Smirnov statistic
/// D = sup_x |F_n(x) - F(x)| against a continuous CDF.
double ks_statistic(std::vector<double> sample,
                    const std::function<double(double)>& cdf);

/// Same statistic for integer-valued samples against a discrete CDF given as
/// cumulative probabilities (cum[s] = P(X <= s)).
double ks_statistic_discrete(const std::vector<std::int64_t>& sample,
                             const std::vector<double>& cum);

}  // namespace semistable
