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

#include "semistable/ks.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace semistable {

double ks_statistic(std::vector<double> sample,
                    const std::function<double(double)>& cdf) {
  if (sample.empty()) throw std::invalid_argument("empty sample");
  std::sort(sample.begin(), sample.end());
  double n = double(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    double f = cdf(sample[i]);
    d = std::max(d, std::max(double(i + 1) / n - f, f - double(i) / n));
  }
  return d;
}

double ks_statistic_discrete(const std::vector<std::int64_t>& sample,
                             const std::vector<double>& cum) {
  if (sample.empty()) throw std::invalid_argument("empty sample");
  std::vector<std::uint64_t> counts(cum.size(), 0);
  for (auto s : sample) {
    std::size_t idx = s < 0 ? 0 : std::min<std::size_t>(std::size_t(s),
                                                        cum.size() - 1);
    ++counts[idx];
  }
  double n = double(sample.size());
  double d = 0.0;
  double running = 0.0;
  for (std::size_t s = 0; s < cum.size(); ++s) {
    running += double(counts[s]);
    d = std::max(d, std::abs(running / n - cum[s]));
  }
  return d;
}

}  // namespace semistable
