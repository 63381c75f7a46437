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

#include "semistable/numeric.hpp"

#include <limits>
#include <stdexcept>

namespace semistable {

double log_binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < 0 || k > n) return -std::numeric_limits<double>::infinity();
  if (k == 0 || k == n) return 0.0;
  return std::lgamma(double(n) + 1.0) - std::lgamma(double(k) + 1.0) -
         std::lgamma(double(n - k) + 1.0);
}

namespace {
bool near_integer(double u, double snap, std::int64_t* out) {
  double r = std::nearbyint(u);
  if (std::abs(u - r) <= snap * std::max(1.0, std::abs(u))) {
    *out = static_cast<std::int64_t>(r);
    return true;
  }
  return false;
}
}  // namespace

std::int64_t floor_snapped(double u, double snap) {
  std::int64_t r;
  if (near_integer(u, snap, &r)) return r;
  return static_cast<std::int64_t>(std::floor(u));
}

std::int64_t ceil_snapped(double u, double snap) {
  std::int64_t r;
  if (near_integer(u, snap, &r)) return r;
  return static_cast<std::int64_t>(std::ceil(u));
}

std::int64_t ceil_strict_snapped(double u, double snap) {
  return floor_snapped(u, snap) + 1;
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("fit_line: need two equal-length series");
  }
  double n = double(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return f;
}

double rel_diff(double a, double b, double floor) {
  double scale = std::max({std::abs(a), std::abs(b), floor});
  return std::abs(a - b) / scale;
}

}  // namespace semistable
