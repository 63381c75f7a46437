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

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace semistable {

/// Neumaier variant of Kahan summation. Terms with alternating signs and
/// widely spread magnitudes occur throughout the estimator; plain summation
/// loses all significant digits there.
class CompensatedSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// log C(n, k); -inf when the coefficient is zero.
double log_binomial(std::int64_t n, std::int64_t k);

/// A real number kept as sign and log of absolute value, for products such as
/// C(s,w) q^{-s} (1-q)^{s-w} that overflow double near s ~ 700.
struct SignedLog {
  double log_abs = -std::numeric_limits<double>::infinity();
  int sign = 0;

  static SignedLog from(double x) {
    if (x == 0.0) return {};
    return {std::log(std::abs(x)), x > 0 ? 1 : -1};
  }
  SignedLog operator*(const SignedLog& o) const {
    if (sign == 0 || o.sign == 0) return {};
    return {log_abs + o.log_abs, sign * o.sign};
  }
  double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }
};

// Integer-part and ceiling variants with snapping. The Levy-tail functions of
// the limit law are discontinuous exactly at multiplicative period boundaries,
// where log(x)/(2*beta) is an integer; an argument within `snap` of an integer
// is treated as that integer so float noise cannot flip the branch.

/// Largest integer <= u.
std::int64_t floor_snapped(double u, double snap = 1e-12);

/// Smallest integer >= u.
std::int64_t ceil_snapped(double u, double snap = 1e-12);

/// Smallest integer strictly greater than u (right-continuous ceiling),
/// equal to floor(u) + 1.
std::int64_t ceil_strict_snapped(double u, double snap = 1e-12);

/// Ordinary-least-squares fit of y against x. Returns (slope, intercept, r2).
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// |a - b| / max(|a|, |b|, floor); guards relative comparisons near zero.
double rel_diff(double a, double b, double floor = 1e-300);

}  // namespace semistable
