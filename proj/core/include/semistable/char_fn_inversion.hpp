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

#include <complex>
#include <functional>
#include <memory>

#include "semistable/semistable_law.hpp"

namespace semistable::law {

/// A distribution presented through its log characteristic function.
struct CfHandle {
  std::function<std::complex<double>(double)> log_cf;
};

CfHandle make_cf(const SemiStableLaw& law);

/// Law of Z + shift.
CfHandle shifted_cf(CfHandle base, double shift);

/// Law of -Z.
CfHandle reflected_cf(CfHandle base);

/// Law of (-1)^{-w} (Z + shift): the comparison transform applied to raw
/// limit laws. Identity shift/sign for even w, reflection for odd w.
CfHandle comparison_cf(const SemiStableLaw& law, double shift, std::int64_t w);

/// The lambda-power family member lambda^{-1/alpha} tau^lambda, as a cf
/// handle t -> exp(lambda log_cf(lambda^{-1/alpha} t)). Requires
/// lambda in [1, c] where c = e^{nu} is the period constant.
CfHandle lambda_power(const SemiStableLaw& law, double lambda);
CfHandle lambda_power(CfHandle base, double lambda, double alpha,
                      double period_c);

/// Gil-Pelaez inversion of a characteristic function:
///   F(x) = 1/2 - (1/pi) int_0^inf Im(e^{-itx} cf(t)) / t dt,
/// integrated with adaptive Gauss-Kronrod panels over dyadic blocks; blocks
/// are appended until both the block contribution and the cf envelope are
/// below tolerance. cf evaluations are memoized across calls, so CDF tables
/// and quantile bisections share the expensive part of the work.
class CdfInverter {
 public:
  struct Options {
    double tol = 1e-6;          // absolute CDF tolerance
    double envelope_tol = 1e-13;  // |cf| level treated as fully decayed
    int max_blocks = 64;
    int max_depth = 40;
  };

  explicit CdfInverter(CfHandle cf, Options opts = {});
  ~CdfInverter();
  CdfInverter(CdfInverter&&) noexcept;
  CdfInverter& operator=(CdfInverter&&) noexcept;

  /// Thread-safe; throws BudgetError when the oscillatory integral cannot
  /// reach tolerance within the block budget.
  double cdf(double x) const;

  /// Quantile by bracket expansion plus bisection on cdf. p in (0,1).
  double quantile(double p) const;

  double achieved_tol() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace semistable::law
