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
#include <optional>
#include <vector>

#include "semistable/errors.hpp"
#include "semistable/size_pmf.hpp"

namespace semistable::est {

/// Observed thinned sizes plus the sampling parameters of the run.
struct EstimatorInput {
  std::vector<std::int64_t> samples;  // W_q^{(i)}, zeros included
  double q = 0.0;                     // in (0,1)
  std::int64_t w = 1;                 // target size, >= 1

  void validate() const;
};

/// Summand of the inversion estimator:
///   X = C(s, w) (-1)^{s-w} q^{-s} (1-q)^{s-w}  for s >= w, else 0.
/// Computed in log space with the sign tracked separately.
double summand(std::int64_t s, double q, std::int64_t w);

/// f_hat_W(w) = (1/N) sum_i X_i. Terms are grouped by sample value and
/// accumulated smallest-magnitude first under compensated summation; they
/// alternate in sign and span hundreds of orders of magnitude.
double estimate_fw(const EstimatorInput& input);

/// Same estimator from a precomputed histogram of sample values
/// (histogram[s] = #{i : W_q^{(i)} = s}), n = total count.
double estimate_fw_from_histogram(const std::vector<std::uint64_t>& histogram,
                                  double q, std::int64_t w, std::uint64_t n);

/// Series inversion of the thinning map applied to an explicit p.m.f.
/// Truncates once the alternating-term envelope drops below `tol` and has
/// been decreasing for five consecutive terms. Throws DivergenceError when
/// the envelope grows instead (the inversion condition fails).
double invert_pmf(const SampledPmf& f_wq, std::int64_t w, double tol = 1e-12);

struct RqwOptions {
  double tol = 1e-14;
  std::int64_t iter_cap = 1'000'000;
};

/// The variance functional R_{q,w}. Finite iff the estimator is in the
/// Gaussian regime; for the geometric family the closed-form criterion is
/// c < q/(1-q) and the value comes from the closed-form series.
SumOutcome compute_rqw(const dist::SizePmf& f_w, double q, std::int64_t w,
                       const RqwOptions& opts = {});

enum class Regime {
  GaussianCLT,
  SemiStable01,
  SemiStable12,
  Boundary,
  OutOfTheory,
};

const char* regime_name(Regime r);

struct RegimeReport {
  std::optional<double> alpha;  // nu / (2 beta) when the tail decomposes
  double beta = 0.0;            // log(q^{-1} - 1)
  Regime regime = Regime::OutOfTheory;
  SumOutcome r_qw;
  double nu = 0.0;
  double c1 = 0.0;
  bool numeric_tail_mode = false;
};

/// Decides which limit theory applies at (f_W, q, w): the Gaussian CLT when
/// R_{q,w} is finite, one of the two semi-stable regimes otherwise, with
/// boundary alphas (1 and 2, tolerance 1e-9) reported explicitly rather than
/// silently bucketed.
RegimeReport classify_regime(const dist::SizePmf& f_w, double q,
                             std::int64_t w);

}  // namespace semistable::est
