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
#include <string>
#include <utility>
#include <vector>

#include "semistable/errors.hpp"
#include "semistable/rng.hpp"

namespace semistable::dist {

enum class Family { Geometric, NegativeBinomial, Tabulated };

/// Size law of the point process: the p.m.f. of the number of points W,
/// supported on the positive integers. Closed-form families keep their
/// parameters; Tabulated keeps explicit atoms (sorted by support point).
/// Immutable after construction.
class SizePmf {
 public:
  /// f_W(w) = (1-c) c^{w-1}, w >= 1, c in (0,1).
  static SizePmf Geometric(double c);

  /// f_W(w) = C(w-1, r-1) c^{w-r} (1-c)^r, w >= r, integer r >= 1.
  static SizePmf NegativeBinomial(int r, double c);

  /// Explicit atoms; must sum to 1 within 1e-9 unless a positive tail-mass
  /// remainder is declared for the unlisted upper tail.
  static SizePmf Tabulated(std::vector<std::pair<std::int64_t, double>> atoms,
                           double declared_tail_mass = 0.0);

  Family family() const { return family_; }
  double c() const { return c_; }
  int r() const { return r_; }
  double declared_tail_mass() const { return declared_tail_mass_; }
  const std::vector<std::pair<std::int64_t, double>>& atoms() const {
    return atoms_;
  }

  double pmf(std::int64_t w) const;

  /// Largest support point; -1 means unbounded.
  std::int64_t support_max() const;

  /// Materializes f_W(1..w_max) (index 0 unused, kept zero).
  std::vector<double> materialize(std::int64_t w_max) const;

 private:
  SizePmf() = default;
  Family family_ = Family::Tabulated;
  double c_ = 0.0;
  int r_ = 0;
  double declared_tail_mass_ = 0.0;
  std::vector<std::pair<std::int64_t, double>> atoms_;
};

/// c_q = cq / (1 - c(1-q)), the thinned geometric ratio.
double thinned_ratio(double c, double q);

/// The p.m.f. of the thinned size W_q = Bin(W, q), materialized on 0..s_max.
struct SampledPmf {
  double q = 0.0;
  std::vector<double> atoms;  // atoms[s] = f_{W_q}(s)
  double truncation_tol = 0.0;
  std::string source;

  std::int64_t s_max() const { return std::int64_t(atoms.size()) - 1; }
  double at(std::int64_t s) const {
    return (s >= 0 && s < std::int64_t(atoms.size())) ? atoms[std::size_t(s)]
                                                      : 0.0;
  }
};

struct ThinOptions {
  double tol = 1e-12;
  std::int64_t iter_cap = 1'000'000;
};

/// Forward map: exact closed forms for Geometric and NegativeBinomial,
/// log-space series for Tabulated. q = 1 is identity thinning; q = 0 is
/// rejected (W_q would be identically zero and the inversion undefined).
SampledPmf thin_pmf(const SizePmf& f_w, double q, std::int64_t s_max,
                    const ThinOptions& opts = {});

/// Two-stage sampler: W from f_W by inverse CDF, then Bin(W, q).
/// Draw i depends only on (seed.master_seed, seed.stream_index, i).
std::vector<std::int64_t> sample_wq(const SizePmf& f_w, double q,
                                    const RngSeed& seed, std::int64_t count);

/// P(W_q / 2 >= x, W_q even) by brute-force atom summation.
/// Throws BudgetError when the materialized support cannot certify the value
/// to its truncation tolerance.
double even_tail(const SampledPmf& f_wq, double x);

/// P((W_q - 1) / 2 >= x, W_q odd), same contract.
double odd_tail(const SampledPmf& f_wq, double x);

/// Closed-form tails for the analytic families (geometric in closed form,
/// negative binomial via its tail series).
double even_tail(const SizePmf& f_w, double q, double x);
double odd_tail(const SizePmf& f_w, double q, double x);

/// P(W_q > s), with full relative precision deep into the tail (no
/// 1 - cumsum cancellation).
double thinned_tail_above(const SizePmf& f_w, double q, std::int64_t s);

/// The tail structure (nu, h1, h2, c1) required by the attraction theorem:
///   P(W_q/2 >= x, even)      = h1(ceil x) e^{-nu ceil x}
///   P((W_q-1)/2 >= x, odd)   = h2(ceil x) e^{-nu ceil x},  h2/h1 -> c1.
struct TailDecomposition {
  double nu = 0.0;
  double c1 = 0.0;
  std::function<double(std::int64_t)> h1_at;
  std::function<double(std::int64_t)> h2_at;

  enum class Exactness { ClosedForm, SeriesTruncated };
  Exactness exactness = Exactness::ClosedForm;
  double series_tol = 0.0;

  /// True when nu was estimated by log-tail regression rather than derived
  /// from a closed form. Regression mode is a best-effort extension for
  /// tabulated inputs and is flagged in all reports.
  bool numeric_mode = false;
  double regression_r2 = 1.0;
};

struct TailDecompOptions {
  double series_tol = 1e-12;
  std::int64_t iter_cap = 1'000'000;
  double min_r2 = 0.999;
};

/// Geometric / NegativeBinomial: exact decomposition. Tabulated: regression
/// on log even-tails; throws OutOfTheoryError when the decay is not
/// geometric (R^2 below threshold) or the support is too short.
TailDecomposition extract_tail_decomposition(const SizePmf& f_w, double q,
                                             const TailDecompOptions& opts = {});

/// Finiteness of sum_w C(w,n) 2^{w-n} (1-q)^{w-n} f_W(w), the condition under
/// which the series inversion of the thinning map is valid.
SumOutcome check_inversion_condition(const SizePmf& f_w, double q,
                                     std::int64_t n,
                                     std::int64_t iter_cap = 1'000'000);

}  // namespace semistable::dist
