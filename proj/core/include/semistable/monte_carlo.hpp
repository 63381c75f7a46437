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
#include <string>
#include <vector>

#include "semistable/char_fn_inversion.hpp"
#include "semistable/estimator.hpp"
#include "semistable/schedule.hpp"
#include "semistable/semistable_law.hpp"
#include "semistable/size_pmf.hpp"

namespace semistable::mc {

/// Direct sampler of the thinned size W_q; closed-form inversion for the
/// analytic families, cumulative lookup for tabulated ones. Identical in
/// distribution to two-stage sampling but O(1) per draw.
class ThinnedSampler {
 public:
  ThinnedSampler(const dist::SizePmf& f_w, double q);
  std::int64_t sample(Rng& rng) const;

 private:
  dist::Family family_;
  int r_ = 1;
  double zero_prob_ = 0.0;
  double cq_ = 0.0;
  std::vector<double> cum_;  // tabulated route
};

struct McConfig {
  dist::SizePmf f_w = dist::SizePmf::Geometric(0.5);
  double q = 0.3;
  std::int64_t w = 1;
  std::vector<int> levels;
  std::int64_t replicates = 100;
  std::vector<std::uint64_t> off_subsequence_ns;
  std::uint64_t master_seed = 1;
  double comparison_tol = 1e-6;
  std::uint64_t budget = 10'000'000;  // largest k_n simulated by default
  int threads = 0;                    // 0 = hardware concurrency

  void validate() const;
};

/// Shared comparison context: the limit law Y, its CDF inverter, and the
/// centering shift. The comparison transform (zeta shift and the (-1)^{-w}
/// sign) is applied to evaluation points here, never to stored statistics.
struct McContext {
  law::SemiStableLaw law;
  law::CdfInverter inverter;
  double zeta;

  explicit McContext(const law::SemiStableLaw& l,
                     law::CdfInverter::Options opts = {})
      : law(l), inverter(law::make_cf(l), opts), zeta(l.zeta()) {}

  /// CDF of (-1)^{-w} (Y + zeta).
  double comparison_cdf(double x, std::int64_t w) const;
};

/// One subsequence level: draws N = k_n thinned samples per replicate and
/// emits the normalized statistic, d_N (f_hat - f) for alpha in (1,2) and
/// d_N f_hat for alpha in (0,1), with d_N = k_n / A_{k_n}.
std::vector<double> run_level(const McConfig& config, const Schedule& schedule,
                              int n, est::Regime regime);

/// Two-sided KS distance between the level statistics and the theoretical
/// CDF of (-1)^{-w} (Y + zeta).
double ks_compare(const std::vector<double>& stats, const McContext& ctx,
                  std::int64_t w);

/// Empirical Var(sqrt(N)(f_hat - f)) / (R_{q,w} - f_W(w)^2) in the Gaussian
/// regime. Requires R_{q,w} finite.
double gaussian_regime_check(const dist::SizePmf& f_w, double q,
                             std::int64_t w, std::int64_t n_samples,
                             std::int64_t replicates, std::uint64_t seed,
                             int threads = 0);

struct LevelReport {
  int n = 0;
  std::uint64_t k = 0;
  double ks = 0.0;
  double stat_mean = 0.0;
  double stat_median = 0.0;
  double mc_standard_error = 0.0;  // KS sampling scale 1/sqrt(replicates)
};

struct ProbeRow {
  std::uint64_t n_samples = 0;
  int p_n = 0;
  double lambda = 0.0;
  double ks_lambda1 = 0.0;
  double ks_best = 0.0;
  double lambda_best = 0.0;
  // Tail-envelope diagnostic at a fixed threshold: empirical tail
  // probability, its 3-sigma MC allowance, and sup over the lambda grid of
  // the theoretical tails.
  double tail_x = 0.0;
  double tail_empirical = 0.0;
  double tail_mc_allowance = 0.0;
  double tail_sup_theoretical = 0.0;
};

struct McReport {
  std::vector<LevelReport> levels;
  std::vector<ProbeRow> probes;
  std::string regime;
  double alpha = 0.0;
  double zeta = 0.0;
  std::uint64_t master_seed = 0;
  bool partial = false;  // some requested levels exceeded the budget
};

/// Full replicate experiment over config.levels plus off-subsequence probes.
McReport run_experiment(const McConfig& config,
                        std::vector<std::vector<double>>* raw_stats = nullptr);

/// Off-subsequence diagnostics: normalizes N-sample sums with the
/// stochastic-compactness constants a_N, b_N and reports KS distances to the
/// nearest member of the lambda-power family (quantile centering, so the
/// reference family consists of lambda powers of (-1)^{-w} Y).
std::vector<ProbeRow> compactness_probe(const McConfig& config,
                                        const Schedule& schedule,
                                        const McContext& ctx,
                                        int lambda_grid = 21);

}  // namespace semistable::mc
