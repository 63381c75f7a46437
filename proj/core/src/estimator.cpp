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

#include "semistable/estimator.hpp"

#include <algorithm>
#include <cmath>

#include "semistable/numeric.hpp"

namespace semistable::est {

void EstimatorInput::validate() const {
  if (samples.empty()) throw std::invalid_argument("need at least one sample");
  if (!(q > 0.0 && q < 1.0)) {
    throw std::invalid_argument("estimator requires q in (0,1)");
  }
  if (w < 1) throw std::invalid_argument("target size w must be >= 1");
  for (auto s : samples) {
    if (s < 0) throw std::invalid_argument("samples must be nonnegative");
  }
}

double summand(std::int64_t s, double q, std::int64_t w) {
  if (s < w) return 0.0;
  double log_abs = log_binomial(s, w) - double(s) * std::log(q) +
                   double(s - w) * std::log1p(-q);
  int sign = ((s - w) % 2 == 0) ? 1 : -1;
  return sign * std::exp(log_abs);
}

namespace {

// Shared magnitude-ordered compensated accumulation of count-weighted
// summands. Index i of `weights` corresponds to sample value s = i.
double accumulate_summands(const std::vector<double>& weights, double q,
                           std::int64_t w, double denom) {
  struct Term {
    double abs_val;
    double signed_val;
  };
  std::vector<Term> terms;
  terms.reserve(weights.size());
  for (std::size_t s = 0; s < weights.size(); ++s) {
    if (weights[s] == 0.0) continue;
    double x = summand(std::int64_t(s), q, w);
    if (x == 0.0) continue;
    double t = weights[s] * x;
    terms.push_back({std::abs(t), t});
  }
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return a.abs_val < b.abs_val; });
  CompensatedSum sum;
  for (const auto& t : terms) sum.add(t.signed_val);
  return sum.value() / denom;
}

}  // namespace

double estimate_fw(const EstimatorInput& input) {
  input.validate();
  std::int64_t s_max = *std::max_element(input.samples.begin(),
                                         input.samples.end());
  std::vector<double> counts(std::size_t(s_max) + 1, 0.0);
  for (auto s : input.samples) counts[std::size_t(s)] += 1.0;
  return accumulate_summands(counts, input.q, input.w,
                             double(input.samples.size()));
}

double estimate_fw_from_histogram(const std::vector<std::uint64_t>& histogram,
                                  double q, std::int64_t w, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("need at least one sample");
  std::vector<double> counts(histogram.size());
  for (std::size_t s = 0; s < histogram.size(); ++s) {
    counts[s] = double(histogram[s]);
  }
  return accumulate_summands(counts, q, w, double(n));
}

double invert_pmf(const SampledPmf& f_wq, std::int64_t w, double tol) {
  if (w < 1) throw std::invalid_argument("target size w must be >= 1");
  double q = f_wq.q;
  CompensatedSum sum;
  double prev_abs = std::numeric_limits<double>::infinity();
  int decreasing_streak = 0;
  int increasing_streak = 0;
  for (std::int64_t s = w; s <= f_wq.s_max(); ++s) {
    double term = summand(s, q, w) * f_wq.at(s);
    sum.add(term);
    double a = std::abs(term);
    if (a < prev_abs) {
      ++decreasing_streak;
      increasing_streak = 0;
    } else if (a > prev_abs) {
      increasing_streak += 1;
      decreasing_streak = 0;
    }
    prev_abs = a;
    if (a < tol && decreasing_streak >= 5) return sum.value();
    if (increasing_streak >= 25 && a > 1.0) {
      throw DivergenceError(
          "inversion series diverges; the series-inversion condition fails "
          "for these parameters");
    }
  }
  if (prev_abs < tol) return sum.value();
  throw BudgetError("inversion series not converged within available support",
                    prev_abs);
}

SumOutcome compute_rqw(const dist::SizePmf& f_w, double q, std::int64_t w,
                       const RqwOptions& opts) {
  if (w < 1) throw std::invalid_argument("target size w must be >= 1");
  if (!(q > 0.0 && q < 1.0)) {
    throw std::invalid_argument("R_{q,w} requires q in (0,1)");
  }
  using dist::Family;
  double c = f_w.c();

  if (f_w.family() == Family::Geometric) {
    if (c >= q / (1.0 - q)) return SumOutcome::diverges();
    double rho = (1.0 / q - 1.0) * c * (1.0 - q) / (1.0 - c * (1.0 - q));
    double d_w = ((1.0 - c) / c) * std::pow(1.0 - q, -2.0 * double(w)) /
                 (1.0 - c * (1.0 - q));
    CompensatedSum sum;
    double log_rho = std::log(rho);
    for (std::int64_t s = w; s <= opts.iter_cap; ++s) {
      double term = std::exp(2.0 * log_binomial(s, w) + double(s) * log_rho);
      sum.add(term);
      if (term < opts.tol * std::max(sum.value(), 1e-300) && s > 4 * w + 16) {
        return SumOutcome::finite(d_w * sum.value());
      }
    }
    return SumOutcome::inconclusive();
  }

  // General route: first form of the variance functional,
  //   sum_s C(s,w)^2 (1-q)^{2(s-w)} q^{-2s} f_{W_q}(s),
  // with a ratio test against the geometric tail of f_{W_q}.
  if (f_w.family() == Family::NegativeBinomial) {
    double rho = (1.0 / q - 1.0) * c * (1.0 - q) / (1.0 - c * (1.0 - q));
    if (rho >= 1.0) return SumOutcome::diverges();
  }
  std::int64_t s_hi = f_w.support_max() > 0
                          ? f_w.support_max()
                          : std::max<std::int64_t>(512, 8 * w);
  auto thinned = dist::thin_pmf(f_w, q, s_hi);
  double log_q = std::log(q);
  double log_1mq = std::log1p(-q);
  CompensatedSum sum;
  double prev_term = 0.0;
  for (std::int64_t s = w; s <= opts.iter_cap; ++s) {
    if (s > thinned.s_max()) {
      if (f_w.support_max() > 0) break;  // finite support exhausted
      s_hi *= 2;
      thinned = dist::thin_pmf(f_w, q, s_hi);
    }
    double term = std::exp(2.0 * log_binomial(s, w) +
                           2.0 * double(s - w) * log_1mq -
                           2.0 * double(s) * log_q) *
                  thinned.at(s);
    sum.add(term);
    if (prev_term > 0.0 && term >= prev_term && s > 8 * w + 32 && term > 1.0) {
      return SumOutcome::diverges();
    }
    if (term < opts.tol * std::max(sum.value(), 1e-300) && s > 4 * w + 16) {
      return SumOutcome::finite(sum.value());
    }
    prev_term = term;
  }
  if (f_w.support_max() > 0) return SumOutcome::finite(sum.value());
  return SumOutcome::inconclusive();
}

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::GaussianCLT: return "GaussianCLT";
    case Regime::SemiStable01: return "SemiStable01";
    case Regime::SemiStable12: return "SemiStable12";
    case Regime::Boundary: return "Boundary";
    case Regime::OutOfTheory: return "OutOfTheory";
  }
  return "?";
}

RegimeReport classify_regime(const dist::SizePmf& f_w, double q,
                             std::int64_t w) {
  if (!(q > 0.0 && q < 1.0)) {
    throw std::invalid_argument("regime classification requires q in (0,1)");
  }
  RegimeReport rep;
  rep.beta = std::log(1.0 / q - 1.0);
  rep.r_qw = compute_rqw(f_w, q, w);

  constexpr double kBoundaryTol = 1e-9;

  if (q >= 0.5) {
    // beta <= 0: no semi-stable regime exists. The closed-form families are
    // always Gaussian here.
    rep.regime = rep.r_qw.is_finite() ? Regime::GaussianCLT
                                      : Regime::OutOfTheory;
    return rep;
  }

  dist::TailDecomposition taildec;
  try {
    taildec = dist::extract_tail_decomposition(f_w, q);
  } catch (const OutOfTheoryError&) {
    rep.regime =
        rep.r_qw.is_finite() ? Regime::GaussianCLT : Regime::OutOfTheory;
    return rep;
  }
  rep.nu = taildec.nu;
  rep.c1 = taildec.c1;
  rep.numeric_tail_mode = taildec.numeric_mode;
  double alpha = taildec.nu / (2.0 * rep.beta);
  rep.alpha = alpha;

  bool endpoint = false;
  if (f_w.family() != dist::Family::Tabulated) {
    double c = f_w.c();
    endpoint = c == q / (1.0 - q) || c == 1.0 / (2.0 * (1.0 - q));
  }
  if (endpoint || std::abs(alpha - 1.0) < kBoundaryTol ||
      std::abs(alpha - 2.0) < kBoundaryTol) {
    rep.regime = Regime::Boundary;
  } else if (rep.r_qw.is_finite()) {
    rep.regime = Regime::GaussianCLT;
  } else if (alpha > 0.0 && alpha < 1.0) {
    rep.regime = Regime::SemiStable01;
  } else if (alpha > 1.0 && alpha < 2.0) {
    rep.regime = Regime::SemiStable12;
  } else {
    rep.regime = Regime::OutOfTheory;
  }
  return rep;
}

}  // namespace semistable::est
