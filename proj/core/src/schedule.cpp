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

#include "semistable/schedule.hpp"

#include <algorithm>
#include <cmath>

#include "semistable/estimator.hpp"
#include "semistable/numeric.hpp"

namespace semistable::law {

const ScheduleLevel& Schedule::at_n(int n) const {
  for (const auto& l : levels) {
    if (l.n == n) return l;
  }
  throw std::out_of_range("schedule has no such level");
}

double log_a_kn(int n, double q, std::int64_t w) {
  if (n < 1) throw std::invalid_argument("level must be >= 1");
  return log_binomial(2 * n - 2, w) - double(w) * std::log1p(-q) +
         double(2 * n - 2) * std::log(1.0 / q - 1.0);
}

double log_a_general(int n, double beta, double log_slowly_varying) {
  return 2.0 * beta * double(n - 1) + log_slowly_varying;
}

std::optional<std::uint64_t> k_level(int n,
                                     const dist::TailDecomposition& td) {
  long double log_k = (long double)(n - 1) * (long double)td.nu -
                      std::log((long double)td.h1_at(n - 1));
  if (log_k > 42.7L) return std::nullopt;  // e^{42.8} > 2^63
  long double k = std::ceil(std::exp(log_k));
  if (k < 1.0L) k = 1.0L;
  return std::uint64_t(k);
}

Schedule build_schedule(const dist::SizePmf& f_w,
                        const dist::TailDecomposition& taildec, double q,
                        std::int64_t w, int n_max,
                        const ScheduleOptions& opts) {
  if (n_max < 0) throw std::invalid_argument("n_max must be >= 0");
  if (w < 1) throw std::invalid_argument("target size w must be >= 1");
  Schedule out;
  out.nu = taildec.nu;
  out.beta = std::log(1.0 / q - 1.0);
  out.q = q;
  out.w = w;
  for (int n = 1; n <= n_max; ++n) {
    auto k = k_level(n, taildec);
    if (!k) break;  // beyond 64-bit range; deeper levels are infeasible
    if (*k > opts.budget) {
      ++out.omitted_levels;
      continue;
    }
    ScheduleLevel level;
    level.n = n;
    level.k = *k;
    level.log_a = log_a_kn(n, q, w);
    level.a = std::exp(level.log_a);
    if (opts.with_centering) {
      level.b = compute_b_kn(f_w, q, w, *k, opts.centering_tail_factor);
      level.b_computed = true;
    }
    out.levels.push_back(level);
  }
  return out;
}

double compute_b_kn(const dist::SizePmf& f_w, double q, std::int64_t w,
                    std::uint64_t k_n, double tail_factor) {
  if (k_n < 2) throw std::invalid_argument("centering requires k_n >= 2");
  if (double(k_n) > 4e15) {
    throw std::invalid_argument(
        "k_n too large for exact trim-window arithmetic in double");
  }
  double tail_target = 1.0 / (tail_factor * double(k_n));

  // Enumerated support: s = 0..s_max with P(W_q > s_max) below target.
  std::int64_t s_max = std::max<std::int64_t>(2 * w + 2, 8);
  std::int64_t hard_cap = 4'000'000;
  while (dist::thinned_tail_above(f_w, q, s_max) >= tail_target) {
    ++s_max;
    if (s_max > hard_cap) {
      throw BudgetError("summand support extension exceeded budget",
                        dist::thinned_tail_above(f_w, q, s_max - 1));
    }
  }
  auto thinned = dist::thin_pmf(f_w, q, s_max);

  // The un-enumerated tail splits by the parity of s into an extreme
  // negative part and an extreme positive part; in quantile coordinates the
  // negative part sits below every enumerated plateau. Its exact mass is a
  // parity tail of W_q.
  auto parity_tail_above = [&](std::int64_t s_lo, bool odd_s) {
    // sum of f_{W_q}(s) over s > s_lo with the given parity
    std::int64_t first = s_lo + 1;
    if ((first % 2 == 1) != odd_s) ++first;
    if (odd_s) {
      return dist::odd_tail(f_w, q, double((first - 1) / 2));
    }
    return dist::even_tail(f_w, q, double(first / 2));
  };
  // Negative summand values have odd s - w.
  bool neg_parity_odd_s = (w % 2 == 0);
  double missing_negative = 0.0;
  if (f_w.support_max() < 0) {
    missing_negative = parity_tail_above(s_max, neg_parity_odd_s);
  }

  std::vector<std::pair<double, double>> atoms;
  atoms.reserve(std::size_t(s_max) + 1);
  double zero_mass = 0.0;
  for (std::int64_t s = 0; s <= s_max; ++s) {
    double p = thinned.at(s);
    if (p <= 0.0) continue;
    if (s < w) {
      zero_mass += p;
    } else {
      atoms.emplace_back(est::summand(s, q, w), p);
    }
  }
  atoms.emplace_back(0.0, zero_mass);

  double total = missing_negative;
  for (const auto& [v, p] : atoms) total += p;
  double missing_positive = std::max(0.0, 1.0 - total);
  return trimmed_quantile_integral(std::move(atoms), missing_negative,
                                   missing_positive, k_n);
}

double trimmed_quantile_integral(
    std::vector<std::pair<double, double>> atoms, double missing_negative,
    double missing_positive, std::uint64_t k_n) {
  if (k_n < 2) throw std::invalid_argument("trim window requires k_n >= 2");
  std::sort(atoms.begin(), atoms.end());

  // Suffix masses in extended precision for the backward coordinate: each
  // plateau is clipped as overlap = prob - cut_left - cut_right, so neither
  // trim boundary is ever formed by subtraction from 1.
  std::vector<long double> suffix(atoms.size() + 1, 0.0L);
  for (std::size_t i = atoms.size(); i-- > 0;) {
    suffix[i] = suffix[i + 1] + (long double)atoms[i].second;
  }

  double trim = 1.0 / double(k_n);
  CompensatedSum integral;
  long double prefix = (long double)missing_negative;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    double lo = double(prefix);
    double tail_above = double(suffix[i + 1]) + missing_positive;
    double cut_left = std::max(0.0, trim - lo);
    double cut_right = std::max(0.0, trim - tail_above);
    double overlap = atoms[i].second - cut_left - cut_right;
    if (overlap > 0.0) integral.add(atoms[i].first * overlap);
    prefix += (long double)atoms[i].second;
  }
  return double(k_n) * integral.value();
}

}  // namespace semistable::law
