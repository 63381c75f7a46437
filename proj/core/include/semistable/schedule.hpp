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

#include "semistable/size_pmf.hpp"

namespace semistable::law {

/// One level of the subsequence along which the normalized estimator
/// converges: sample size k_n, scale A_{k_n}, centering B_{k_n}.
struct ScheduleLevel {
  int n = 0;
  std::uint64_t k = 0;
  double log_a = 0.0;
  double a = 0.0;
  double b = 0.0;
  bool b_computed = false;
};

struct Schedule {
  std::vector<ScheduleLevel> levels;
  double nu = 0.0;
  double beta = 0.0;
  double q = 0.0;
  std::int64_t w = 0;
  int omitted_levels = 0;  // levels whose k_n exceeded the budget

  const ScheduleLevel& at_n(int n) const;
};

/// log A_{k_n} = log C(2n-2, w) - w log(1-q) + (2n-2) log(q^{-1} - 1),
/// the scale constant of the estimator's summand sequence.
double log_a_kn(int n, double q, std::int64_t w);

/// Scale constant for a general slowly varying factor:
/// log A_{k_n} = 2 beta (n-1) + log L(e^{2n-2}).
double log_a_general(int n, double beta, double log_slowly_varying);

/// k_n = ceil(e^{(n-1) nu} / h1(n-1)), evaluated in extended precision.
/// Returns nothing when k_n is not representable in 64 bits.
std::optional<std::uint64_t> k_level(int n, const dist::TailDecomposition& td);

struct ScheduleOptions {
  std::uint64_t budget = 100'000'000;  // levels with k_n beyond it are omitted
  bool with_centering = true;          // fill B_{k_n}
  double centering_tail_factor = 10.0;  // enumerate atoms until tail < 1/(f k)
};

/// Levels 1..n_max. Levels above the budget are omitted (counted in
/// omitted_levels); levels whose k_n exceeds 64-bit range end the schedule.
Schedule build_schedule(const dist::SizePmf& f_w,
                        const dist::TailDecomposition& taildec, double q,
                        std::int64_t w, int n_max,
                        const ScheduleOptions& opts = {});

/// B_{k_n} = k_n * integral of the quantile function of the summand law over
/// [1/k_n, 1 - 1/k_n], computed exactly: the summand takes finitely many
/// values on the enumerated support, the missing tail mass is placed by its
/// exact sign (closed-form parity tails), and each quantile plateau is
/// clipped against the trim window in forward/backward coordinates so no
/// near-1 cancellation occurs.
double compute_b_kn(const dist::SizePmf& f_w, double q, std::int64_t w,
                    std::uint64_t k_n, double tail_factor = 10.0);

/// k * integral over [1/k, 1-1/k] of the quantile function of a finite
/// discrete law given as (value, probability) atoms, with optional
/// un-enumerated mass pinned below/above every atom.
double trimmed_quantile_integral(
    std::vector<std::pair<double, double>> value_prob_atoms,
    double missing_negative, double missing_positive, std::uint64_t k_n);

}  // namespace semistable::law
