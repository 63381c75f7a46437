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
#include <cstdint>
#include <vector>

#include "semistable/errors.hpp"

namespace semistable::law {

// The limiting laws handled here are infinitely divisible with a purely
// atomic Levy measure without Gaussian part. Writing u = log(x)/(2 beta),
// the tail functions
//   M_R(x)  = exp(-nu (ceil+(u) - u)),          x > 0,
//   M_L(-x) = c1 exp(-nu (floor(1/2 + u) - u)), x > 0,
// are multiplicatively periodic with period e^{2 beta}, and the Levy tails
// M_R(x)/x^alpha, M_L(-x)/x^alpha are piecewise constant. The jumps sit at
// x = e^{2 beta m} (positive axis) and -e^{beta (2m+1)} (negative axis).

double m_r(double x, double nu, double beta);
double m_l_neg(double x, double nu, double beta, double c1);

/// Levy mass of (x, infinity), equal to -R(x) = M_R(x) / x^alpha.
double levy_tail_positive(double x, double nu, double beta);

/// Levy mass of (-infinity, -x), equal to L(-x) = M_L(-x) / x^alpha.
double levy_tail_negative(double x, double nu, double beta, double c1);

struct LevyAtom {
  double x = 0.0;     // jump position, nonzero
  double mass = 0.0;  // Levy measure of the atom, positive
};

struct AtomWindow {
  int m_min = -60;
  int m_max = 60;
};

/// Atoms of the Levy measure inside the index window:
///   positive side: (e^{2 beta m},        e^{-nu m} (1 - e^{-nu}))
///   negative side: (-e^{beta (2m + 1)},  c1 e^{-nu m} (1 - e^{-nu})).
/// The atomization is cross-checked against jump-differencing of the tail
/// functions in the test suite before anything else relies on it.
std::vector<LevyAtom> levy_atoms(double nu, double beta, double c1,
                                 const AtomWindow& window);

/// Limit of B_{k_n} / A_{k_n}: the shift separating the quantile-centered
/// partial sums from the mean-centered ones. The two ceil(log(c1)/nu) terms
/// vanish in the c1 -> 0 limit, which is what this returns at c1 = 0.
double zeta(double nu, double beta, double c1);

/// Location parameter of the limit law: eta = Theta(psi_1) - Theta(psi_2),
/// where psi_i are the generalized inverses of the Levy tail functions.
/// Both functions are steps over geometric plateaus, so the integrals reduce
/// to plateau sums with analytically bounded tails.
double location_eta(double nu, double beta, double c1, double tol = 1e-10);

struct LawOptions {
  AtomWindow window;
  /// The window is grown until the neglected Levy tails perturb the
  /// characteristic function by less than cf_tail_tol at |t| <= t_max.
  double cf_tail_tol = 1e-10;
  double t_max = 1e4;
};

/// The full limit-law object: parameters, centering shift, location, and the
/// materialized Levy atoms. Immutable; evaluations are pure.
class SemiStableLaw {
 public:
  SemiStableLaw(double nu, double beta, double c1,
                const LawOptions& opts = {});

  double alpha() const { return alpha_; }
  double nu() const { return nu_; }
  double beta() const { return beta_; }
  double c1() const { return c1_; }
  /// Multiplicative period constant c = e^{nu}; the M-functions have
  /// multiplicative period c^{1/alpha} = e^{2 beta}.
  double period_c() const { return std::exp(nu_); }
  double zeta() const { return zeta_; }
  double eta() const { return eta_; }
  const std::vector<LevyAtom>& atoms() const { return atoms_; }
  const AtomWindow& window() const { return window_; }

  /// log E e^{itY} = i eta t + sum_atoms mass (e^{itx} - 1 - itx/(1+x^2)).
  std::complex<double> log_cf(double t) const;

  /// Levy variance proxies used by the sampler and window sizing.
  double small_jump_variance_below(double eps) const;

 private:
  double nu_, beta_, c1_, alpha_, zeta_, eta_;
  AtomWindow window_;
  std::vector<LevyAtom> atoms_;
};

}  // namespace semistable::law
