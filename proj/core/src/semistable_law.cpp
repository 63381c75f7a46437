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

#include "semistable/semistable_law.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "semistable/numeric.hpp"

namespace semistable::law {

namespace {

void check_parameters(double nu, double beta, double c1) {
  if (!(nu > 0.0)) throw std::invalid_argument("nu must be > 0");
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be > 0");
  if (!(c1 >= 0.0)) throw std::invalid_argument("c1 must be >= 0");
  double alpha = nu / (2.0 * beta);
  if (!(alpha > 0.0 && alpha < 2.0)) {
    throw std::invalid_argument("alpha = nu/(2 beta) must lie in (0,2)");
  }
}

void check_alpha_not_one(double nu, double beta) {
  if (std::abs(nu - 2.0 * beta) <= 1e-12 * std::max(nu, 2.0 * beta)) {
    throw OutOfTheoryError("alpha = 1 is not supported");
  }
}

}  // namespace

double m_r(double x, double nu, double beta) {
  if (!(x > 0.0)) throw std::invalid_argument("m_r requires x > 0");
  double u = std::log(x) / (2.0 * beta);
  double gap = double(ceil_strict_snapped(u)) - u;
  return std::exp(-nu * gap);
}

double m_l_neg(double x, double nu, double beta, double c1) {
  if (!(x > 0.0)) throw std::invalid_argument("m_l_neg requires x > 0");
  double u = std::log(x) / (2.0 * beta);
  double gap = double(floor_snapped(0.5 + u)) - u;
  return c1 * std::exp(-nu * gap);
}

double levy_tail_positive(double x, double nu, double beta) {
  if (!(x > 0.0)) throw std::invalid_argument("tail requires x > 0");
  double u = std::log(x) / (2.0 * beta);
  return std::exp(-nu * double(ceil_strict_snapped(u)));
}

double levy_tail_negative(double x, double nu, double beta, double c1) {
  if (!(x > 0.0)) throw std::invalid_argument("tail requires x > 0");
  double u = std::log(x) / (2.0 * beta);
  return c1 * std::exp(-nu * double(floor_snapped(0.5 + u)));
}

std::vector<LevyAtom> levy_atoms(double nu, double beta, double c1,
                                 const AtomWindow& window) {
  check_parameters(nu, beta, c1);
  if (window.m_min > window.m_max) {
    throw std::invalid_argument("atom window is empty");
  }
  std::vector<LevyAtom> atoms;
  atoms.reserve(2 * std::size_t(window.m_max - window.m_min + 1));
  double jump_scale = -std::expm1(-nu);  // 1 - e^{-nu}
  for (int m = window.m_min; m <= window.m_max; ++m) {
    double mass = std::exp(-nu * double(m)) * jump_scale;
    atoms.push_back({std::exp(2.0 * beta * double(m)), mass});
    if (c1 > 0.0) {
      atoms.push_back(
          {-std::exp(beta * double(2 * m + 1)), c1 * mass});
    }
  }
  return atoms;
}

double zeta(double nu, double beta, double c1) {
  check_parameters(nu, beta, c1);
  check_alpha_not_one(nu, beta);
  double e_nu = std::exp(-nu);
  double denom = 1.0 - std::exp(2.0 * beta - nu);
  double first = -(1.0 - e_nu) / denom;
  if (c1 == 0.0) {
    // Both remaining terms carry ceil(log(c1)/nu) and vanish as c1 -> 0:
    // the exponential prefactor of the middle term goes to zero while its
    // parenthesis stays bounded in [e^{nu} - 1, e^{2 nu} - 1), and the last
    // term shrinks like c1^{1/alpha}.
    return first;
  }
  double k = double(ceil_snapped(std::log(c1) / nu));
  double second = -std::exp(beta * (2.0 * k - 1.0)) *
                  (c1 * std::exp(-nu * (k - 1.0)) - 1.0);
  double third = c1 * (1.0 - e_nu) * std::exp(nu - beta) / denom *
                 std::exp((2.0 * beta - nu) * k);
  return first + second + third;
}

namespace {

// Plateau walker for Theta(psi) = int_0^1 psi/(1+psi^2) - int_1^inf
// psi^3/(1+psi^2), where psi is constant on geometric s-intervals.
// Plateau j covers s in [lo_j, hi_j) with value v_j < 0; the plateau lengths
// are the Levy atom masses, and both integrals reduce to sums.
struct Plateau {
  double lo, hi, value;
};

double theta_contribution(const Plateau& p) {
  double below = std::max(0.0, std::min(p.hi, 1.0) - std::min(p.lo, 1.0));
  double above = std::max(0.0, p.hi - std::max(p.lo, 1.0));
  double v = p.value;
  double denom = 1.0 + v * v;
  return v / denom * below - v * v * v / denom * above;
}

}  // namespace

double location_eta(double nu, double beta, double c1, double tol) {
  check_parameters(nu, beta, c1);
  double jump = -std::expm1(-nu);
  const int cap = 1'000'000;

  // Theta(psi_2): plateau k covers s in (e^{-nu(k+1)}, e^{-nu k}] with value
  // psi_2 = -e^{2 beta k}.
  CompensatedSum theta2;
  {
    // k >= 0 walks s toward 0; remainder terms fall like e^{-(2 beta + nu)k}.
    double rem_ratio = std::exp(-(2.0 * beta + nu));
    for (int k = 0; k < cap; ++k) {
      double hi = std::exp(-nu * double(k));
      Plateau p{hi * std::exp(-nu), hi, -std::exp(2.0 * beta * double(k))};
      theta2.add(theta_contribution(p));
      double rem = jump * std::exp(-(2.0 * beta + nu) * double(k + 1)) /
                   (1.0 - rem_ratio);
      if (rem < tol / 8.0) break;
    }
    // k <= -1 walks s above 1; remainder falls like e^{-(6 beta - nu) |k|}.
    double rem_ratio = std::exp(-(6.0 * beta - nu));
    for (int j = 1; j < cap; ++j) {
      int k = -j;
      double hi = std::exp(-nu * double(k));
      Plateau p{hi * std::exp(-nu), hi, -std::exp(2.0 * beta * double(k))};
      theta2.add(theta_contribution(p));
      double rem = jump * std::exp(-(6.0 * beta - nu) * double(j + 1)) /
                   (1.0 - rem_ratio);
      if (rem < tol / 8.0) break;
    }
  }

  // Theta(psi_1): plateau M covers s in [c1 e^{-nu(M+1)}, c1 e^{-nu M}) with
  // value psi_1 = -e^{beta(2M+1)}. Empty measure when c1 = 0.
  CompensatedSum theta1;
  if (c1 > 0.0) {
    double rem_ratio_up = std::exp(-(2.0 * beta + nu));
    for (int m = 0; m < cap; ++m) {
      double hi = c1 * std::exp(-nu * double(m));
      Plateau p{hi * std::exp(-nu), hi,
                -std::exp(beta * double(2 * m + 1))};
      theta1.add(theta_contribution(p));
      double rem = c1 * jump * std::exp(beta) *
                   std::exp(-(2.0 * beta + nu) * double(m + 1)) /
                   (1.0 - rem_ratio_up);
      if (rem < tol / 8.0) break;
    }
    double rem_ratio_down = std::exp(-(6.0 * beta - nu));
    for (int j = 1; j < cap; ++j) {
      int m = -j;
      double hi = c1 * std::exp(-nu * double(m));
      Plateau p{hi * std::exp(-nu), hi,
                -std::exp(beta * double(2 * m + 1))};
      theta1.add(theta_contribution(p));
      double rem = c1 * jump * std::exp(3.0 * beta) *
                   std::exp(-(6.0 * beta - nu) * double(j + 1)) /
                   (1.0 - rem_ratio_down);
      if (rem < tol / 8.0) break;
    }
  }

  return theta1.value() - theta2.value();
}

SemiStableLaw::SemiStableLaw(double nu, double beta, double c1,
                             const LawOptions& opts)
    : nu_(nu), beta_(beta), c1_(c1) {
  check_parameters(nu, beta, c1);
  check_alpha_not_one(nu, beta);
  alpha_ = nu / (2.0 * beta);
  zeta_ = law::zeta(nu, beta, c1);
  eta_ = location_eta(nu, beta, c1);

  // Grow the window until the neglected Levy tails cannot move the
  // characteristic function by more than cf_tail_tol anywhere on
  // |t| <= t_max. Large-|x| tail: each missing atom contributes at most
  // (2 + 1/|x|) mass. Small-|x| tail: at most mass (t^2 x^2 / 2 + |t x|^3).
  window_ = opts.window;
  double jump = -std::expm1(-nu);
  double half_tol = opts.cf_tail_tol / 2.0;
  {
    double big_tail;
    do {
      big_tail = (1.0 + c1) * std::exp(-nu * double(window_.m_max + 1)) *
                 (2.0 + 1.0);
      if (big_tail > half_tol) ++window_.m_max;
    } while (big_tail > half_tol && window_.m_max < 100000);

    double t2 = opts.t_max * opts.t_max;
    double r = 4.0 * beta - nu;  // > 0 since alpha < 2
    double small_tail;
    do {
      double x2_sum = (1.0 + c1 * std::exp(2.0 * beta)) * jump *
                      std::exp(r * double(window_.m_min - 1)) /
                      (1.0 - std::exp(-r));
      small_tail = t2 * x2_sum;
      if (small_tail > half_tol) --window_.m_min;
    } while (small_tail > half_tol && window_.m_min > -100000);
  }

  atoms_ = levy_atoms(nu, beta, c1, window_);
  std::sort(atoms_.begin(), atoms_.end(),
            [](const LevyAtom& a, const LevyAtom& b) {
              return std::abs(a.x) < std::abs(b.x);
            });
}

namespace {

// e^{iu} - 1 - i u / (1 + x^2) with u = t x, organized to avoid cancellation:
// the real part as -2 sin^2(u/2), the imaginary part as
// (sin u - u) + u x^2/(1+x^2) with a series for sin u - u at small |u|.
inline void cf_kernel(double t, double x, double& re, double& im) {
  double u = t * x;
  double sh = std::sin(0.5 * u);
  re = -2.0 * sh * sh;
  double smu;
  if (std::abs(u) < 1e-3) {
    double u2 = u * u;
    smu = -u * u2 / 6.0 * (1.0 - u2 / 20.0 * (1.0 - u2 / 42.0));
  } else {
    smu = std::sin(u) - u;
  }
  im = smu + u * (x * x) / (1.0 + x * x);
}

}  // namespace

std::complex<double> SemiStableLaw::log_cf(double t) const {
  CompensatedSum re, im;
  for (const auto& a : atoms_) {
    double kr, ki;
    cf_kernel(t, a.x, kr, ki);
    re.add(a.mass * kr);
    im.add(a.mass * ki);
  }
  return {re.value(), eta_ * t + im.value()};
}

double SemiStableLaw::small_jump_variance_below(double eps) const {
  CompensatedSum var;
  for (const auto& a : atoms_) {
    if (std::abs(a.x) <= eps) var.add(a.mass * a.x * a.x);
  }
  return var.value();
}

}  // namespace semistable::law
