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

#include "semistable/char_fn_inversion.hpp"

#include <atomic>
#include <bit>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <numbers>
#include <unordered_map>

namespace semistable::law {

CfHandle make_cf(const SemiStableLaw& law) {
  return {[law](double t) { return law.log_cf(t); }};
}

CfHandle shifted_cf(CfHandle base, double shift) {
  return {[base = std::move(base), shift](double t) {
    return base.log_cf(t) + std::complex<double>(0.0, shift * t);
  }};
}

CfHandle reflected_cf(CfHandle base) {
  return {[base = std::move(base)](double t) { return base.log_cf(-t); }};
}

CfHandle comparison_cf(const SemiStableLaw& law, double shift,
                       std::int64_t w) {
  CfHandle h = shifted_cf(make_cf(law), shift);
  if (w % 2 != 0) h = reflected_cf(std::move(h));
  return h;
}

CfHandle lambda_power(CfHandle base, double lambda, double alpha,
                      double period_c) {
  if (!(lambda >= 1.0 && lambda <= period_c * (1.0 + 1e-12))) {
    throw std::invalid_argument("lambda must lie in [1, c]");
  }
  double scale = std::pow(lambda, -1.0 / alpha);
  return {[base = std::move(base), lambda, scale](double t) {
    return lambda * base.log_cf(scale * t);
  }};
}

CfHandle lambda_power(const SemiStableLaw& law, double lambda) {
  return lambda_power(make_cf(law), lambda, law.alpha(), law.period_c());
}

namespace {

// Gauss-Kronrod 7-15 nodes and weights on [-1, 1].
constexpr int kGkPoints = 15;
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

}  // namespace

struct CdfInverter::Impl {
  CfHandle cf;
  Options opts;
  mutable std::mutex mu;
  mutable std::unordered_map<std::uint64_t, std::complex<double>> memo;
  mutable std::atomic<double> achieved{0.0};

  std::complex<double> phi(double t) const {
    std::uint64_t key = std::bit_cast<std::uint64_t>(t);
    {
      std::lock_guard<std::mutex> lock(mu);
      auto it = memo.find(key);
      if (it != memo.end()) return it->second;
    }
    std::complex<double> val = std::exp(cf.log_cf(t));
    std::lock_guard<std::mutex> lock(mu);
    return memo.emplace(key, val).first->second;
  }

  double integrand(double t, double x, double* abs_phi) const {
    std::complex<double> p = phi(t);
    if (abs_phi) *abs_phi = std::abs(p);
    double c = std::cos(t * x);
    double s = std::sin(t * x);
    // Im(e^{-itx} phi) = im(phi) cos(tx) - re(phi) sin(tx)
    return (p.imag() * c - p.real() * s) / t;
  }

  struct PanelResult {
    double value;
    double err;
    double max_abs_phi;
  };

  PanelResult panel(double a, double b, double x) const {
    double mid = 0.5 * (a + b);
    double h = 0.5 * (b - a);
    double fk = 0.0, fg = 0.0, env = 0.0;
    for (int i = 0; i < 8; ++i) {
      double absp = 0.0;
      if (i == 7) {
        double f = integrand(mid, x, &absp);
        fk += kWgk[7] * f;
        fg += kWg[3] * f;
        env = std::max(env, absp);
        break;
      }
      double f1 = integrand(mid - h * kXgk[i], x, &absp);
      env = std::max(env, absp);
      double f2 = integrand(mid + h * kXgk[i], x, &absp);
      env = std::max(env, absp);
      fk += kWgk[i] * (f1 + f2);
      if (i % 2 == 1) fg += kWg[i / 2] * (f1 + f2);
    }
    return {h * fk, std::abs(h * (fk - fg)), env};
  }

  PanelResult integrate(double a, double b, double x, double tol,
                        int depth) const {
    PanelResult r = panel(a, b, x);
    if (r.err <= tol || depth >= opts.max_depth) return r;
    PanelResult l = integrate(a, 0.5 * (a + b), x, 0.5 * tol, depth + 1);
    PanelResult rr = integrate(0.5 * (a + b), b, x, 0.5 * tol, depth + 1);
    return {l.value + rr.value, l.err + rr.err,
            std::max({r.max_abs_phi, l.max_abs_phi, rr.max_abs_phi})};
  }

  void bump_achieved(double v) const {
    double cur = achieved.load();
    while (v > cur && !achieved.compare_exchange_weak(cur, v)) {
    }
  }
};

CdfInverter::CdfInverter(CfHandle cf, Options opts)
    : impl_(std::make_unique<Impl>()) {
  impl_->cf = std::move(cf);
  impl_->opts = opts;
}

CdfInverter::~CdfInverter() = default;
CdfInverter::CdfInverter(CdfInverter&&) noexcept = default;
CdfInverter& CdfInverter::operator=(CdfInverter&&) noexcept = default;

double CdfInverter::cdf(double x) const {
  const auto& o = impl_->opts;
  double integral = 0.0;
  double quad_err = 0.0;
  double lo = 0.0, hi = 1.0;
  int quiet_blocks = 0;
  double env = 1.0;
  for (int j = 0; j < o.max_blocks; ++j) {
    double block_tol = o.tol * std::numbers::pi / 16.0 /
                       double((j + 1) * (j + 1));
    auto r = impl_->integrate(lo, hi, x, block_tol, 0);
    integral += r.value;
    quad_err += r.err;
    env = r.max_abs_phi;
    double contrib = std::abs(r.value) / std::numbers::pi;
    if (env < o.envelope_tol && contrib < o.tol / 8.0) {
      if (++quiet_blocks >= 2) break;
    } else {
      quiet_blocks = 0;
    }
    lo = hi;
    hi = 2.0 * hi;
    if (j == o.max_blocks - 1) {
      throw BudgetError("oscillatory integral did not settle within budget",
                        std::max(env, quad_err / std::numbers::pi));
    }
  }
  impl_->bump_achieved(quad_err / std::numbers::pi + env);
  double f = 0.5 - integral / std::numbers::pi;
  return std::clamp(f, 0.0, 1.0);
}

double CdfInverter::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("quantile requires p in (0,1)");
  }
  double lo = -1.0, hi = 1.0;
  int guard = 0;
  while (cdf(lo) > p) {
    lo *= 2.0;
    if (++guard > 120) throw BudgetError("quantile bracket expansion failed", p);
  }
  guard = 0;
  while (cdf(hi) < p) {
    hi *= 2.0;
    if (++guard > 120) throw BudgetError("quantile bracket expansion failed", p);
  }
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (hi - lo < 1e-10 * std::max(1.0, std::abs(mid))) return mid;
    if (cdf(mid) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double CdfInverter::achieved_tol() const { return impl_->achieved.load(); }

}  // namespace semistable::law
