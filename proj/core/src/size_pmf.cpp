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

#include "semistable/size_pmf.hpp"

#include <algorithm>
#include <cmath>

#include "semistable/numeric.hpp"

namespace semistable::dist {

namespace {

double geometric_zero_prob(double c, double q) {
  return (1.0 - q) * (1.0 - c) / (1.0 - c * (1.0 - q));
}

// p*(s): the polynomial part of the thinned negative-binomial p.m.f.,
// f_{W_q}(s) = c_q^{s-1} p*(s) for s >= 1.
double negbin_pstar(std::int64_t s, int r, double c, double q) {
  double cq = thinned_ratio(c, q);
  double f0 = geometric_zero_prob(c, q);
  double ratio = (1.0 - cq) / c;
  CompensatedSum sum;
  double f0_pow = 1.0;
  for (int j = 0; j <= r - 1; ++j) {
    double term = f0_pow * std::pow(ratio, r - j) *
                  std::exp(log_binomial(r, j) + log_binomial(s - 1, r - j - 1));
    sum.add(term);
    f0_pow *= f0;
  }
  return cq * sum.value();
}

// h1(x) = sum_k c_q^{2k-1} p*(2x + 2k); h2(x) = sum_k c_q^{2k} p*(2x+1+2k).
double negbin_h(std::int64_t x, int r, double c, double q, bool odd_side,
                double tol, std::int64_t iter_cap) {
  double cq = thinned_ratio(c, q);
  double cq2 = cq * cq;
  CompensatedSum sum;
  double weight = odd_side ? 1.0 : 1.0 / cq;
  for (std::int64_t k = 0; k < iter_cap; ++k) {
    std::int64_t s = 2 * x + 2 * k + (odd_side ? 1 : 0);
    double term = weight * negbin_pstar(s, r, c, q);
    sum.add(term);
    if (term < tol * std::max(sum.value(), 1e-300) && k > r) {
      return sum.value();
    }
    weight *= cq2;
  }
  throw BudgetError("negative-binomial h series did not converge", tol);
}

}  // namespace

double thinned_ratio(double c, double q) {
  return c * q / (1.0 - c * (1.0 - q));
}

SizePmf SizePmf::Geometric(double c) {
  if (!(c > 0.0 && c < 1.0)) {
    throw std::invalid_argument("Geometric requires c in (0,1)");
  }
  SizePmf p;
  p.family_ = Family::Geometric;
  p.c_ = c;
  p.r_ = 1;
  return p;
}

SizePmf SizePmf::NegativeBinomial(int r, double c) {
  if (r < 1) throw std::invalid_argument("NegativeBinomial requires r >= 1");
  if (!(c > 0.0 && c < 1.0)) {
    throw std::invalid_argument("NegativeBinomial requires c in (0,1)");
  }
  SizePmf p;
  p.family_ = Family::NegativeBinomial;
  p.c_ = c;
  p.r_ = r;
  return p;
}

SizePmf SizePmf::Tabulated(std::vector<std::pair<std::int64_t, double>> atoms,
                           double declared_tail_mass) {
  std::sort(atoms.begin(), atoms.end());
  double sum = 0.0;
  std::int64_t prev = 0;
  for (const auto& [w, p] : atoms) {
    if (w < 1) throw std::invalid_argument("size atoms must have support >= 1");
    if (w == prev) throw std::invalid_argument("duplicate atom support point");
    if (!(p >= 0.0 && p <= 1.0)) {
      throw std::invalid_argument("atom probabilities must lie in [0,1]");
    }
    sum += p;
    if (sum > 1.0 + 1e-12) {
      throw std::invalid_argument("atom partial sums exceed 1");
    }
    prev = w;
  }
  if (declared_tail_mass < 0.0 ||
      std::abs(sum + declared_tail_mass - 1.0) > 1e-9) {
    throw std::invalid_argument(
        "tabulated atoms plus declared tail mass must sum to 1 within 1e-9");
  }
  SizePmf p;
  p.family_ = Family::Tabulated;
  p.declared_tail_mass_ = declared_tail_mass;
  p.atoms_ = std::move(atoms);
  return p;
}

double SizePmf::pmf(std::int64_t w) const {
  if (w < 1) return 0.0;
  switch (family_) {
    case Family::Geometric:
      return (1.0 - c_) * std::exp(double(w - 1) * std::log(c_));
    case Family::NegativeBinomial:
      if (w < r_) return 0.0;
      return std::exp(log_binomial(w - 1, r_ - 1) +
                      double(w - r_) * std::log(c_) +
                      double(r_) * std::log1p(-c_));
    case Family::Tabulated: {
      auto it = std::lower_bound(
          atoms_.begin(), atoms_.end(), w,
          [](const auto& a, std::int64_t v) { return a.first < v; });
      return (it != atoms_.end() && it->first == w) ? it->second : 0.0;
    }
  }
  return 0.0;
}

std::int64_t SizePmf::support_max() const {
  if (family_ != Family::Tabulated) return -1;
  return atoms_.empty() ? 0 : atoms_.back().first;
}

std::vector<double> SizePmf::materialize(std::int64_t w_max) const {
  std::vector<double> out(std::size_t(w_max) + 1, 0.0);
  for (std::int64_t w = 1; w <= w_max; ++w) out[std::size_t(w)] = pmf(w);
  return out;
}

SampledPmf thin_pmf(const SizePmf& f_w, double q, std::int64_t s_max,
                    const ThinOptions& opts) {
  if (!(q > 0.0 && q <= 1.0)) {
    throw std::invalid_argument("thinning requires q in (0,1]");
  }
  if (s_max < 0) throw std::invalid_argument("s_max must be >= 0");

  SampledPmf out;
  out.q = q;
  out.atoms.assign(std::size_t(s_max) + 1, 0.0);
  out.truncation_tol = 0.0;
  out.source = "closed-form";

  switch (f_w.family()) {
    case Family::Geometric: {
      double c = f_w.c();
      double cq = thinned_ratio(c, q);
      out.atoms[0] = geometric_zero_prob(c, q);
      double val = (1.0 / c) * cq * (1.0 - cq);
      for (std::int64_t s = 1; s <= s_max; ++s) {
        out.atoms[std::size_t(s)] = val;
        val *= cq;
      }
      return out;
    }
    case Family::NegativeBinomial: {
      double c = f_w.c();
      int r = f_w.r();
      double cq = thinned_ratio(c, q);
      out.atoms[0] = std::pow(geometric_zero_prob(c, q), r);
      double cq_pow = 1.0;  // c_q^{s-1}
      for (std::int64_t s = 1; s <= s_max; ++s) {
        out.atoms[std::size_t(s)] = cq_pow * negbin_pstar(s, r, c, q);
        cq_pow *= cq;
      }
      return out;
    }
    case Family::Tabulated: {
      out.source = "tabulated-series";
      out.truncation_tol = f_w.declared_tail_mass();
      double log_q = std::log(q);
      double log_1mq = q == 1.0 ? 0.0 : std::log1p(-q);
      std::int64_t terms = 0;
      for (std::int64_t s = 0; s <= s_max; ++s) {
        CompensatedSum sum;
        for (const auto& [w, p] : f_w.atoms()) {
          if (w < s || p == 0.0) continue;
          if (++terms > opts.iter_cap) {
            throw BudgetError("thinning series exceeded iteration cap",
                              out.truncation_tol);
          }
          double log_term = log_binomial(w, s) + double(s) * log_q;
          if (w > s) {
            if (q == 1.0) continue;  // (1-q)^{w-s} = 0
            log_term += double(w - s) * log_1mq;
          }
          sum.add(std::exp(log_term) * p);
        }
        out.atoms[std::size_t(s)] = sum.value();
      }
      return out;
    }
  }
  throw std::logic_error("unreachable family");
}

std::vector<std::int64_t> sample_wq(const SizePmf& f_w, double q,
                                    const RngSeed& seed, std::int64_t count) {
  if (count < 1) throw std::invalid_argument("count must be >= 1");
  if (!(q > 0.0 && q <= 1.0)) {
    throw std::invalid_argument("thinning requires q in (0,1]");
  }
  std::vector<std::int64_t> out(std::size_t(count));
  for (std::int64_t i = 0; i < count; ++i) {
    Rng rng(derive_seed(seed.master_seed, {seed.stream_index, std::uint64_t(i)}));
    std::int64_t w = 0;
    switch (f_w.family()) {
      case Family::Geometric:
        w = sample_geometric_ge1(rng, f_w.c());
        break;
      case Family::NegativeBinomial:
        for (int j = 0; j < f_w.r(); ++j) {
          w += sample_geometric_ge1(rng, f_w.c());
        }
        break;
      case Family::Tabulated: {
        double u = rng.next_unit();
        double cum = 0.0;
        w = f_w.atoms().back().first;
        for (const auto& [wi, p] : f_w.atoms()) {
          cum += p;
          if (u < cum) {
            w = wi;
            break;
          }
        }
        break;
      }
    }
    out[std::size_t(i)] = sample_binomial(rng, w, q);
  }
  return out;
}

double even_tail(const SampledPmf& f_wq, double x) {
  if (!(x > 0.0)) throw std::invalid_argument("tail requires x > 0");
  std::int64_t start = ceil_snapped(x);
  if (2 * start > f_wq.s_max()) {
    throw BudgetError("materialized support too short for requested tail",
                      f_wq.truncation_tol);
  }
  CompensatedSum sum;
  for (std::int64_t s = f_wq.s_max() / 2; s >= start; --s) {
    sum.add(f_wq.at(2 * s));
  }
  return sum.value();
}

double odd_tail(const SampledPmf& f_wq, double x) {
  if (!(x > 0.0)) throw std::invalid_argument("tail requires x > 0");
  std::int64_t start = ceil_snapped(x);
  if (2 * start + 1 > f_wq.s_max()) {
    throw BudgetError("materialized support too short for requested tail",
                      f_wq.truncation_tol);
  }
  CompensatedSum sum;
  for (std::int64_t s = (f_wq.s_max() - 1) / 2; s >= start; --s) {
    sum.add(f_wq.at(2 * s + 1));
  }
  return sum.value();
}

double even_tail(const SizePmf& f_w, double q, double x) {
  if (!(x > 0.0)) throw std::invalid_argument("tail requires x > 0");
  std::int64_t cx = ceil_snapped(x);
  double c = f_w.c();
  double cq = thinned_ratio(c, q);
  switch (f_w.family()) {
    case Family::Geometric:
      return (1.0 / c) * std::pow(cq, 2.0 * double(cx)) / (1.0 + cq);
    case Family::NegativeBinomial:
      return negbin_h(cx, f_w.r(), c, q, /*odd_side=*/false, 1e-15, 1'000'000) *
             std::pow(cq, 2.0 * double(cx));
    case Family::Tabulated: {
      auto thinned = thin_pmf(f_w, q, std::max<std::int64_t>(
                                          2 * cx + 2, f_w.support_max()));
      return even_tail(thinned, x);
    }
  }
  throw std::logic_error("unreachable family");
}

double odd_tail(const SizePmf& f_w, double q, double x) {
  if (!(x > 0.0)) throw std::invalid_argument("tail requires x > 0");
  std::int64_t cx = ceil_snapped(x);
  double c = f_w.c();
  double cq = thinned_ratio(c, q);
  switch (f_w.family()) {
    case Family::Geometric:
      return (cq / c) * std::pow(cq, 2.0 * double(cx)) / (1.0 + cq);
    case Family::NegativeBinomial:
      return negbin_h(cx, f_w.r(), c, q, /*odd_side=*/true, 1e-15, 1'000'000) *
             std::pow(cq, 2.0 * double(cx));
    case Family::Tabulated: {
      auto thinned = thin_pmf(f_w, q, std::max<std::int64_t>(
                                          2 * cx + 3, f_w.support_max()));
      return odd_tail(thinned, x);
    }
  }
  throw std::logic_error("unreachable family");
}

double thinned_tail_above(const SizePmf& f_w, double q, std::int64_t s) {
  if (s < 0) return 1.0;
  double c = f_w.c();
  double cq = thinned_ratio(c, q);
  switch (f_w.family()) {
    case Family::Geometric:
      return (1.0 / c) * std::pow(cq, double(s + 1));
    case Family::NegativeBinomial: {
      // Split P(W_q >= s+1) into its even and odd parts; both are positive
      // series, so the value keeps full relative precision in the deep tail.
      std::int64_t m = s + 1;
      double nu = -2.0 * std::log(cq);
      std::int64_t xe = (m + 1) / 2;
      std::int64_t xo = m / 2;
      double even_part =
          (xe > 0 ? negbin_h(xe, f_w.r(), c, q, false, 1e-15, 1'000'000) *
                        std::exp(-nu * double(xe))
                  : 0.0);
      double odd_part = negbin_h(xo, f_w.r(), c, q, true, 1e-15, 1'000'000) *
                        std::exp(-nu * double(xo));
      return even_part + odd_part;
    }
    case Family::Tabulated: {
      auto thinned = thin_pmf(f_w, q, f_w.support_max());
      CompensatedSum sum;
      for (std::int64_t j = thinned.s_max(); j > s; --j) sum.add(thinned.at(j));
      return sum.value() + f_w.declared_tail_mass();
    }
  }
  throw std::logic_error("unreachable family");
}

TailDecomposition extract_tail_decomposition(const SizePmf& f_w, double q,
                                             const TailDecompOptions& opts) {
  if (!(q > 0.0 && q < 1.0)) {
    throw std::invalid_argument("tail decomposition requires q in (0,1)");
  }
  TailDecomposition out;
  double c = f_w.c();
  double cq = thinned_ratio(c, q);

  switch (f_w.family()) {
    case Family::Geometric: {
      out.nu = 2.0 * std::log(1.0 / cq);
      out.c1 = cq;
      double h1 = 1.0 / (c * (1.0 + cq));
      double h2 = cq * h1;
      out.h1_at = [h1](std::int64_t) { return h1; };
      out.h2_at = [h2](std::int64_t) { return h2; };
      out.exactness = TailDecomposition::Exactness::ClosedForm;
      return out;
    }
    case Family::NegativeBinomial: {
      int r = f_w.r();
      if (r == 1) {
        return extract_tail_decomposition(SizePmf::Geometric(c), q, opts);
      }
      out.nu = 2.0 * std::log(1.0 / cq);
      out.c1 = cq;
      double tol = opts.series_tol;
      std::int64_t cap = opts.iter_cap;
      out.h1_at = [r, c, q, tol, cap](std::int64_t x) {
        return negbin_h(x, r, c, q, false, tol, cap);
      };
      out.h2_at = [r, c, q, tol, cap](std::int64_t x) {
        return negbin_h(x, r, c, q, true, tol, cap);
      };
      out.exactness = TailDecomposition::Exactness::SeriesTruncated;
      out.series_tol = tol;
      return out;
    }
    case Family::Tabulated: {
      // Regression mode: fit log even-tail decay over the reliable range.
      std::int64_t w_max = f_w.support_max();
      auto thinned = thin_pmf(f_w, q, std::max<std::int64_t>(w_max, 4));
      std::vector<double> xs, ys_even, ys_odd;
      double floor_val =
          std::max(1e4 * f_w.declared_tail_mass(), 1e-250);
      for (std::int64_t x = 1; 2 * x <= thinned.s_max(); ++x) {
        double ev = even_tail(thinned, double(x));
        if (ev <= floor_val) break;
        xs.push_back(double(x));
        ys_even.push_back(std::log(ev));
        double od = (2 * x + 1 <= thinned.s_max())
                        ? odd_tail(thinned, double(x))
                        : 0.0;
        ys_odd.push_back(od);
      }
      if (xs.size() < 6) {
        throw OutOfTheoryError(
            "tabulated support too short to certify geometric tail decay");
      }
      std::size_t keep = std::min<std::size_t>(xs.size(), 12);
      std::vector<double> xr(xs.end() - keep, xs.end());
      std::vector<double> yr(ys_even.end() - keep, ys_even.end());
      auto fit = fit_line(xr, yr);
      if (fit.r2 < opts.min_r2 || fit.slope >= 0.0) {
        throw OutOfTheoryError(
            "tail decay is not geometric (regression R^2 below threshold)");
      }
      double nu = -fit.slope;
      out.nu = nu;
      out.numeric_mode = true;
      out.regression_r2 = fit.r2;
      out.exactness = TailDecomposition::Exactness::SeriesTruncated;
      out.series_tol = f_w.declared_tail_mass();

      std::vector<double> h1v(xs.size()), h2v(xs.size());
      for (std::size_t i = 0; i < xs.size(); ++i) {
        h1v[i] = std::exp(ys_even[i] + nu * xs[i]);
        h2v[i] = ys_odd[i] * std::exp(nu * xs[i]);
      }
      out.c1 = h1v.back() > 0.0 ? h2v.back() / h1v.back() : 0.0;
      std::int64_t x_lo = 1, x_hi = std::int64_t(xs.size());
      out.h1_at = [h1v, x_lo, x_hi](std::int64_t x) {
        std::int64_t i = std::clamp(x, x_lo, x_hi) - x_lo;
        return h1v[std::size_t(i)];
      };
      out.h2_at = [h2v, x_lo, x_hi](std::int64_t x) {
        std::int64_t i = std::clamp(x, x_lo, x_hi) - x_lo;
        return h2v[std::size_t(i)];
      };
      return out;
    }
  }
  throw std::logic_error("unreachable family");
}

SumOutcome check_inversion_condition(const SizePmf& f_w, double q,
                                     std::int64_t n, std::int64_t iter_cap) {
  if (n < 1) throw std::invalid_argument("inversion condition requires n >= 1");
  if (!(q > 0.0 && q <= 1.0)) {
    throw std::invalid_argument("inversion condition requires q in (0,1]");
  }

  if (f_w.family() != Family::Tabulated) {
    // Term ratio tends to 2c(1-q) for both closed-form families.
    double limit_ratio = 2.0 * f_w.c() * (1.0 - q);
    if (limit_ratio >= 1.0) return SumOutcome::diverges();
  } else if (f_w.declared_tail_mass() > 0.0) {
    return SumOutcome::inconclusive();
  }

  double log_2q = std::log(2.0 * (1.0 - q));
  CompensatedSum sum;
  std::int64_t small_streak = 0;
  std::int64_t w_hi = f_w.support_max();  // -1 when unbounded
  for (std::int64_t w = n; w_hi < 0 || w <= w_hi; ++w) {
    if (w - n > iter_cap) return SumOutcome::inconclusive();
    double p = f_w.pmf(w);
    if (p > 0.0) {
      double term =
          std::exp(log_binomial(w, n) + double(w - n) * log_2q) * p;
      sum.add(term);
      small_streak =
          term < 1e-16 * std::max(sum.value(), 1e-300) ? small_streak + 1 : 0;
      if (small_streak >= 5 && w > 2 * n + 8) break;
    }
  }
  return SumOutcome::finite(sum.value());
}

}  // namespace semistable::dist
