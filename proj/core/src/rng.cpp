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

#include "semistable/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace semistable {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master,
                          std::initializer_list<std::uint64_t> path) {
  std::uint64_t state = master;
  std::uint64_t out = splitmix64(state);
  for (std::uint64_t p : path) {
    state ^= p + 0x9e3779b97f4a7c15ULL + (state << 6) + (state >> 2);
    out = splitmix64(state);
  }
  return out;
}

Rng::Rng(std::uint64_t seed) {
  std::uint64_t state = seed;
  for (auto& s : s_) s = splitmix64(state);
}

namespace {
inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}
}  // namespace

std::uint64_t Rng::next_u64() {
  std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::next_unit() { return double(next_u64() >> 11) * 0x1.0p-53; }

double Rng::next_unit_open() {
  return (double(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

std::int64_t sample_geometric_ge1(Rng& rng, double c) {
  if (!(c > 0.0 && c < 1.0)) {
    throw std::invalid_argument("geometric parameter must lie in (0,1)");
  }
  double u = rng.next_unit_open();
  return 1 + static_cast<std::int64_t>(std::log(u) / std::log(c));
}

std::int64_t sample_binomial(Rng& rng, std::int64_t n, double q) {
  if (n < 0 || q < 0.0 || q > 1.0) {
    throw std::invalid_argument("binomial requires n >= 0, q in [0,1]");
  }
  if (q == 0.0 || n == 0) return 0;
  if (q == 1.0) return n;
  bool flip = q > 0.5;
  double p = flip ? 1.0 - q : q;
  std::int64_t hits = 0;
  if (n <= 128) {
    for (std::int64_t i = 0; i < n; ++i) {
      if (rng.next_unit() < p) ++hits;
    }
  } else {
    // Count successes through geometric gaps between them.
    double log1mp = std::log1p(-p);
    std::int64_t pos = 0;
    while (true) {
      pos += 1 + static_cast<std::int64_t>(std::log(rng.next_unit_open()) / log1mp);
      if (pos > n) break;
      ++hits;
    }
  }
  return flip ? n - hits : hits;
}

namespace {

std::int64_t poisson_inversion(Rng& rng, double lambda) {
  double l = std::exp(-lambda);
  double p = 1.0;
  std::int64_t k = -1;
  do {
    ++k;
    p *= rng.next_unit_open();
  } while (p > l);
  return k;
}

// Hormann (1993), "The transformed rejection method for generating Poisson
// random variables", algorithm PTRS.
std::int64_t poisson_ptrs(Rng& rng, double lambda) {
  double log_lambda = std::log(lambda);
  double b = 0.931 + 2.53 * std::sqrt(lambda);
  double a = -0.059 + 0.02483 * b;
  double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  double v_r = 0.9277 - 3.6224 / (b - 2.0);
  while (true) {
    double u = rng.next_unit() - 0.5;
    double v = rng.next_unit_open();
    double us = 0.5 - std::abs(u);
    double k = std::floor((2.0 * a / us + b) * u + lambda + 0.43);
    if (us >= 0.07 && v <= v_r) return static_cast<std::int64_t>(k);
    if (k < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
        k * log_lambda - lambda - std::lgamma(k + 1.0)) {
      return static_cast<std::int64_t>(k);
    }
  }
}

}  // namespace

std::int64_t sample_poisson(Rng& rng, double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("poisson rate must be finite and nonnegative");
  }
  if (lambda == 0.0) return 0;
  if (lambda < 12.0) return poisson_inversion(rng, lambda);
  return poisson_ptrs(rng, lambda);
}

}  // namespace semistable
