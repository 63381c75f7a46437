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

#include "semistable/limit_sampler.hpp"

#include <algorithm>
#include <cmath>

#include "semistable/numeric.hpp"

namespace semistable::law {

LimitSampler::LimitSampler(const SemiStableLaw& law,
                           double max_small_variance) {
  // Walk atoms from smallest |x| upward; everything before the cutoff index
  // becomes drift, the rest keeps its Poisson jump representation.
  const auto& atoms = law.atoms();  // sorted by |x| ascending
  std::vector<double> var_prefix(atoms.size() + 1, 0.0);
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    var_prefix[i + 1] =
        var_prefix[i] + atoms[i].mass * atoms[i].x * atoms[i].x;
  }
  std::size_t cut = 0;
  while (cut < atoms.size() && var_prefix[cut + 1] <= max_small_variance) {
    ++cut;
  }
  eps_ = cut == 0 ? 0.0 : std::abs(atoms[cut - 1].x);
  discarded_var_ = var_prefix[cut];

  CompensatedSum drift;
  drift.add(law.eta());
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    double x = atoms[i].x;
    double m = atoms[i].mass;
    if (i < cut) {
      drift.add(m * x * x * x / (1.0 + x * x));
    } else {
      big_atoms_.push_back(atoms[i]);
      drift.add(-m * x / (1.0 + x * x));
    }
  }
  drift_ = drift.value();
}

double LimitSampler::sample(Rng& rng) const {
  CompensatedSum sum;
  sum.add(drift_);
  for (const auto& a : big_atoms_) {
    std::int64_t n = sample_poisson(rng, a.mass);
    if (n > 0) sum.add(double(n) * a.x);
  }
  return sum.value();
}

std::vector<double> LimitSampler::sample_n(const RngSeed& seed,
                                           std::int64_t count) const {
  if (count < 1) throw std::invalid_argument("count must be >= 1");
  std::vector<double> out(std::size_t(count));
  for (std::int64_t i = 0; i < count; ++i) {
    Rng rng(derive_seed(seed.master_seed, {seed.stream_index, std::uint64_t(i)}));
    out[std::size_t(i)] = sample(rng);
  }
  return out;
}

}  // namespace semistable::law
