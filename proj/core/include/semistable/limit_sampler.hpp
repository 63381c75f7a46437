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

#include <vector>

#include "semistable/rng.hpp"
#include "semistable/semistable_law.hpp"

namespace semistable::law {

/// Exact-to-tolerance sampler for the limit law: atoms with |x| above a
/// cutoff are simulated as independent Poisson jump counts, atoms below it
/// are replaced by their compensator drift. The cutoff is chosen so the
/// discarded jump variance stays below `max_small_variance`.
class LimitSampler {
 public:
  explicit LimitSampler(const SemiStableLaw& law,
                        double max_small_variance = 1e-6);

  double sample(Rng& rng) const;

  /// Deterministic per (seed, index): draw i depends only on the seed pair
  /// and i, so parallel callers get identical output in any order.
  std::vector<double> sample_n(const RngSeed& seed, std::int64_t count) const;

  double cutoff() const { return eps_; }
  double discarded_variance() const { return discarded_var_; }

 private:
  std::vector<LevyAtom> big_atoms_;
  double drift_ = 0.0;
  double eps_ = 0.0;
  double discarded_var_ = 0.0;
};

}  // namespace semistable::law
