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
#include <initializer_list>

namespace semistable {

/// Identifies an independent reproducible random stream. Identical
/// (master_seed, stream_index) pairs yield bit-identical draws regardless of
/// execution order, which is what makes parallel replicates deterministic.
struct RngSeed {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_index = 0;
};

std::uint64_t splitmix64(std::uint64_t& state);

/// Hash-combines a master seed with a path of indices (level, replicate, ...)
/// into the seed of a derived stream.
std::uint64_t derive_seed(std::uint64_t master,
                          std::initializer_list<std::uint64_t> path);

/// xoshiro256++ with splitmix64 seeding. Self-contained so that draws are
/// bit-identical across standard libraries; std:: distributions are
/// implementation-defined and would break the reproducibility contract.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  explicit Rng(const RngSeed& seed)
      : Rng(derive_seed(seed.master_seed, {seed.stream_index})) {}

  std::uint64_t next_u64();

  /// Uniform on [0, 1) with 53 random bits.
  double next_unit();

  /// Uniform on (0, 1); safe as an argument to log().
  double next_unit_open();

 private:
  std::uint64_t s_[4];
};

/// Geometric on {1, 2, ...} with P(k) = c^{k-1} (1 - c).
std::int64_t sample_geometric_ge1(Rng& rng, double c);

/// Binomial(n, q) by Bernoulli counting for small n and geometric
/// waiting-time skips otherwise. Exact for all n.
std::int64_t sample_binomial(Rng& rng, std::int64_t n, double q);

/// Poisson(lambda); inversion below lambda = 12, Hormann's PTRS transformed
/// rejection above. Exact for all lambda.
std::int64_t sample_poisson(Rng& rng, double lambda);

}  // namespace semistable
