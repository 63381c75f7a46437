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

#include <stdexcept>
#include <string>

namespace semistable {

/// A compute budget (iteration cap, schedule depth, support extension) was
/// exhausted before the requested tolerance was reached. Carries the
/// tolerance that was actually achieved so callers can report partial results.
class BudgetError : public std::runtime_error {
 public:
  BudgetError(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_tolerance(achieved) {}
  double achieved_tolerance;
};

/// The requested computation falls outside the theory implemented here
/// (e.g. a size distribution without geometric tail decay, or a confidence
/// interval in a regime where none is defined).
class OutOfTheoryError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A numeric series or integral provably diverges for the given parameters.
class DivergenceError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Outcome of a series whose finiteness is itself the quantity of interest.
struct SumOutcome {
  enum class Kind { Finite, Diverges, Inconclusive };
  Kind kind = Kind::Inconclusive;
  double value = 0.0;  // meaningful only when kind == Finite

  static SumOutcome finite(double v) { return {Kind::Finite, v}; }
  static SumOutcome diverges() { return {Kind::Diverges, 0.0}; }
  static SumOutcome inconclusive() { return {Kind::Inconclusive, 0.0}; }
  bool is_finite() const { return kind == Kind::Finite; }
};

}  // namespace semistable
