// Copyright 2026 The vqex Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Derivative-free minimizers with exact evaluation accounting.

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace vqex {

/// Objective wrapper whose counter advances by exactly one per evaluation.
class ObjectiveHandle {
 public:
  using Function = std::function<double(std::span<const double>)>;

  explicit ObjectiveHandle(Function f) : f_(std::move(f)) {}

  double operator()(std::span<const double> x) {
    ++evaluations_;
    return f_(x);
  }

  std::uint64_t evaluations() const { return evaluations_; }

 private:
  Function f_;
  std::uint64_t evaluations_ = 0;
};

struct LineSearchConfig {
  /// Uniform coarse grid over [0, 2 pi) scanned before golden-section
  /// refinement; the landscape along e^{i theta O} need not be unimodal.
  int grid_points = 16;
  double angle_tolerance = 1e-6;
};

struct LineSearchResult {
  double theta;
  double value;
  std::uint64_t evaluations;
};

/// Minimizes a 2 pi-periodic function of one angle. Never returns a value
/// worse than the best grid point; theta is reported in [0, 2 pi).
LineSearchResult periodic_line_minimize(const std::function<double(double)>& f,
                                        const LineSearchConfig& cfg = {});

struct SimplexConfig {
  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;
  /// Per-coordinate offset of the initial simplex vertices.
  double initial_step = 0.1;
  /// Stop once max f - min f over the simplex falls below this.
  double f_tol = 1e-10;
  /// Evaluation cap; 0 means 200 * dimension.
  std::uint64_t max_evals = 0;

  void validate() const;
  std::uint64_t eval_cap(std::size_t dimension) const;
};

struct SimplexResult {
  std::vector<double> x;
  double value;
  std::uint64_t evaluations;
  bool hit_max_evals;
  int iterations;
  /// Best vertex value after each iteration (nonincreasing).
  std::vector<double> best_history;
};

/// Nelder-Mead simplex minimization started from x0 with the deterministic
/// axis-aligned initial simplex.
SimplexResult nelder_mead_minimize(ObjectiveHandle& f,
                                   std::span<const double> x0,
                                   const SimplexConfig& cfg = {});

}  // namespace vqex
