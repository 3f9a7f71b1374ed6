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

// Adaptive variance (VQE-X) and folded-spectrum eigensolvers.
//
// A trial starts from |psi_0> and grows the ansatz
//   |psi_a> = e^{i theta_a O_a} ... e^{i theta_1 O_1} |psi_0>
// one pool generator at a time. Each step picks the generator whose
// one-angle line search gives the lowest cost, appends it, and re-optimizes
// every angle with Nelder-Mead. The loop ends when
//   F = 1 - |<H>| / ||H psi||  <  delta,
// when ||H psi|| < delta (an E = 0 eigenstate), or after n_max steps.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "vqex/model.hpp"
#include "vqex/operator_sum.hpp"
#include "vqex/optimize.hpp"
#include "vqex/statevector.hpp"

namespace vqex {

struct CostKind {
  enum class Type { kVariance, kFoldedSpectrum };

  Type type = Type::kVariance;
  double lambda = 0.0;

  static CostKind variance() { return {Type::kVariance, 0.0}; }
  static CostKind folded_spectrum(double lambda);

  /// Cost from the two moments <H> and ||H psi||^2, clamped at zero.
  double from_moments(double energy, double h_squared) const;
};

/// <H^2> - <H>^2 or <(H - lambda)^2>, with <H^2> taken as ||H psi||^2.
double cost(const QubitState& state, const OperatorSum& h,
            const CostKind& kind);

/// 1 - |<H>| / ||H psi||, or nullopt when ||H psi|| < zero_norm_threshold
/// (the caller's signal that psi is an E = 0 eigenstate).
std::optional<double> convergence_metric(const QubitState& state,
                                         const OperatorSum& h,
                                         double zero_norm_threshold = 1e-300);

struct AnsatzStep {
  std::size_t op_id;
  double theta;
};

struct Ansatz {
  std::vector<AnsatzStep> steps;

  std::size_t size() const { return steps.size(); }
  bool empty() const { return steps.empty(); }
};

/// Applies the ansatz steps in order to psi0.
QubitState prepare_state(const QubitState& psi0, const Ansatz& ansatz,
                         const OperatorPool& pool);

struct OperatorSelection {
  std::size_t op_id;
  double theta;
  double cost_after;
  std::uint64_t evaluations;
};

/// Line-searches theta -> cost(e^{i theta O} psi) for every pool operator and
/// returns the lowest; ties go to the lowest operator id.
OperatorSelection select_operator(const QubitState& state,
                                  const OperatorPool& pool,
                                  const OperatorSum& h, const CostKind& kind,
                                  const LineSearchConfig& line = {});

enum class Termination { kCriterionMet, kZeroNormEigenstate, kMaxSteps };

std::string_view to_string(Termination t);
Termination parse_termination(std::string_view text);

struct StepRecord {
  std::size_t op_id;
  double line_search_cost;
  double reoptimized_cost;
  std::uint64_t optimizer_evals;
  std::uint64_t cumulative_evals;
  bool optimizer_hit_cap;
  /// State diagnostics after re-optimization.
  double energy;
  double h_norm;
  double f;
  /// All angles after re-optimization of this step.
  std::vector<double> thetas;
};

struct TrialOptions {
  double delta = 1e-4;
  int n_max = 100;
  SimplexConfig simplex{};
  LineSearchConfig line{};

  void validate() const;
};

struct TrialResult {
  bool converged = false;
  Termination termination = Termination::kMaxSteps;
  int n_c = 0;
  double final_energy = 0.0;
  double final_variance = 0.0;
  double final_f = 0.0;
  double final_h_norm = 0.0;
  double final_cost = 0.0;
  double initial_energy = 0.0;
  double initial_h_norm = 0.0;
  double initial_f = 0.0;
  double initial_cost = 0.0;
  Ansatz ansatz;
  std::vector<StepRecord> steps;
  std::uint64_t total_evals = 0;
  double delta = 0.0;
  int n_max = 0;
  /// True when the real-arithmetic kernel ran the trial.
  bool real_kernel = false;
};

using StepCallback = std::function<void(int step, const StepRecord&)>;

TrialResult run_adaptive_trial(const OperatorSum& h, const OperatorPool& pool,
                               const QubitState& psi0, const CostKind& kind,
                               const TrialOptions& options,
                               const StepCallback& on_step = {});

/// The result the same trial would have produced with a looser threshold
/// delta >= the original one. The trajectory up to the earlier stop is
/// identical, so this is read off the per-step log without re-running.
TrialResult at_threshold(const TrialResult& full, double delta);

/// Forces the complex kernel even when the real one applies (for testing).
TrialResult run_adaptive_trial_complex(const OperatorSum& h,
                                       const OperatorPool& pool,
                                       const QubitState& psi0,
                                       const CostKind& kind,
                                       const TrialOptions& options);

}  // namespace vqex
