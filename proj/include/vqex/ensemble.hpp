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

// Trial ensembles: postselected initial product states, parallel execution of
// adaptive trials and folded-spectrum scans, and aggregate statistics.

#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <string_view>
#include <vector>

#include "vqex/circuit_cost.hpp"
#include "vqex/engine.hpp"
#include "vqex/exact.hpp"
#include "vqex/model.hpp"

namespace vqex {

/// Seed of stream `index` derived from a master seed (SplitMix64 mixing), so
/// every trial owns an independent, schedule-free random stream.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Uniform angles in [0, 2 pi) drawn from the stream of `seed`.
std::vector<double> random_angles(int n_qubits, std::uint64_t seed);

struct InitialStateSpec {
  std::vector<double> angles;
  double e0;
  std::uint64_t seed;
  int bin = -1;
};

struct SamplerOptions {
  int bins = 16;
  std::uint64_t draw_cap = 2'000'000;
  /// Energy range split into bins; defaults to the exact bandwidth.
  std::optional<std::pair<double, double>> window;
};

struct SampleReport {
  std::vector<InitialStateSpec> states;
  std::vector<int> bin_target;
  std::vector<int> bin_fill;
  double e_low;
  double e_high;
  std::uint64_t draws;
  /// False when the draw cap stopped the sampler before every bin filled.
  bool complete;
};

/// Rejection-samples random product states into equal-width energy bins until
/// each bin holds ceil(count / bins) states. Returns at most `count` states
/// (round-robin over bins), ordered by bin. Deterministic given `seed`.
SampleReport sample_initial_states(int n_qubits, int count,
                                   const OperatorSum& h, std::uint64_t seed,
                                   const SamplerOptions& options = {});

enum class StateClass { kEdge, kExcited, kUnknown };

std::string_view to_string(StateClass c);
StateClass parse_state_class(std::string_view text);

/// Ground/top ("edge") if within half a mean level spacing of E_min or E_max.
StateClass classify_energy(double energy, const Spectrum& spec);

struct TrialRow {
  int trial_id = 0;
  std::uint64_t seed = 0;
  double e0 = 0.0;
  /// Folded-spectrum shift; NaN for variance trials.
  double lambda = 0.0;
  std::vector<double> initial_angles;
  TrialResult result;
  double magnetization = 0.0;
  double entropy = 0.0;
  double best_overlap = 0.0;
  double best_subspace_energy = 0.0;
  StateClass state_class = StateClass::kUnknown;
  std::vector<std::uint64_t> cnots;  // one per EnsembleOptions::connectivities
  bool completed = false;
};

struct ClassStats {
  std::size_t count = 0;
  double mean_nc = 0.0;
  double std_nc = 0.0;
};

struct Aggregates {
  std::size_t trials = 0;
  std::size_t converged = 0;
  double convergence_rate = 0.0;
  ClassStats all;
  ClassStats edge;
  ClassStats excited;
  std::uint64_t total_evals = 0;
};

struct EnsembleStats {
  std::vector<TrialRow> rows;
  Aggregates aggregates;
};

using ProgressCallback = std::function<void(std::size_t done, std::size_t total)>;

struct EnsembleOptions {
  TrialOptions trial{};
  int workers = 1;
  /// Enables observables, overlaps and state classes when set.
  const Spectrum* spectrum = nullptr;
  std::optional<Bipartition> bipartition;
  /// Degeneracy window for the best-subspace overlap.
  double overlap_window = 1e-6;
  std::vector<Connectivity> connectivities = all_connectivities();
  ProgressCallback progress;
  /// Set to stop handing out new trials; finished rows are kept.
  const std::atomic<bool>* cancel = nullptr;
};

/// Runs fn(i) for i in [0, count) on `workers` threads. Work is claimed from a
/// shared counter; results must be written to per-index slots.
void parallel_for(std::size_t count, int workers,
                  const std::function<void(std::size_t)>& fn,
                  const std::atomic<bool>* cancel = nullptr);

/// Mean/std of n_c over converged rows, split by state class.
Aggregates aggregate(const std::vector<TrialRow>& rows);

/// Fills observables, overlaps, class and CNOT counts of a finished row.
void enrich_row(TrialRow& row, const OperatorSum& h, const OperatorPool& pool,
                const QubitState& psi0, const EnsembleOptions& options);

EnsembleStats run_vqex_ensemble(const OperatorSum& h, const OperatorPool& pool,
                                const std::vector<InitialStateSpec>& specs,
                                const EnsembleOptions& options);

enum class InitialPolicy { kFixedRandom, kQubitMeanField };

std::string_view to_string(InitialPolicy p);
InitialPolicy parse_initial_policy(std::string_view text);

/// `points` shifts spread uniformly over [e_min - pad, e_max + pad] with
/// pad = pad_fraction * (e_max - e_min).
std::vector<double> lambda_grid(double e_min, double e_max, int points = 50,
                                double pad_fraction = 0.02);

/// Product-state angles minimizing <(H - lambda)^2>, Nelder-Mead from `start`.
std::vector<double> mean_field_initial_angles(const OperatorSum& h,
                                              double lambda,
                                              std::span<const double> start);

/// One folded-spectrum trial per shift, all starting from `start` (or from its
/// per-shift mean-field refinement).
EnsembleStats run_fsm_scan(const OperatorSum& h, const OperatorPool& pool,
                           const std::vector<double>& lambdas,
                           const InitialStateSpec& start, InitialPolicy policy,
                           const EnsembleOptions& options);

struct BinPoint {
  double energy;
  double value;
  std::size_t count;
};

/// Averages (energy, value) pairs over fixed-width energy bins
/// [origin + k w, origin + (k + 1) w); empty bins are omitted.
std::vector<BinPoint> bin_average(
    const std::vector<std::pair<double, double>>& points, double bin_width,
    double origin = 0.0);

struct ScalingRow {
  int n_qubits;
  double mean_nc;
  double std_nc;
  std::size_t converged;
};

/// Per-size mean and standard deviation of n_c over converged trials.
std::vector<ScalingRow> nc_scaling(
    const std::vector<std::pair<int, Aggregates>>& per_size);

}  // namespace vqex
