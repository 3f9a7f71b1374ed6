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

#include "vqex/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>

namespace vqex {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  // SplitMix64 finalizer applied to a master/index combination.
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::vector<double> random_angles(int n_qubits, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  std::vector<double> out(n_qubits);
  for (double& a : out) {
    // 53 random mantissa bits; identical on every standard library.
    const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53;
    a = 2.0 * std::numbers::pi * u;
  }
  return out;
}

SampleReport sample_initial_states(int n_qubits, int count,
                                   const OperatorSum& h, std::uint64_t seed,
                                   const SamplerOptions& options) {
  if (count < 1) throw std::invalid_argument("sample count must be >= 1");
  if (options.bins < 1) throw std::invalid_argument("bin count must be >= 1");
  if (h.n_qubits() != n_qubits) {
    throw DimensionError("sampler qubit count differs from the Hamiltonian");
  }

  SampleReport report;
  if (options.window) {
    report.e_low = options.window->first;
    report.e_high = options.window->second;
  } else {
    const BandwidthEstimate bw =
        estimate_bandwidth(h, n_qubits <= kMaxExactQubits
                                  ? BandwidthMethod::kExactExtremes
                                  : BandwidthMethod::kQubitMeanField);
    report.e_low = bw.e_min;
    report.e_high = bw.e_max;
  }
  if (!(report.e_high > report.e_low)) {
    throw std::invalid_argument("sampling window has zero width");
  }

  const int bins = options.bins;
  const int per_bin = (count + bins - 1) / bins;
  const double width = (report.e_high - report.e_low) / bins;
  std::vector<std::vector<InitialStateSpec>> accepted(bins);
  report.bin_target.assign(bins, per_bin);
  int open_bins = bins;

  std::uint64_t draw = 0;
  while (open_bins > 0 && draw < options.draw_cap) {
    const std::uint64_t s = derive_seed(seed, draw++);
    std::vector<double> angles = random_angles(n_qubits, s);
    const double e0 = product_state_energy(h, angles);
    if (e0 < report.e_low || e0 > report.e_high) continue;
    const int bin =
        std::min(static_cast<int>((e0 - report.e_low) / width), bins - 1);
    auto& slot = accepted[bin];
    if (static_cast<int>(slot.size()) >= per_bin) continue;
    slot.push_back({std::move(angles), e0, s, bin});
    if (static_cast<int>(slot.size()) == per_bin) --open_bins;
  }
  report.draws = draw;
  report.complete = open_bins == 0;

  // Round-robin over bins up to `count`, then order by bin.
  std::vector<std::size_t> taken(bins, 0);
  std::size_t total = 0;
  for (int rank = 0; rank < per_bin && total < static_cast<std::size_t>(count);
       ++rank) {
    for (int b = 0; b < bins && total < static_cast<std::size_t>(count); ++b) {
      if (static_cast<std::size_t>(rank) < accepted[b].size()) {
        ++taken[b];
        ++total;
      }
    }
  }
  report.bin_fill.resize(bins);
  for (int b = 0; b < bins; ++b) {
    report.bin_fill[b] = static_cast<int>(accepted[b].size());
    for (std::size_t k = 0; k < taken[b]; ++k) {
      report.states.push_back(accepted[b][k]);
    }
  }
  return report;
}

std::string_view to_string(StateClass c) {
  switch (c) {
    case StateClass::kEdge:
      return "edge";
    case StateClass::kExcited:
      return "excited";
    case StateClass::kUnknown:
      return "unknown";
  }
  return "unknown";
}

StateClass parse_state_class(std::string_view text) {
  if (text == "edge") return StateClass::kEdge;
  if (text == "excited") return StateClass::kExcited;
  if (text == "unknown") return StateClass::kUnknown;
  throw std::invalid_argument("unknown state class '" + std::string(text) +
                              "'");
}

StateClass classify_energy(double energy, const Spectrum& spec) {
  const double half = 0.5 * spec.mean_level_spacing();
  if (std::abs(energy - spec.e_min()) <= half ||
      std::abs(energy - spec.e_max()) <= half) {
    return StateClass::kEdge;
  }
  return StateClass::kExcited;
}

void parallel_for(std::size_t count, int workers,
                  const std::function<void(std::size_t)>& fn,
                  const std::atomic<bool>* cancel) {
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    while (true) {
      if (cancel != nullptr && cancel->load()) return;
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        const std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  const int n = std::max(1, std::min<int>(workers, static_cast<int>(count)));
  if (n == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n);
    for (int t = 0; t < n; ++t) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
}

namespace {

ClassStats class_stats(const std::vector<int>& values) {
  ClassStats s;
  s.count = values.size();
  if (values.empty()) return s;
  double sum = 0.0;
  for (int v : values) sum += v;
  s.mean_nc = sum / static_cast<double>(values.size());
  double var = 0.0;
  for (int v : values) var += (v - s.mean_nc) * (v - s.mean_nc);
  s.std_nc = std::sqrt(var / static_cast<double>(values.size()));
  return s;
}

}  // namespace

Aggregates aggregate(const std::vector<TrialRow>& rows) {
  Aggregates a;
  std::vector<int> all;
  std::vector<int> edge;
  std::vector<int> excited;
  for (const auto& row : rows) {
    if (!row.completed) continue;
    ++a.trials;
    a.total_evals += row.result.total_evals;
    if (!row.result.converged) continue;
    ++a.converged;
    all.push_back(row.result.n_c);
    if (row.state_class == StateClass::kEdge) edge.push_back(row.result.n_c);
    if (row.state_class == StateClass::kExcited) {
      excited.push_back(row.result.n_c);
    }
  }
  a.convergence_rate =
      a.trials > 0 ? static_cast<double>(a.converged) / a.trials : 0.0;
  a.all = class_stats(all);
  a.edge = class_stats(edge);
  a.excited = class_stats(excited);
  return a;
}

void enrich_row(TrialRow& row, const OperatorSum& h, const OperatorPool& pool,
                const QubitState& psi0, const EnsembleOptions& options) {
  const QubitState psi = prepare_state(psi0, row.result.ansatz, pool);
  row.magnetization = magnetization_density(psi);
  if (options.bipartition) {
    row.entropy =
        entanglement_entropy(reduced_density_matrix(psi, *options.bipartition));
  }
  if (options.spectrum != nullptr) {
    const Spectrum& spec = *options.spectrum;
    const auto groups = group_degenerate(spec, options.overlap_window);
    const SubspaceMatch match = best_subspace(psi, groups, spec);
    row.best_overlap = match.overlap;
    row.best_subspace_energy = spec.energy(groups[match.subspace].members.front());
    row.state_class = classify_energy(row.result.final_energy, spec);
  }
  row.cnots.clear();
  for (Connectivity c : options.connectivities) {
    row.cnots.push_back(
        cnot_count_ansatz(row.result.ansatz, pool, {c, h.n_qubits()}));
  }
  row.completed = true;
}

namespace {

EnsembleStats run_rows(const OperatorSum& h, const OperatorPool& pool,
                       std::vector<TrialRow> rows,
                       const std::vector<CostKind>& kinds,
                       const EnsembleOptions& options) {
  std::atomic<std::size_t> done{0};
  std::mutex progress_mutex;
  parallel_for(
      rows.size(), options.workers,
      [&](std::size_t i) {
        TrialRow& row = rows[i];
        const QubitState psi0 = QubitState::product(row.initial_angles);
        row.result = run_adaptive_trial(h, pool, psi0, kinds[i], options.trial);
        enrich_row(row, h, pool, psi0, options);
        const std::size_t finished = done.fetch_add(1) + 1;
        if (options.progress) {
          const std::lock_guard lock(progress_mutex);
          options.progress(finished, rows.size());
        }
      },
      options.cancel);
  EnsembleStats stats;
  stats.rows = std::move(rows);
  stats.aggregates = aggregate(stats.rows);
  return stats;
}

}  // namespace

EnsembleStats run_vqex_ensemble(const OperatorSum& h, const OperatorPool& pool,
                                const std::vector<InitialStateSpec>& specs,
                                const EnsembleOptions& options) {
  std::vector<TrialRow> rows(specs.size());
  for (std::size_t i = 0; i < specs.size(); ++i) {
    rows[i].trial_id = static_cast<int>(i);
    rows[i].seed = specs[i].seed;
    rows[i].e0 = specs[i].e0;
    rows[i].lambda = std::numeric_limits<double>::quiet_NaN();
    rows[i].initial_angles = specs[i].angles;
  }
  return run_rows(h, pool, std::move(rows),
                  std::vector<CostKind>(specs.size(), CostKind::variance()),
                  options);
}

std::string_view to_string(InitialPolicy p) {
  return p == InitialPolicy::kFixedRandom ? "fixed_random" : "qubit_mean_field";
}

InitialPolicy parse_initial_policy(std::string_view text) {
  if (text == "fixed_random") return InitialPolicy::kFixedRandom;
  if (text == "qubit_mean_field") return InitialPolicy::kQubitMeanField;
  throw std::invalid_argument("unknown initial-state policy '" +
                              std::string(text) + "'");
}

std::vector<double> lambda_grid(double e_min, double e_max, int points,
                                double pad_fraction) {
  if (points < 1) throw std::invalid_argument("lambda grid needs >= 1 point");
  if (!(e_max >= e_min)) throw std::invalid_argument("empty energy range");
  const double pad = pad_fraction * (e_max - e_min);
  const double lo = e_min - pad;
  const double hi = e_max + pad;
  std::vector<double> out(points);
  for (int k = 0; k < points; ++k) {
    out[k] = points == 1 ? 0.5 * (lo + hi)
                         : lo + (hi - lo) * k / static_cast<double>(points - 1);
  }
  return out;
}

std::vector<double> mean_field_initial_angles(const OperatorSum& h,
                                              double lambda,
                                              std::span<const double> start) {
  const CostKind kind = CostKind::folded_spectrum(lambda);
  ObjectiveHandle objective([&](std::span<const double> a) {
    return cost(QubitState::product(a), h, kind);
  });
  SimplexConfig cfg;
  cfg.initial_step = 0.2;
  cfg.f_tol = 1e-12;
  cfg.max_evals = 2000 * start.size();
  std::vector<double> x(start.begin(), start.end());
  double fx = objective(x);
  for (int round = 0; round < 4; ++round) {
    const SimplexResult r = nelder_mead_minimize(objective, x, cfg);
    const bool improved = r.value < fx - 1e-12;
    if (r.value <= fx) {
      x = r.x;
      fx = r.value;
    }
    if (!improved) break;
  }
  return x;
}

EnsembleStats run_fsm_scan(const OperatorSum& h, const OperatorPool& pool,
                           const std::vector<double>& lambdas,
                           const InitialStateSpec& start, InitialPolicy policy,
                           const EnsembleOptions& options) {
  std::vector<TrialRow> rows(lambdas.size());
  std::vector<CostKind> kinds;
  kinds.reserve(lambdas.size());
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    TrialRow& row = rows[i];
    row.trial_id = static_cast<int>(i);
    row.seed = start.seed;
    row.lambda = lambdas[i];
    kinds.push_back(CostKind::folded_spectrum(lambdas[i]));
  }
  // Mean-field refinement is per shift and independent, so it runs inside
  // the same worker pool as the trials would; do it up front for clarity.
  parallel_for(rows.size(), options.workers, [&](std::size_t i) {
    TrialRow& row = rows[i];
    row.initial_angles =
        policy == InitialPolicy::kFixedRandom
            ? start.angles
            : mean_field_initial_angles(h, row.lambda, start.angles);
    row.e0 = product_state_energy(h, row.initial_angles);
  });
  return run_rows(h, pool, std::move(rows), kinds, options);
}

std::vector<BinPoint> bin_average(
    const std::vector<std::pair<double, double>>& points, double bin_width,
    double origin) {
  if (points.empty()) throw std::invalid_argument("bin_average needs points");
  if (!(bin_width > 0.0)) throw std::invalid_argument("bin width must be > 0");
  std::map<long long, BinPoint> bins;
  for (const auto& [e, v] : points) {
    const auto k = static_cast<long long>(std::floor((e - origin) / bin_width));
    auto& acc = bins[k];
    acc.energy += e;
    acc.value += v;
    ++acc.count;
  }
  std::vector<BinPoint> out;
  out.reserve(bins.size());
  for (auto& [k, acc] : bins) {
    out.push_back({acc.energy / static_cast<double>(acc.count),
                   acc.value / static_cast<double>(acc.count), acc.count});
  }
  return out;
}

std::vector<ScalingRow> nc_scaling(
    const std::vector<std::pair<int, Aggregates>>& per_size) {
  if (per_size.size() < 2) {
    throw std::invalid_argument("scaling needs at least two system sizes");
  }
  std::vector<ScalingRow> out;
  for (const auto& [n, agg] : per_size) {
    out.push_back({n, agg.all.mean_nc, agg.all.std_nc, agg.all.count});
  }
  std::sort(out.begin(), out.end(), [](const ScalingRow& a, const ScalingRow& b) {
    return a.n_qubits < b.n_qubits;
  });
  return out;
}

}  // namespace vqex
