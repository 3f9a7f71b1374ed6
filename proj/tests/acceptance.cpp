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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// fails. Ensembles are built once and shared between criteria.
//
//   acceptance [--only C4,C6] [--workers 4]

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "oracle.hpp"
#include "vqex/circuit_cost.hpp"
#include "vqex/engine.hpp"
#include "vqex/ensemble.hpp"
#include "vqex/exact.hpp"
#include "vqex/io.hpp"
#include "vqex/model.hpp"

namespace fs = std::filesystem;
using namespace vqex;

namespace {

constexpr int kTrials = 200;
constexpr int kScalingTrials = 48;
constexpr double kDelta = 1e-4;
constexpr double kFineDelta = 1e-5;
constexpr double kDegenerate = 1e-6;

int g_workers = 1;

struct Verdict {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

void log(const std::string& s) {
  std::fprintf(stderr, "  .. %s\n", s.c_str());
  std::fflush(stderr);
}

// A model, its pool, its spectrum and the rows of one ensemble.
struct Run {
  ModelParams params;
  PoolKind pool_kind;
  OperatorSum h;
  OperatorPool pool;
  Spectrum spec;
  double delta;
  std::vector<TrialRow> rows;
};

Run make_run(ModelParams params, PoolKind kind, double delta, int trials,
             std::uint64_t seed) {
  const auto t0 = std::chrono::steady_clock::now();
  OperatorSum h = build_mfim(params);
  OperatorPool pool = build_pool(kind, params.n_qubits);
  Spectrum spec = diagonalize(h);
  EnsembleOptions opts;
  opts.trial.delta = delta;
  opts.trial.n_max = 100;
  opts.workers = g_workers;
  opts.spectrum = &spec;
  opts.bipartition = Bipartition::leading(params.n_qubits, params.n_qubits / 2);
  opts.overlap_window = kDegenerate;
  const auto specs = sample_initial_states(params.n_qubits, trials, h, seed).states;
  auto rows = run_vqex_ensemble(h, pool, specs, opts).rows;
  const double sec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  log(fmt("ensemble N=%d h_z=%.2f pool=%s delta=%.0e trials=%zu: %.0f s",
          params.n_qubits, params.h_z, std::string(to_string(kind)).c_str(), delta,
          rows.size(), sec));
  return {params, kind, std::move(h), std::move(pool), std::move(spec), delta,
          std::move(rows)};
}

// The rows a run at `delta` would have produced, read off the finer run.
std::vector<TrialRow> coarsen(const Run& run, double delta) {
  if (delta == run.delta) return run.rows;
  EnsembleOptions opts;
  opts.spectrum = &run.spec;
  opts.bipartition = Bipartition::leading(run.params.n_qubits, run.params.n_qubits / 2);
  opts.overlap_window = kDegenerate;
  std::vector<TrialRow> out = run.rows;
  for (TrialRow& row : out) {
    row.result = at_threshold(row.result, delta);
    enrich_row(row, run.h, run.pool, QubitState::product(row.initial_angles), opts);
  }
  return out;
}

ModelParams tfim(int n) { return {n, 1.0, 0.8, 0.0}; }
ModelParams mfim(int n) { return {n, 1.0, 0.8, 0.5}; }

// Shared ensembles, built on first use.
template <auto Build>
const Run& cached() {
  static const Run run = Build();
  return run;
}

Run tfim6_min_fine() { return make_run(tfim(6), PoolKind::kMinimal, kFineDelta, kTrials, 2024); }
Run tfim6_max() { return make_run(tfim(6), PoolKind::kMaximal, kDelta, kTrials, 2024); }
Run mfim6_max_fine() { return make_run(mfim(6), PoolKind::kMaximal, kFineDelta, kTrials, 2025); }
Run mfim6_min() { return make_run(mfim(6), PoolKind::kMinimal, kDelta, kTrials, 2025); }

std::size_t distinct_levels_hit(const std::vector<TrialRow>& rows, const Spectrum& spec,
                                double tol = std::numeric_limits<double>::infinity()) {
  const auto groups = group_degenerate(spec, kDegenerate);
  std::set<std::size_t> hit;
  for (const TrialRow& r : rows) {
    if (!r.result.converged) continue;
    const std::size_t k = spec.nearest(r.result.final_energy);
    if (std::abs(spec.energy(k) - r.result.final_energy) > tol) continue;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      const auto& m = groups[g].members;
      if (std::find(m.begin(), m.end(), k) != m.end()) hit.insert(g);
    }
  }
  return hit.size();
}

bool in(double x, double lo, double hi) { return x >= lo && x <= hi; }

// ---------------------------------------------------------------------------

Verdict c1_oracle() {
  double worst_res = 0, worst_dense = 0;
  for (int n = 3; n <= 8; ++n) {
    for (const ModelParams& p : {tfim(n), mfim(n)}) {
      const OperatorSum h = build_mfim(p);
      const Spectrum spec = diagonalize(h);
      for (std::size_t k = 0; k < spec.size(); ++k) {
        const QubitState v = spec.eigenstate(k);
        const QubitState hv = apply_operator_sum(v, h);
        double r2 = 0;
        for (std::size_t b = 0; b < v.dim(); ++b) {
          r2 += std::norm(hv[b] - spec.energy(k) * v[b]);
        }
        worst_res = std::max(worst_res, std::sqrt(r2));
      }
      if (n <= 4) {
        const double diff =
            (dense_matrix(h) - oracle::mfim(n, p.j, p.h_x, p.h_z)).cwiseAbs().maxCoeff();
        worst_dense = std::max(worst_dense, diff);
      }
    }
  }
  return {worst_res <= 1e-9 && worst_dense <= 1e-12,
          fmt("max residual %.2e (<= 1e-9), max dense deviation %.2e (<= 1e-12)",
              worst_res, worst_dense)};
}

Verdict c2_zero_cost() {
  const OperatorSum h = build_mfim(mfim(6));
  const Spectrum spec = diagonalize(h);
  double worst = 0;
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const QubitState v = spec.eigenstate(k);
    const auto f = convergence_metric(v, h);
    worst = std::max({worst, cost(v, h, CostKind::variance()),
                      cost(v, h, CostKind::folded_spectrum(spec.energy(k))),
                      f ? *f : 0.0});
  }
  return {worst < 1e-9, fmt("max of variance, F, folded cost over 64 eigenstates %.2e", worst)};
}

Verdict c3_leak_formula() {
  const OperatorSum h = build_mfim(mfim(6));
  const Spectrum spec = diagonalize(h);
  // Pairs of distinct levels; exact degeneracies (momentum partners) have
  // Delta = 0 where the relative comparison is undefined.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t k = 0; k < spec.size(); ++k) {
    for (std::size_t l = 0; l < spec.size(); ++l) {
      const double e = spec.energy(k), d = spec.energy(l) - e;
      if (k != l && std::abs(d) > 1e-8 * std::abs(e) && std::abs(d) <= 0.01 * std::abs(e)) {
        pairs.emplace_back(k, l);
      }
    }
  }
  if (pairs.empty()) return {false, "no eigenpairs with Delta/|E| <= 0.01"};
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0;
  for (int t = 0; t < 100; ++t) {
    const auto [k, l] = pairs[rng() % pairs.size()];
    const double mix = u(rng) * std::numbers::pi / 2;
    const std::complex<double> a = std::polar(std::cos(mix), 2 * std::numbers::pi * u(rng));
    const std::complex<double> b = std::polar(std::sin(mix), 2 * std::numbers::pi * u(rng));
    const QubitState vk = spec.eigenstate(k), vl = spec.eigenstate(l);
    std::vector<Amplitude> amp(vk.dim());
    for (std::size_t i = 0; i < amp.size(); ++i) amp[i] = a * vk[i] + b * vl[i];
    const QubitState psi = QubitState::from_amplitudes(6, std::move(amp));
    const double e = spec.energy(k), d = spec.energy(l) - e;
    const double predicted = std::norm(a) * std::norm(b) * d * d / (2 * e * e);
    const double exact = convergence_metric(psi, h).value();
    worst = std::max(worst, std::abs(exact - predicted) / predicted);
  }
  return {worst <= 0.05, fmt("%zu candidate pairs, max relative deviation %.3f (<= 0.05)",
                             pairs.size(), worst)};
}

Verdict c4_integrable() {
  const Run& fine = cached<tfim6_min_fine>();
  const Aggregates agg = aggregate(coarsen(fine, kDelta));
  const auto groups = group_degenerate(fine.spec, kDegenerate);
  double worst_overlap = 1;
  std::size_t fine_converged = 0;
  for (const TrialRow& r : fine.rows) {
    if (!r.result.converged) continue;
    ++fine_converged;
    const QubitState psi =
        prepare_state(QubitState::product(r.initial_angles), r.result.ansatz, fine.pool);
    const std::size_t k = fine.spec.nearest(r.result.final_energy);
    for (const auto& g : groups) {
      if (std::find(g.members.begin(), g.members.end(), k) != g.members.end()) {
        worst_overlap = std::min(worst_overlap, subspace_overlap(psi, g, fine.spec));
      }
    }
  }
  const bool pass = agg.trials >= 200 && agg.convergence_rate >= 0.5 &&
                    in(agg.excited.mean_nc, 25, 60) && in(agg.edge.mean_nc, 10, 20) &&
                    fine_converged > 0 && worst_overlap >= 0.99;
  return {pass,
          fmt("trials %zu, rate %.2f (>= 0.5), excited n_c %.1f+-%.1f in [25,60] (n=%zu), "
              "edge n_c %.1f+-%.1f in [10,20] (n=%zu), min overlap %.4f over %zu states at "
              "delta=1e-5 (>= 0.99)",
              agg.trials, agg.convergence_rate, agg.excited.mean_nc, agg.excited.std_nc,
              agg.excited.count, agg.edge.mean_nc, agg.edge.std_nc, agg.edge.count,
              worst_overlap, fine_converged)};
}

Verdict c5_pools() {
  const Aggregates tmin = aggregate(coarsen(cached<tfim6_min_fine>(), kDelta));
  const Aggregates tmax = aggregate(cached<tfim6_max>().rows);
  const double ratio = tmax.all.mean_nc / tmin.all.mean_nc;

  const Run& big = cached<mfim6_max_fine>();
  const Run& small = cached<mfim6_min>();
  const auto big_rows = coarsen(big, kDelta);
  const Aggregates mmax = aggregate(big_rows);
  const Aggregates mmin = aggregate(small.rows);
  const std::size_t lmax = distinct_levels_hit(big_rows, big.spec);
  const std::size_t lmin = distinct_levels_hit(small.rows, small.spec);
  const bool pass = in(ratio, 1.2, 2.2) && mmax.convergence_rate > mmin.convergence_rate &&
                    lmax > lmin;
  return {pass, fmt("(i) TFIM n_c max/min %.1f/%.1f = %.2f in [1.2,2.2]; (ii) MFIM rate "
                    "max %.2f vs min %.2f, levels covered max %zu vs min %zu",
                    tmax.all.mean_nc, tmin.all.mean_nc, ratio, mmax.convergence_rate,
                    mmin.convergence_rate, lmax, lmin)};
}

Verdict c6_nonintegrable() {
  const Aggregates agg = aggregate(coarsen(cached<mfim6_max_fine>(), kDelta));
  const bool pass = in(agg.excited.mean_nc, 55, 95) && in(agg.edge.mean_nc, 12, 25);
  return {pass, fmt("rate %.2f, excited n_c %.1f+-%.1f in [55,95] (n=%zu), edge n_c "
                    "%.1f+-%.1f in [12,25] (n=%zu)",
                    agg.convergence_rate, agg.excited.mean_nc, agg.excited.std_nc,
                    agg.excited.count, agg.edge.mean_nc, agg.edge.std_nc, agg.edge.count)};
}

Verdict c7_observables() {
  const Run& run = cached<mfim6_max_fine>();
  const Bipartition cut = Bipartition::leading(6, 3);
  const auto ed = eigenstate_observable_table(run.spec, cut);
  const auto groups = group_degenerate(run.spec, kDegenerate);

  double worst_mz = 0;
  std::size_t single = 0;
  std::vector<std::pair<double, double>> vqe_pts, ed_pts;
  for (const TrialRow& r : run.rows) {
    if (!r.result.converged) continue;
    vqe_pts.emplace_back(r.result.final_energy, r.entropy);
    const QubitState psi =
        prepare_state(QubitState::product(r.initial_angles), r.result.ansatz, run.pool);
    const SubspaceMatch m = best_subspace(psi, groups, run.spec);
    if (m.overlap < 0.999) continue;
    ++single;
    double mz = 0;
    for (std::size_t k : groups[m.subspace].members) mz += ed[k].magnetization;
    mz /= static_cast<double>(groups[m.subspace].members.size());
    worst_mz = std::max(worst_mz, std::abs(r.magnetization - mz));
  }
  for (const auto& row : ed) ed_pts.emplace_back(row.energy, row.entropy);

  const double bw = run.spec.e_max() - run.spec.e_min();
  const double lo = run.spec.e_min() + bw / 3, hi = run.spec.e_min() + 2 * bw / 3;
  auto bulk = [&](std::vector<std::pair<double, double>> pts) {
    std::erase_if(pts, [&](const auto& p) { return p.first < lo || p.first >= hi; });
    std::map<long, BinPoint> out;
    for (const BinPoint& b : bin_average(pts, bw / 10, lo)) {
      out[std::lround(std::floor((b.energy - lo) / (bw / 10)))] = b;
    }
    return out;
  };
  const auto vb = bulk(vqe_pts), eb = bulk(ed_pts);
  double worst_sa = 0;
  std::size_t compared = 0;
  for (const auto& [bin, v] : vb) {
    const auto it = eb.find(bin);
    if (it == eb.end()) continue;
    ++compared;
    worst_sa = std::max(worst_sa, std::abs(v.value - it->second.value) / it->second.value);
  }
  const bool pass = single > 0 && worst_mz <= 1e-2 && compared >= 2 && worst_sa <= 0.2;
  return {pass, fmt("%zu single-subspace states, max |dM_Z| %.2e (<= 1e-2); %zu bulk bins, "
                    "max relative S_A deviation %.3f (<= 0.2)",
                    single, worst_mz, compared, worst_sa)};
}

Verdict c8_fsm() {
  const auto t0 = std::chrono::steady_clock::now();
  const OperatorSum h = build_mfim(tfim(6));
  const OperatorPool pool = build_pool(PoolKind::kMinimal, 6);
  const Spectrum spec = diagonalize(h);
  const auto lambdas = lambda_grid(spec.e_min(), spec.e_max(), 50, 0.02);
  InitialStateSpec start;
  start.seed = derive_seed(2026, 0);
  start.angles = random_angles(6, start.seed);
  start.e0 = product_state_energy(h, start.angles);
  EnsembleOptions opts;
  opts.workers = g_workers;
  opts.spectrum = &spec;
  opts.bipartition = Bipartition::leading(6, 3);
  const auto stats = run_fsm_scan(h, pool, lambdas, start, InitialPolicy::kFixedRandom, opts);
  log(fmt("fsm scan: %.0f s",
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()));
  const std::size_t levels = group_degenerate(spec, kDegenerate).size();
  const std::size_t hit = distinct_levels_hit(stats.rows, spec, 1e-3);
  const double frac = static_cast<double>(hit) / static_cast<double>(levels);
  const Aggregates agg = stats.aggregates;
  const bool pass = frac >= 0.6 && agg.converged > 0 && in(agg.all.mean_nc, 10, 60);
  return {pass, fmt("%zu of %zu distinct levels hit within 1e-3 (%.2f >= 0.6), %zu/%zu "
                    "converged, mean n_c %.1f+-%.1f in [10,60]",
                    hit, levels, frac, agg.converged, agg.trials, agg.all.mean_nc,
                    agg.all.std_nc)};
}

Verdict c9_cnot() {
  const ConnectivityModel all{Connectivity::kAllToAll, 6};
  const ConnectivityModel pbc{Connectivity::kNearestNeighborPeriodic, 6};
  const ConnectivityModel obc{Connectivity::kNearestNeighborOpen, 6};
  std::size_t n_max = 0, n_min = 0, bad = 0;
  double sum[3] = {0, 0, 0};
  for (const Run* run : {&cached<mfim6_max_fine>(), &cached<tfim6_max>()}) {
    for (const TrialRow& r : run->rows) {
      if (!r.result.converged) continue;
      const auto a = cnot_count_ansatz(r.result.ansatz, run->pool, all);
      const auto p = cnot_count_ansatz(r.result.ansatz, run->pool, pbc);
      const auto o = cnot_count_ansatz(r.result.ansatz, run->pool, obc);
      if (!(a <= p && p <= o)) ++bad;
      if (run->params.h_z != 0 && classify_energy(r.result.final_energy, run->spec) ==
                                      StateClass::kExcited) {
        sum[0] += a, sum[1] += p, sum[2] += o;
      }
      ++n_max;
    }
  }
  for (const Run* run : {&cached<tfim6_min_fine>(), &cached<mfim6_min>()}) {
    for (const TrialRow& r : run->rows) {
      if (!r.result.converged) continue;
      if (cnot_count_ansatz(r.result.ansatz, run->pool, pbc) !=
          cnot_count_ansatz(r.result.ansatz, run->pool, all)) {
        ++bad;
      }
      ++n_min;
    }
  }
  const Aggregates ex = aggregate(cached<mfim6_max_fine>().rows);
  const double c = std::max<double>(1, static_cast<double>(ex.excited.count));
  return {bad == 0 && n_max > 0 && n_min > 0,
          fmt("%zu maximal-pool and %zu minimal-pool ansaetze, %zu violations; MFIM excited "
              "mean CNOTs all/pbc/obc %.0f/%.0f/%.0f",
              n_max, n_min, bad, sum[0] / c, sum[1] / c, sum[2] / c)};
}

Verdict c10_scaling() {
  std::vector<std::pair<int, Aggregates>> integrable, nonintegrable;
  for (int n = 5; n <= 8; ++n) {
    const Aggregates a =
        n == 6 ? aggregate(coarsen(cached<tfim6_min_fine>(), kDelta))
               : aggregate(make_run(tfim(n), PoolKind::kMinimal, kDelta, kScalingTrials, 100 + n).rows);
    integrable.emplace_back(n, a);
  }
  for (int n = 5; n <= 7; ++n) {
    const Aggregates a =
        n == 6 ? aggregate(coarsen(cached<mfim6_max_fine>(), kDelta))
               : aggregate(make_run(mfim(n), PoolKind::kMaximal, kDelta, kScalingTrials, 200 + n).rows);
    nonintegrable.emplace_back(n, a);
  }
  const auto ti = nc_scaling(integrable), tn = nc_scaling(nonintegrable);
  bool pass = true;
  std::string detail = "integrable";
  for (std::size_t k = 0; k < ti.size(); ++k) {
    detail += fmt(" N=%d:%.1f(%zu)", ti[k].n_qubits, ti[k].mean_nc, ti[k].converged);
    if (k > 0 && !(ti[k].mean_nc > ti[k - 1].mean_nc)) pass = false;
  }
  detail += "; nonintegrable";
  for (std::size_t k = 0; k < tn.size(); ++k) {
    detail += fmt(" N=%d:%.1f(%zu)", tn[k].n_qubits, tn[k].mean_nc, tn[k].converged);
    if (k > 0 && !(tn[k].mean_nc > tn[k - 1].mean_nc)) pass = false;
    if (!(tn[k].mean_nc >= ti[k].mean_nc)) pass = false;
  }
  return {pass, detail};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Verdict c11_determinism() {
  const fs::path dir = fs::temp_directory_path() / "vqex_acceptance_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  auto run = [&](int workers) {
    const fs::path out = dir / ("j" + std::to_string(workers));
    const std::string cmd = std::string(VQEX_BIN) +
                            " run -n 6 --hz 0.5 --pool maximal --trials 16 -s 11 -j " +
                            std::to_string(workers) + " -o " + out.string() + " > " +
                            (dir / "log.txt").string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) && WEXITSTATUS(status) == 0 ? slurp(out / "trials.csv")
                                                         : std::string();
  };
  const std::string one = run(1), eight = run(8);
  fs::remove_all(dir);
  const bool pass = !one.empty() && one == eight;
  return {pass, fmt("trials.csv %zu bytes, workers 1 vs 8 %s", one.size(),
                    pass ? "identical" : "differ")};
}

struct Criterion {
  const char* id;
  const char* name;
  std::function<Verdict()> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vqex acceptance criteria"};
  std::string only;
  app.add_option("--only", only, "Comma-separated criterion ids, e.g. C4,C6");
  app.add_option("--workers", g_workers, "Trial worker threads")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria = {
      {"C1", "oracle consistency", c1_oracle},
      {"C2", "cost functions vanish on eigenstates", c2_zero_cost},
      {"C3", "two-level leak formula", c3_leak_formula},
      {"C4", "integrable convergence", c4_integrable},
      {"C5", "pool dependence", c5_pools},
      {"C6", "nonintegrable excited-state cost", c6_nonintegrable},
      {"C7", "observable agreement", c7_observables},
      {"C8", "folded-spectrum coverage", c8_fsm},
      {"C9", "CNOT ordering", c9_cnot},
      {"C10", "scaling trend", c10_scaling},
      {"C11", "determinism across worker counts", c11_determinism},
  };
  std::set<std::string> selected;
  for (std::stringstream ss(only); ss.good();) {
    std::string id;
    std::getline(ss, id, ',');
    if (!id.empty()) selected.insert(id);
  }

  int failed = 0;
  for (const Criterion& c : criteria) {
    if (!selected.empty() && !selected.contains(c.id)) continue;
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    failed += v.pass ? 0 : 1;
    std::printf("%s %-4s %s: %s\n", v.pass ? "PASS" : "FAIL", c.id, c.name, v.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
