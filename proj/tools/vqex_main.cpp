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

#include <atomic>
#include <chrono>
#include <cmath>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "vqex/io.hpp"

#ifndef VQEX_VERSION
#define VQEX_VERSION "unknown"
#endif

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::atomic<bool> g_interrupted{false};

extern "C" void on_sigint(int) { g_interrupted.store(true); }

// Flags that override the config file. Unset flags leave the file (or default)
// value in place.
struct Overrides {
  std::string config_path;
  std::optional<int> n_qubits;
  std::optional<double> j, h_x, h_z;
  std::optional<std::string> pool;
  std::optional<bool> include_same_site;
  std::optional<std::string> algorithm;
  std::optional<double> delta;
  std::optional<int> n_max;
  std::optional<int> trials;
  std::optional<int> lambda_points;
  std::optional<std::string> fsm_initial;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> workers;
};

void add_config_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("-c,--config", o.config_path, "JSON run configuration")
      ->check(CLI::ExistingFile);
  cmd->add_option("-n,--qubits", o.n_qubits, "Chain length N");
  cmd->add_option("--jzz", o.j, "ZZ coupling J");
  cmd->add_option("--hx", o.h_x, "Transverse field");
  cmd->add_option("--hz", o.h_z, "Longitudinal field");
  cmd->add_option("--pool", o.pool, "minimal | maximal");
  cmd->add_flag("--same-site{true},--no-same-site{false}", o.include_same_site,
                "Keep the i == j generator of the maximal pool");
  cmd->add_option("--algorithm", o.algorithm, "vqex | fsm");
  cmd->add_option("--delta", o.delta, "Convergence threshold");
  cmd->add_option("--n-max", o.n_max, "Maximum ansatz length");
  cmd->add_option("--trials", o.trials, "VQE-X trial count");
  cmd->add_option("--lambda-points", o.lambda_points, "FSM shift count");
  cmd->add_option("--fsm-initial", o.fsm_initial,
                  "fixed_random | qubit_mean_field");
  cmd->add_option("-s,--seed", o.seed, "Master seed");
  cmd->add_option("-o,--out", o.out, "Output directory");
  cmd->add_option("-j,--workers", o.workers, "Worker threads");
}

vqex::RunConfig resolve(const Overrides& o) {
  vqex::RunConfig c;
  if (!o.config_path.empty()) c = vqex::load_config(o.config_path);
  json patch = json::object();
  if (o.n_qubits) patch["model"]["n_qubits"] = *o.n_qubits;
  if (o.j) patch["model"]["j"] = *o.j;
  if (o.h_x) patch["model"]["h_x"] = *o.h_x;
  if (o.h_z) patch["model"]["h_z"] = *o.h_z;
  if (o.pool) patch["pool"]["kind"] = *o.pool;
  if (o.include_same_site) patch["pool"]["include_same_site"] = *o.include_same_site;
  if (o.algorithm) patch["algorithm"] = *o.algorithm;
  if (o.delta) patch["delta"] = *o.delta;
  if (o.n_max) patch["n_max"] = *o.n_max;
  if (o.trials) patch["trials"] = *o.trials;
  if (o.lambda_points) patch["lambda_points"] = *o.lambda_points;
  if (o.fsm_initial) patch["fsm_initial"] = *o.fsm_initial;
  if (o.seed) patch["seed"] = *o.seed;
  if (o.out) patch["output_dir"] = *o.out;
  if (o.workers) patch["workers"] = *o.workers;
  c = vqex::config_from_json(patch, c);
  c.validate();
  return c;
}

// Writes through a temporary so an interrupted write never leaves a torn file.
template <typename Fn>
void write_file(const fs::path& path, Fn&& fn) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    fn(out);
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return json::parse(in);
}

int cmd_run(const Overrides& o) {
  const vqex::RunConfig cfg = resolve(o);
  const std::string hash = vqex::config_hash(cfg);
  const fs::path dir = cfg.output_dir;
  fs::create_directories(dir);
  const auto t0 = std::chrono::steady_clock::now();

  const vqex::OperatorSum h = vqex::build_mfim(cfg.model);
  const vqex::OperatorPool pool =
      vqex::build_pool(cfg.pool, cfg.model.n_qubits, cfg.pool_options);
  const vqex::Spectrum spec = vqex::diagonalize(h);

  vqex::EnsembleOptions opts;
  opts.trial = cfg.trial_options();
  opts.workers = cfg.workers;
  opts.spectrum = &spec;
  opts.bipartition = cfg.cut();
  opts.overlap_window = cfg.overlap_window;
  opts.connectivities = cfg.connectivities;
  opts.cancel = &g_interrupted;
  opts.progress = [](std::size_t done, std::size_t total) {
    std::cerr << "\r[" << done << "/" << total << "]" << std::flush;
  };

  json sampler = nullptr;
  vqex::EnsembleStats stats;
  std::signal(SIGINT, on_sigint);
  if (cfg.algorithm == vqex::Algorithm::kVqex) {
    vqex::SamplerOptions so;
    so.bins = cfg.sampler_bins;
    so.draw_cap = cfg.draw_cap;
    so.window = std::make_pair(spec.e_min(), spec.e_max());
    const vqex::SampleReport report = vqex::sample_initial_states(
        cfg.model.n_qubits, cfg.trials, h, cfg.seed, so);
    sampler = {{"e_low", report.e_low},   {"e_high", report.e_high},
               {"draws", report.draws},   {"complete", report.complete},
               {"bin_target", report.bin_target},
               {"bin_fill", report.bin_fill},
               {"states", report.states.size()}};
    if (!report.complete) {
      std::cerr << "warning: draw cap reached; " << report.states.size()
                << " of " << cfg.trials << " initial states\n";
    }
    stats = vqex::run_vqex_ensemble(h, pool, report.states, opts);
  } else {
    double lo = spec.e_min();
    double hi = spec.e_max();
    if (cfg.fsm_bandwidth == vqex::BandwidthMethod::kQubitMeanField) {
      const auto bw = vqex::estimate_bandwidth(h, cfg.fsm_bandwidth);
      lo = bw.e_min;
      hi = bw.e_max;
    }
    const auto lambdas =
        vqex::lambda_grid(lo, hi, cfg.lambda_points, cfg.lambda_pad);
    vqex::InitialStateSpec start;
    start.seed = vqex::derive_seed(cfg.seed, 0);
    start.angles = vqex::random_angles(cfg.model.n_qubits, start.seed);
    start.e0 = vqex::product_state_energy(h, start.angles);
    stats = vqex::run_fsm_scan(h, pool, lambdas, start, cfg.fsm_initial, opts);
  }
  std::signal(SIGINT, SIG_DFL);
  std::cerr << "\n";
  const bool interrupted = g_interrupted.load();

  write_file(dir / "trials.csv", [&](std::ostream& out) {
    vqex::write_trials_csv(out, stats.rows, cfg.connectivities, hash);
  });
  write_file(dir / "ansatz.jsonl", [&](std::ostream& out) {
    vqex::write_ansatz_jsonl(out, stats.rows, pool, hash);
  });
  write_file(dir / "spectrum.csv", [&](std::ostream& out) {
    vqex::write_spectrum_csv(out, spec, hash);
  });
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  const json meta = {{"config", vqex::to_json(cfg)},
                     {"config_hash", hash},
                     {"version", VQEX_VERSION},
                     {"wall_seconds", seconds},
                     {"interrupted", interrupted},
                     {"sampler", sampler},
                     {"aggregates", vqex::aggregates_json(stats.aggregates)}};
  write_file(dir / "meta.json",
             [&](std::ostream& out) { out << meta.dump(2) << '\n'; });

  const auto& a = stats.aggregates;
  std::cout << "trials " << a.trials << ", converged " << a.converged
            << ", mean n_c " << a.all.mean_nc << " +- " << a.all.std_nc
            << " -> " << dir.string() << "\n";
  return interrupted ? 130 : 0;
}

int cmd_oracle(const Overrides& o) {
  const vqex::RunConfig cfg = resolve(o);
  const std::string hash = vqex::config_hash(cfg);
  const fs::path dir = cfg.output_dir;
  fs::create_directories(dir);
  const vqex::OperatorSum h = vqex::build_mfim(cfg.model);
  const vqex::Spectrum spec = vqex::diagonalize(h);
  const auto table = vqex::eigenstate_observable_table(spec, cfg.cut());
  write_file(dir / "spectrum.csv", [&](std::ostream& out) {
    vqex::write_spectrum_csv(out, spec, hash);
  });
  write_file(dir / "observables.csv", [&](std::ostream& out) {
    vqex::write_observables_csv(out, table, hash);
  });
  std::cout << spec.energies().size() << " eigenpairs, E in ["
            << spec.e_min() << ", " << spec.e_max() << "] -> " << dir.string()
            << "\n";
  return 0;
}

int cmd_replay(const std::string& dir_text, double tolerance) {
  const fs::path dir = dir_text;
  const json meta = read_json_file(dir / "meta.json");
  const vqex::RunConfig cfg = vqex::config_from_json(meta.at("config"));
  const std::string hash = vqex::config_hash(cfg);
  if (hash != meta.at("config_hash").get<std::string>()) {
    std::cerr << "meta.json config does not match its recorded hash\n";
    return 1;
  }
  const vqex::OperatorSum h = vqex::build_mfim(cfg.model);
  const vqex::OperatorPool pool =
      vqex::build_pool(cfg.pool, cfg.model.n_qubits, cfg.pool_options);

  std::ifstream in(dir / "ansatz.jsonl");
  if (!in) throw std::runtime_error("cannot open ansatz.jsonl");
  const auto records = vqex::read_ansatz_jsonl(in);
  double worst = 0.0;
  int failures = 0;
  for (const auto& r : records) {
    if (r.config_hash != hash) {
      std::cerr << "trial " << r.trial_id << ": config hash " << r.config_hash
                << " differs from " << hash << "\n";
      ++failures;
      continue;
    }
    const auto psi0 = vqex::QubitState::product(r.initial_angles);
    const auto psi = vqex::prepare_state(psi0, r.ansatz, pool);
    const auto f = vqex::convergence_metric(psi, h);
    const bool stored_nan = std::isnan(r.final_f);
    if (!f || stored_nan) {
      if (f.has_value() == stored_nan) {
        std::cerr << "trial " << r.trial_id << ": F defined on one side only\n";
        ++failures;
      }
      continue;
    }
    const double dev = std::abs(*f - r.final_f);
    worst = std::max(worst, dev);
    if (dev > tolerance) {
      std::cerr << "trial " << r.trial_id << ": stored F " << r.final_f
                << ", replayed " << *f << "\n";
      ++failures;
    }
  }
  std::cout << records.size() << " ansatze replayed, max |dF| = " << worst
            << (failures == 0 ? ", ok" : ", MISMATCH") << "\n";
  return failures == 0 ? 0 : 1;
}

int cmd_stats(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  const vqex::CsvTable table = vqex::read_csv(in);
  std::cout << vqex::aggregates_json(vqex::aggregate_csv(table)).dump(2)
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive variance and folded-spectrum eigensolver simulator"};
  app.set_version_flag("--version", VQEX_VERSION);
  app.require_subcommand(1);

  Overrides run_flags;
  auto* run = app.add_subcommand("run", "Run a trial ensemble or shift scan");
  add_config_flags(run, run_flags);

  Overrides oracle_flags;
  auto* oracle =
      app.add_subcommand("oracle", "Export the exact spectrum and observables");
  add_config_flags(oracle, oracle_flags);

  std::string replay_dir;
  double replay_tol = 1e-9;
  auto* replay = app.add_subcommand(
      "replay", "Rebuild stored ansatze and check their recorded F");
  replay->add_option("dir", replay_dir, "Run output directory")->required();
  replay->add_option("--tol", replay_tol, "Allowed |dF|");

  std::string stats_path;
  auto* stats = app.add_subcommand("stats", "Aggregate a trials.csv");
  stats->add_option("trials_csv", stats_path, "Path to trials.csv")
      ->required()
      ->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(run_flags);
    if (*oracle) return cmd_oracle(oracle_flags);
    if (*replay) return cmd_replay(replay_dir, replay_tol);
    if (*stats) return cmd_stats(stats_path);
  } catch (const vqex::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
