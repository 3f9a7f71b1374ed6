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

// Run configuration and the on-disk result formats. Column and key names are
// listed in docs/formats.md; keep the two in sync.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "vqex/ensemble.hpp"

namespace vqex {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Algorithm { kVqex, kFsm };

std::string_view to_string(Algorithm a);
Algorithm parse_algorithm(std::string_view text);

std::string_view to_string(BandwidthMethod m);
BandwidthMethod parse_bandwidth_method(std::string_view text);

struct RunConfig {
  ModelParams model{};
  PoolKind pool = PoolKind::kMinimal;
  PoolOptions pool_options{};
  Algorithm algorithm = Algorithm::kVqex;
  double delta = 1e-4;
  int n_max = 100;
  /// Nelder-Mead budget per re-optimization; 0 selects 200 * dim.
  std::uint64_t max_evals = 0;
  int trials = 50;
  int sampler_bins = 16;
  std::uint64_t draw_cap = 2'000'000;
  int lambda_points = 50;
  double lambda_pad = 0.02;
  InitialPolicy fsm_initial = InitialPolicy::kFixedRandom;
  /// Range the shift grid spans: exact extremes or the mean-field estimate.
  BandwidthMethod fsm_bandwidth = BandwidthMethod::kExactExtremes;
  std::uint64_t seed = 1;
  /// Region A of the entropy cut; empty selects the first floor(N/2) sites.
  std::vector<int> bipartition;
  std::vector<Connectivity> connectivities = all_connectivities();
  double overlap_window = 1e-6;
  std::string output_dir = "out";
  int workers = 1;

  void validate() const;

  TrialOptions trial_options() const;
  Bipartition cut() const;
};

nlohmann::json to_json(const RunConfig& c);
/// Missing keys keep their defaults; unknown keys are rejected.
RunConfig config_from_json(const nlohmann::json& j,
                           const RunConfig& base = {});
RunConfig load_config(const std::string& path);

/// FNV-1a 64 of the canonical JSON of every result-affecting field, as 16 hex
/// digits. output_dir and workers do not enter the hash.
std::string config_hash(const RunConfig& c);

/// Shortest text with 17 significant digits; "nan", "inf", "-inf" otherwise.
std::string format_double(double x);
double parse_double(const std::string& text);

std::vector<std::string> trials_csv_header(
    const std::vector<Connectivity>& connectivities);
void write_trials_csv(std::ostream& out, const std::vector<TrialRow>& rows,
                      const std::vector<Connectivity>& connectivities,
                      const std::string& hash);

void write_ansatz_jsonl(std::ostream& out, const std::vector<TrialRow>& rows,
                        const OperatorPool& pool, const std::string& hash);

void write_spectrum_csv(std::ostream& out, const Spectrum& spec,
                        const std::string& hash);
void write_observables_csv(std::ostream& out,
                           const std::vector<ObservableRow>& table,
                           const std::string& hash);

/// A parsed CSV: header plus string cells, with column lookup by name.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const;
  const std::string& cell(std::size_t row, const std::string& name) const;
};

CsvTable read_csv(std::istream& in);

struct AnsatzRecord {
  std::string config_hash;
  int trial_id;
  std::optional<double> lambda;
  std::vector<double> initial_angles;
  Ansatz ansatz;
  double final_f;
  bool converged;
};

std::vector<AnsatzRecord> read_ansatz_jsonl(std::istream& in);

/// Aggregates recomputed from a trials.csv table.
Aggregates aggregate_csv(const CsvTable& table);

nlohmann::json aggregates_json(const Aggregates& a);

}  // namespace vqex
