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

#include "vqex/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

namespace vqex {

using nlohmann::json;

std::string_view to_string(Algorithm a) {
  return a == Algorithm::kVqex ? "vqex" : "fsm";
}

Algorithm parse_algorithm(std::string_view text) {
  if (text == "vqex") return Algorithm::kVqex;
  if (text == "fsm") return Algorithm::kFsm;
  throw ConfigError("unknown algorithm '" + std::string(text) +
                    "' (expected vqex or fsm)");
}

std::string_view to_string(BandwidthMethod m) {
  return m == BandwidthMethod::kExactExtremes ? "exact" : "mean_field";
}

BandwidthMethod parse_bandwidth_method(std::string_view text) {
  if (text == "exact") return BandwidthMethod::kExactExtremes;
  if (text == "mean_field") return BandwidthMethod::kQubitMeanField;
  throw ConfigError("unknown bandwidth method '" + std::string(text) +
                    "' (expected exact or mean_field)");
}

void RunConfig::validate() const {
  try {
    model.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (!(delta > 0.0)) throw ConfigError("delta must be > 0");
  if (n_max < 1) throw ConfigError("n_max must be >= 1");
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (sampler_bins < 1) throw ConfigError("sampler_bins must be >= 1");
  if (draw_cap < 1) throw ConfigError("draw_cap must be >= 1");
  if (lambda_points < 1) throw ConfigError("lambda_points must be >= 1");
  if (!(lambda_pad >= 0.0)) throw ConfigError("lambda_pad must be >= 0");
  if (!(overlap_window >= 0.0)) throw ConfigError("overlap_window must be >= 0");
  if (workers < 1) throw ConfigError("workers must be >= 1");
  if (connectivities.empty()) throw ConfigError("connectivities is empty");
  if (std::set<Connectivity>(connectivities.begin(), connectivities.end())
          .size() != connectivities.size()) {
    throw ConfigError("connectivities lists an entry twice");
  }
  if (model.n_qubits > kMaxExactQubits) {
    throw ConfigError("n_qubits above the exact-diagonalization bound " +
                      std::to_string(kMaxExactQubits));
  }
  try {
    (void)cut();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("bipartition: ") + e.what());
  }
}

TrialOptions RunConfig::trial_options() const {
  TrialOptions t;
  t.delta = delta;
  t.n_max = n_max;
  t.simplex.max_evals = max_evals;
  return t;
}

Bipartition RunConfig::cut() const {
  if (!bipartition.empty()) return Bipartition(model.n_qubits, bipartition);
  std::vector<int> a(model.n_qubits / 2);
  for (std::size_t q = 0; q < a.size(); ++q) a[q] = static_cast<int>(q);
  return Bipartition(model.n_qubits, a);
}

json to_json(const RunConfig& c) {
  json conns = json::array();
  for (Connectivity k : c.connectivities) conns.push_back(to_string(k));
  return {
      {"model",
       {{"n_qubits", c.model.n_qubits},
        {"j", c.model.j},
        {"h_x", c.model.h_x},
        {"h_z", c.model.h_z}}},
      {"pool",
       {{"kind", to_string(c.pool)},
        {"include_same_site", c.pool_options.include_same_site}}},
      {"algorithm", to_string(c.algorithm)},
      {"delta", c.delta},
      {"n_max", c.n_max},
      {"max_evals", c.max_evals},
      {"trials", c.trials},
      {"sampler_bins", c.sampler_bins},
      {"draw_cap", c.draw_cap},
      {"lambda_points", c.lambda_points},
      {"lambda_pad", c.lambda_pad},
      {"fsm_initial", to_string(c.fsm_initial)},
      {"fsm_bandwidth", to_string(c.fsm_bandwidth)},
      {"seed", c.seed},
      {"bipartition", c.bipartition},
      {"connectivities", conns},
      {"overlap_window", c.overlap_window},
      {"output_dir", c.output_dir},
      {"workers", c.workers},
  };
}

namespace {

template <typename T>
void take(const json& j, const char* key, T& out, std::set<std::string>& seen) {
  seen.insert(key);
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

void reject_unknown(const json& j, const std::set<std::string>& seen,
                    const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (!seen.contains(key)) {
      throw ConfigError("unknown config key '" + where + key + "'");
    }
  }
}

}  // namespace

RunConfig config_from_json(const json& j, const RunConfig& base) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig c = base;
  std::set<std::string> seen;
  if (j.contains("model")) {
    const json& m = j.at("model");
    std::set<std::string> mseen;
    take(m, "n_qubits", c.model.n_qubits, mseen);
    take(m, "j", c.model.j, mseen);
    take(m, "h_x", c.model.h_x, mseen);
    take(m, "h_z", c.model.h_z, mseen);
    reject_unknown(m, mseen, "model.");
  }
  seen.insert("model");
  if (j.contains("pool")) {
    const json& p = j.at("pool");
    std::set<std::string> pseen;
    std::string kind(to_string(c.pool));
    take(p, "kind", kind, pseen);
    take(p, "include_same_site", c.pool_options.include_same_site, pseen);
    reject_unknown(p, pseen, "pool.");
    try {
      c.pool = parse_pool_kind(kind);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  seen.insert("pool");

  std::string algorithm(to_string(c.algorithm));
  std::string fsm_initial(to_string(c.fsm_initial));
  std::string fsm_bandwidth(to_string(c.fsm_bandwidth));
  std::vector<std::string> conns;
  for (Connectivity k : c.connectivities) conns.emplace_back(to_string(k));
  take(j, "algorithm", algorithm, seen);
  take(j, "delta", c.delta, seen);
  take(j, "n_max", c.n_max, seen);
  take(j, "max_evals", c.max_evals, seen);
  take(j, "trials", c.trials, seen);
  take(j, "sampler_bins", c.sampler_bins, seen);
  take(j, "draw_cap", c.draw_cap, seen);
  take(j, "lambda_points", c.lambda_points, seen);
  take(j, "lambda_pad", c.lambda_pad, seen);
  take(j, "fsm_initial", fsm_initial, seen);
  take(j, "fsm_bandwidth", fsm_bandwidth, seen);
  take(j, "seed", c.seed, seen);
  take(j, "bipartition", c.bipartition, seen);
  take(j, "connectivities", conns, seen);
  take(j, "overlap_window", c.overlap_window, seen);
  take(j, "output_dir", c.output_dir, seen);
  take(j, "workers", c.workers, seen);
  reject_unknown(j, seen, "");

  c.algorithm = parse_algorithm(algorithm);
  c.fsm_bandwidth = parse_bandwidth_method(fsm_bandwidth);
  try {
    c.fsm_initial = parse_initial_policy(fsm_initial);
    c.connectivities.clear();
    for (const auto& s : conns) c.connectivities.push_back(parse_connectivity(s));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path + "': " + e.what());
  }
  return config_from_json(j);
}

std::string config_hash(const RunConfig& c) {
  json j = to_json(c);
  j.erase("output_dir");
  j.erase("workers");
  const std::string canonical = j.dump();  // object keys are sorted
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_double(const std::string& text) {
  if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (text == "inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw FormatError("not a number: '" + text + "'");
  }
  if (used != text.size()) throw FormatError("not a number: '" + text + "'");
  return v;
}

namespace {

void write_line(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (k > 0) out << ',';
    out << cells[k];
  }
  out << '\n';
}

std::string angles_field(const std::vector<double>& angles) {
  std::string s;
  for (std::size_t k = 0; k < angles.size(); ++k) {
    if (k > 0) s += ';';
    s += format_double(angles[k]);
  }
  return s;
}

}  // namespace

std::vector<std::string> trials_csv_header(
    const std::vector<Connectivity>& connectivities) {
  std::vector<std::string> h = {
      "config_hash", "trial_id",     "seed",          "lambda",
      "e0",          "converged",    "termination",   "n_c",
      "energy",      "variance",     "f",             "h_norm",
      "magnetization", "entropy",    "best_overlap",  "best_subspace_energy",
      "state_class", "n_evals",      "initial_angles"};
  for (Connectivity c : connectivities) h.push_back("cnot_" + std::string(to_string(c)));
  return h;
}

void write_trials_csv(std::ostream& out, const std::vector<TrialRow>& rows,
                      const std::vector<Connectivity>& connectivities,
                      const std::string& hash) {
  write_line(out, trials_csv_header(connectivities));
  for (const auto& row : rows) {
    if (!row.completed) continue;
    const TrialResult& r = row.result;
    std::vector<std::string> cells = {
        hash,
        std::to_string(row.trial_id),
        std::to_string(row.seed),
        format_double(row.lambda),
        format_double(row.e0),
        r.converged ? "1" : "0",
        std::string(to_string(r.termination)),
        std::to_string(r.n_c),
        format_double(r.final_energy),
        format_double(r.final_variance),
        format_double(r.final_f),
        format_double(r.final_h_norm),
        format_double(row.magnetization),
        format_double(row.entropy),
        format_double(row.best_overlap),
        format_double(row.best_subspace_energy),
        std::string(to_string(row.state_class)),
        std::to_string(r.total_evals),
        angles_field(row.initial_angles)};
    for (std::size_t k = 0; k < connectivities.size(); ++k) {
      cells.push_back(k < row.cnots.size() ? std::to_string(row.cnots[k]) : "");
    }
    write_line(out, cells);
  }
}

namespace {

json number_or_null(double x) {
  return std::isfinite(x) ? json(x) : json(nullptr);
}

}  // namespace

void write_ansatz_jsonl(std::ostream& out, const std::vector<TrialRow>& rows,
                        const OperatorPool& pool, const std::string& hash) {
  for (const auto& row : rows) {
    if (!row.completed) continue;
    json steps = json::array();
    for (const auto& s : row.result.ansatz.steps) {
      steps.push_back({{"op", s.op_id},
                       {"label", pool.at(s.op_id).label()},
                       {"theta", s.theta}});
    }
    json log = json::array();
    for (const auto& s : row.result.steps) {
      log.push_back({{"line_search_cost", number_or_null(s.line_search_cost)},
                     {"reoptimized_cost", number_or_null(s.reoptimized_cost)},
                     {"optimizer_evals", s.optimizer_evals},
                     {"cumulative_evals", s.cumulative_evals},
                     {"f", number_or_null(s.f)}});
    }
    const json record = {
        {"config_hash", hash},
        {"trial_id", row.trial_id},
        {"seed", row.seed},
        {"lambda", number_or_null(row.lambda)},
        {"initial_angles", row.initial_angles},
        {"steps", steps},
        {"converged", row.result.converged},
        {"termination", to_string(row.result.termination)},
        {"final_f", number_or_null(row.result.final_f)},
        {"log", log},
    };
    out << record.dump() << '\n';
  }
}

void write_spectrum_csv(std::ostream& out, const Spectrum& spec,
                        const std::string& hash) {
  write_line(out, {"config_hash", "index", "energy"});
  for (Eigen::Index k = 0; k < spec.energies().size(); ++k) {
    write_line(out, {hash, std::to_string(k), format_double(spec.energy(k))});
  }
}

void write_observables_csv(std::ostream& out,
                           const std::vector<ObservableRow>& table,
                           const std::string& hash) {
  write_line(out, {"config_hash", "index", "energy", "magnetization", "entropy"});
  for (std::size_t k = 0; k < table.size(); ++k) {
    write_line(out, {hash, std::to_string(k), format_double(table[k].energy),
                     format_double(table[k].magnetization),
                     format_double(table[k].entropy)});
  }
}

std::size_t CsvTable::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw FormatError("missing CSV column '" + name + "'");
  return static_cast<std::size_t>(it - header.begin());
}

const std::string& CsvTable::cell(std::size_t row, const std::string& name) const {
  return rows.at(row).at(column(name));
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

CsvTable read_csv(std::istream& in) {
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty CSV input");
  t.header = split(line, ',');
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto cells = split(line, ',');
    if (cells.size() != t.header.size()) {
      throw FormatError("CSV line " + std::to_string(line_no) + " has " +
                        std::to_string(cells.size()) + " cells, header has " +
                        std::to_string(t.header.size()));
    }
    t.rows.push_back(std::move(cells));
  }
  return t;
}

std::vector<AnsatzRecord> read_ansatz_jsonl(std::istream& in) {
  std::vector<AnsatzRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      AnsatzRecord r;
      r.config_hash = j.at("config_hash").get<std::string>();
      r.trial_id = j.at("trial_id").get<int>();
      if (!j.at("lambda").is_null()) r.lambda = j.at("lambda").get<double>();
      r.initial_angles = j.at("initial_angles").get<std::vector<double>>();
      for (const auto& s : j.at("steps")) {
        r.ansatz.steps.push_back(
            {s.at("op").get<std::size_t>(), s.at("theta").get<double>()});
      }
      r.final_f = j.at("final_f").is_null()
                      ? std::numeric_limits<double>::quiet_NaN()
                      : j.at("final_f").get<double>();
      r.converged = j.at("converged").get<bool>();
      out.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw FormatError("ansatz.jsonl line " + std::to_string(line_no) + ": " +
                        e.what());
    }
  }
  return out;
}

Aggregates aggregate_csv(const CsvTable& table) {
  std::vector<TrialRow> rows(table.rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    TrialRow& row = rows[k];
    row.completed = true;
    row.result.converged = table.cell(k, "converged") == "1";
    row.result.n_c = std::stoi(table.cell(k, "n_c"));
    row.result.total_evals = std::stoull(table.cell(k, "n_evals"));
    row.state_class = parse_state_class(table.cell(k, "state_class"));
  }
  return aggregate(rows);
}

json aggregates_json(const Aggregates& a) {
  auto cls = [](const ClassStats& s) {
    return json{{"count", s.count}, {"mean_nc", s.mean_nc}, {"std_nc", s.std_nc}};
  };
  return {{"trials", a.trials},
          {"converged", a.converged},
          {"convergence_rate", a.convergence_rate},
          {"all", cls(a.all)},
          {"edge", cls(a.edge)},
          {"excited", cls(a.excited)},
          {"total_evals", a.total_evals}};
}

}  // namespace vqex
