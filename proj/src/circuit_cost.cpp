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

#include "vqex/circuit_cost.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace vqex {

std::string_view to_string(Connectivity c) {
  switch (c) {
    case Connectivity::kNearestNeighborOpen:
      return "nn_obc";
    case Connectivity::kNearestNeighborPeriodic:
      return "nn_pbc";
    case Connectivity::kAllToAll:
      return "all_to_all";
  }
  return "unknown";
}

Connectivity parse_connectivity(std::string_view text) {
  if (text == "nn_obc") return Connectivity::kNearestNeighborOpen;
  if (text == "nn_pbc") return Connectivity::kNearestNeighborPeriodic;
  if (text == "all_to_all") return Connectivity::kAllToAll;
  throw std::invalid_argument("unknown connectivity '" + std::string(text) +
                              "'");
}

std::vector<Connectivity> all_connectivities() {
  return {Connectivity::kNearestNeighborOpen,
          Connectivity::kNearestNeighborPeriodic, Connectivity::kAllToAll};
}

int ConnectivityModel::distance(int i, int j) const {
  if (i < 0 || j < 0 || i >= n_qubits || j >= n_qubits) {
    throw DimensionError("qubit index outside the connectivity graph");
  }
  const int d = std::abs(i - j);
  switch (kind) {
    case Connectivity::kNearestNeighborOpen:
      return d;
    case Connectivity::kNearestNeighborPeriodic:
      return std::min(d, n_qubits - d);
    case Connectivity::kAllToAll:
      return d == 0 ? 0 : 1;
  }
  return d;
}

std::uint64_t cnot_count_step(const PauliString& p,
                              const ConnectivityModel& conn) {
  if (p.n_qubits() != conn.n_qubits) {
    throw DimensionError("Pauli string and connectivity sizes differ");
  }
  const auto support = p.support();
  if (support.size() <= 1) return 0;
  if (support.size() > 2) {
    throw std::invalid_argument("CNOT counting supports weight <= 2 only");
  }
  const int d = conn.distance(support[0], support[1]);
  return 2 + 6 * static_cast<std::uint64_t>(d - 1);
}

std::uint64_t cnot_count_ansatz(const Ansatz& ansatz, const OperatorPool& pool,
                                const ConnectivityModel& conn) {
  std::uint64_t total = 0;
  for (std::size_t k = 0; k < ansatz.steps.size(); ++k) {
    const std::size_t id = ansatz.steps[k].op_id;
    if (k > 0 && ansatz.steps[k - 1].op_id == id) continue;
    total += cnot_count_step(pool.at(id), conn);
  }
  return total;
}

}  // namespace vqex
