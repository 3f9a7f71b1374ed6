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

// CNOT counts of adaptive ansatz circuits under simple connectivity models.
//
// A weight-1 rotation is free. A weight-2 rotation e^{i theta P_a Q_b} costs
// 2 CNOTs once the qubits are adjacent; qubits at graph distance d are first
// brought together with d - 1 SWAPs and separated again afterwards, each SWAP
// being 3 CNOTs. Single-qubit basis changes are free.

#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "vqex/engine.hpp"
#include "vqex/model.hpp"
#include "vqex/pauli_string.hpp"

namespace vqex {

enum class Connectivity { kNearestNeighborOpen, kNearestNeighborPeriodic, kAllToAll };

std::string_view to_string(Connectivity c);
Connectivity parse_connectivity(std::string_view text);

/// The three connectivities in the order nn_obc, nn_pbc, all_to_all.
std::vector<Connectivity> all_connectivities();

struct ConnectivityModel {
  Connectivity kind;
  int n_qubits;

  /// Graph distance: |i - j| on the line, min(|i - j|, N - |i - j|) on the
  /// ring, 1 between distinct qubits of the complete graph.
  int distance(int i, int j) const;
};

std::uint64_t cnot_count_step(const PauliString& p,
                              const ConnectivityModel& conn);

/// Sum over steps after merging runs of the same generator.
std::uint64_t cnot_count_ansatz(const Ansatz& ansatz, const OperatorPool& pool,
                                const ConnectivityModel& conn);

}  // namespace vqex
