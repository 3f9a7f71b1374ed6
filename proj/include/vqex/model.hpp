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

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vqex/operator_sum.hpp"
#include "vqex/statevector.hpp"

namespace vqex {

/// Periodic mixed-field Ising chain
///   H = J sum_i Z_i Z_{i+1} + sum_i (h_x X_i + h_z Z_i),  site N+1 == site 1.
/// h_z = 0 is the transverse-field (integrable) case.
struct ModelParams {
  int n_qubits = 6;
  double j = 1.0;
  double h_x = 0.8;
  double h_z = 0.0;

  void validate() const;
};

OperatorSum build_mfim(const ModelParams& params);

/// Sum_i Z_i / N as an operator.
OperatorSum magnetization_operator(int n_qubits);

double magnetization_density(const QubitState& state);

/// <phi|h|phi> for the real product state
/// prod_q (cos(angles[q]) |0> + sin(angles[q]) |1>), evaluated site by site.
double product_state_energy(const OperatorSum& h,
                            std::span<const double> angles);

enum class PoolKind { kMinimal, kMaximal };

std::string_view to_string(PoolKind kind);
PoolKind parse_pool_kind(std::string_view text);

struct PoolOptions {
  /// Keep the i == j entry of the {Y_i X_j} family, stored as the
  /// single-site Z_i it is proportional to. Off by default: every generator
  /// then has exactly one Y, so e^{i theta O} is real orthogonal.
  bool include_same_site = false;
};

/// Ordered, deduplicated list of Hermitian generators. An operator's id is its
/// position in `operators`.
struct OperatorPool {
  PoolKind kind;
  PoolOptions options;
  std::vector<PauliString> operators;

  std::size_t size() const { return operators.size(); }
  const PauliString& at(std::size_t id) const { return operators.at(id); }
};

/// minimal: {Y_i} then {Y_i Z_{i+1}} (periodic).
/// maximal: {Y_i} then {Y_i Z_j}_{i != j} then {Y_i X_j}, each family ordered
/// by (i, j).
OperatorPool build_pool(PoolKind kind, int n_qubits,
                        const PoolOptions& options = {});

enum class BandwidthMethod { kExactExtremes, kQubitMeanField };

struct BandwidthEstimate {
  double e_min;
  double e_max;
  /// False when the mean-field optimizer exhausted its budget on every start;
  /// the interval is then the best found.
  bool optimizer_converged = true;
  std::uint64_t evaluations = 0;
  /// Angles of the product states realizing e_min and e_max (mean-field only).
  std::vector<double> argmin_angles;
  std::vector<double> argmax_angles;
};

BandwidthEstimate estimate_bandwidth(const OperatorSum& h,
                                     BandwidthMethod method);

}  // namespace vqex
