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

#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "vqex/operator_sum.hpp"
#include "vqex/pauli_string.hpp"

namespace vqex {

using Amplitude = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

/// Tolerance on |norm - 1| accepted when a normalized state is constructed.
inline constexpr double kNormTolerance = 1e-10;
/// Drift beyond this from unit norm is an error, never a silent renormalize.
inline constexpr double kNormDriftLimit = 1e-8;

class NormalizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense vector of 2^n amplitudes. States are tagged normalized or
/// unnormalized; the latter arise from applying operator sums.
class QubitState {
 public:
  static QubitState basis(int n_qubits, BasisIndex index);
  static QubitState from_amplitudes(int n_qubits,
                                    std::vector<Amplitude> amplitudes);
  static QubitState unnormalized(int n_qubits,
                                 std::vector<Amplitude> amplitudes);
  /// Product state prod_q (cos(angle_q)|0> + sin(angle_q)|1>).
  static QubitState product(std::span<const double> angles);

  int n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return amplitudes_.size(); }
  bool normalized() const { return normalized_; }

  std::span<const Amplitude> amplitudes() const { return amplitudes_; }
  const Amplitude& operator[](BasisIndex b) const { return amplitudes_[b]; }

  double norm() const;

  /// Returns this state with the normalized tag, after checking the norm is
  /// within kNormTolerance of one.
  QubitState as_normalized() const;

 private:
  QubitState(int n_qubits, std::vector<Amplitude> amplitudes,
             bool normalized);

  int n_qubits_;
  std::vector<Amplitude> amplitudes_;
  bool normalized_;
};

/// Subsystem A of a bipartition A|B, as a set of 0-based qubit indices.
class Bipartition {
 public:
  Bipartition(int n_qubits, std::vector<int> region_a);

  /// The first `count` qubits.
  static Bipartition leading(int n_qubits, int count);

  int n_qubits() const { return n_qubits_; }
  const std::vector<int>& region_a() const { return region_a_; }
  std::vector<int> region_b() const;
  Bipartition complement() const;

 private:
  int n_qubits_;
  std::vector<int> region_a_;
};

QubitState apply_pauli(const QubitState& state, const PauliString& p);

/// e^{i theta P} |psi> = cos(theta) |psi> + i sin(theta) P |psi>.
QubitState pauli_rotation(const QubitState& state, const PauliString& p,
                          double theta);

/// sum_k c_k P_k |psi>, tagged unnormalized. An empty sum gives the zero
/// vector.
QubitState apply_operator_sum(const QubitState& state, const OperatorSum& op);

/// <psi|op|psi>. Rejects unnormalized-tagged states and states whose norm
/// drifted beyond kNormDriftLimit.
double expectation(const QubitState& state, const OperatorSum& op);

std::complex<double> inner_product(const QubitState& a, const QubitState& b);

/// rho_A = tr_B |psi><psi|. Row/column index bit k corresponds to the k-th
/// qubit of region_a in ascending order.
ComplexMatrix reduced_density_matrix(const QubitState& state,
                                     const Bipartition& part);

/// Von Neumann entropy -tr(rho ln rho) in nats. Eigenvalues below 1e-12 are
/// dropped; a matrix that is not Hermitian, not PSD or not trace one (beyond
/// 1e-8) is rejected.
double entanglement_entropy(const ComplexMatrix& rdm);

void check_same_dimension(const QubitState& state, int n_qubits);

}  // namespace vqex
