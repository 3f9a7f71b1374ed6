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

// Exact diagonalization reference: full spectra, degenerate-subspace grouping
// and per-eigenstate observables.

#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "vqex/operator_sum.hpp"
#include "vqex/statevector.hpp"

namespace vqex {

inline constexpr int kMaxExactQubits = 12;

/// Dense matrix of an operator sum in the computational basis.
ComplexMatrix dense_matrix(const OperatorSum& op);

class Spectrum {
 public:
  /// Real eigenvectors (columns) of a real symmetric Hamiltonian.
  Spectrum(int n_qubits, Eigen::VectorXd energies, Eigen::MatrixXd vectors);
  /// Complex eigenvectors of a general Hermitian Hamiltonian.
  Spectrum(int n_qubits, Eigen::VectorXd energies, ComplexMatrix vectors);

  int n_qubits() const { return n_qubits_; }
  std::size_t size() const { return static_cast<std::size_t>(energies_.size()); }
  const Eigen::VectorXd& energies() const { return energies_; }
  double energy(std::size_t k) const { return energies_[static_cast<Eigen::Index>(k)]; }
  double e_min() const { return energies_[0]; }
  double e_max() const { return energies_[energies_.size() - 1]; }
  double mean_level_spacing() const;
  bool is_real() const { return real_; }

  QubitState eigenstate(std::size_t k) const;
  /// <v_k|psi>.
  std::complex<double> overlap(std::size_t k, const QubitState& state) const;
  /// Index of the eigenvalue closest to `energy` (lowest index on ties).
  std::size_t nearest(double energy) const;

 private:
  int n_qubits_;
  Eigen::VectorXd energies_;
  bool real_;
  Eigen::MatrixXd real_vectors_;
  ComplexMatrix complex_vectors_;
};

/// Full eigendecomposition, energies ascending. Uses a real symmetric solver
/// when the operator is real in the computational basis.
Spectrum diagonalize(const OperatorSum& h);

struct DegenerateSubspace {
  std::vector<std::size_t> members;
  double e_low;
  double e_high;
};

/// Greedy left-to-right grouping: a new subspace starts whenever the gap to
/// the previous eigenvalue is >= delta. Chaining means a subspace may span
/// more than delta end to end.
std::vector<DegenerateSubspace> group_degenerate(const Spectrum& spec,
                                                 double delta);

/// sum_{k in sub} |<v_k|psi>|^2.
double subspace_overlap(const QubitState& state, const DegenerateSubspace& sub,
                        const Spectrum& spec);

struct SubspaceMatch {
  std::size_t subspace;
  double overlap;
};

/// The subspace carrying the largest weight of `state`.
SubspaceMatch best_subspace(const QubitState& state,
                            const std::vector<DegenerateSubspace>& subspaces,
                            const Spectrum& spec);

struct ObservableRow {
  double energy;
  double magnetization;
  double entropy;
};

std::vector<ObservableRow> eigenstate_observable_table(const Spectrum& spec,
                                                       const Bipartition& part);

}  // namespace vqex
