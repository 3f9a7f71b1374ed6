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

#include "vqex/exact.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "vqex/kernels.hpp"
#include "vqex/model.hpp"

namespace vqex {

ComplexMatrix dense_matrix(const OperatorSum& op) {
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << op.n_qubits());
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  for (const auto& term : op.terms()) {
    for (Eigen::Index b = 0; b < dim; ++b) {
      const auto ub = static_cast<BasisIndex>(b);
      const auto row = static_cast<Eigen::Index>(ub ^ term.string.x_mask());
      m(row, b) += term.coefficient * kernels::pauli_phase(term.string, ub);
    }
  }
  return m;
}

Spectrum::Spectrum(int n_qubits, Eigen::VectorXd energies,
                   Eigen::MatrixXd vectors)
    : n_qubits_(n_qubits),
      energies_(std::move(energies)),
      real_(true),
      real_vectors_(std::move(vectors)) {}

Spectrum::Spectrum(int n_qubits, Eigen::VectorXd energies,
                   ComplexMatrix vectors)
    : n_qubits_(n_qubits),
      energies_(std::move(energies)),
      real_(false),
      complex_vectors_(std::move(vectors)) {}

double Spectrum::mean_level_spacing() const {
  if (size() < 2) return 0.0;
  return (e_max() - e_min()) / static_cast<double>(size() - 1);
}

QubitState Spectrum::eigenstate(std::size_t k) const {
  std::vector<Amplitude> amps(size());
  const auto col = static_cast<Eigen::Index>(k);
  for (std::size_t b = 0; b < size(); ++b) {
    const auto row = static_cast<Eigen::Index>(b);
    amps[b] = real_ ? Amplitude(real_vectors_(row, col))
                    : complex_vectors_(row, col);
  }
  return QubitState::from_amplitudes(n_qubits_, std::move(amps));
}

std::complex<double> Spectrum::overlap(std::size_t k,
                                       const QubitState& state) const {
  check_same_dimension(state, n_qubits_);
  const auto col = static_cast<Eigen::Index>(k);
  std::complex<double> acc = 0.0;
  for (std::size_t b = 0; b < size(); ++b) {
    const auto row = static_cast<Eigen::Index>(b);
    const Amplitude v = real_ ? Amplitude(real_vectors_(row, col))
                              : complex_vectors_(row, col);
    acc += std::conj(v) * state[b];
  }
  return acc;
}

std::size_t Spectrum::nearest(double energy) const {
  std::size_t best = 0;
  for (std::size_t k = 1; k < size(); ++k) {
    if (std::abs(this->energy(k) - energy) <
        std::abs(this->energy(best) - energy)) {
      best = k;
    }
  }
  return best;
}

Spectrum diagonalize(const OperatorSum& h) {
  if (h.n_qubits() > kMaxExactQubits) {
    throw DimensionError("exact diagonalization limited to " +
                         std::to_string(kMaxExactQubits) + " qubits");
  }
  const ComplexMatrix m = dense_matrix(h);
  if (h.is_real()) {
    const Eigen::MatrixXd real = m.real();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(real);
    if (solver.info() != Eigen::Success) {
      throw std::runtime_error("eigensolver failed");
    }
    return Spectrum(h.n_qubits(), solver.eigenvalues(), solver.eigenvectors());
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigensolver failed");
  }
  return Spectrum(h.n_qubits(), solver.eigenvalues(), solver.eigenvectors());
}

std::vector<DegenerateSubspace> group_degenerate(const Spectrum& spec,
                                                 double delta) {
  if (!(delta >= 0.0)) {
    throw std::invalid_argument("degeneracy window must be nonnegative");
  }
  std::vector<DegenerateSubspace> out;
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const double e = spec.energy(k);
    if (out.empty() || e - out.back().e_high >= delta) {
      out.push_back({{k}, e, e});
    } else {
      out.back().members.push_back(k);
      out.back().e_high = e;
    }
  }
  return out;
}

double subspace_overlap(const QubitState& state, const DegenerateSubspace& sub,
                        const Spectrum& spec) {
  double acc = 0.0;
  for (std::size_t k : sub.members) acc += std::norm(spec.overlap(k, state));
  return acc;
}

SubspaceMatch best_subspace(const QubitState& state,
                            const std::vector<DegenerateSubspace>& subspaces,
                            const Spectrum& spec) {
  SubspaceMatch best{0, -1.0};
  for (std::size_t s = 0; s < subspaces.size(); ++s) {
    const double w = subspace_overlap(state, subspaces[s], spec);
    if (w > best.overlap) best = {s, w};
  }
  return best;
}

std::vector<ObservableRow> eigenstate_observable_table(
    const Spectrum& spec, const Bipartition& part) {
  std::vector<ObservableRow> rows;
  rows.reserve(spec.size());
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const QubitState v = spec.eigenstate(k);
    rows.push_back({spec.energy(k), magnetization_density(v),
                    entanglement_entropy(reduced_density_matrix(v, part))});
  }
  return rows;
}

}  // namespace vqex
