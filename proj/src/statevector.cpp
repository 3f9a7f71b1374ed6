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

#include "vqex/statevector.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "vqex/kernels.hpp"

namespace vqex {

namespace {

double squared_norm(std::span<const Amplitude> v) {
  double acc = 0.0;
  for (const auto& a : v) acc += std::norm(a);
  return acc;
}

}  // namespace

QubitState::QubitState(int n_qubits, std::vector<Amplitude> amplitudes,
                       bool normalized)
    : n_qubits_(n_qubits),
      amplitudes_(std::move(amplitudes)),
      normalized_(normalized) {
  check_qubit_count(n_qubits);
  if (amplitudes_.size() != (std::size_t{1} << n_qubits)) {
    throw DimensionError("expected 2^" + std::to_string(n_qubits) +
                         " amplitudes, got " +
                         std::to_string(amplitudes_.size()));
  }
  if (normalized_ && std::abs(norm() - 1.0) > kNormTolerance) {
    throw NormalizationError("state norm " + std::to_string(norm()) +
                             " is not 1");
  }
}

QubitState QubitState::basis(int n_qubits, BasisIndex index) {
  check_qubit_count(n_qubits);
  const std::size_t dim = std::size_t{1} << n_qubits;
  if (index >= dim) {
    throw DimensionError("basis index out of range");
  }
  std::vector<Amplitude> amps(dim);
  amps[index] = 1.0;
  return QubitState(n_qubits, std::move(amps), true);
}

QubitState QubitState::from_amplitudes(int n_qubits,
                                       std::vector<Amplitude> amplitudes) {
  return QubitState(n_qubits, std::move(amplitudes), true);
}

QubitState QubitState::unnormalized(int n_qubits,
                                    std::vector<Amplitude> amplitudes) {
  return QubitState(n_qubits, std::move(amplitudes), false);
}

QubitState QubitState::product(std::span<const double> angles) {
  const int n = static_cast<int>(angles.size());
  check_qubit_count(n);
  std::vector<Amplitude> amps(std::size_t{1} << n, 1.0);
  for (std::size_t b = 0; b < amps.size(); ++b) {
    double a = 1.0;
    for (int q = 0; q < n; ++q) {
      a *= ((b >> q) & 1U) ? std::sin(angles[q]) : std::cos(angles[q]);
    }
    amps[b] = a;
  }
  return QubitState(n, std::move(amps), true);
}

double QubitState::norm() const { return std::sqrt(squared_norm(amplitudes_)); }

QubitState QubitState::as_normalized() const {
  return QubitState(n_qubits_, amplitudes_, true);
}

Bipartition::Bipartition(int n_qubits, std::vector<int> region_a)
    : n_qubits_(n_qubits), region_a_(std::move(region_a)) {
  check_qubit_count(n_qubits);
  std::sort(region_a_.begin(), region_a_.end());
  if (std::adjacent_find(region_a_.begin(), region_a_.end()) !=
      region_a_.end()) {
    throw std::invalid_argument("bipartition region has repeated qubits");
  }
  if (region_a_.empty() ||
      region_a_.size() >= static_cast<std::size_t>(n_qubits)) {
    throw std::invalid_argument(
        "bipartition region must be a proper nonempty subset");
  }
  if (region_a_.front() < 0 || region_a_.back() >= n_qubits) {
    throw DimensionError("bipartition qubit index out of range");
  }
}

Bipartition Bipartition::leading(int n_qubits, int count) {
  std::vector<int> a(std::max(count, 0));
  std::iota(a.begin(), a.end(), 0);
  return Bipartition(n_qubits, std::move(a));
}

std::vector<int> Bipartition::region_b() const {
  std::vector<int> b;
  for (int q = 0; q < n_qubits_; ++q) {
    if (!std::binary_search(region_a_.begin(), region_a_.end(), q)) {
      b.push_back(q);
    }
  }
  return b;
}

Bipartition Bipartition::complement() const {
  return Bipartition(n_qubits_, region_b());
}

void check_same_dimension(const QubitState& state, int n_qubits) {
  if (state.n_qubits() != n_qubits) {
    throw DimensionError("state has " + std::to_string(state.n_qubits()) +
                         " qubits, operator " + std::to_string(n_qubits));
  }
}

QubitState apply_pauli(const QubitState& state, const PauliString& p) {
  check_same_dimension(state, p.n_qubits());
  std::vector<Amplitude> out(state.dim());
  for (BasisIndex b = 0; b < state.dim(); ++b) {
    out[b ^ p.x_mask()] = kernels::pauli_phase(p, b) * state[b];
  }
  return QubitState::unnormalized(state.n_qubits(), std::move(out));
}

QubitState pauli_rotation(const QubitState& state, const PauliString& p,
                          double theta) {
  check_same_dimension(state, p.n_qubits());
  const double c = std::cos(theta);
  const Amplitude is(0.0, std::sin(theta));
  std::vector<Amplitude> out(state.dim());
  for (BasisIndex b = 0; b < state.dim(); ++b) {
    out[b] += c * state[b];
    out[b ^ p.x_mask()] += is * kernels::pauli_phase(p, b) * state[b];
  }
  if (state.normalized()) {
    return QubitState::from_amplitudes(state.n_qubits(), std::move(out));
  }
  return QubitState::unnormalized(state.n_qubits(), std::move(out));
}

QubitState apply_operator_sum(const QubitState& state, const OperatorSum& op) {
  check_same_dimension(state, op.n_qubits());
  std::vector<Amplitude> out(state.dim());
  const kernels::GroupedOperator<Amplitude> compiled(op);
  compiled.apply(state.amplitudes(), out);
  return QubitState::unnormalized(state.n_qubits(), std::move(out));
}

double expectation(const QubitState& state, const OperatorSum& op) {
  if (!state.normalized()) {
    throw NormalizationError("expectation value needs a normalized state");
  }
  if (std::abs(state.norm() - 1.0) > kNormDriftLimit) {
    throw NormalizationError("state norm drifted to " +
                             std::to_string(state.norm()));
  }
  const QubitState h_psi = apply_operator_sum(state, op);
  const std::complex<double> value = inner_product(state, h_psi);
  const double scale = std::max(1.0, std::abs(value));
  if (std::abs(value.imag()) > 1e-10 * scale) {
    throw std::logic_error("expectation value has an imaginary part " +
                           std::to_string(value.imag()));
  }
  return value.real();
}

std::complex<double> inner_product(const QubitState& a, const QubitState& b) {
  check_same_dimension(b, a.n_qubits());
  std::complex<double> acc = 0.0;
  for (BasisIndex k = 0; k < a.dim(); ++k) acc += std::conj(a[k]) * b[k];
  return acc;
}

ComplexMatrix reduced_density_matrix(const QubitState& state,
                                     const Bipartition& part) {
  check_same_dimension(state, part.n_qubits());
  const auto& qa = part.region_a();
  const auto qb = part.region_b();
  const std::size_t dim_a = std::size_t{1} << qa.size();
  const std::size_t dim_b = std::size_t{1} << qb.size();

  // psi reshaped as a dim_a x dim_b matrix, rho_A = M M^dagger.
  ComplexMatrix m(dim_a, dim_b);
  for (BasisIndex b = 0; b < state.dim(); ++b) {
    std::size_t ia = 0;
    std::size_t ib = 0;
    for (std::size_t k = 0; k < qa.size(); ++k) ia |= ((b >> qa[k]) & 1U) << k;
    for (std::size_t k = 0; k < qb.size(); ++k) ib |= ((b >> qb[k]) & 1U) << k;
    m(ia, ib) = state[b];
  }
  return m * m.adjoint();
}

double entanglement_entropy(const ComplexMatrix& rdm) {
  if (rdm.rows() != rdm.cols() || rdm.rows() == 0) {
    throw DimensionError("density matrix must be square and nonempty");
  }
  if ((rdm - rdm.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
    throw std::invalid_argument("density matrix is not Hermitian");
  }
  if (std::abs(rdm.trace() - std::complex<double>(1.0)) > 1e-8) {
    throw std::invalid_argument("density matrix trace is not 1");
  }
  const Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(
      rdm, Eigen::EigenvaluesOnly);
  double entropy = 0.0;
  for (double p : solver.eigenvalues()) {
    if (p < -1e-10) {
      throw std::invalid_argument("density matrix is not positive semidefinite");
    }
    if (p > 1e-12) entropy -= p * std::log(p);
  }
  return std::max(entropy, 0.0);
}

}  // namespace vqex
