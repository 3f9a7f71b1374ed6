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

// Dense-vector kernels shared by the statevector routines and the adaptive
// engine. They are templated on the amplitude type so the engine can run on
// real vectors when the Hamiltonian is real and every generator is purely
// imaginary (odd number of Y factors).

#pragma once

#include <algorithm>
#include <bit>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include "vqex/operator_sum.hpp"
#include "vqex/pauli_string.hpp"

namespace vqex::kernels {

template <class T>
inline constexpr bool kIsComplex = !std::is_floating_point_v<T>;

/// i^k for k in {0, 1, 2, 3}.
inline std::complex<double> i_power(int k) {
  switch (k & 3) {
    case 0:
      return {1.0, 0.0};
    case 1:
      return {0.0, 1.0};
    case 2:
      return {-1.0, 0.0};
    default:
      return {0.0, -1.0};
  }
}

/// Phase of P acting on basis state b: P|b> = phase(b) |b ^ x>.
inline std::complex<double> pauli_phase(const PauliString& p, BasisIndex b) {
  const int sign = std::popcount(p.z_mask() & b) & 1;
  return i_power(p.y_count() + 2 * sign);
}

template <class T>
T narrow(std::complex<double> v) {
  if constexpr (kIsComplex<T>) {
    return T(v);
  } else {
    if (v.imag() != 0.0) {
      throw std::logic_error("complex value in a real kernel");
    }
    return v.real();
  }
}

/// A phased permutation A with (A psi)[b] = phase[b] * psi[b ^ flip].
template <class T>
struct PhasedFlip {
  Mask flip = 0;
  std::vector<T> phase;
};

/// Builds (scale * P) as a phased flip over a 2^n vector. `scale` is 1 for P
/// itself and i for the rotation direction iP.
template <class T>
PhasedFlip<T> make_phased_flip(const PauliString& p,
                               std::complex<double> scale) {
  const std::size_t dim = std::size_t{1} << p.n_qubits();
  PhasedFlip<T> out;
  out.flip = p.x_mask();
  out.phase.resize(dim);
  for (BasisIndex b = 0; b < dim; ++b) {
    // (P psi)[b] = phase(b ^ x) psi[b ^ x]
    out.phase[b] = narrow<T>(scale * pauli_phase(p, b ^ p.x_mask()));
  }
  return out;
}

/// True if i*P has real matrix elements (odd number of Y factors).
inline bool rotation_is_real(const PauliString& p) {
  return (p.y_count() & 1) == 1;
}

/// In-place psi <- cos(theta) psi + sin(theta) (iP) psi, where `dir` holds
/// the phased flip of iP.
template <class T>
void rotate_inplace(std::span<T> psi, const PhasedFlip<T>& dir, double c,
                    double s) {
  const std::size_t dim = psi.size();
  const Mask flip = dir.flip;
  const T* ph = dir.phase.data();
  T* v = psi.data();
  if (flip == 0) {
    for (std::size_t b = 0; b < dim; ++b) v[b] *= (c + s * ph[b]);
    return;
  }
  const Mask low = flip & (~flip + 1);  // lowest set bit of the flip mask
  for (std::size_t b = 0; b < dim; ++b) {
    if (b & low) continue;
    const std::size_t bf = b ^ flip;
    const T a0 = v[b];
    const T a1 = v[bf];
    v[b] = c * a0 + s * ph[b] * a1;
    v[bf] = c * a1 + s * ph[bf] * a0;
  }
}

/// Operator sum compiled into groups sharing an x mask:
/// (H psi)[b] = sum_g coeff_g[b] * psi[b ^ flip_g].
template <class T>
class GroupedOperator {
 public:
  GroupedOperator() = default;

  explicit GroupedOperator(const OperatorSum& op) : n_qubits_(op.n_qubits()) {
    const std::size_t dim = std::size_t{1} << n_qubits_;
    for (const auto& term : op.terms()) {
      Group* group = nullptr;
      for (auto& g : groups_) {
        if (g.flip == term.string.x_mask()) group = &g;
      }
      if (group == nullptr) {
        groups_.push_back({term.string.x_mask(), std::vector<T>(dim, T{})});
        group = &groups_.back();
      }
      for (BasisIndex b = 0; b < dim; ++b) {
        group->coeff[b] += narrow<T>(
            term.coefficient * pauli_phase(term.string, b ^ group->flip));
      }
    }
  }

  int n_qubits() const { return n_qubits_; }

  void apply(std::span<const T> in, std::span<T> out) const {
    const std::size_t dim = in.size();
    std::fill(out.begin(), out.end(), T{});
    for (const auto& g : groups_) {
      const T* c = g.coeff.data();
      for (std::size_t b = 0; b < dim; ++b) out[b] += c[b] * in[b ^ g.flip];
    }
  }

 private:
  struct Group {
    Mask flip;
    std::vector<T> coeff;
  };
  int n_qubits_ = 0;
  std::vector<Group> groups_;
};

inline double abs2(double v) { return v * v; }
inline double abs2(std::complex<double> v) { return std::norm(v); }
inline double real_part(double v) { return v; }
inline double real_part(std::complex<double> v) { return v.real(); }
inline double conj(double v) { return v; }
inline std::complex<double> conj(std::complex<double> v) {
  return std::conj(v);
}

}  // namespace vqex::kernels
