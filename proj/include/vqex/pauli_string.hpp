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
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace vqex {

/// Qubit index convention used throughout the library: qubit `q` (0-based)
/// is bit `q` of a computational basis index, so lattice site 1 is the least
/// significant bit.
using BasisIndex = std::uint64_t;
using Mask = std::uint64_t;

inline constexpr int kMaxQubits = 30;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// N-qubit tensor product of {I, X, Y, Z} stored as an (x, z) mask pair.
///
/// Qubit q carries X when only bit q of x is set, Z when only bit q of z is
/// set, Y when both are set and I when neither is. The string itself carries
/// no phase: the operator it denotes is the Hermitian product of the single
/// qubit Paulis, i.e. i^{|x & z|} X^x Z^z.
class PauliString {
 public:
  PauliString(int n_qubits, Mask x_mask, Mask z_mask);

  static PauliString identity(int n_qubits);
  static PauliString single(int n_qubits, int qubit, char pauli);
  static PauliString pair(int n_qubits, int q1, char p1, int q2, char p2);

  /// Parses either a dense string ("IXYZ", qubit 0 first) or a sparse label
  /// ("Y0 Z3", "I" for the identity).
  static PauliString parse(int n_qubits, std::string_view text);

  int n_qubits() const { return n_qubits_; }
  Mask x_mask() const { return x_; }
  Mask z_mask() const { return z_; }

  char at(int qubit) const;
  int weight() const;
  int y_count() const;
  std::vector<int> support() const;
  bool is_identity() const { return (x_ | z_) == 0; }
  bool commutes_with(const PauliString& other) const;

  /// Sparse label, e.g. "Y0 Z1"; "I" for the identity.
  std::string label() const;

  friend bool operator==(const PauliString&, const PauliString&) = default;

 private:
  int n_qubits_;
  Mask x_;
  Mask z_;
};

/// Throws DimensionError unless 1 <= n_qubits <= kMaxQubits.
void check_qubit_count(int n_qubits);

}  // namespace vqex
