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

#include "vqex/pauli_string.hpp"

#include <bit>
#include <cctype>

namespace vqex {

void check_qubit_count(int n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) {
    throw DimensionError("qubit count " + std::to_string(n_qubits) +
                         " outside [1, " + std::to_string(kMaxQubits) + "]");
  }
}

PauliString::PauliString(int n_qubits, Mask x_mask, Mask z_mask)
    : n_qubits_(n_qubits), x_(x_mask), z_(z_mask) {
  check_qubit_count(n_qubits);
  const Mask outside = ~((Mask{1} << n_qubits) - 1);
  if ((x_ | z_) & outside) {
    throw DimensionError("Pauli mask has bits beyond qubit " +
                         std::to_string(n_qubits - 1));
  }
}

PauliString PauliString::identity(int n_qubits) {
  return PauliString(n_qubits, 0, 0);
}

PauliString PauliString::single(int n_qubits, int qubit, char pauli) {
  check_qubit_count(n_qubits);
  if (qubit < 0 || qubit >= n_qubits) {
    throw DimensionError("qubit index " + std::to_string(qubit) +
                         " out of range");
  }
  const Mask bit = Mask{1} << qubit;
  switch (std::toupper(static_cast<unsigned char>(pauli))) {
    case 'I':
      return PauliString(n_qubits, 0, 0);
    case 'X':
      return PauliString(n_qubits, bit, 0);
    case 'Y':
      return PauliString(n_qubits, bit, bit);
    case 'Z':
      return PauliString(n_qubits, 0, bit);
    default:
      throw std::invalid_argument(std::string("unknown Pauli '") + pauli +
                                  "'");
  }
}

PauliString PauliString::pair(int n_qubits, int q1, char p1, int q2,
                              char p2) {
  if (q1 == q2) {
    throw std::invalid_argument("two-site Pauli string needs distinct qubits");
  }
  const PauliString a = single(n_qubits, q1, p1);
  const PauliString b = single(n_qubits, q2, p2);
  return PauliString(n_qubits, a.x_ | b.x_, a.z_ | b.z_);
}

PauliString PauliString::parse(int n_qubits, std::string_view text) {
  check_qubit_count(n_qubits);
  Mask x = 0;
  Mask z = 0;
  const bool dense =
      text.size() == static_cast<std::size_t>(n_qubits) &&
      text.find_first_not_of("IXYZixyz") == std::string_view::npos;
  if (dense) {
    for (int q = 0; q < n_qubits; ++q) {
      const PauliString s = single(n_qubits, q, text[q]);
      x |= s.x_;
      z |= s.z_;
    }
    return PauliString(n_qubits, x, z);
  }
  std::size_t pos = 0;
  while (pos < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[pos]))) {
      ++pos;
      continue;
    }
    const char p = text[pos++];
    if ((p == 'I' || p == 'i') &&
        (pos == text.size() ||
         !std::isdigit(static_cast<unsigned char>(text[pos])))) {
      continue;
    }
    std::size_t end = pos;
    while (end < text.size() &&
           std::isdigit(static_cast<unsigned char>(text[end]))) {
      ++end;
    }
    if (end == pos) {
      throw std::invalid_argument("malformed Pauli label '" +
                                  std::string(text) + "'");
    }
    const int q = std::stoi(std::string(text.substr(pos, end - pos)));
    const PauliString s = single(n_qubits, q, p);
    if ((x | z) & (s.x_ | s.z_)) {
      throw std::invalid_argument("qubit repeated in Pauli label '" +
                                  std::string(text) + "'");
    }
    x |= s.x_;
    z |= s.z_;
    pos = end;
  }
  return PauliString(n_qubits, x, z);
}

char PauliString::at(int qubit) const {
  const bool xb = (x_ >> qubit) & 1U;
  const bool zb = (z_ >> qubit) & 1U;
  if (xb && zb) return 'Y';
  if (xb) return 'X';
  if (zb) return 'Z';
  return 'I';
}

int PauliString::weight() const { return std::popcount(x_ | z_); }

int PauliString::y_count() const { return std::popcount(x_ & z_); }

std::vector<int> PauliString::support() const {
  std::vector<int> out;
  for (int q = 0; q < n_qubits_; ++q) {
    if (((x_ | z_) >> q) & 1U) out.push_back(q);
  }
  return out;
}

bool PauliString::commutes_with(const PauliString& other) const {
  return (std::popcount(x_ & other.z_) + std::popcount(z_ & other.x_)) % 2 ==
         0;
}

std::string PauliString::label() const {
  if (is_identity()) return "I";
  std::string out;
  for (int q : support()) {
    if (!out.empty()) out += ' ';
    out += at(q);
    out += std::to_string(q);
  }
  return out;
}

}  // namespace vqex
