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

#include <vector>

#include "vqex/pauli_string.hpp"

namespace vqex {

struct PauliTerm {
  double coefficient;
  PauliString string;
};

/// Real-weighted sum of Pauli strings, i.e. a Hermitian operator.
class OperatorSum {
 public:
  explicit OperatorSum(int n_qubits);

  OperatorSum& add(double coefficient, const PauliString& string);

  int n_qubits() const { return n_qubits_; }
  const std::vector<PauliTerm>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  /// True when every term has an even number of Y factors, so the operator
  /// has real matrix elements in the computational basis.
  bool is_real() const;

 private:
  int n_qubits_;
  std::vector<PauliTerm> terms_;
};

}  // namespace vqex
