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

#include "vqex/operator_sum.hpp"

#include <algorithm>
#include <cmath>

namespace vqex {

OperatorSum::OperatorSum(int n_qubits) : n_qubits_(n_qubits) {
  check_qubit_count(n_qubits);
}

OperatorSum& OperatorSum::add(double coefficient, const PauliString& string) {
  if (string.n_qubits() != n_qubits_) {
    throw DimensionError("term acts on " + std::to_string(string.n_qubits()) +
                         " qubits, operator on " + std::to_string(n_qubits_));
  }
  if (!std::isfinite(coefficient)) {
    throw std::invalid_argument("operator coefficient must be finite");
  }
  terms_.push_back({coefficient, string});
  return *this;
}

bool OperatorSum::is_real() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const PauliTerm& t) {
    return t.string.y_count() % 2 == 0;
  });
}

}  // namespace vqex
