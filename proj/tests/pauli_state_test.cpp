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

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "oracle.hpp"
#include "vqex/statevector.hpp"

namespace vqex {
namespace {

oracle::Vec to_vec(const QubitState& s) {
  oracle::Vec v(static_cast<Eigen::Index>(s.dim()));
  for (std::size_t b = 0; b < s.dim(); ++b) v[b] = s[b];
  return v;
}

QubitState random_state(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<Amplitude> a(std::size_t{1} << n);
  double norm = 0;
  for (auto& x : a) {
    x = {g(rng), g(rng)};
    norm += std::norm(x);
  }
  for (auto& x : a) x /= std::sqrt(norm);
  return QubitState::from_amplitudes(n, a);
}

std::string dense_of(int n, std::uint64_t code) {
  std::string s(n, 'I');
  for (int q = 0; q < n; ++q) s[q] = "IXYZ"[(code >> (2 * q)) & 3];
  return s;
}

TEST(PauliString, ParseLabelRoundTrip) {
  const auto p = PauliString::parse(4, "Y0 Z3");
  EXPECT_EQ(p.at(0), 'Y');
  EXPECT_EQ(p.at(1), 'I');
  EXPECT_EQ(p.at(3), 'Z');
  EXPECT_EQ(p.weight(), 2);
  EXPECT_EQ(p.y_count(), 1);
  EXPECT_EQ(p.label(), "Y0 Z3");
  EXPECT_EQ(PauliString::parse(4, "YIIZ"), p);
  EXPECT_EQ(PauliString::parse(3, "I").label(), "I");
  EXPECT_TRUE(PauliString::identity(3).is_identity());
}

TEST(PauliString, RejectsBadInput) {
  EXPECT_THROW(PauliString(2, 0b100, 0), DimensionError);
  EXPECT_THROW(PauliString::single(3, 3, 'X'), DimensionError);
  EXPECT_THROW(PauliString::pair(3, 1, 'X', 1, 'Z'), std::invalid_argument);
  EXPECT_THROW(PauliString::parse(3, "XQ"), std::invalid_argument);
  EXPECT_THROW(check_qubit_count(0), DimensionError);
  EXPECT_THROW(check_qubit_count(kMaxQubits + 1), DimensionError);
}

TEST(PauliString, CommutationMatchesMatrices) {
  const int n = 3;
  for (std::uint64_t a = 0; a < 64; a += 5) {
    for (std::uint64_t b = 0; b < 64; b += 3) {
      const auto pa = PauliString::parse(n, dense_of(n, a));
      const auto pb = PauliString::parse(n, dense_of(n, b));
      const oracle::Mat ma = oracle::pauli_matrix(dense_of(n, a));
      const oracle::Mat mb = oracle::pauli_matrix(dense_of(n, b));
      const bool commute = (ma * mb - mb * ma).norm() < 1e-12;
      EXPECT_EQ(pa.commutes_with(pb), commute) << dense_of(n, a) << " " << dense_of(n, b);
    }
  }
}

TEST(Statevector, ApplyPauliMatchesKronecker) {
  for (int n = 1; n <= 4; ++n) {
    const QubitState psi = random_state(n, 11 + n);
    const oracle::Vec v = to_vec(psi);
    for (std::uint64_t code = 0; code < (1ULL << (2 * n)); ++code) {
      const std::string dense = dense_of(n, code);
      const oracle::Vec want = oracle::pauli_matrix(dense) * v;
      const oracle::Vec got = to_vec(apply_pauli(psi, PauliString::parse(n, dense)));
      EXPECT_LT((want - got).norm(), 1e-12) << dense;
    }
  }
}

TEST(Statevector, RotationIsMatrixExponential) {
  const int n = 3;
  const QubitState psi = random_state(n, 5);
  for (const char* dense : {"YII", "YZI", "XYZ", "ZIZ"}) {
    const auto p = PauliString::parse(n, dense);
    const double theta = 0.7321;
    const oracle::Mat m = oracle::pauli_matrix(dense);
    // P^2 = 1, so e^{i t P} = cos t + i sin t P.
    const oracle::Mat u =
        std::cos(theta) * oracle::Mat::Identity(8, 8) +
        oracle::C(0, std::sin(theta)) * m;
    const oracle::Vec want = u * to_vec(psi);
    EXPECT_LT((want - to_vec(pauli_rotation(psi, p, theta))).norm(), 1e-12);
  }
}

TEST(Statevector, OperatorSumAndExpectation) {
  const int n = 3;
  OperatorSum h(n);
  h.add(0.3, PauliString::parse(n, "XZI")).add(-1.1, PauliString::parse(n, "YYI"))
      .add(0.5, PauliString::parse(n, "IIZ"));
  oracle::Mat m = 0.3 * oracle::pauli_matrix("XZI") -
                  1.1 * oracle::pauli_matrix("YYI") +
                  0.5 * oracle::pauli_matrix("IIZ");
  const QubitState psi = random_state(n, 9);
  const oracle::Vec v = to_vec(psi);
  EXPECT_LT((m * v - to_vec(apply_operator_sum(psi, h))).norm(), 1e-12);
  EXPECT_NEAR(expectation(psi, h), (v.adjoint() * m * v)(0).real(), 1e-12);
  EXPECT_TRUE(h.is_real());
  EXPECT_FALSE(OperatorSum(n).add(1.0, PauliString::parse(n, "YII")).is_real());
}

TEST(Statevector, ExpectationRejectsUnnormalized) {
  OperatorSum h(2);
  h.add(1.0, PauliString::parse(2, "ZZ"));
  const QubitState phi = apply_operator_sum(QubitState::basis(2, 0), h);
  EXPECT_FALSE(phi.normalized());
  EXPECT_THROW(expectation(phi, h), NormalizationError);
  EXPECT_THROW(QubitState::from_amplitudes(1, {1.0, 1.0}), NormalizationError);
}

TEST(Statevector, ProductStateMatchesKronecker) {
  const std::vector<double> a = {0.1, 2.3, -0.7, 4.0};
  const oracle::Vec want = oracle::product_state(a);
  EXPECT_LT((want - to_vec(QubitState::product(a))).norm(), 1e-13);
}

TEST(Statevector, ReducedDensityMatrixMatchesBruteForce) {
  const int n = 4;
  const QubitState psi = random_state(n, 21);
  for (const std::vector<int>& region : std::vector<std::vector<int>>{
           {0}, {1, 3}, {0, 1}, {2}, {0, 2, 3}}) {
    const oracle::Mat want = oracle::partial_trace(to_vec(psi), n, region);
    const ComplexMatrix got = reduced_density_matrix(psi, Bipartition(n, region));
    EXPECT_LT((want - got).norm(), 1e-12);
    EXPECT_NEAR(entanglement_entropy(got), oracle::von_neumann(want), 1e-10);
  }
}

TEST(Statevector, EntropyKnownValues) {
  // Bell pair: ln 2.
  const double r = 1.0 / std::sqrt(2.0);
  const QubitState bell = QubitState::from_amplitudes(2, {r, 0, 0, r});
  EXPECT_NEAR(entanglement_entropy(
                  reduced_density_matrix(bell, Bipartition::leading(2, 1))),
              std::numbers::ln2, 1e-12);
  // Product state: zero.
  const std::vector<double> a = {0.3, 1.2, 2.2};
  EXPECT_NEAR(entanglement_entropy(reduced_density_matrix(
                  QubitState::product(a), Bipartition::leading(3, 1))),
              0.0, 1e-12);
}

TEST(Statevector, EntropySymmetricAndBounded) {
  const int n = 6;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const QubitState psi = random_state(n, 100 + seed);
    const Bipartition part(n, {0, 2, 4});
    const double sa = entanglement_entropy(reduced_density_matrix(psi, part));
    const double sb =
        entanglement_entropy(reduced_density_matrix(psi, part.complement()));
    EXPECT_NEAR(sa, sb, 1e-10);
    EXPECT_GE(sa, 0.0);
    EXPECT_LE(sa, 3 * std::numbers::ln2 + 1e-12);
  }
}

TEST(Statevector, EntropyRejectsInvalidMatrices) {
  ComplexMatrix m(2, 2);
  m << 0.5, 0.3, 0.1, 0.5;
  EXPECT_THROW(entanglement_entropy(m), std::invalid_argument);
  m << 0.7, 0, 0, 0.7;
  EXPECT_THROW(entanglement_entropy(m), std::invalid_argument);
  m << 1.2, 0, 0, -0.2;
  EXPECT_THROW(entanglement_entropy(m), std::invalid_argument);
}

TEST(Statevector, BipartitionValidation) {
  EXPECT_THROW(Bipartition(3, {}), std::invalid_argument);
  EXPECT_THROW(Bipartition(3, {0, 1, 2}), std::invalid_argument);
  EXPECT_THROW(Bipartition(3, {3}), std::invalid_argument);
  EXPECT_EQ(Bipartition(4, {3, 1}).region_b(), (std::vector<int>{0, 2}));
}

}  // namespace
}  // namespace vqex
