// Copyright 2026 The bsft Authors
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

#include "bsft/pauli.h"

#include <random>

#include "gtest/gtest.h"

using namespace bsft;

namespace {

PauliOp random_pauli(size_t n, std::mt19937_64 &rng) {
  PauliOp p(n);
  for (size_t q = 0; q < n; q++) {
    p.set_x(q, rng() & 1);
    p.set_z(q, rng() & 1);
  }
  p.set_phase(rng() & 3);
  return p;
}

}  // namespace

TEST(pauli, disjoint_product) {
  PauliOp p = PauliOp::from_str("+XI") * PauliOp::from_str("+IZ");
  EXPECT_EQ(p.str(), "+XZ");
}

TEST(pauli, single_qubit_table) {
  auto X = PauliOp::from_str("X"), Y = PauliOp::from_str("Y"), Z = PauliOp::from_str("Z");
  EXPECT_EQ((X * Z).str(), "-iY");
  EXPECT_EQ((Z * X).str(), "+iY");
  EXPECT_EQ((X * Y).str(), "+iZ");
  EXPECT_EQ((Y * X).str(), "-iZ");
  EXPECT_EQ((Y * Z).str(), "+iX");
  EXPECT_EQ((Z * Y).str(), "-iX");
  // Y = i X Z.
  EXPECT_EQ((PauliOp::from_str("+iI") * X * Z).str(), "+Y");
}

TEST(pauli, associativity_random) {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 200; k++) {
    auto p = random_pauli(8, rng), q = random_pauli(8, rng), r = random_pauli(8, rng);
    EXPECT_EQ(multiply(p, multiply(q, r)), multiply(multiply(p, q), r));
  }
}

TEST(pauli, commutation) {
  EXPECT_FALSE(commutes(PauliOp::from_str("X"), PauliOp::from_str("Z")));
  EXPECT_TRUE(commutes(PauliOp::from_str("XX"), PauliOp::from_str("ZZ")));
  std::mt19937_64 rng(3);
  for (int k = 0; k < 100; k++) {
    auto p = random_pauli(5, rng), q = random_pauli(5, rng), r = random_pauli(5, rng);
    EXPECT_TRUE(commutes(p, PauliOp(5)));
    EXPECT_EQ(commutes(p, q), commutes(q, p));
    EXPECT_EQ(sympl(p, q * r), sympl(p, q) ^ sympl(p, r));
    // Commutation agrees with the phase of pq versus qp.
    EXPECT_EQ(commutes(p, q), (p * q) == (q * p));
  }
}

TEST(pauli, weight) {
  EXPECT_EQ(weight(PauliOp(4)), 0u);
  EXPECT_EQ(weight(PauliOp::from_str("XYI")), 2u);
  std::mt19937_64 rng(11);
  for (int k = 0; k < 200; k++) {
    auto p = random_pauli(8, rng), q = random_pauli(8, rng);
    EXPECT_LE(weight(p * q), weight(p) + weight(q));
  }
}

TEST(pauli, square_is_scalar) {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 100; k++) {
    auto p = random_pauli(70, rng);
    auto sq = p * p;
    EXPECT_TRUE(sq.is_trivial());
    EXPECT_EQ(sq.phase() % 2, 0);
  }
}

TEST(pauli, text_round_trip) {
  for (const char *s : {"+XIZ", "-Y", "+iXYZI", "-iZZ", "+"}) EXPECT_EQ(PauliOp::from_str(s).str(), s);
  std::mt19937_64 rng(9);
  for (int k = 0; k < 50; k++) {
    auto p = random_pauli(13, rng);
    EXPECT_EQ(PauliOp::from_str(p.str()), p);
  }
  EXPECT_THROW(PauliOp::from_str("+XQ"), std::invalid_argument);
}

TEST(pauli, dimension_mismatch) {
  EXPECT_THROW(multiply(PauliOp(2), PauliOp(3)), std::invalid_argument);
  EXPECT_THROW(commutes(PauliOp(2), PauliOp(3)), std::invalid_argument);
}
