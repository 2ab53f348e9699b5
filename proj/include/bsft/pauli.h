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

#ifndef BSFT_PAULI_H
#define BSFT_PAULI_H

#include <cstdint>
#include <string>
#include <string_view>

#include "bsft/bits.h"

namespace bsft {

/// An n-qubit Pauli operator i^phase * prod_j P_j, where P_j is the letter
/// on qubit j and Y = iXZ.
class PauliOp {
 public:
  PauliOp() = default;
  explicit PauliOp(size_t n) : n_(n), xs_(n), zs_(n) {}

  /// Parses "+XIZ", "-iY", "+i..." etc. A missing sign means "+".
  static PauliOp from_str(std::string_view text);
  /// Single-qubit operator 'X', 'Y' or 'Z' on qubit q of an n-qubit register.
  static PauliOp single(size_t n, size_t q, char letter);

  size_t num_qubits() const { return n_; }
  bool x(size_t q) const { return xs_.get(q); }
  bool z(size_t q) const { return zs_.get(q); }
  void set_x(size_t q, bool v) { xs_.set(q, v); }
  void set_z(size_t q, bool v) { zs_.set(q, v); }
  const BitVec &xs() const { return xs_; }
  const BitVec &zs() const { return zs_; }
  BitVec &xs() { return xs_; }
  BitVec &zs() { return zs_; }

  uint8_t phase() const { return phase_; }
  void set_phase(uint8_t p) { phase_ = p & 3; }

  char letter(size_t q) const { return "IXZY"[x(q) | (z(q) << 1)]; }
  bool is_identity() const { return !xs_.any() && !zs_.any() && phase_ == 0; }
  /// True when the bit parts vanish (phase ignored).
  bool is_trivial() const { return !xs_.any() && !zs_.any(); }

  PauliOp &operator*=(const PauliOp &rhs);
  friend PauliOp operator*(PauliOp a, const PauliOp &b) { return a *= b; }

  std::string str() const;

  bool operator==(const PauliOp &o) const = default;

 private:
  size_t n_ = 0;
  BitVec xs_, zs_;
  uint8_t phase_ = 0;
};

PauliOp multiply(const PauliOp &p, const PauliOp &q);
/// Symplectic product: 1 when p and q anticommute.
bool sympl(const PauliOp &p, const PauliOp &q);
bool commutes(const PauliOp &p, const PauliOp &q);
size_t weight(const PauliOp &p);

}  // namespace bsft

#endif
