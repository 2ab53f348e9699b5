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

#include <bit>
#include <stdexcept>

namespace bsft {

namespace {

void check_dims(const PauliOp &a, const PauliOp &b) {
  if (a.num_qubits() != b.num_qubits())
    throw std::invalid_argument("Pauli dimension mismatch: " +
                                std::to_string(a.num_qubits()) + " vs " +
                                std::to_string(b.num_qubits()));
}

}  // namespace

PauliOp PauliOp::from_str(std::string_view text) {
  uint8_t phase = 0;
  size_t k = 0;
  if (k < text.size() && (text[k] == '+' || text[k] == '-')) {
    if (text[k] == '-') phase = 2;
    k++;
  }
  if (k < text.size() && text[k] == 'i') {
    phase = (phase + 1) & 3;
    k++;
  }
  PauliOp out(text.size() - k);
  out.phase_ = phase;
  for (size_t q = 0; k < text.size(); k++, q++) {
    switch (text[k]) {
      case 'I':
      case '_':
        break;
      case 'X':
        out.set_x(q, true);
        break;
      case 'Z':
        out.set_z(q, true);
        break;
      case 'Y':
        out.set_x(q, true);
        out.set_z(q, true);
        break;
      default:
        throw std::invalid_argument("bad Pauli letter in '" + std::string(text) + "'");
    }
  }
  return out;
}

PauliOp PauliOp::single(size_t n, size_t q, char letter) {
  if (q >= n) throw std::out_of_range("qubit index out of range");
  PauliOp out(n);
  if (letter == 'X' || letter == 'Y') out.set_x(q, true);
  if (letter == 'Z' || letter == 'Y') out.set_z(q, true);
  return out;
}

PauliOp &PauliOp::operator*=(const PauliOp &rhs) {
  check_dims(*this, rhs);
  // Per-qubit phase of letter products: XY=iZ, YZ=iX, ZX=iY and reverses -i.
  int acc = 0;
  uint64_t *x1 = xs_.data(), *z1 = zs_.data();
  const uint64_t *x2 = rhs.xs_.data(), *z2 = rhs.zs_.data();
  for (size_t k = 0; k < xs_.num_words(); k++) {
    uint64_t a = x1[k], b = z1[k], c = x2[k], d = z2[k];
    uint64_t y1 = a & b, xo = a & ~b, zo = ~a & b;
    uint64_t plus = (y1 & d & ~c) | (xo & c & d) | (zo & c & ~d);
    uint64_t minus = (y1 & c & ~d) | (xo & d & ~c) | (zo & c & d);
    acc += std::popcount(plus) - std::popcount(minus);
    x1[k] = a ^ c;
    z1[k] = b ^ d;
  }
  phase_ = static_cast<uint8_t>((phase_ + rhs.phase_ + acc) & 3);
  return *this;
}

std::string PauliOp::str() const {
  static const char *kPrefix[4] = {"+", "+i", "-", "-i"};
  std::string s = kPrefix[phase_];
  s.reserve(s.size() + n_);
  for (size_t q = 0; q < n_; q++) s.push_back(letter(q));
  return s;
}

PauliOp multiply(const PauliOp &p, const PauliOp &q) { return p * q; }

bool sympl(const PauliOp &p, const PauliOp &q) {
  check_dims(p, q);
  return p.xs().dot(q.zs()) ^ p.zs().dot(q.xs());
}

bool commutes(const PauliOp &p, const PauliOp &q) { return !sympl(p, q); }

size_t weight(const PauliOp &p) { return (p.xs() | p.zs()).popcount(); }

}  // namespace bsft
