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

#include "bsft/codes.h"

#include <array>
#include <bit>
#include <sstream>
#include <stdexcept>

namespace bsft {

namespace {

// Rows of a GF(2) matrix packed into words; column count <= 64.
using Rows = std::vector<uint64_t>;

Rows pack(const BinaryMatrix &m, size_t n) {
  Rows out;
  for (const auto &row : m) {
    if (row.size() != n) throw std::invalid_argument("ragged parity-check matrix");
    uint64_t w = 0;
    for (size_t j = 0; j < n; j++)
      if (row[j] & 1) w |= uint64_t{1} << j;
    out.push_back(w);
  }
  return out;
}

// Reduced echelon form; returns the pivot rows.
Rows echelon(Rows rows) {
  Rows basis;
  for (uint64_t r : rows) {
    for (uint64_t b : basis)
      if (r & (b & -b)) r ^= b;
    if (!r) continue;
    uint64_t lead = r & -r;
    for (uint64_t &b : basis)
      if (b & lead) b ^= r;
    basis.push_back(r);
  }
  return basis;
}

bool in_span(const Rows &basis, uint64_t v) {
  for (uint64_t b : basis)
    if (v & (b & -b)) v ^= b;
  return v == 0;
}

bool in_kernel(const Rows &h, uint64_t v) {
  for (uint64_t r : h)
    if (std::popcount(r & v) & 1) return false;
  return true;
}

// Kernel basis of h (n columns) by elimination.
Rows kernel_basis(const Rows &h, size_t n) {
  Rows basis = echelon(h);
  std::vector<int> pivot_of(n, -1);
  for (size_t i = 0; i < basis.size(); i++) pivot_of[std::countr_zero(basis[i])] = static_cast<int>(i);
  Rows out;
  for (size_t f = 0; f < n; f++) {
    if (pivot_of[f] >= 0) continue;
    uint64_t v = uint64_t{1} << f;
    for (size_t i = 0; i < basis.size(); i++)
      if (basis[i] >> f & 1) v |= uint64_t{1} << std::countr_zero(basis[i]);
    out.push_back(v);
  }
  return out;
}

// Next integer with the same popcount.
uint64_t gosper(uint64_t v) {
  uint64_t c = v & -v;
  uint64_t r = v + c;
  return (((r ^ v) >> 2) / c) | r;
}

template <typename F>
bool for_each_weight_mask(size_t n, size_t w, F &&f) {
  if (w == 0) return f(uint64_t{0});
  if (w > n) return false;
  uint64_t v = (uint64_t{1} << w) - 1;
  uint64_t limit = n == 64 ? 0 : (uint64_t{1} << n);
  while (n == 64 ? v != 0 : v < limit) {
    if (f(v)) return true;
    uint64_t nv = gosper(v);
    if (nv <= v) break;
    v = nv;
  }
  return false;
}

PauliOp typed(size_t n, uint64_t mask, char letter) {
  PauliOp p(n);
  for (size_t j = 0; j < n; j++)
    if (mask >> j & 1) {
      if (letter == 'X') p.set_x(j, true);
      else p.set_z(j, true);
    }
  return p;
}

constexpr size_t kExhaustiveLimit = 16;

// Minimum-weight vector in ker(h) outside span(s), optionally with odd
// overlap against `partner`.
uint64_t find_logical(const Rows &h, const Rows &s, size_t n, uint64_t partner) {
  Rows sb = echelon(s);
  auto ok = [&](uint64_t v) {
    if (!in_kernel(h, v) || in_span(sb, v)) return false;
    return partner == 0 || (std::popcount(v & partner) & 1);
  };
  if (n <= kExhaustiveLimit) {
    uint64_t found = 0;
    for (size_t w = 1; w <= n && !found; w++)
      for_each_weight_mask(n, w, [&](uint64_t v) {
        if (ok(v)) {
          found = v;
          return true;
        }
        return false;
      });
    if (found) return found;
  } else {
    Rows kb = kernel_basis(h, n);
    for (uint64_t v : kb)
      if (ok(v)) return v;
    for (size_t a = 0; a < kb.size(); a++)
      for (size_t b = a + 1; b < kb.size(); b++)
        if (ok(kb[a] ^ kb[b])) return kb[a] ^ kb[b];
  }
  throw std::invalid_argument("no logical operator found");
}

// Per-qubit signature word: bit i = anticommutes with row i of `ops`.
std::vector<std::array<uint64_t, 4>> signatures(const std::vector<PauliOp> &ops, size_t n) {
  if (ops.size() > 64) throw std::invalid_argument("too many operators for signature table");
  std::vector<std::array<uint64_t, 4>> sig(n, {0, 0, 0, 0});
  for (size_t q = 0; q < n; q++)
    for (size_t i = 0; i < ops.size(); i++) {
      bool ox = ops[i].x(q), oz = ops[i].z(q);
      // letter code: 1 = X, 2 = Z, 3 = Y
      if (oz) sig[q][1] |= uint64_t{1} << i;
      if (ox) sig[q][2] |= uint64_t{1} << i;
      if (ox ^ oz) sig[q][3] |= uint64_t{1} << i;
    }
  return sig;
}

PauliOp from_letters(size_t n, uint64_t mask, const std::vector<uint8_t> &letters) {
  PauliOp p(n);
  size_t k = 0;
  for (size_t q = 0; q < n; q++)
    if (mask >> q & 1) {
      p.set_x(q, letters[k] & 1);
      p.set_z(q, letters[k] & 2);
      k++;
    }
  return p;
}

// Calls f(mask, letters, word) for each Pauli of the given weight, where word
// is the XOR of per-qubit signatures. Stops when f returns true.
template <typename F>
bool for_each_pauli(size_t n, size_t w, const std::vector<std::array<uint64_t, 4>> &sig, F &&f) {
  std::vector<uint8_t> letters(w);
  std::vector<size_t> pos(w);
  return for_each_weight_mask(n, w, [&](uint64_t mask) {
    size_t k = 0;
    for (size_t q = 0; q < n; q++)
      if (mask >> q & 1) pos[k++] = q;
    std::fill(letters.begin(), letters.end(), 1);
    while (true) {
      uint64_t word = 0;
      for (size_t i = 0; i < w; i++) word ^= sig[pos[i]][letters[i]];
      if (f(mask, letters, word)) return true;
      size_t i = 0;
      while (i < w && letters[i] == 3) letters[i++] = 1;
      if (i == w) return false;
      letters[i]++;
    }
  });
}

uint64_t syndrome_word(const SubsystemCode &code, const PauliOp &e) {
  uint64_t w = 0;
  for (size_t i = 0; i < code.stabilizers.size(); i++)
    if (sympl(e, code.stabilizers[i])) w |= uint64_t{1} << i;
  return w;
}

}  // namespace

char logical_char(Logical l) { return "IXZY"[static_cast<uint8_t>(l)]; }

void SubsystemCode::validate() const {
  auto fail = [&](const std::string &m) { throw std::logic_error(name + ": " + m); };
  for (const auto *ops : {&stabilizers, &gauges})
    for (const auto &p : *ops)
      if (p.num_qubits() != n) fail("operator size mismatch");
  if (logical_x.num_qubits() != n || logical_z.num_qubits() != n) fail("logical size mismatch");
  for (size_t a = 0; a < stabilizers.size(); a++) {
    for (size_t b = a + 1; b < stabilizers.size(); b++)
      if (!commutes(stabilizers[a], stabilizers[b])) fail("stabilizers anticommute");
    for (const auto &g : gauges)
      if (!commutes(stabilizers[a], g)) fail("gauge generator anticommutes with stabilizer");
    if (!commutes(stabilizers[a], logical_x) || !commutes(stabilizers[a], logical_z))
      fail("logical anticommutes with stabilizer");
  }
  if (commutes(logical_x, logical_z)) fail("logical X and Z commute");
}

LookupDecoder::LookupDecoder(const SubsystemCode &code) : n_(code.n) {
  if (code.n > 64) throw std::invalid_argument("lookup decoder limited to 64 qubits");
  auto sig = signatures(code.stabilizers, code.n);
  // Number of distinct syndromes is 2^rank of the stabilizer generators.
  Rows packed;
  for (const auto &s : code.stabilizers) {
    if (2 * code.n > 64) break;
    uint64_t v = 0;
    for (size_t q = 0; q < code.n; q++) {
      if (s.x(q)) v |= uint64_t{1} << q;
      if (s.z(q)) v |= uint64_t{1} << (q + code.n);
    }
    packed.push_back(v);
  }
  size_t target = 2 * code.n <= 64 ? size_t{1} << echelon(packed).size() : SIZE_MAX;
  table_.emplace(0, PauliOp(n_));
  for (size_t w = 1; w <= code.n && table_.size() < target; w++) {
    for_each_pauli(code.n, w, sig, [&](uint64_t mask, const std::vector<uint8_t> &letters, uint64_t word) {
      if (!table_.count(word)) table_.emplace(word, from_letters(n_, mask, letters));
      return table_.size() >= target;
    });
  }
}

PauliOp LookupDecoder::recovery(const BitVec &syn) const {
  uint64_t key = syn.size() ? syn.data()[0] : 0;
  auto it = table_.find(key);
  return it == table_.end() ? PauliOp(n_) : it->second;
}

SubsystemCode css_construct(const BinaryMatrix &h_x, const BinaryMatrix &h_z, std::string name) {
  size_t n = !h_x.empty() ? h_x[0].size() : (!h_z.empty() ? h_z[0].size() : 0);
  if (n == 0) throw std::invalid_argument("empty parity-check matrices");
  if (n > 64) throw std::invalid_argument("css_construct limited to 64 qubits");
  Rows hx = pack(h_x, n), hz = pack(h_z, n);
  for (uint64_t a : hx)
    for (uint64_t b : hz)
      if (std::popcount(a & b) & 1) throw std::invalid_argument("duality violation: h_x h_z^T != 0");
  size_t rx = echelon(hx).size(), rz = echelon(hz).size();
  if (rx + rz >= n) throw std::invalid_argument("rank deficiency: no logical qubit");

  SubsystemCode code;
  code.name = std::move(name);
  code.n = n;
  code.k = n - rx - rz;
  for (uint64_t r : hx) code.stabilizers.push_back(typed(n, r, 'X'));
  for (uint64_t r : hz) code.stabilizers.push_back(typed(n, r, 'Z'));
  uint64_t lx = find_logical(hz, hx, n, 0);
  uint64_t lz = find_logical(hx, hz, n, lx);
  code.logical_x = typed(n, lx, 'X');
  code.logical_z = typed(n, lz, 'Z');
  code.rule = DecodeRule::kLookup;
  code.validate();
  if (n <= kExhaustiveLimit) code.lookup = std::make_shared<LookupDecoder>(code);
  return code;
}

SubsystemCode steane_code() {
  BinaryMatrix h = {{0, 0, 0, 1, 1, 1, 1}, {0, 1, 1, 0, 0, 1, 1}, {1, 0, 1, 0, 1, 0, 1}};
  return css_construct(h, h, "steane");
}

namespace {

void check_odd(size_t n) {
  if (n < 3 || n % 2 == 0) throw std::invalid_argument("grid size must be odd and >= 3");
}

PauliOp row_op(const GridGeometry &g, size_t i, char letter) {
  PauliOp p(g.rows * g.cols);
  for (size_t j = 0; j < g.cols; j++) p = p * PauliOp::single(p.num_qubits(), g.index(i, j), letter);
  return p;
}

PauliOp col_op(const GridGeometry &g, size_t j, char letter) {
  PauliOp p(g.rows * g.cols);
  for (size_t i = 0; i < g.rows; i++) p = p * PauliOp::single(p.num_qubits(), g.index(i, j), letter);
  return p;
}

PauliOp pair_op(size_t n, size_t a, size_t b, char letter) {
  return PauliOp::single(n, a, letter) * PauliOp::single(n, b, letter);
}

}  // namespace

SubsystemCode shor_code(size_t n) {
  check_odd(n);
  GridGeometry g{n, n};
  SubsystemCode code;
  code.name = "shor" + std::to_string(n);
  code.n = n * n;
  for (size_t j = 0; j + 1 < n; j++) code.stabilizers.push_back(row_op(g, j, 'X') * row_op(g, j + 1, 'X'));
  for (size_t i = 0; i < n; i++)
    for (size_t j = 0; j + 1 < n; j++)
      code.stabilizers.push_back(pair_op(code.n, g.index(i, j), g.index(i, j + 1), 'Z'));
  code.logical_x = row_op(g, 0, 'X');
  code.logical_z = col_op(g, 0, 'Z');
  code.geometry = g;
  code.rule = DecodeRule::kShorMajority;
  code.validate();
  return code;
}

SubsystemCode bacon_shor(size_t n) {
  check_odd(n);
  GridGeometry g{n, n};
  SubsystemCode code;
  code.name = "bacon_shor" + std::to_string(n);
  code.n = n * n;
  for (size_t j = 0; j + 1 < n; j++) code.stabilizers.push_back(row_op(g, j, 'X') * row_op(g, j + 1, 'X'));
  for (size_t j = 0; j + 1 < n; j++) code.stabilizers.push_back(col_op(g, j, 'Z') * col_op(g, j + 1, 'Z'));
  for (size_t j = 0; j + 1 < n; j++)
    for (size_t i = 0; i < n; i++) code.gauges.push_back(pair_op(code.n, g.index(j, i), g.index(j + 1, i), 'X'));
  for (size_t i = 0; i < n; i++)
    for (size_t j = 0; j + 1 < n; j++) code.gauges.push_back(pair_op(code.n, g.index(i, j), g.index(i, j + 1), 'Z'));
  code.logical_x = row_op(g, 0, 'X');
  code.logical_z = col_op(g, 0, 'Z');
  code.geometry = g;
  code.rule = DecodeRule::kGridMajority;
  code.validate();
  return code;
}

BitVec syndrome(const SubsystemCode &code, const PauliOp &error) {
  if (error.num_qubits() != code.n) throw std::invalid_argument("syndrome: dimension mismatch");
  BitVec s(code.stabilizers.size());
  for (size_t i = 0; i < code.stabilizers.size(); i++) s.set(i, sympl(error, code.stabilizers[i]));
  return s;
}

Logical logical_class(const SubsystemCode &code, const PauliOp &op) {
  return make_logical(sympl(op, code.logical_z), sympl(op, code.logical_x));
}

Logical ideal_decode(const SubsystemCode &code, const PauliOp &error) {
  if (error.num_qubits() != code.n) throw std::invalid_argument("ideal_decode: dimension mismatch");
  switch (code.rule) {
    case DecodeRule::kGridMajority: {
      const GridGeometry &g = *code.geometry;
      size_t odd_cols = 0, odd_rows = 0;
      for (size_t j = 0; j < g.cols; j++) {
        bool par = false;
        for (size_t i = 0; i < g.rows; i++) par ^= error.x(g.index(i, j));
        odd_cols += par;
      }
      for (size_t i = 0; i < g.rows; i++) {
        bool par = false;
        for (size_t j = 0; j < g.cols; j++) par ^= error.z(g.index(i, j));
        odd_rows += par;
      }
      return make_logical(2 * odd_cols > g.cols, 2 * odd_rows > g.rows);
    }
    case DecodeRule::kShorMajority: {
      const GridGeometry &g = *code.geometry;
      bool lx = false;
      size_t odd_rows = 0;
      for (size_t i = 0; i < g.rows; i++) {
        size_t xs = 0;
        bool par = false;
        for (size_t j = 0; j < g.cols; j++) {
          xs += error.x(g.index(i, j));
          par ^= error.z(g.index(i, j));
        }
        lx ^= 2 * xs > g.cols;
        odd_rows += par;
      }
      return make_logical(lx, 2 * odd_rows > g.rows);
    }
    case DecodeRule::kLookup:
      return lookup_decode(code, error);
  }
  return Logical::I;
}

Logical lookup_decode(const SubsystemCode &code, const PauliOp &error) {
  std::shared_ptr<const LookupDecoder> dec = code.lookup;
  if (!dec) dec = std::make_shared<LookupDecoder>(code);
  if (code.stabilizers.size() > 64) throw std::invalid_argument("lookup decoder limited to 64 generators");
  BitVec s(64);
  s.data()[0] = syndrome_word(code, error);
  PauliOp residual = error * dec->recovery(s);
  return logical_class(code, residual);
}

size_t brute_force_distance(const SubsystemCode &code, size_t max_weight) {
  std::vector<PauliOp> ops = code.stabilizers;
  size_t ns = ops.size();
  if (ns + 2 > 64) throw std::invalid_argument("brute_force_distance: too many generators");
  ops.push_back(code.logical_x);
  ops.push_back(code.logical_z);
  auto sig = signatures(ops, code.n);
  uint64_t stab_mask = ns == 0 ? 0 : (~uint64_t{0} >> (64 - ns));
  for (size_t w = 1; w <= max_weight && w <= code.n; w++) {
    bool hit = for_each_pauli(code.n, w, sig, [&](uint64_t, const std::vector<uint8_t> &, uint64_t word) {
      return (word & stab_mask) == 0 && (word >> ns) != 0;
    });
    if (hit) return w;
  }
  return 0;
}

std::string export_code(const SubsystemCode &code) {
  std::ostringstream out;
  out << "code " << code.name << "\n";
  out << "n " << code.n << "\n";
  out << "k " << code.k << "\n";
  out << "[stabilizers " << code.stabilizers.size() << "]\n";
  for (const auto &p : code.stabilizers) out << p.str() << "\n";
  out << "[gauge " << code.gauges.size() << "]\n";
  for (const auto &p : code.gauges) out << p.str() << "\n";
  out << "[logical_x]\n" << code.logical_x.str() << "\n";
  out << "[logical_z]\n" << code.logical_z.str() << "\n";
  return out.str();
}

}  // namespace bsft
