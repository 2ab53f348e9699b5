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

// Dense state-vector reference simulator. Executes a Clifford circuit
// with Pauli faults on explicit amplitudes, reusing ancilla slots after
// measurement so that only the live qubits occupy the vector.

#ifndef BSFT_TESTS_ORACLE_STATEVECTOR_H
#define BSFT_TESTS_ORACLE_STATEVECTOR_H

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <random>
#include <stdexcept>
#include <vector>

#include "bsft/circuit.h"
#include "bsft/faultsim.h"
#include "bsft/gadgets.h"

namespace bsft::oracle {

using amp = std::complex<double>;

class StateVector {
 public:
  explicit StateVector(unsigned n) : n_(n), a_(size_t{1} << n) { a_[0] = 1; }

  unsigned size() const { return n_; }
  std::vector<amp> &amps() { return a_; }
  const std::vector<amp> &amps() const { return a_; }

  void x(unsigned q) {
    size_t m = size_t{1} << q;
    for (size_t k = 0; k < a_.size(); k++)
      if (!(k & m)) std::swap(a_[k], a_[k | m]);
  }
  void z(unsigned q) {
    size_t m = size_t{1} << q;
    for (size_t k = 0; k < a_.size(); k++)
      if (k & m) a_[k] = -a_[k];
  }
  void h(unsigned q) {
    size_t m = size_t{1} << q;
    const double r = 1 / std::sqrt(2.0);
    for (size_t k = 0; k < a_.size(); k++)
      if (!(k & m)) {
        amp u = a_[k], v = a_[k | m];
        a_[k] = r * (u + v);
        a_[k | m] = r * (u - v);
      }
  }
  void cnot(unsigned c, unsigned t) {
    size_t mc = size_t{1} << c, mt = size_t{1} << t;
    for (size_t k = 0; k < a_.size(); k++)
      if ((k & mc) && !(k & mt)) std::swap(a_[k], a_[k | mt]);
  }

  double prob_one(unsigned q) const {
    size_t m = size_t{1} << q;
    double p = 0;
    for (size_t k = 0; k < a_.size(); k++)
      if (k & m) p += std::norm(a_[k]);
    return p;
  }
  /// Z-basis measurement with collapse; `r` is a uniform draw in [0, 1).
  bool measure_z(unsigned q, double r) {
    double p1 = prob_one(q);
    bool one = r < p1;
    size_t m = size_t{1} << q;
    double norm = 1 / std::sqrt(one ? p1 : 1 - p1);
    for (size_t k = 0; k < a_.size(); k++) a_[k] = (bool(k & m) == one) ? a_[k] * norm : 0;
    return one;
  }

  /// <X^xmask>, <Z^zmask> over slot masks.
  double expect_x(size_t xmask) const {
    amp s = 0;
    for (size_t k = 0; k < a_.size(); k++) s += std::conj(a_[k]) * a_[k ^ xmask];
    return s.real();
  }
  double expect_z(size_t zmask) const {
    double s = 0;
    for (size_t k = 0; k < a_.size(); k++) s += (std::popcount(k & zmask) & 1 ? -1 : 1) * std::norm(a_[k]);
    return s;
  }

 private:
  unsigned n_;
  std::vector<amp> a_;
};

/// Executes `c` densely. Qubits are mapped to slots on first use; inputs
/// first, in the order of `c.inputs`. `boundary` (if set) runs once all
/// locations of steps <= `boundary_step` on the input qubits and all
/// corrections applied at or before it are done.
class DenseExecutor {
 public:
  DenseExecutor(const Circuit &c, const std::vector<Fault> &faults, uint64_t seed) : c_(c), rng_(seed) {
    for (const auto &f : faults) fault_[f.location] = f.pauli;
    build();
  }

  std::function<void(StateVector &, const std::vector<int> &)> boundary;
  int64_t boundary_step = -1;

  /// Largest number of simultaneously live qubits.
  unsigned peak_live() const { return peak_; }
  bool accepted() const { return accepted_; }
  const std::vector<int> &slots() const { return slot_; }
  const std::vector<int> &outcomes() const { return bit_; }

  /// `init` prepares the input qubits on slots 0..inputs-1.
  StateVector run(const std::function<void(StateVector &)> &init) {
    dry_ = true;
    execute_all();
    unsigned need = peak_;
    if (need > 24) throw std::runtime_error("dense oracle: too many live qubits");
    dry_ = false;
    StateVector sv(need);
    state_ = &sv;
    init(sv);
    execute_all();
    state_ = nullptr;
    return sv;
  }

 private:
  enum NodeKind { kLoc, kCorrection, kBoundary };
  struct Node {
    NodeKind kind;
    uint32_t index;    // location id or directive index
    uint64_t key;      // ordering key along each qubit
    std::vector<uint32_t> qubits;
    std::vector<uint32_t> deps;  // extra predecessor nodes
  };

  void build() {
    for (const auto &l : c_.locations) {
      Node n{kLoc, l.id, uint64_t{l.step} * 4, {l.q0}, {}};
      if (l.q1 != kNone) n.qubits.push_back(l.q1);
      loc_node_.push_back(nodes_.size());
      nodes_.push_back(n);
    }
    std::map<uint32_t, size_t> producer;  // derived bit -> directive
    for (size_t i = 0; i < c_.directives.size(); i++)
      if (c_.directives[i].out != kNone) producer[c_.directives[i].out] = i;
    auto meas_of_bit = c_.meas_location_of_bit();
    std::function<void(uint32_t, std::vector<uint32_t> &)> meas_deps = [&](uint32_t b, std::vector<uint32_t> &out) {
      if (b < c_.num_meas_bits) {
        out.push_back(loc_node_[meas_of_bit[b]]);
        return;
      }
      for (uint32_t in : c_.directives[producer.at(b)].in) meas_deps(in, out);
    };
    for (size_t i = 0; i < c_.directives.size(); i++) {
      const auto &d = c_.directives[i];
      if (d.kind != DirectiveKind::kLookup && d.kind != DirectiveKind::kPostselect) continue;
      Node n{kCorrection, static_cast<uint32_t>(i), uint64_t{d.apply_at} * 4 + 1, {}, {}};
      if (d.kind == DirectiveKind::kPostselect) n.key = uint64_t{d.step} * 4 + 1;
      for (const auto &e : d.table)
        for (auto [q, letter] : e.terms) n.qubits.push_back(q);
      std::sort(n.qubits.begin(), n.qubits.end());
      n.qubits.erase(std::unique(n.qubits.begin(), n.qubits.end()), n.qubits.end());
      for (uint32_t b : d.in) meas_deps(b, n.deps);
      nodes_.push_back(n);
    }
    bit_.assign(c_.num_bits, 0);
  }

  void finalize_order() {
    // Boundary node over the inputs, then per-qubit chains.
    if (boundary_step >= 0 && !boundary_added_) {
      Node n{kBoundary, 0, static_cast<uint64_t>(boundary_step) * 4 + 2, c_.inputs, {}};
      nodes_.push_back(n);
      boundary_added_ = true;
    }
    chain_.assign(c_.num_qubits, {});
    for (uint32_t i = 0; i < nodes_.size(); i++)
      for (uint32_t q : nodes_[i].qubits) chain_[q].push_back(i);
    pos_.assign(nodes_.size(), {});
    for (uint32_t q = 0; q < c_.num_qubits; q++) {
      auto &ch = chain_[q];
      std::stable_sort(ch.begin(), ch.end(), [&](uint32_t a, uint32_t b) {
        if (nodes_[a].key != nodes_[b].key) return nodes_[a].key < nodes_[b].key;
        return a < b;
      });
      for (uint32_t k = 0; k < ch.size(); k++) pos_[ch[k]].push_back({q, k});
    }
  }

  void execute_all() {
    finalize_order();
    done_.assign(nodes_.size(), false);
    slot_.assign(c_.num_qubits, -1);
    free_.clear();
    live_ = 0;
    accepted_ = true;
    std::fill(bit_.begin(), bit_.end(), 0);
    for (uint32_t q : c_.inputs) slot_[q] = static_cast<int>(live_++);
    next_slot_ = live_;
    if (dry_) peak_ = live_;
    // Drive along the input qubits' timelines, then everything else.
    std::vector<uint32_t> order(nodes_.size());
    for (uint32_t i = 0; i < order.size(); i++) order[i] = i;
    std::vector<bool> on_input(c_.num_qubits, false);
    for (uint32_t q : c_.inputs) on_input[q] = true;
    auto touches_input = [&](uint32_t i) {
      for (uint32_t q : nodes_[i].qubits)
        if (on_input[q]) return true;
      return false;
    };
    std::stable_sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
      bool ia = touches_input(a), ib = touches_input(b);
      if (ia != ib) return ia;
      return nodes_[a].key < nodes_[b].key;
    });
    for (uint32_t i : order) exec(i);
  }

  void exec(uint32_t i) {
    if (done_[i]) return;
    for (auto [q, k] : pos_[i])
      if (k > 0) exec(chain_[q][k - 1]);
    for (uint32_t d : nodes_[i].deps) exec(d);
    if (done_[i]) return;
    done_[i] = true;
    run_node(nodes_[i]);
    // Eagerly finish qubits whose remaining operations are single-qubit.
    for (uint32_t q : nodes_[i].qubits) drain(q);
  }

  void drain(uint32_t q) {
    for (uint32_t k = 0; k < chain_[q].size(); k++) {
      uint32_t j = chain_[q][k];
      if (done_[j]) continue;
      const Node &n = nodes_[j];
      if (n.kind != kLoc) return;
      const auto &l = c_.locations[n.index];
      if (l.kind != LocKind::kMemory && !is_meas(l.kind)) return;
      exec(j);
    }
  }

  unsigned alloc(uint32_t q) {
    if (slot_[q] >= 0) return static_cast<unsigned>(slot_[q]);
    unsigned s;
    if (!free_.empty()) {
      s = free_.back();
      free_.pop_back();
    } else {
      s = next_slot_++;
    }
    slot_[q] = static_cast<int>(s);
    live_++;
    peak_ = std::max(peak_, live_);
    return s;
  }

  void pauli(unsigned s, bool px, bool pz) {
    if (dry_) return;
    if (px) state_->x(s);
    if (pz) state_->z(s);
  }

  void run_node(const Node &n) {
    if (n.kind == kBoundary) {
      if (!dry_ && boundary) boundary(*state_, slot_);
      return;
    }
    if (n.kind == kCorrection) {
      const auto &d = c_.directives[n.index];
      if (d.kind == DirectiveKind::kPostselect) {
        if (value(d.in[0])) accepted_ = false;
        return;
      }
      size_t idx = 0;
      for (size_t k = 0; k < d.in.size(); k++) idx |= static_cast<size_t>(value(d.in[k])) << k;
      for (auto [q, letter] : d.table[idx].terms) {
        if (slot_[q] < 0) throw std::logic_error("dense oracle: correction on a dead qubit");
        pauli(static_cast<unsigned>(slot_[q]), letter & 1, letter & 2);
      }
      return;
    }
    const auto &l = c_.locations[n.index];
    auto it = fault_.find(l.id);
    uint8_t f = it == fault_.end() ? 0 : it->second;
    switch (l.kind) {
      case LocKind::kMemory: {
        unsigned s = alloc(l.q0);
        pauli(s, f & 1, f & 2);
        break;
      }
      case LocKind::kPrep0:
      case LocKind::kPrepPlus: {
        unsigned s = alloc(l.q0);
        bool plus = l.kind == LocKind::kPrepPlus;
        if (!dry_ && plus) state_->h(s);
        if (f) pauli(s, !plus, plus);
        break;
      }
      case LocKind::kHadamard: {
        unsigned s = alloc(l.q0);
        if (!dry_) state_->h(s);
        pauli(s, f & 1, f & 2);
        break;
      }
      case LocKind::kCnot: {
        unsigned a = alloc(l.q0), b = alloc(l.q1);
        if (!dry_) state_->cnot(a, b);
        pauli(a, f & 1, f & 2);
        pauli(b, f & 4, f & 8);
        break;
      }
      case LocKind::kMeasX:
      case LocKind::kMeasZ: {
        unsigned s = alloc(l.q0);
        bool out = false;
        if (!dry_) {
          if (l.kind == LocKind::kMeasX) state_->h(s);
          out = state_->measure_z(s, std::uniform_real_distribution<double>(0, 1)(rng_));
          if (out) state_->x(s);  // back to |0> for reuse
        }
        bit_[l.bit] = out ^ (f & 1);
        slot_[l.q0] = -1;
        free_.push_back(s);
        live_--;
        break;
      }
    }
  }

  int value(uint32_t b) {
    if (b < c_.num_meas_bits) return bit_[b];
    if (derived_.empty())
      for (size_t i = 0; i < c_.directives.size(); i++)
        if (c_.directives[i].out != kNone) derived_[c_.directives[i].out] = i;
    const auto &d = c_.directives[derived_.at(b)];
    if (d.kind == DirectiveKind::kParity) {
      int v = 0;
      for (uint32_t in : d.in) v ^= value(in);
      return v;
    }
    int ones = 0;
    for (uint32_t in : d.in) ones += value(in);
    return 2 * ones > static_cast<int>(d.in.size());
  }

  const Circuit &c_;
  std::mt19937_64 rng_;
  std::map<uint32_t, uint8_t> fault_;
  std::vector<Node> nodes_;
  std::vector<uint32_t> loc_node_;
  std::vector<std::vector<uint32_t>> chain_;
  std::vector<std::vector<std::pair<uint32_t, uint32_t>>> pos_;
  std::vector<bool> done_;
  std::vector<int> slot_;
  std::vector<unsigned> free_;
  std::vector<int> bit_;
  std::map<uint32_t, size_t> derived_;
  unsigned live_ = 0, peak_ = 0, next_slot_ = 0;
  bool dry_ = true;
  bool accepted_ = true;
  bool boundary_added_ = false;
  StateVector *state_ = nullptr;
};

// Bacon-Shor helpers on slot-indexed states. Block qubits are in row-major
// code order.

inline size_t mask_of(const std::vector<uint32_t> &qs, const std::vector<int> &slot) {
  size_t m = 0;
  for (uint32_t q : qs) m |= size_t{1} << slot[q];
  return m;
}

/// Ideal decoding of one logical observable: the bare logical (Z on column
/// 0, or X on row 0) corrected by a majority vote over the lines.
inline int decode_line_logical(const StateVector &sv, const std::vector<uint32_t> &block,
                               const std::vector<int> &slot, bool z_type) {
  size_t n = static_cast<size_t>(std::lround(std::sqrt(static_cast<double>(block.size()))));
  auto line = [&](size_t k) {
    std::vector<uint32_t> qs;
    for (size_t m = 0; m < n; m++) qs.push_back(z_type ? block[m * n + k] : block[k * n + m]);
    return mask_of(qs, slot);
  };
  auto sign = [&](size_t mask) {
    double e = z_type ? sv.expect_z(mask) : sv.expect_x(mask);
    if (std::abs(std::abs(e) - 1) > 1e-6) throw std::logic_error("dense oracle: observable is not determined");
    return e < 0 ? 1 : 0;
  };
  std::vector<int> flag(n, 0);
  for (size_t k = 0; k + 1 < n; k++) flag[k + 1] = flag[k] ^ sign(line(k) ^ line(k + 1));
  int ones = 0;
  for (int f : flag) ones += f;
  int base = 2 * ones > static_cast<int>(n) ? 1 : 0;
  return sign(line(0)) ^ flag[0] ^ base;
}

/// |0>_L (z_type) or |+>_L on the given slots: a product of line cats.
inline void prepare_logical(StateVector &sv, const std::vector<uint32_t> &block, const std::vector<int> &slot,
                            bool zero) {
  size_t n = static_cast<size_t>(std::lround(std::sqrt(static_cast<double>(block.size()))));
  for (size_t k = 0; k < n; k++) {
    // |0>_L: columns in |+..+> + |-..->; |+>_L: rows in |0..0> + |1..1>.
    auto q = [&](size_t m) { return static_cast<unsigned>(slot[zero ? block[m * n + k] : block[k * n + m]]); };
    sv.h(q(0));
    for (size_t m = 1; m < n; m++) sv.cnot(q(0), q(m));
    if (zero)
      for (size_t m = 0; m < n; m++) sv.h(q(m));
  }
}

struct DenseVerdict {
  bool accepted = true;
  bool x_bad = false;  // from |0>_L |0>_L
  bool z_bad = false;  // from |+>_L |+>_L
};

/// Runs the exRec twice (Z-basis and X-basis logical inputs) and checks that
/// the ideally decoded output equals the CNOT of the ideally decoded Rec
/// input. Only meaningful when no qubit of the Rec input or output is
/// replaced along the way (Steane and gauge ECs).
inline DenseVerdict dense_exrec_verdict(const ExRec &ex, const std::vector<Fault> &faults, uint64_t seed) {
  DenseVerdict v;
  for (bool z_type : {true, false}) {
    DenseExecutor run(ex.circuit, faults, seed);
    run.boundary_step = ex.checkpoint;
    int in0 = 0, in1 = 0;
    run.boundary = [&](StateVector &sv, const std::vector<int> &slot) {
      in0 = decode_line_logical(sv, ex.rec_input[0], slot, z_type);
      in1 = decode_line_logical(sv, ex.rec_input[1], slot, z_type);
    };
    auto sv = run.run([&](StateVector &s) {
      std::vector<int> slot(ex.circuit.num_qubits, -1);
      for (size_t k = 0; k < ex.circuit.inputs.size(); k++) slot[ex.circuit.inputs[k]] = static_cast<int>(k);
      for (int b = 0; b < 2; b++) {
        std::vector<uint32_t> blk(ex.circuit.blocks[b].qubits);
        prepare_logical(s, blk, slot, z_type);
      }
    });
    if (!run.accepted()) {
      v.accepted = false;
      continue;
    }
    int out0 = decode_line_logical(sv, ex.output[0], run.slots(), z_type);
    int out1 = decode_line_logical(sv, ex.output[1], run.slots(), z_type);
    bool bad = z_type ? (out0 != in0 || out1 != (in0 ^ in1)) : (out0 != (in0 ^ in1) || out1 != in1);
    (z_type ? v.x_bad : v.z_bad) = bad;
  }
  return v;
}

}  // namespace bsft::oracle

#endif
