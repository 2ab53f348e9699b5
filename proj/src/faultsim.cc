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

#include "bsft/faultsim.h"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace bsft {

std::vector<uint8_t> descriptors(LocKind kind, CnotModel model) {
  switch (kind) {
    case LocKind::kMemory:
    case LocKind::kHadamard:
      if (model == CnotModel::kSeparated) return {1, 2};
      return {1, 2, 3};
    case LocKind::kCnot:
      if (model == CnotModel::kSeparated) return {1, 4, 5, 2, 8, 10};
      return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15};
    default:
      return {1};
  }
}

std::string descriptor_name(LocKind kind, uint8_t d) {
  auto letter = [](uint8_t v) { return "IXZY"[v & 3]; };
  switch (kind) {
    case LocKind::kMemory:
    case LocKind::kHadamard:
      return std::string(1, letter(d));
    case LocKind::kCnot:
      return std::string{letter(d), letter(d >> 2)};
    case LocKind::kPrep0:
      return "X";
    case LocKind::kPrepPlus:
      return "Z";
    default:
      return "flip";
  }
}

FaultAssignment::FaultAssignment(std::initializer_list<Fault> faults) {
  for (const auto &f : faults) set(f.location, f.pauli);
}

void FaultAssignment::set(uint32_t location, uint8_t pauli) {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), location,
                             [](const Fault &f, uint32_t l) { return f.location < l; });
  if (it != entries_.end() && it->location == location) {
    it->pauli = pauli;
  } else {
    entries_.insert(it, Fault{location, pauli});
  }
}

void FaultAssignment::validate(const Circuit &c) const {
  for (const auto &f : entries_) {
    if (f.location >= c.locations.size())
      throw std::invalid_argument("fault on unknown location " + std::to_string(f.location));
    auto ds = descriptors(c.locations[f.location].kind);
    if (std::find(ds.begin(), ds.end(), f.pauli) == ds.end())
      throw std::invalid_argument("descriptor " + std::to_string(f.pauli) + " invalid for " +
                                  kind_name(c.locations[f.location].kind));
  }
}

std::string FaultAssignment::str() const {
  std::ostringstream out;
  for (size_t k = 0; k < entries_.size(); k++) out << (k ? " " : "") << entries_[k].location << ':' << int(entries_[k].pauli);
  return out.str();
}

PauliOp FrameState::frame() const {
  PauliOp p(x.size());
  p.xs() = x;
  p.zs() = z;
  return p;
}

PauliOp block_frame(const BitVec &x, const BitVec &z, const std::vector<uint32_t> &qubits) {
  PauliOp p(qubits.size());
  for (size_t k = 0; k < qubits.size(); k++) {
    p.set_x(k, x.get(qubits[k]));
    p.set_z(k, z.get(qubits[k]));
  }
  return p;
}

namespace {

// Ideal action of a non-measurement location on a frame.
void conjugate(const Location &l, BitVec &x, BitVec &z) {
  if (l.kind == LocKind::kCnot) {
    if (x.get(l.q0)) x.flip(l.q1);
    if (z.get(l.q1)) z.flip(l.q0);
  } else if (l.kind == LocKind::kHadamard) {
    bool a = x.get(l.q0), b = z.get(l.q0);
    x.set(l.q0, b);
    z.set(l.q0, a);
  }
}

void apply_fault(const Location &l, uint8_t d, BitVec &x, BitVec &z) {
  switch (l.kind) {
    case LocKind::kMemory:
    case LocKind::kHadamard:
      if (d & 1) x.flip(l.q0);
      if (d & 2) z.flip(l.q0);
      break;
    case LocKind::kCnot:
      if (d & 1) x.flip(l.q0);
      if (d & 2) z.flip(l.q0);
      if (d & 4) x.flip(l.q1);
      if (d & 8) z.flip(l.q1);
      break;
    case LocKind::kPrep0:
      if (d) x.flip(l.q0);
      break;
    case LocKind::kPrepPlus:
      if (d) z.flip(l.q0);
      break;
    default:
      break;
  }
}

bool touches(const Location &l, const BitVec &x, const BitVec &z) {
  auto hit = [&](uint32_t q) { return q != kNone && (x.get(q) || z.get(q)); };
  return hit(l.q0) || hit(l.q1);
}

}  // namespace

FrameState propagate(const Circuit &c, const FaultAssignment &faults, const PauliOp &input_frame,
                     const PropagateOptions &opts) {
  if (input_frame.num_qubits() != c.num_qubits)
    throw std::invalid_argument("input frame size does not match circuit");
  std::vector<uint8_t> fault_at(c.locations.size(), 0);
  for (const auto &f : faults.entries()) {
    if (f.location >= c.locations.size()) throw std::invalid_argument("fault on unknown location");
    fault_at[f.location] = f.pauli;
  }
  FrameState st;
  st.x = input_frame.xs();
  st.z = input_frame.zs();
  st.bits = BitVec(c.num_bits);
  int max_block = -1;
  for (const auto &d : c.directives) max_block = std::max(max_block, d.block);
  st.logical_frame.assign(max_block + 1, Logical::I);

  size_t di = 0;
  uint32_t t0 = 0;
  if (opts.start_after >= 0) {
    t0 = static_cast<uint32_t>(opts.start_after) + 1;
    while (di < c.directives.size() && c.directives[di].step < t0) di++;
    if (opts.checkpoint == opts.start_after) {
      st.snap_x = st.x;
      st.snap_z = st.z;
      st.has_snapshot = true;
    }
  }
  for (uint32_t t = t0; t < c.num_steps; t++) {
    uint32_t lo = c.step_begin[t], hi = c.step_begin[t + 1];
    for (uint32_t i = lo; i < hi; i++) {
      const Location &l = c.locations[i];
      if (!is_meas(l.kind)) continue;
      bool flip = (l.kind == LocKind::kMeasZ ? st.x.get(l.q0) : st.z.get(l.q0)) ^ (fault_at[i] != 0);
      st.bits.set(l.bit, flip);
      st.x.set(l.q0, false);
      st.z.set(l.q0, false);
    }
    for (; di < c.directives.size() && c.directives[di].step == t; di++) {
      if (!opts.run_directives) continue;
      const Directive &d = c.directives[di];
      switch (d.kind) {
        case DirectiveKind::kParity: {
          bool v = false;
          for (uint32_t b : d.in) v ^= st.bits.get(b);
          st.bits.set(d.out, v);
          break;
        }
        case DirectiveKind::kMajority: {
          size_t ones = 0;
          for (uint32_t b : d.in) ones += st.bits.get(b);
          st.bits.set(d.out, 2 * ones > d.in.size());
          break;
        }
        case DirectiveKind::kPostselect:
          if (st.bits.get(d.in[0])) st.accepted = false;
          break;
        case DirectiveKind::kLookup: {
          size_t idx = 0;
          for (size_t k = 0; k < d.in.size(); k++) idx |= size_t{st.bits.get(d.in[k])} << k;
          const SparsePauli &p = d.table[idx];
          if (d.block >= 0 && !d.logical.empty())
            st.logical_frame[d.block] = st.logical_frame[d.block] ^ d.logical[idx];
          if (p.empty()) break;
          BitVec cx(c.num_qubits), cz(c.num_qubits);
          for (const auto &[q, letter] : p.terms) {
            if (letter & 1) cx.flip(q);
            if (letter & 2) cz.flip(q);
          }
          // Carry the correction from boundary apply_at to boundary t-1,
          // folding it into the snapshot when it passes the checkpoint.
          for (uint32_t s = d.apply_at + 1;; s++) {
            if (st.has_snapshot && opts.checkpoint == static_cast<int64_t>(s) - 1) {
              st.snap_x ^= cx;
              st.snap_z ^= cz;
            }
            if (s > t) break;
            for (uint32_t i = c.step_begin[s]; i < c.step_begin[s + 1]; i++) {
              const Location &l = c.locations[i];
              if (is_meas(l.kind) || is_prep(l.kind)) {
                if (touches(l, cx, cz)) throw std::logic_error("correction crosses a measurement or preparation");
              } else if (s < t) {
                conjugate(l, cx, cz);
              }
            }
            if (s == t) break;
          }
          st.x ^= cx;
          st.z ^= cz;
          break;
        }
      }
    }
    for (uint32_t i = lo; i < hi; i++) {
      const Location &l = c.locations[i];
      if (is_meas(l.kind)) continue;
      if (is_prep(l.kind)) {
        st.x.set(l.q0, false);
        st.z.set(l.q0, false);
      } else {
        conjugate(l, st.x, st.z);
      }
      if (fault_at[i]) apply_fault(l, fault_at[i], st.x, st.z);
    }
    if (opts.checkpoint == static_cast<int64_t>(t)) {
      st.snap_x = st.x;
      st.snap_z = st.z;
      st.has_snapshot = true;
    }
    if (opts.trace) {
      PauliOp f = st.frame();
      *opts.trace += "t=" + std::to_string(t) + " FRAME " + f.str() + (st.accepted ? "" : " rejected") + "\n";
    }
  }
  return st;
}

ExRecDecoding decode_exrec(const ExRec &exrec, const FrameState &st) {
  ExRecDecoding d;
  for (int b = 0; b < 2; b++) {
    d.in[b] = ideal_decode(exrec.code, block_frame(st.snap_x, st.snap_z, exrec.rec_input[b]));
    d.out[b] = ideal_decode(exrec.code, block_frame(st.x, st.z, exrec.output[b]));
  }
  return d;
}

Incorrectness compare_cnot(const ExRecDecoding &d) {
  // Ideal CNOT: X on control copies to target, Z on target copies to control.
  bool ix0 = has_x(d.in[0]), ix1 = has_x(d.in[1]), iz0 = has_z(d.in[0]), iz1 = has_z(d.in[1]);
  Incorrectness r;
  r.x_bad = has_x(d.out[0]) != ix0 || has_x(d.out[1]) != (ix0 ^ ix1);
  r.z_bad = has_z(d.out[0]) != (iz0 ^ iz1) || has_z(d.out[1]) != iz1;
  return r;
}

Incorrectness exrec_is_incorrect(const ExRec &exrec, const FaultAssignment &faults) {
  PropagateOptions opts;
  opts.checkpoint = exrec.checkpoint;
  FrameState st = propagate(exrec.circuit, faults, PauliOp(exrec.circuit.num_qubits), opts);
  if (!st.accepted) return {};
  return compare_cnot(decode_exrec(exrec, st));
}

}  // namespace bsft
