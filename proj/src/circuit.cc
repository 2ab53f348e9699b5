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

#include "bsft/circuit.h"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace bsft {

namespace {

constexpr uint32_t kDerivedFlag = 0x80000000u;

}  // namespace

int type_index(LocKind k) {
  switch (k) {
    case LocKind::kMemory:
      return 1;
    case LocKind::kPrep0:
      return 2;
    case LocKind::kPrepPlus:
      return 3;
    case LocKind::kMeasX:
      return 4;
    case LocKind::kMeasZ:
      return 5;
    case LocKind::kCnot:
      return 6;
    case LocKind::kHadamard:
      return 0;
  }
  return 0;
}

const char *kind_name(LocKind k) {
  switch (k) {
    case LocKind::kMemory:
      return "MEMORY";
    case LocKind::kPrep0:
      return "PREP_0";
    case LocKind::kPrepPlus:
      return "PREP_PLUS";
    case LocKind::kMeasX:
      return "MEAS_X";
    case LocKind::kMeasZ:
      return "MEAS_Z";
    case LocKind::kCnot:
      return "CNOT";
    case LocKind::kHadamard:
      return "H";
  }
  return "?";
}

std::string SparsePauli::str() const {
  if (terms.empty()) return "I";
  std::string s;
  for (size_t k = 0; k < terms.size(); k++) {
    if (k) s += '*';
    s += "?XZY"[terms[k].second & 3];
    s += std::to_string(terms[k].first);
  }
  return s;
}

std::vector<uint32_t> CircuitBuilder::new_qubits(size_t n) {
  std::vector<uint32_t> out(n);
  for (auto &q : out) q = new_qubit();
  return out;
}

uint32_t CircuitBuilder::add(LocKind kind, uint32_t step, uint32_t q0, uint32_t q1) {
  Location loc;
  loc.kind = kind;
  loc.step = step;
  loc.q0 = q0;
  loc.q1 = q1;
  loc.part = part_;
  loc.flags = flags_;
  if (is_meas(kind)) loc.bit = meas_bits_++;
  locs_.push_back({loc, static_cast<uint32_t>(locs_.size())});
  return loc.bit;
}

Circuit CircuitBuilder::finish(bool insert_memory) {
  if (insert_memory) {
    // Gather the steps each qubit is busy.
    std::vector<std::vector<std::pair<uint32_t, size_t>>> busy(num_qubits_);
    for (size_t k = 0; k < locs_.size(); k++) {
      const auto &l = locs_[k].loc;
      busy[l.q0].push_back({l.step, k});
      if (l.q1 != kNone) busy[l.q1].push_back({l.step, k});
    }
    for (uint32_t q = 0; q < num_qubits_; q++) {
      auto &v = busy[q];
      std::sort(v.begin(), v.end());
      for (size_t k = 0; k + 1 < v.size(); k++)
        for (uint32_t t = v[k].first + 1; t < v[k + 1].first; t++) {
          Location loc;
          loc.kind = LocKind::kMemory;
          loc.step = t;
          loc.q0 = q;
          loc.part = locs_[v[k].second].loc.part;
          loc.flags = locs_[v[k].second].loc.flags & kFlagCat;
          locs_.push_back({loc, static_cast<uint32_t>(locs_.size())});
        }
    }
  }
  std::stable_sort(locs_.begin(), locs_.end(), [](const Pending &a, const Pending &b) {
    return a.loc.step != b.loc.step ? a.loc.step < b.loc.step : a.seq < b.seq;
  });

  Circuit c;
  c.num_qubits = num_qubits_;
  c.num_meas_bits = meas_bits_;
  c.num_bits = meas_bits_ + derived_bits_;
  uint32_t max_step = 0;
  for (const auto &p : locs_) max_step = std::max(max_step, p.loc.step);
  for (const auto &d : directives_) max_step = std::max(max_step, d.step);
  c.num_steps = locs_.empty() && directives_.empty() ? 0 : max_step + 1;
  for (const auto &p : locs_) {
    Location loc = p.loc;
    loc.id = static_cast<uint32_t>(c.locations.size());
    c.locations.push_back(loc);
  }
  c.step_begin.assign(c.num_steps + 1, 0);
  for (const auto &l : c.locations) c.step_begin[l.step + 1]++;
  for (uint32_t t = 0; t < c.num_steps; t++) c.step_begin[t + 1] += c.step_begin[t];

  auto remap = [&](uint32_t b) { return (b & kDerivedFlag) ? meas_bits_ + (b & ~kDerivedFlag) : b; };
  for (auto d : directives_) {
    if (d.out != kNone) d.out = remap(d.out);
    for (auto &b : d.in) b = remap(b);
    c.directives.push_back(std::move(d));
  }
  std::stable_sort(c.directives.begin(), c.directives.end(),
                   [](const Directive &a, const Directive &b) { return a.step < b.step; });
  c.blocks = blocks_;
  c.inputs = inputs_;
  c.validate();
  return c;
}

std::vector<uint32_t> Circuit::meas_location_of_bit() const {
  std::vector<uint32_t> out(num_meas_bits, kNone);
  for (const auto &l : locations)
    if (is_meas(l.kind)) out[l.bit] = l.id;
  return out;
}

void Circuit::validate() const {
  auto fail = [](const std::string &m) { throw std::logic_error("invalid circuit: " + m); };
  std::vector<int64_t> last_step(num_qubits, -1);
  // 0 = not live, 1 = live, 2 = measured
  std::vector<uint8_t> state(num_qubits, 0);
  for (uint32_t q : inputs) {
    if (q >= num_qubits) fail("input qubit out of range");
    state[q] = 1;
  }
  uint32_t prev_step = 0;
  for (size_t i = 0; i < locations.size(); i++) {
    const Location &l = locations[i];
    if (l.id != i) fail("location ids must be dense");
    if (l.step < prev_step) fail("locations not time ordered");
    prev_step = l.step;
    if (l.q0 >= num_qubits) fail("qubit out of range");
    if (l.kind == LocKind::kCnot) {
      if (l.q1 >= num_qubits || l.q1 == l.q0) fail("CNOT needs two distinct qubits");
    } else if (l.q1 != kNone) {
      fail(std::string(kind_name(l.kind)) + " takes one qubit");
    }
    for (uint32_t q : {l.q0, l.q1}) {
      if (q == kNone) continue;
      if (last_step[q] == static_cast<int64_t>(l.step))
        fail("qubit " + std::to_string(q) + " used twice at step " + std::to_string(l.step));
      last_step[q] = l.step;
      if (is_prep(l.kind)) {
        if (state[q] == 1) fail("qubit " + std::to_string(q) + " prepared while live");
        state[q] = 1;
      } else if (state[q] != 1) {
        fail("qubit " + std::to_string(q) + " used before preparation at step " + std::to_string(l.step));
      }
      if (is_meas(l.kind)) state[q] = 2;
    }
    if (is_meas(l.kind)) {
      if (l.bit >= num_meas_bits) fail("measurement bit out of range");
    } else if (l.bit != kNone) {
      fail("non-measurement location writes a bit");
    }
  }
  // Directives may only read bits produced by earlier measurements or directives.
  std::vector<uint32_t> meas_step(num_meas_bits, UINT32_MAX);
  for (const auto &l : locations)
    if (is_meas(l.kind)) meas_step[l.bit] = l.step;
  std::vector<uint8_t> produced(num_bits, 0);
  for (const auto &d : directives) {
    for (uint32_t b : d.in) {
      if (b >= num_bits) fail("directive reads unknown bit");
      if (b < num_meas_bits) {
        if (meas_step[b] > d.step) fail("directive reads a future measurement");
      } else if (!produced[b]) {
        fail("directive reads a bit before it is produced");
      }
    }
    switch (d.kind) {
      case DirectiveKind::kParity:
      case DirectiveKind::kMajority:
        if (d.out < num_meas_bits || d.out >= num_bits) fail("directive output must be a derived bit");
        produced[d.out] = 1;
        break;
      case DirectiveKind::kLookup:
        if (d.table.size() != (size_t{1} << d.in.size())) fail("lookup table size mismatch");
        if (d.apply_at >= d.step) fail("lookup applies at or after its execution step");
        for (const auto &p : d.table)
          for (const auto &t : p.terms)
            if (t.first >= num_qubits) fail("lookup correction qubit out of range");
        break;
      case DirectiveKind::kPostselect:
        if (d.in.size() != 1) fail("postselect reads exactly one bit");
        break;
    }
  }
}

std::string Circuit::dump() const {
  std::ostringstream out;
  for (const auto &l : locations) {
    out << "t=" << l.step << ' ' << kind_name(l.kind) << " q" << l.q0;
    if (l.q1 != kNone) out << ",q" << l.q1;
    if (l.bit != kNone) out << " ->b" << l.bit;
    if (!l.placeable) out << " fixed";
    out << '\n';
  }
  auto bits = [&](const std::vector<uint32_t> &v) {
    std::string s;
    for (size_t k = 0; k < v.size(); k++) s += (k ? ",b" : "b") + std::to_string(v[k]);
    return s;
  };
  for (const auto &d : directives) {
    out << "t=" << d.step << ' ';
    switch (d.kind) {
      case DirectiveKind::kParity:
        out << "PARITY b" << d.out << " <- " << bits(d.in);
        break;
      case DirectiveKind::kMajority:
        out << "MAJORITY b" << d.out << " <- " << bits(d.in);
        break;
      case DirectiveKind::kLookup:
        out << "LOOKUP " << bits(d.in) << " @" << d.apply_at;
        for (size_t k = 0; k < d.table.size(); k++)
          if (!d.table[k].empty()) out << ' ' << k << ':' << d.table[k].str();
        break;
      case DirectiveKind::kPostselect:
        out << "POSTSELECT " << bits(d.in);
        break;
    }
    out << '\n';
  }
  return out.str();
}

size_t count_locations(const Circuit &c, std::optional<LocKind> kind) {
  if (!kind) return c.locations.size();
  return std::count_if(c.locations.begin(), c.locations.end(), [&](const Location &l) { return l.kind == *kind; });
}

size_t count_placeable(const Circuit &c, std::optional<LocKind> kind) {
  return std::count_if(c.locations.begin(), c.locations.end(),
                       [&](const Location &l) { return l.placeable && (!kind || l.kind == *kind); });
}

}  // namespace bsft
