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

#include "bsft/gadgets.h"

#include <bit>
#include <stdexcept>

namespace bsft {

namespace {

struct Grid {
  size_t n = 0;
  std::vector<uint32_t> q;
  uint32_t at(size_t i, size_t j) const { return q[i * n + j]; }
};

size_t side(const SubsystemCode &code) {
  if (!code.geometry || code.rule != DecodeRule::kGridMajority)
    throw std::invalid_argument("gadgets require a Bacon-Shor code");
  size_t n = code.geometry->rows;
  if (n != 3 && n != 5) throw std::invalid_argument("gadgets support n = 3 or 5 only");
  return n;
}

Grid new_grid(CircuitBuilder &b, size_t n) { return {n, b.new_qubits(n * n)}; }

// Steps a cat needs before the step at which it is first used.
uint32_t cat_lead(size_t n) { return n == 3 ? 3 : 5; }

// Emits an n-qubit cat state ready for use at step T (its last gate is at
// T-1). `hadamard` selects the X-basis cat (|+..+> + |-..->). The n = 5
// cats carry a verifier measured at T and postselected.
std::vector<uint32_t> emit_cat(CircuitBuilder &b, size_t n, bool hadamard, uint32_t T) {
  b.set_flags(kFlagCat);
  std::vector<uint32_t> r = b.new_qubits(n);
  LocKind zero = LocKind::kPrep0, plus = LocKind::kPrepPlus;
  if (n == 3) {
    if (hadamard) {
      b.add(plus, T - 3, r[0]);
      b.add(zero, T - 3, r[1]);
      b.add(LocKind::kCnot, T - 2, r[0], r[1]);
      b.add(plus, T - 2, r[2]);
      b.add(LocKind::kCnot, T - 1, r[2], r[1]);
    } else {
      b.add(zero, T - 3, r[0]);
      b.add(plus, T - 3, r[1]);
      b.add(LocKind::kCnot, T - 2, r[1], r[0]);
      b.add(zero, T - 2, r[2]);
      b.add(LocKind::kCnot, T - 1, r[1], r[2]);
    }
  } else {
    uint32_t v = b.new_qubit();
    uint32_t bit;
    if (hadamard) {
      b.add(plus, T - 5, r[1]);
      b.add(zero, T - 5, r[2]);
      b.add(LocKind::kCnot, T - 4, r[1], r[2]);
      b.add(plus, T - 4, r[3]);
      b.add(plus, T - 4, r[0]);
      b.add(LocKind::kCnot, T - 3, r[3], r[2]);
      b.add(LocKind::kCnot, T - 3, r[0], r[1]);
      b.add(plus, T - 3, r[4]);
      b.add(plus, T - 3, v);
      b.add(LocKind::kCnot, T - 2, r[4], r[3]);
      b.add(LocKind::kCnot, T - 2, v, r[0]);
      b.add(LocKind::kCnot, T - 1, v, r[4]);
      bit = b.add(LocKind::kMeasX, T, v);
    } else {
      b.add(plus, T - 5, r[2]);
      b.add(zero, T - 5, r[1]);
      b.add(LocKind::kCnot, T - 4, r[2], r[1]);
      b.add(zero, T - 4, r[3]);
      b.add(zero, T - 4, r[0]);
      b.add(LocKind::kCnot, T - 3, r[2], r[3]);
      b.add(LocKind::kCnot, T - 3, r[1], r[0]);
      b.add(zero, T - 3, r[4]);
      b.add(zero, T - 3, v);
      b.add(LocKind::kCnot, T - 2, r[3], r[4]);
      b.add(LocKind::kCnot, T - 2, r[0], v);
      b.add(LocKind::kCnot, T - 1, r[4], v);
      bit = b.add(LocKind::kMeasZ, T, v);
    }
    Directive d;
    d.kind = DirectiveKind::kPostselect;
    d.step = T;
    d.in = {bit};
    b.add_directive(d);
  }
  b.set_flags(0);
  return r;
}

uint32_t parity(CircuitBuilder &b, uint32_t step, const std::vector<uint32_t> &in) {
  Directive d;
  d.kind = DirectiveKind::kParity;
  d.step = step;
  d.out = b.new_bit();
  d.in = in;
  b.add_directive(d);
  return d.out;
}

// Minority rule on n line-parity flips: correct every line that disagrees
// with the majority. `fix(k)` is the correction for line k.
template <typename F>
std::vector<SparsePauli> minority_table(size_t n, F &&fix) {
  std::vector<SparsePauli> table(size_t{1} << n);
  for (size_t idx = 0; idx < table.size(); idx++) {
    bool maj = 2 * static_cast<size_t>(std::popcount(idx)) > n;
    for (size_t k = 0; k < n; k++)
      if (((idx >> k) & 1) != maj) {
        SparsePauli p = fix(k);
        table[idx].terms.insert(table[idx].terms.end(), p.terms.begin(), p.terms.end());
      }
  }
  return table;
}

void lookup(CircuitBuilder &b, uint32_t step, uint32_t apply_at, std::vector<uint32_t> in,
            std::vector<SparsePauli> table, int block, std::vector<Logical> logical = {}) {
  Directive d;
  d.kind = DirectiveKind::kLookup;
  d.step = step;
  d.in = std::move(in);
  d.table = std::move(table);
  d.apply_at = apply_at;
  d.block = block;
  d.logical = std::move(logical);
  b.add_directive(std::move(d));
}

SparsePauli one(uint32_t q, uint8_t letter) { return SparsePauli{{{q, letter}}}; }

// Z-error half of Steane EC: X-basis column cats, cat controls at t, MEAS_X
// at t+1.
void steane_z(CircuitBuilder &b, const Grid &d, uint32_t t, int block) {
  size_t n = d.n;
  std::vector<std::vector<uint32_t>> m(n, std::vector<uint32_t>(n));
  for (size_t j = 0; j < n; j++) {
    auto cat = emit_cat(b, n, true, t);
    for (size_t i = 0; i < n; i++) b.add(LocKind::kCnot, t, cat[i], d.at(i, j));
    for (size_t i = 0; i < n; i++) m[i][j] = b.add(LocKind::kMeasX, t + 1, cat[i]);
  }
  std::vector<uint32_t> rows;
  for (size_t i = 0; i < n; i++) rows.push_back(parity(b, t + 1, m[i]));
  lookup(b, t + 1, t, rows, minority_table(n, [&](size_t i) { return one(d.at(i, 0), 2); }), block);
}

// X-error half: row cats, data controls at t, MEAS_Z at t+1.
void steane_x(CircuitBuilder &b, const Grid &d, uint32_t t, int block) {
  size_t n = d.n;
  std::vector<std::vector<uint32_t>> m(n, std::vector<uint32_t>(n));
  for (size_t i = 0; i < n; i++) {
    auto cat = emit_cat(b, n, false, t);
    for (size_t j = 0; j < n; j++) b.add(LocKind::kCnot, t, d.at(i, j), cat[j]);
    for (size_t j = 0; j < n; j++) m[i][j] = b.add(LocKind::kMeasZ, t + 1, cat[j]);
  }
  std::vector<uint32_t> cols;
  for (size_t j = 0; j < n; j++) {
    std::vector<uint32_t> col;
    for (size_t i = 0; i < n; i++) col.push_back(m[i][j]);
    cols.push_back(parity(b, t + 1, col));
  }
  lookup(b, t + 1, t, cols, minority_table(n, [&](size_t j) { return one(d.at(0, j), 1); }), block);
}

// Steane EC: data interacts at steps T and T+1, one half each. Returns the
// next free data step.
uint32_t emit_steane(CircuitBuilder &b, const Grid &d, uint32_t T, int block, bool z_first) {
  if (z_first) {
    steane_z(b, d, T, block);
    steane_x(b, d, T + 1, block);
  } else {
    steane_x(b, d, T, block);
    steane_z(b, d, T + 1, block);
  }
  return T + 2;
}

// Knill EC: Bell pair ready at T, Bell measurement CNOT at T. Returns the
// output block; it is free from step T on. The dual variant exchanges the
// roles of X and Z throughout.
Grid emit_knill(CircuitBuilder &b, const Grid &d, uint32_t T, int block, bool dual) {
  size_t n = d.n;
  Grid a{n, std::vector<uint32_t>(n * n)}, out{n, std::vector<uint32_t>(n * n)};
  Grid &rowcat = dual ? out : a, &colcat = dual ? a : out;
  for (size_t i = 0; i < n; i++) {
    auto cat = emit_cat(b, n, false, T - 1);
    for (size_t j = 0; j < n; j++) rowcat.q[i * n + j] = cat[j];
  }
  for (size_t j = 0; j < n; j++) {
    auto cat = emit_cat(b, n, true, T - 1);
    for (size_t i = 0; i < n; i++) colcat.q[i * n + j] = cat[i];
  }
  for (size_t k = 0; k < n * n; k++) b.add(LocKind::kCnot, T - 1, rowcat.q[k], colcat.q[k]);

  b.set_flags(kFlagBell);
  for (size_t k = 0; k < n * n; k++) {
    if (dual)
      b.add(LocKind::kCnot, T, a.q[k], d.q[k]);
    else
      b.add(LocKind::kCnot, T, d.q[k], a.q[k]);
  }
  // mx: X-basis outcomes grouped by row; mz: Z-basis outcomes grouped by column.
  const Grid &xq = dual ? a : d, &zq = dual ? d : a;
  std::vector<std::vector<uint32_t>> mx(n), mz(n);
  auto meas_x = [&] {
    for (size_t i = 0; i < n; i++)
      for (size_t j = 0; j < n; j++) mx[i].push_back(b.add(LocKind::kMeasX, T + 1, xq.at(i, j)));
  };
  auto meas_z = [&] {
    for (size_t j = 0; j < n; j++)
      for (size_t i = 0; i < n; i++) mz[j].push_back(b.add(LocKind::kMeasZ, T + 1, zq.at(i, j)));
  };
  if (dual) {
    meas_z();
    meas_x();
  } else {
    meas_x();
    meas_z();
  }
  b.set_flags(0);

  // Logical X outcome from X-basis row parities, logical Z from Z-basis column
  // parities; each is a majority over n repetitions.
  std::vector<uint32_t> rows, cols;
  for (size_t i = 0; i < n; i++) rows.push_back(parity(b, T + 1, mx[i]));
  for (size_t j = 0; j < n; j++) cols.push_back(parity(b, T + 1, mz[j]));
  SparsePauli zl, xl;
  for (size_t i = 0; i < n; i++) zl.terms.push_back({out.at(i, 0), 2});
  for (size_t j = 0; j < n; j++) xl.terms.push_back({out.at(0, j), 1});
  auto maj_table = [&](const SparsePauli &p, Logical l, std::vector<Logical> &rec) {
    std::vector<SparsePauli> t(size_t{1} << n);
    rec.assign(t.size(), Logical::I);
    for (size_t idx = 0; idx < t.size(); idx++)
      if (2 * static_cast<size_t>(std::popcount(idx)) > n) {
        t[idx] = p;
        rec[idx] = l;
      }
    return t;
  };
  std::vector<Logical> rz, rx;
  auto tz = maj_table(zl, Logical::Z, rz);
  auto tx = maj_table(xl, Logical::X, rx);
  lookup(b, T + 1, T - 1, rows, tz, block, rz);
  lookup(b, T + 1, T - 1, cols, tx, block, rx);
  return out;
}

// Gauge EC. Column ancillas measure vertical XX gauge pairs (Z errors), row
// ancillas measure horizontal ZZ pairs (X errors). n = 3 measures all three
// pairs of each line once; n = 5 measures the four adjacent pairs in three
// rounds. Returns the next free data step.
uint32_t emit_gauge(CircuitBuilder &b, const Grid &d, uint32_t T, int block) {
  size_t n = d.n;
  size_t rounds = n == 3 ? 1 : 3;
  // pairs[p] = (u, v) lines; sched[p] = (first, second) data touched.
  std::vector<std::pair<size_t, size_t>> pairs;
  std::vector<std::pair<size_t, size_t>> order;
  if (n == 3) {
    pairs = {{0, 1}, {1, 2}, {2, 0}};
    order = {{0, 1}, {1, 2}, {2, 0}};  // ancilla p touches order[p].first at layer 0
  } else {
    for (size_t i = 0; i + 1 < n; i++) {
      pairs.push_back({i, i + 1});
      order.push_back({i, i + 1});
    }
  }
  size_t np = pairs.size();
  // bits[part][round][p][line]
  std::vector<std::vector<std::vector<std::vector<uint32_t>>>> bits(
      2, std::vector<std::vector<std::vector<uint32_t>>>(rounds, std::vector<std::vector<uint32_t>>(np, std::vector<uint32_t>(n))));
  uint32_t t = T;
  for (size_t r = 0; r < rounds; r++) {
    for (int part = 0; part < 2; part++, t += 2) {
      for (size_t line = 0; line < n; line++) {
        auto anc = b.new_qubits(np);
        auto data = [&](size_t k) { return part == 0 ? d.at(k, line) : d.at(line, k); };
        for (size_t p = 0; p < np; p++) b.add(part == 0 ? LocKind::kPrepPlus : LocKind::kPrep0, t - 1, anc[p]);
        for (int layer = 0; layer < 2; layer++)
          for (size_t p = 0; p < np; p++) {
            size_t k = layer == 0 ? order[p].first : order[p].second;
            if (part == 0) b.add(LocKind::kCnot, t + layer, anc[p], data(k));
            else b.add(LocKind::kCnot, t + layer, data(k), anc[p]);
          }
        for (size_t p = 0; p < np; p++)
          bits[part][r][p][line] = b.add(part == 0 ? LocKind::kMeasX : LocKind::kMeasZ, t + 2, anc[p]);
      }
    }
  }
  uint32_t end = t;
  for (int part = 0; part < 2; part++) {
    uint32_t exec = T + 2 * static_cast<uint32_t>(2 * (rounds - 1) + part) + 2;
    // Stabilizer bits per round: parity of each pair check over all lines.
    std::vector<uint32_t> stab;
    for (size_t r = 0; r < rounds; r++)
      for (size_t p = 0; p < np; p++) stab.push_back(parity(b, exec, bits[part][r][p]));
    auto fix = [&](size_t k) { return part == 0 ? one(d.at(k, 0), 2) : one(d.at(0, k), 1); };
    std::vector<SparsePauli> table(size_t{1} << stab.size());
    size_t mask = (size_t{1} << np) - 1;
    for (size_t idx = 0; idx < table.size(); idx++) {
      // Multi-round: trust the latest two consecutive rounds that agree;
      // without agreement apply nothing.
      size_t s = idx & mask;
      bool have = rounds == 1;
      for (size_t r = rounds - 1; r >= 1 && !have; r--) {
        size_t a = (idx >> (np * r)) & mask, c = (idx >> (np * (r - 1))) & mask;
        if (a == c) {
          s = a;
          have = true;
        }
      }
      if (!have) continue;
      std::vector<bool> flip(n, false);
      if (n == 3) {
        // Two violated pair checks locate the shared line; one or three
        // violations are attributed to a measurement fault.
        bool s01 = s & 1, s12 = s & 2, s20 = s & 4;
        if (s01 && s20 && !s12) flip[0] = true;
        if (s01 && s12 && !s20) flip[1] = true;
        if (s12 && s20 && !s01) flip[2] = true;
      } else {
        // Line parities relative to line 0, then the minority rule.
        std::vector<bool> e(n, false);
        for (size_t k = 0; k + 1 < n; k++) e[k + 1] = e[k] ^ ((s >> k) & 1);
        size_t ones = 0;
        for (bool v : e) ones += v;
        bool maj = 2 * ones > n;
        for (size_t k = 0; k < n; k++) flip[k] = e[k] != maj;
      }
      for (size_t k = 0; k < n; k++)
        if (flip[k]) {
          auto p = fix(k);
          table[idx].terms.insert(table[idx].terms.end(), p.terms.begin(), p.terms.end());
        }
    }
    lookup(b, exec, exec - 1, stab, table, block);
  }
  return end;
}

uint32_t ec_lead(EcStyle style, size_t n) {
  switch (style) {
    case EcStyle::kGauge:
      return 1;
    case EcStyle::kSteane:
      return cat_lead(n);
    case EcStyle::kKnill:
      return cat_lead(n) + 1;
  }
  return 0;
}

// Emits one EC; `d` is replaced by the output block. Returns the first step
// at which the output block is free. `dual` selects the X/Z-exchanged layout.
uint32_t emit_ec(CircuitBuilder &b, EcStyle style, Grid &d, uint32_t T, int block, bool dual) {
  switch (style) {
    case EcStyle::kGauge:
      return emit_gauge(b, d, T, block);
    case EcStyle::kSteane:
      return emit_steane(b, d, T, block, !dual);
    case EcStyle::kKnill:
      d = emit_knill(b, d, T, block, dual);
      return T;
  }
  return T;
}

}  // namespace

const char *ec_style_name(EcStyle s) {
  switch (s) {
    case EcStyle::kGauge:
      return "gauge";
    case EcStyle::kSteane:
      return "steane";
    case EcStyle::kKnill:
      return "knill";
  }
  return "?";
}

EcStyle parse_ec_style(const std::string &s) {
  if (s == "gauge") return EcStyle::kGauge;
  if (s == "steane") return EcStyle::kSteane;
  if (s == "knill") return EcStyle::kKnill;
  throw std::invalid_argument("unknown EC style '" + s + "'");
}

Circuit build_ec(const SubsystemCode &code, EcStyle style) {
  size_t n = side(code);
  CircuitBuilder b;
  Grid d = new_grid(b, n);
  for (uint32_t q : d.q) b.mark_input(q);
  b.add_block({"in", d.q});
  emit_ec(b, style, d, ec_lead(style, n), 0, false);
  b.add_block({"out", d.q});
  return b.finish();
}

Circuit build_gauge_ec(const SubsystemCode &code) { return build_ec(code, EcStyle::kGauge); }
Circuit build_steane_ec(const SubsystemCode &code) { return build_ec(code, EcStyle::kSteane); }
Circuit build_knill_ec(const SubsystemCode &code) { return build_ec(code, EcStyle::kKnill); }

Circuit build_decoder(const SubsystemCode &code) {
  size_t n = side(code);
  CircuitBuilder b;
  Grid d = new_grid(b, n);
  for (uint32_t q : d.q) b.mark_input(q);
  b.add_block({"in", d.q});
  // Fold each column onto the last row, then the last row onto its last qubit.
  for (size_t i = 0; i + 1 < n; i++)
    for (size_t j = 0; j < n; j++) {
      b.add(LocKind::kCnot, i, d.at(i, j), d.at(n - 1, j));
      b.add(LocKind::kMeasX, i + 1, d.at(i, j));
    }
  uint32_t t = n - 1;
  for (size_t j = 0; j + 1 < n; j++, t++) {
    b.add(LocKind::kCnot, t, d.at(n - 1, n - 1), d.at(n - 1, j));
    b.add(LocKind::kMeasZ, t + 1, d.at(n - 1, j));
  }
  b.add_block({"out", {d.at(n - 1, n - 1)}});
  return b.finish(false);
}

Circuit build_logical_hadamard(const SubsystemCode &code) {
  size_t n = side(code);
  CircuitBuilder b;
  Grid d = new_grid(b, n);
  for (uint32_t q : d.q) b.mark_input(q);
  b.add_block({"in", d.q});
  std::vector<uint32_t> out(n * n);
  for (size_t i = 0; i < n; i++)
    for (size_t j = 0; j < n; j++) {
      b.add(LocKind::kHadamard, 0, d.at(i, j));
      out[j * n + i] = d.at(i, j);
    }
  b.add_block({"out", out});
  return b.finish(false);
}

std::vector<uint32_t> ExRec::placeable_ids() const {
  std::vector<uint32_t> out;
  for (const auto &l : circuit.locations)
    if (l.placeable) out.push_back(l.id);
  return out;
}

ExRec build_cnot_exrec(const SubsystemCode &code, EcStyle style, bool contracted, bool ideal_bell,
                       EcLayout layout) {
  size_t n = side(code);
  if (ideal_bell && style != EcStyle::kKnill)
    throw std::invalid_argument("ideal Bell measurement requires the Knill EC");
  CircuitBuilder b;
  std::array<Grid, 2> d = {new_grid(b, n), new_grid(b, n)};
  for (const auto &g : d)
    for (uint32_t q : g.q) b.mark_input(q);
  b.add_block({"in0", d[0].q});
  b.add_block({"in1", d[1].q});

  auto dual = [&](int k) { return layout == EcLayout::kSelfDual && k == 1; };
  uint32_t T0 = ec_lead(style, n);
  uint32_t free_at = 0;
  for (int k = 0; k < 2; k++) {
    b.set_part(k == 0 ? kLeading0 : kLeading1);
    free_at = emit_ec(b, style, d[k], T0, k, dual(k));
  }
  ExRec ex;
  ex.rec_input = {d[0].q, d[1].q};
  ex.checkpoint = free_at - 1;
  b.add_block({"rec0", d[0].q});
  b.add_block({"rec1", d[1].q});

  b.set_part(kGa);
  for (size_t k = 0; k < n * n; k++) b.add(LocKind::kCnot, free_at, d[0].q[k], d[1].q[k]);

  for (int k = 0; k < 2; k++) {
    b.set_part(k == 0 ? kTrailing0 : kTrailing1);
    emit_ec(b, style, d[k], free_at + 1, k, dual(k));
  }
  ex.output = {d[0].q, d[1].q};
  b.add_block({"out0", d[0].q});
  b.add_block({"out1", d[1].q});

  ex.circuit = b.finish();
  ex.code = code;
  ex.style = style;
  ex.contracted = contracted;
  ex.ideal_bell = ideal_bell;
  ex.layout = layout;
  for (auto &l : ex.circuit.locations) {
    if (contracted && (is_prep(l.kind) || is_meas(l.kind))) l.placeable = false;
    if (ideal_bell && (l.flags & kFlagBell) && (l.part == kLeading0 || l.part == kLeading1)) l.placeable = false;
    if (l.part == kLeading0 || l.part == kLeading1) ex.leading_ec_ids.push_back(l.id);
    else if (l.part == kGa) ex.ga_ids.push_back(l.id);
    else ex.trailing_ec_ids.push_back(l.id);
  }
  return ex;
}

size_t cat_locations_per_ec(const ExRec &exrec) {
  size_t c = 0;
  for (const auto &l : exrec.circuit.locations)
    if (l.placeable && (l.flags & kFlagCat)) c++;
  return c / 4;
}

}  // namespace bsft
