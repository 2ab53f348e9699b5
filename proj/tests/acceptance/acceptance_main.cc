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


// Acceptance suite. Prints one PASS/FAIL line per check and a verdict line
// per criterion; exits nonzero if any hard criterion fails.
//
// BSFT_ACCEPT_BS5_N sets the number of BS-5 triples sampled (default 10^6).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "bsft/malignancy.h"
#include "bsft/threshold.h"
#include "oracle/statevector.h"

using namespace bsft;

namespace {

class Criterion {
 public:
  explicit Criterion(std::string name) : name_(std::move(name)) { std::printf("== %s\n", name_.c_str()); }

  bool check(bool ok, const char *fmt, ...) __attribute__((format(printf, 3, 4))) {
    va_list ap;
    va_start(ap, fmt);
    std::printf("  %s  ", ok ? "PASS" : "FAIL");
    std::vprintf(fmt, ap);
    std::printf("\n");
    va_end(ap);
    failed_ += !ok;
    return ok;
  }

  // Reported but not gating.
  void aspire(bool ok, const char *what) { std::printf("  %s  %s (aspirational)\n", ok ? "PASS" : "MISS", what); }

  bool finish() const {
    std::printf("%s  %s\n\n", failed_ ? "FAIL" : "PASS", name_.c_str());
    return failed_ == 0;
  }

 private:
  std::string name_;
  int failed_ = 0;
};

bool rel_within(double got, double want, double tol) { return std::abs(got - want) <= tol * std::abs(want); }

uint64_t env_u64(const char *name, uint64_t dflt) {
  const char *v = std::getenv(name);
  return v && *v ? std::strtoull(v, nullptr, 10) : dflt;
}

unsigned workers() { return static_cast<unsigned>(std::max<uint64_t>(1, env_u64("BSFT_WORKERS", 1))); }

bool formula_suite() {
  Criterion c("criterion 1: threshold formulas");
  double b297 = binomial(297, 3);
  double a_steane = solve_a_prime(12913, b297, 1);
  c.check(rel_within(a_steane, 13241, 1e-3), "A' BS-3 Steane = %.2f vs 13241 (0.1%%)", a_steane);
  double a_knill = solve_a_prime(11184, b297, 1);
  c.check(rel_within(a_knill, 11559, 1e-3), "A' BS-3 Knill = %.2f vs 11559 (0.1%%)", a_knill);

  double naive = naive_threshold(297, 1);
  c.check(naive >= 2.2e-5 && naive <= 2.3e-5, "naive threshold (297, t=1) = %.4e in [2.2, 2.3]e-5", naive);

  TwoStage st = two_stage_threshold(a_steane, solve_a_prime(4939, binomial(153, 3), 1));
  c.check(rel_within(st.p_thr, 1.22e-4, 0.01), "two-stage BS-3 Steane = %.4e vs 1.22e-4 (1%%)", st.p_thr);
  c.check(rel_within(st.level1_condition, 1.97e-4, 0.01), "level-1 condition BS-3 Steane = %.4e vs 1.97e-4 (1%%)",
          st.level1_condition);
  std::printf("        summary-table figure for this row is 1.21e-4; computed value differs by %.1f%%\n",
              100 * (st.p_thr / 1.21e-4 - 1));
  TwoStage kn = two_stage_threshold(11559, solve_a_prime(5328, binomial(153, 3), 1));
  c.check(rel_within(kn.p_thr, 1.26e-4, 0.01), "two-stage BS-3 Knill = %.4e vs 1.26e-4 (1%%)", kn.p_thr);

  Preset bs5 = threshold_preset("bs5-steane");
  double cfp = conditioned_fixed_point(bs5.model);
  c.check(rel_within(cfp, 1.94e-4, 0.01), "conditioned fixed point BS-5 Steane = %.4e vs 1.94e-4 (1%%)", cfp);

  c.check(kPlusIThreshold == 0.5 && distill_plus_i(0.5, 3).exact == 0.5, "|+i> distillation threshold = 1/2");
  double crude = toffoli_threshold(ToffoliVariant::kCrude);
  c.check(crude == 1.0 / 512, "crude Toffoli distillation threshold = %.6g (1/512)", crude);
  double improved = toffoli_threshold(ToffoliVariant::kImproved);
  c.check(improved >= 0.0145, "improved Toffoli distillation threshold = %.4f%% >= 1.45%%", 100 * improved);
  double prep3 = toffoli_recursive_prep_threshold(9, 3, 1);
  c.check(prep3 >= 0.0028, "recursive Toffoli prep (9,3,1) = %.4f%% >= 0.28%%", 100 * prep3);
  double prep5 = toffoli_recursive_prep_threshold(25, 5, 2);
  c.check(prep5 >= 0.0024, "recursive Toffoli prep (25,5,2) = %.4f%% >= 0.24%%", 100 * prep5);

  struct Anc {
    const char *preset;
    double p, D;
    int s;
    double want;
    const char *label;
  };
  const Anc cases[] = {
      {"bs3-knill", 1.26e-4, 16, 1, 0.0215, "BS-3 Knill p=1.26e-4 single-qubit"},
      {"bs3-knill", 1.26e-4, 16, 4, 0.0218, "BS-3 Knill p=1.26e-4 three-qubit"},
      {"bs3-knill", 1.16e-4, 16, 1, 0.0125, "BS-3 Knill p=1.16e-4 single-qubit"},
      {"bs3-knill", 1.16e-4, 16, 4, 0.0129, "BS-3 Knill p=1.16e-4 three-qubit"},
      {"bs5-steane", 1.94e-4, 48, 1, 0.0849, "BS-5 Steane p=1.94e-4 single-qubit"},
      {"bs5-steane", 1.94e-4, 48, 4, 0.0855, "BS-5 Steane p=1.94e-4 three-qubit"},
  };
  for (const Anc &a : cases) {
    try {
      AncillaBound b = ancilla_accuracy_bound(threshold_preset(a.preset).model, a.p, a.D, 100, a.s);
      c.check(rel_within(b.bound, a.want, 0.02), "ancilla bound %s = %.3f%% vs %.2f%% (2%%)", a.label,
              100 * b.bound, 100 * a.want);
    } catch (const ThresholdError &e) {
      c.check(false, "ancilla bound %s: %s", a.label, e.what());
    }
  }
  return c.finish();
}

bool structural_suite() {
  Criterion c("criterion 2: location counts");
  auto c3 = bacon_shor(3);
  for (auto s : {EcStyle::kGauge, EcStyle::kSteane, EcStyle::kKnill}) {
    size_t ec = count_locations(build_ec(c3, s));
    c.check(ec == 72, "BS-3 %s EC: %zu locations (72)", ec_style_name(s), ec);
    size_t full = build_cnot_exrec(c3, s, false, false).placeable_ids().size();
    c.check(full == 297, "BS-3 %s CNOT exRec: %zu (297)", ec_style_name(s), full);
    size_t con = build_cnot_exrec(c3, s, true, false).placeable_ids().size();
    c.check(con == 153, "BS-3 %s contracted exRec: %zu (153)", ec_style_name(s), con);
  }
  size_t ib = build_cnot_exrec(c3, EcStyle::kKnill, false, true).placeable_ids().size();
  c.check(ib == 243, "BS-3 Knill ideal-Bell exRec: %zu (243)", ib);
  size_t ibc = build_cnot_exrec(c3, EcStyle::kKnill, true, true).placeable_ids().size();
  c.check(ibc == 135, "BS-3 Knill ideal-Bell contracted exRec: %zu (135)", ibc);
  size_t d3 = count_locations(build_decoder(c3)), d5 = count_locations(build_decoder(bacon_shor(5)));
  c.check(d3 == 16, "BS-3 decoder: %zu (16)", d3);
  c.check(d5 == 48, "BS-5 decoder: %zu (48)", d5);
  return c.finish();
}

using Matrix = std::array<std::array<uint64_t, 6>, 6>;

void print_cells(const AlphaMatrix &a, const Matrix &want) {
  for (int i = 0; i < 6; i++) {
    std::printf("        ");
    for (int j = 0; j <= i; j++) {
      long long d = static_cast<long long>(a.alpha[i][j]) - static_cast<long long>(want[i][j]);
      std::printf(" %5llu(%+lld)", static_cast<unsigned long long>(a.alpha[i][j]), d);
    }
    std::printf("\n");
  }
}

bool same_cells(const AlphaMatrix &a, const Matrix &want) {
  for (int i = 0; i < 6; i++)
    for (int j = 0; j <= i; j++)
      if (a.alpha[i][j] != want[i][j]) return false;
  return true;
}

bool counting_suite(PairCount &steane) {
  Criterion c("criterion 3: exact BS-3 pair counts");
  auto c3 = bacon_shor(3);
  CountOptions o;
  o.workers = workers();
  auto count = [&](EcStyle s, bool contracted) {
    ExRec ex = build_cnot_exrec(c3, s, contracted, false);
    CompiledExRec eng(ex);
    return count_pairs_exact(eng, o).alpha;
  };
  {
    ExRec ex = build_cnot_exrec(c3, EcStyle::kSteane, false, false);
    CompiledExRec eng(ex);
    steane = count_pairs_exact(eng, o);
  }
  const AlphaMatrix &sf = steane.alpha;
  AlphaMatrix sc = count(EcStyle::kSteane, true);
  AlphaMatrix kf = count(EcStyle::kKnill, false);
  AlphaMatrix kc = count(EcStyle::kKnill, true);
  auto total = [&](const char *what, uint64_t got, double want) {
    c.check(rel_within(static_cast<double>(got), want, 0.05), "%s A = %llu vs %.0f (%+.2f%%, 5%%)", what,
            static_cast<unsigned long long>(got), want, 100 * (got / want - 1));
  };
  total("Steane full", sf.A, 12913);
  total("Steane contracted", sc.A, 4939);
  total("Knill full", kf.A, 11184);
  total("Knill contracted", kc.A, 5328);

  const Matrix steane_ref = {{{52},
                              {174, 138},
                              {174, 0, 138},
                              {234, 0, 378, 216},
                              {234, 378, 0, 0, 216},
                              {1154, 1281, 1281, 1566, 1566, 3733}}};
  const Matrix knill_ref = {{{60},
                             {60, 30},
                             {60, 0, 30},
                             {180, 0, 180, 270},
                             {180, 180, 0, 0, 270},
                             {1104, 552, 552, 1656, 1656, 4164}}};
  std::printf("        Steane alpha, computed(delta):\n");
  print_cells(sf, steane_ref);
  std::printf("        Knill alpha, computed(delta):\n");
  print_cells(kf, knill_ref);
  c.aspire(same_cells(sf, steane_ref) && sf.A == 12913 && sc.A == 4939, "Steane alpha matrix exact");
  c.aspire(same_cells(kf, knill_ref) && kf.A == 11184 && kc.A == 5328, "Knill alpha matrix exact");
  return c.finish();
}

bool mc_suite(const PairCount &steane) {
  Criterion c("criterion 4: Monte-Carlo consistency");
  McOptions o;
  o.workers = workers();
  {
    ExRec ex = build_cnot_exrec(bacon_shor(3), EcStyle::kSteane, false, false);
    CompiledExRec eng(ex);
    McEstimate e = count_sets_mc(eng, 2, 100000, 20260101, o);
    double exact = static_cast<double>(steane.alpha.A) / binomial(297, 2);
    double z = e.sigma > 0 ? (e.f_hat - exact) / e.sigma : 0;
    c.check(std::abs(z) <= 3, "BS-3 Steane pairs N=1e5: f=%.5f exact=%.5f sigma=%.2e z=%+.2f (3 sigma)", e.f_hat,
            exact, e.sigma, z);
  }
  {
    uint64_t n = env_u64("BSFT_ACCEPT_BS5_N", 1000000);
    ExRec ex = build_cnot_exrec(bacon_shor(5), EcStyle::kSteane, false, false);
    CompiledExRec eng(ex);
    McEstimate e = count_sets_mc(eng, 3, n, 20260102, o);
    double ref = 16625488.0 / binomial(1185, 3);
    double z = e.sigma > 0 ? (e.f_hat - ref) / e.sigma : 0;
    c.check(std::abs(z) <= 3, "BS-5 Steane triples N=%llu: f=%.5f ref=%.5f sigma=%.2e z=%+.2f (3 sigma)",
            static_cast<unsigned long long>(n), e.f_hat, ref, e.sigma, z);
  }
  return c.finish();
}

// Splits every fault into its X-type and Z-type parts.
void split_faults(const Circuit &circ, const FaultAssignment &f, FaultAssignment &fx, FaultAssignment &fz) {
  for (const Fault &x : f.entries()) {
    LocKind k = circ.locations[x.location].kind;
    uint8_t dx = 0, dz = 0;
    if (k == LocKind::kCnot) {
      dx = x.pauli & 0x5;
      dz = x.pauli & 0xA;
    } else if (k == LocKind::kPrep0 || k == LocKind::kMeasZ) {
      dx = x.pauli;
    } else if (k == LocKind::kPrepPlus || k == LocKind::kMeasX) {
      dz = x.pauli;
    } else {
      dx = x.pauli & 1;
      dz = x.pauli & 2;
    }
    if (dx) fx.set(x.location, dx);
    if (dz) fz.set(x.location, dz);
  }
}

bool property_suite(const PairCount &steane) {
  Criterion c("criterion 5: properties");
  auto c3 = bacon_shor(3), c5 = bacon_shor(5);
  ExRec sx = build_cnot_exrec(c3, EcStyle::kSteane, false, false);

  size_t singles = 0, bad_singles = 0;
  for (uint32_t loc : sx.placeable_ids())
    for (uint8_t d : descriptors(sx.circuit.locations[loc].kind)) {
      singles++;
      bad_singles += exrec_is_incorrect(sx, FaultAssignment{{loc, d}}).any();
    }
  c.check(bad_singles == 0, "singleton benignity, BS-3 Steane: %zu single faults, %zu incorrect", singles,
          bad_singles);

  size_t variants = 0, bad_variants = 0;
  for (auto *code : {&c3, &c5})
    for (auto s : {EcStyle::kGauge, EcStyle::kSteane, EcStyle::kKnill})
      for (bool con : {false, true})
        for (auto lay : {EcLayout::kSelfDual, EcLayout::kUniform}) {
          variants++;
          bad_variants += exrec_is_incorrect(build_cnot_exrec(*code, s, con, false, lay), {}).any();
          if (s == EcStyle::kKnill) {
            variants++;
            bad_variants += exrec_is_incorrect(build_cnot_exrec(*code, s, con, true, lay), {}).any();
          }
        }
  c.check(bad_variants == 0, "zero-fault correctness: %zu exRec variants, %zu incorrect", variants, bad_variants);

  std::mt19937_64 rng(5);
  auto random_error = [&rng](size_t n) {
    PauliOp e(n);
    for (size_t q = 0; q < n; q++) {
      uint64_t r = rng();
      e.set_x(q, r & 1);
      e.set_z(q, r & 2);
    }
    return e;
  };
  size_t gauge_bad = 0, gauge_checks = 0;
  for (auto *code : {&c3, &c5})
    for (int k = 0; k < 200; k++) {
      PauliOp e = random_error(code->n);
      for (const auto &g : code->gauges) {
        gauge_checks++;
        gauge_bad += ideal_decode(*code, e * g) != ideal_decode(*code, e);
      }
    }
  c.check(gauge_bad == 0, "gauge invariance of ideal decoding: %zu checks, %zu mismatches", gauge_checks, gauge_bad);

  bool reduced_ok = true;
  for (size_t n : {3, 5}) {
    auto shor = shor_code(n);
    auto bs = bacon_shor(n);
    std::vector<PauliOp> reduced;
    for (size_t j = 0; j + 1 < n; j++) reduced.push_back(shor.stabilizers[j]);
    for (size_t j = 0; j + 1 < n; j++) {
      PauliOp prod(n * n);
      for (size_t i = 0; i < n; i++) prod = prod * shor.stabilizers[(n - 1) + i * (n - 1) + j];
      reduced.push_back(prod);
    }
    reduced_ok = reduced_ok && reduced == bs.stabilizers;
  }
  c.check(reduced_ok, "Shor stabilizers reduce to Bacon-Shor stabilizers (n = 3, 5)");

  size_t lin_bad = 0;
  for (auto *code : {&c3, &c5})
    for (int k = 0; k < 500; k++) {
      PauliOp p = random_error(code->n), q = random_error(code->n);
      lin_bad += syndrome(*code, p * q) != (syndrome(*code, p) ^ syndrome(*code, q));
    }
  c.check(lin_bad == 0, "syndrome linearity: 1000 pairs, %zu mismatches", lin_bad);

  size_t dec_checks = 0, dec_bad = 0;
  for (auto s : {EcStyle::kGauge, EcStyle::kSteane, EcStyle::kKnill}) {
    ExRec ex = build_cnot_exrec(c3, s, false, false);
    CompiledExRec eng(ex);
    const auto &P = eng.placeable();
    for (int trial = 0; trial < 300; trial++) {
      FaultAssignment f, fx, fz;
      for (int k = 0; k < 4; k++) {
        uint32_t loc = P[rng() % P.size()];
        const auto &ds = eng.descriptors_of(loc);
        f.set(loc, ds[rng() % ds.size()]);
      }
      split_faults(ex.circuit, f, fx, fz);
      FrameState all = propagate(ex.circuit, f, PauliOp(ex.circuit.num_qubits));
      FrameState xs = propagate(ex.circuit, fx, PauliOp(ex.circuit.num_qubits));
      FrameState zs = propagate(ex.circuit, fz, PauliOp(ex.circuit.num_qubits));
      if (!all.accepted || !xs.accepted || !zs.accepted) continue;
      dec_checks++;
      Incorrectness ia = exrec_is_incorrect(ex, f);
      dec_bad += all.x != xs.x || all.z != zs.z || ia.x_bad != exrec_is_incorrect(ex, fx).x_bad ||
                 ia.z_bad != exrec_is_incorrect(ex, fz).z_bad;
    }
  }
  c.check(dec_checks > 0 && dec_bad == 0, "X/Z decoupling: %zu split simulations, %zu mismatches", dec_checks,
          dec_bad);

  {
    CompiledExRec eng(sx);
    double p = 1e-3;
    DirectRate r = direct_failure_rate(eng, p, 1000000, 77, workers());
    double bound = 12913 * p * p + binomial(297, 3) * p * p * p;
    c.check(r.ci_low <= bound, "direct failure rate p=1e-3: %.3e [%.3e, %.3e] <= A p^2 + B p^3 = %.3e", r.rate,
            r.ci_low, r.ci_high, bound);
  }

  size_t replayed = 0, agreed = 0;
  std::vector<size_t> idx(steane.witnesses.size());
  for (size_t i = 0; i < idx.size(); i++) idx[i] = i;
  std::shuffle(idx.begin(), idx.end(), rng);
  for (size_t k = 0; k < std::min<size_t>(12, idx.size()); k++) {
    const Witness &w = steane.witnesses[idx[k]];
    auto v = oracle::dense_exrec_verdict(sx, w.faults, 1000 + k);
    replayed++;
    agreed += v.accepted && (!w.x || v.x_bad) && (!w.z || v.z_bad) && (v.x_bad || v.z_bad);
  }
  c.check(replayed >= 10 && agreed == replayed, "dense state-vector replay of malignant witnesses: %zu/%zu incorrect",
          agreed, replayed);
  return c.finish();
}

}  // namespace

int main() {
  int failed = 0;
  failed += !formula_suite();
  failed += !structural_suite();
  PairCount steane;
  failed += !counting_suite(steane);
  failed += !mc_suite(steane);
  failed += !property_suite(steane);
  std::printf("%d of 5 criteria failed\n", failed);
  return failed ? 1 : 0;
}
