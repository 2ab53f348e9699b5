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

#include "bsft/malignancy.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <thread>
#include <unordered_set>

namespace bsft {

namespace {

constexpr size_t kMaxDerived = 4096;

// Runs fn(worker, begin, end) over [0, n) split into contiguous chunks.
template <typename F>
void parallel_ranges(unsigned workers, uint64_t begin, uint64_t end, F &&fn) {
  workers = std::max(1u, workers);
  uint64_t n = end > begin ? end - begin : 0;
  if (workers == 1 || n < workers) {
    fn(0u, begin, end);
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; w++) {
    uint64_t lo = begin + n * w / workers, hi = begin + n * (w + 1) / workers;
    pool.emplace_back([&, w, lo, hi] { fn(w, lo, hi); });
  }
  for (auto &t : pool) t.join();
}

}  // namespace

uint64_t SplitMix64::operator()() {
  uint64_t z = (s_ += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

SplitMix64 SplitMix64::keyed(uint64_t seed, uint64_t index) {
  SplitMix64 a(seed);
  uint64_t k = a() ^ (index * 0xd1b54a32d192ed03ull);
  SplitMix64 b(k);
  return SplitMix64(b());
}

uint64_t AlphaMatrix::restricted_total(std::initializer_list<int> types) const {
  uint64_t s = 0;
  for (int i : types)
    for (int j : types)
      if (i >= j) s += alpha[i - 1][j - 1];
  return s;
}

void merge_into(AlphaMatrix &a, const AlphaMatrix &b) {
  for (int i = 0; i < 6; i++)
    for (int j = 0; j < 6; j++) {
      a.alpha[i][j] += b.alpha[i][j];
      a.alpha_x[i][j] += b.alpha_x[i][j];
      a.alpha_z[i][j] += b.alpha_z[i][j];
    }
  a.A += b.A;
  a.A_x += b.A_x;
  a.A_z += b.A_z;
  a.pairs_checked += b.pairs_checked;
  a.assignments += b.assignments;
}

CompiledExRec::CompiledExRec(const ExRec &exrec, CnotModel model) : exrec_(&exrec), model_(model) {
  const Circuit &c = exrec.circuit;
  size_t nq = exrec.code.n;
  if (nq > 64) throw std::invalid_argument("compiled evaluator needs blocks of at most 64 qubits");
  num_meas_bits_ = c.num_meas_bits;
  meas_words_ = (num_meas_bits_ + 63) / 64;
  words_ = meas_words_ + 8;

  auto extract = [&](const FrameState &st, uint64_t *out) {
    std::fill(out, out + words_, 0);
    for (uint32_t b = 0; b < num_meas_bits_; b++)
      if (st.bits.get(b)) out[b >> 6] |= uint64_t{1} << (b & 63);
    for (int k = 0; k < 2; k++) {
      uint64_t *w = out + meas_words_ + 4 * k;
      for (size_t q = 0; q < nq; q++) {
        uint32_t o = exrec.output[k][q];
        if (st.x.get(o)) w[0] |= uint64_t{1} << q;
        if (st.z.get(o)) w[1] |= uint64_t{1} << q;
        if (st.has_snapshot) {
          uint32_t r = exrec.rec_input[k][q];
          if (st.snap_x.get(r)) w[2] |= uint64_t{1} << q;
          if (st.snap_z.get(r)) w[3] |= uint64_t{1} << q;
        }
      }
    }
  };

  PropagateOptions raw;
  raw.run_directives = false;
  raw.checkpoint = exrec.checkpoint;
  PauliOp zero(c.num_qubits);

  effects_.assign(c.locations.size() * 16 * words_, 0);
  descs_.resize(c.locations.size());
  std::vector<uint64_t> tmp(words_);
  for (const auto &l : c.locations) {
    descs_[l.id] = descriptors(l.kind, model_);
    if (l.placeable) placeable_.push_back(l.id);
    // Basis effects, combined linearly below.
    std::vector<uint8_t> basis = l.kind == LocKind::kCnot ? std::vector<uint8_t>{1, 2, 4, 8}
                                 : (l.kind == LocKind::kMemory || l.kind == LocKind::kHadamard)
                                     ? std::vector<uint8_t>{1, 2}
                                     : std::vector<uint8_t>{1};
    for (uint8_t bv : basis) {
      FaultAssignment f{{l.id, bv}};
      extract(propagate(c, f, zero, raw), tmp.data());
      std::copy(tmp.begin(), tmp.end(), effects_.begin() + (static_cast<size_t>(l.id) * 16 + bv) * words_);
    }
    for (uint8_t d = 1; d < 16; d++) {
      if (std::popcount(d) < 2) continue;
      uint64_t *dst = &effects_[(static_cast<size_t>(l.id) * 16 + d) * words_];
      for (uint8_t bv = 1; bv < 16; bv <<= 1)
        if (d & bv) {
          const uint64_t *src = &effects_[(static_cast<size_t>(l.id) * 16 + bv) * words_];
          for (size_t w = 0; w < words_; w++) dst[w] ^= src[w];
        }
    }
  }

  std::vector<uint32_t> meas_step(num_meas_bits_);
  for (const auto &l : c.locations)
    if (is_meas(l.kind)) meas_step[l.bit] = l.step;

  num_derived_ = c.num_bits - c.num_meas_bits;
  if (num_derived_ > kMaxDerived) throw std::invalid_argument("too many derived bits");
  for (const auto &d : c.directives) {
    Op op;
    op.kind = d.kind;
    switch (d.kind) {
      case DirectiveKind::kParity: {
        op.out = d.out - num_meas_bits_;
        std::vector<uint64_t> mask(meas_words_, 0);
        for (uint32_t b : d.in) {
          if (b < num_meas_bits_) mask[b >> 6] ^= uint64_t{1} << (b & 63);
          else op.derived_in.push_back(b - num_meas_bits_);
        }
        for (uint32_t w = 0; w < meas_words_; w++)
          if (mask[w]) op.meas_mask.push_back({w, mask[w]});
        break;
      }
      case DirectiveKind::kMajority:
        op.out = d.out - num_meas_bits_;
        op.bits_in = d.in;
        break;
      case DirectiveKind::kPostselect:
        op.bits_in = d.in;
        break;
      case DirectiveKind::kLookup: {
        op.bits_in = d.in;
        PropagateOptions co = raw;
        co.start_after = d.apply_at;
        for (const auto &entry : d.table) {
          if (entry.empty()) {
            op.table.push_back(-1);
            continue;
          }
          PauliOp frame(c.num_qubits);
          for (const auto &[q, letter] : entry.terms) {
            if (letter & 1) frame.set_x(q, !frame.x(q));
            if (letter & 2) frame.set_z(q, !frame.z(q));
          }
          FrameState st = propagate(c, {}, frame, co);
          for (uint32_t b = 0; b < num_meas_bits_; b++)
            if (st.bits.get(b) && meas_step[b] <= d.step)
              throw std::logic_error("correction reaches a measurement that was already read");
          extract(st, tmp.data());
          op.table.push_back(static_cast<int32_t>(corrections_.size() / words_));
          corrections_.insert(corrections_.end(), tmp.begin(), tmp.end());
        }
        break;
      }
    }
    ops_.push_back(std::move(op));
  }

  size_t n = exrec.code.geometry ? exrec.code.geometry->rows : 0;
  if (!n || exrec.code.rule != DecodeRule::kGridMajority)
    throw std::invalid_argument("compiled evaluator supports Bacon-Shor blocks only");
  col_masks_.assign(n, 0);
  row_masks_.assign(n, 0);
  for (size_t i = 0; i < n; i++)
    for (size_t j = 0; j < n; j++) {
      col_masks_[j] |= uint64_t{1} << (i * n + j);
      row_masks_[i] |= uint64_t{1} << (i * n + j);
    }
}

const std::vector<uint8_t> &CompiledExRec::descriptors_of(uint32_t loc) const { return descs_[loc]; }

bool CompiledExRec::read_bit(const uint64_t *acc, const std::vector<uint8_t> &derived, uint32_t b) const {
  if (b < num_meas_bits_) return (acc[b >> 6] >> (b & 63)) & 1;
  return derived[b - num_meas_bits_];
}

Logical CompiledExRec::decode_block(uint64_t x, uint64_t z) const {
  size_t n = col_masks_.size(), cols = 0, rows = 0;
  for (size_t k = 0; k < n; k++) {
    cols += std::popcount(x & col_masks_[k]) & 1;
    rows += std::popcount(z & row_masks_[k]) & 1;
  }
  return make_logical(2 * cols > n, 2 * rows > n);
}

Incorrectness CompiledExRec::evaluate_raw(uint64_t *acc, bool *accepted) const {
  if (accepted) *accepted = true;
  thread_local std::vector<uint8_t> derived;
  derived.assign(num_derived_, 0);
  for (const Op &op : ops_) {
    switch (op.kind) {
      case DirectiveKind::kParity: {
        uint64_t v = 0;
        for (const auto &[w, m] : op.meas_mask) v ^= acc[w] & m;
        bool bit = std::popcount(v) & 1;
        for (uint32_t d : op.derived_in) bit ^= derived[d];
        derived[op.out] = bit;
        break;
      }
      case DirectiveKind::kMajority: {
        size_t ones = 0;
        for (uint32_t b : op.bits_in) ones += read_bit(acc, derived, b);
        derived[op.out] = 2 * ones > op.bits_in.size();
        break;
      }
      case DirectiveKind::kPostselect:
        if (read_bit(acc, derived, op.bits_in[0])) {
          if (accepted) *accepted = false;
          return {};
        }
        break;
      case DirectiveKind::kLookup: {
        size_t idx = 0;
        for (size_t k = 0; k < op.bits_in.size(); k++) idx |= size_t{read_bit(acc, derived, op.bits_in[k])} << k;
        int32_t e = op.table[idx];
        if (e >= 0) {
          const uint64_t *src = &corrections_[static_cast<size_t>(e) * words_];
          for (size_t w = 0; w < words_; w++) acc[w] ^= src[w];
        }
        break;
      }
    }
  }
  const uint64_t *f = acc + meas_words_;
  ExRecDecoding d;
  for (int k = 0; k < 2; k++) {
    d.out[k] = decode_block(f[4 * k], f[4 * k + 1]);
    d.in[k] = decode_block(f[4 * k + 2], f[4 * k + 3]);
  }
  return compare_cnot(d);
}

Incorrectness CompiledExRec::evaluate(const std::vector<Fault> &faults) const {
  std::vector<uint64_t> acc(words_, 0);
  for (const auto &f : faults) {
    const uint64_t *e = effect(f.location, f.pauli);
    for (size_t w = 0; w < words_; w++) acc[w] ^= e[w];
  }
  return evaluate_raw(acc.data());
}

Incorrectness CompiledExRec::is_malignant(const std::vector<uint32_t> &locs, Witness *witness, uint64_t budget,
                                          uint64_t seed, uint64_t *evaluated) const {
  Incorrectness found;
  size_t k = locs.size();
  if (k == 0) return found;
  std::vector<const std::vector<uint8_t> *> ds(k);
  double total = 1;
  for (size_t i = 0; i < k; i++) {
    ds[i] = &descs_[locs[i]];
    total *= static_cast<double>(ds[i]->size());
  }
  std::vector<size_t> pick(k, 0);
  std::vector<uint64_t> acc(words_);
  uint64_t count = 0;
  auto try_current = [&]() {
    std::fill(acc.begin(), acc.end(), 0);
    for (size_t i = 0; i < k; i++) {
      const uint64_t *e = effect(locs[i], (*ds[i])[pick[i]]);
      for (size_t w = 0; w < words_; w++) acc[w] ^= e[w];
    }
    count++;
    Incorrectness r = evaluate_raw(acc.data());
    if ((r.x_bad && !found.x_bad) || (r.z_bad && !found.z_bad)) {
      if (witness && !found.any()) {
        witness->faults.clear();
        for (size_t i = 0; i < k; i++) witness->faults.push_back({locs[i], (*ds[i])[pick[i]]});
        witness->x = r.x_bad;
        witness->z = r.z_bad;
      }
      found.x_bad |= r.x_bad;
      found.z_bad |= r.z_bad;
    }
    return found.x_bad && found.z_bad;
  };
  if (budget && total > static_cast<double>(budget)) {
    SplitMix64 rng(seed);
    for (uint64_t s = 0; s < budget; s++) {
      for (size_t i = 0; i < k; i++) pick[i] = rng() % ds[i]->size();
      if (try_current()) break;
    }
  } else {
    while (true) {
      if (try_current()) break;
      size_t i = k;
      while (i > 0) {
        i--;
        if (++pick[i] < ds[i]->size()) break;
        pick[i] = 0;
        if (i == 0) {
          i = SIZE_MAX;
          break;
        }
      }
      if (i == SIZE_MAX) break;
    }
  }
  if (evaluated) *evaluated += count;
  return found;
}

uint64_t num_pairs(const CompiledExRec &engine) {
  uint64_t p = engine.placeable().size();
  return p * (p - 1) / 2;
}

PairCount count_pairs_exact(const CompiledExRec &engine, const CountOptions &opts) {
  const auto &P = engine.placeable();
  const Circuit &c = engine.exrec().circuit;
  uint64_t np = num_pairs(engine);
  uint64_t begin = std::min(opts.pair_begin, np), end = std::min(opts.pair_end, np);

  PairCount out;
  AlphaMatrix &am = out.alpha;
  am.C = P.size();
  am.B = binomial(am.C, 3);
  for (uint32_t l : P) {
    int t = type_index(c.locations[l].kind);
    if (t > 0) am.type_counts[t - 1]++;
  }

  // Row a covers pair indices [row_start(a), row_start(a+1)).
  auto row_start = [&](uint64_t a) { return a * P.size() - a * (a + 1) / 2; };
  auto pair_at = [&](uint64_t idx) {
    uint64_t lo = 0, hi = P.size() - 1;
    while (lo + 1 < hi) {
      uint64_t mid = (lo + hi) / 2;
      if (row_start(mid) <= idx) lo = mid;
      else hi = mid;
    }
    if (row_start(hi) <= idx) lo = hi;
    return std::pair<uint64_t, uint64_t>{lo, lo + 1 + (idx - row_start(lo))};
  };

  if (opts.max_assignments) {
    uint64_t total = 0;
    for (uint64_t idx = begin; idx < end;) {
      auto [a, b] = pair_at(idx);
      uint64_t row_end = std::min(end, row_start(a + 1));
      uint64_t da = engine.descriptors_of(P[a]).size();
      for (uint64_t j = b; j < b + (row_end - idx); j++) total += da * engine.descriptors_of(P[j]).size();
      idx = row_end;
      if (total > opts.max_assignments)
        throw BudgetExceeded("pair sweep needs more than " + std::to_string(opts.max_assignments) +
                             " descriptor assignments");
    }
  }

  unsigned workers = std::max(1u, opts.workers);
  std::vector<AlphaMatrix> partial(workers);
  std::vector<std::vector<Witness>> wit(workers);
  parallel_ranges(workers, begin, end, [&](unsigned w, uint64_t lo, uint64_t hi) {
    AlphaMatrix &m = partial[w];
    std::vector<uint32_t> locs(2);
    for (uint64_t idx = lo; idx < hi;) {
      auto [a, b0] = pair_at(idx);
      uint64_t row_end = std::min(hi, row_start(a + 1));
      for (uint64_t b = b0; idx < row_end; b++, idx++) {
        locs[0] = P[a];
        locs[1] = P[b];
        Witness witness;
        Incorrectness r = engine.is_malignant(locs, opts.collect_witnesses ? &witness : nullptr, 0, 0, &m.assignments);
        m.pairs_checked++;
        if (!r.any()) continue;
        int ti = type_index(c.locations[locs[0]].kind) - 1, tj = type_index(c.locations[locs[1]].kind) - 1;
        if (ti < tj) std::swap(ti, tj);
        m.alpha[ti][tj]++;
        m.A++;
        if (r.x_bad) {
          m.alpha_x[ti][tj]++;
          m.A_x++;
        }
        if (r.z_bad) {
          m.alpha_z[ti][tj]++;
          m.A_z++;
        }
        if (opts.collect_witnesses) wit[w].push_back(std::move(witness));
      }
    }
  });
  for (unsigned w = 0; w < workers; w++) {
    merge_into(am, partial[w]);
    for (auto &x : wit[w]) out.witnesses.push_back(std::move(x));
  }
  return out;
}

AlphaMatrix count_pairs_exact(const ExRec &exrec, unsigned workers) {
  CompiledExRec engine(exrec);
  CountOptions opts;
  opts.workers = workers;
  opts.collect_witnesses = false;
  return count_pairs_exact(engine, opts).alpha;
}

Incorrectness is_malignant(const ExRec &exrec, const std::vector<uint32_t> &locs) {
  CompiledExRec engine(exrec);
  return engine.is_malignant(locs);
}

McEstimate finish_estimate(McEstimate e, uint64_t C) {
  e.f_hat = e.samples ? static_cast<double>(e.malignant) / static_cast<double>(e.samples) : 0.0;
  e.sigma = e.samples ? std::sqrt(e.f_hat * (1 - e.f_hat) / static_cast<double>(e.samples)) : 0.0;
  e.scaled = e.f_hat * binomial(C, e.set_size);
  return e;
}

McEstimate count_sets_mc(const CompiledExRec &engine, size_t set_size, uint64_t n, uint64_t seed,
                         const McOptions &opts) {
  if (set_size < 2) throw std::invalid_argument("set_size must be at least 2");
  const auto &P = engine.placeable();
  if (set_size > P.size()) throw std::invalid_argument("set_size exceeds the number of locations");
  unsigned workers = std::max(1u, opts.workers);
  std::vector<McEstimate> part(workers);
  uint64_t first = opts.first_sample;
  parallel_ranges(workers, first, first + n, [&](unsigned w, uint64_t lo, uint64_t hi) {
    McEstimate &e = part[w];
    std::vector<uint32_t> locs;
    std::vector<uint64_t> chosen;
    for (uint64_t i = lo; i < hi; i++) {
      SplitMix64 rng = SplitMix64::keyed(seed, i);
      // Floyd's algorithm for a uniform k-subset.
      chosen.clear();
      uint64_t m = P.size();
      for (uint64_t j = m - set_size; j < m; j++) {
        uint64_t t = std::uniform_int_distribution<uint64_t>(0, j)(rng);
        if (std::find(chosen.begin(), chosen.end(), t) != chosen.end()) chosen.push_back(j);
        else chosen.push_back(t);
      }
      std::sort(chosen.begin(), chosen.end());
      locs.clear();
      for (uint64_t c : chosen) locs.push_back(P[c]);
      double total = 1;
      for (uint32_t l : locs) total *= static_cast<double>(engine.descriptors_of(l).size());
      if (opts.descriptor_budget && total > static_cast<double>(opts.descriptor_budget)) e.sampled_sets++;
      Incorrectness r = engine.is_malignant(locs, nullptr, opts.descriptor_budget, rng());
      e.samples++;
      e.malignant += r.any();
      e.malignant_x += r.x_bad;
      e.malignant_z += r.z_bad;
    }
  });
  McEstimate out;
  out.set_size = set_size;
  out.budget = opts.descriptor_budget;
  for (const auto &e : part) {
    out.samples += e.samples;
    out.malignant += e.malignant;
    out.malignant_x += e.malignant_x;
    out.malignant_z += e.malignant_z;
    out.sampled_sets += e.sampled_sets;
  }
  return finish_estimate(out, P.size());
}

DirectRate direct_failure_rate(const CompiledExRec &engine, double p, uint64_t trials, uint64_t seed,
                               unsigned workers) {
  if (!(p >= 0 && p < 1)) throw std::invalid_argument("p must lie in [0, 1)");
  const auto &P = engine.placeable();
  workers = std::max(1u, workers);
  std::vector<DirectRate> part(workers);
  parallel_ranges(workers, 0, trials, [&](unsigned w, uint64_t lo, uint64_t hi) {
    DirectRate &r = part[w];
    std::vector<uint64_t> acc(engine.words());
    double log1mp = std::log1p(-p);
    for (uint64_t i = lo; i < hi; i++) {
      SplitMix64 rng = SplitMix64::keyed(seed, i);
      std::fill(acc.begin(), acc.end(), 0);
      if (p > 0) {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        // Geometric skipping between faulty locations.
        double pos = -1;
        while (true) {
          double v = u(rng);
          pos += 1 + std::floor(std::log1p(-v) / log1mp);
          if (pos >= static_cast<double>(P.size())) break;
          uint32_t l = P[static_cast<size_t>(pos)];
          const auto &ds = engine.descriptors_of(l);
          const uint64_t *e = engine.effect(l, ds[rng() % ds.size()]);
          for (size_t k = 0; k < acc.size(); k++) acc[k] ^= e[k];
        }
      }
      r.trials++;
      bool ok = true;
      Incorrectness res = engine.evaluate_raw(acc.data(), &ok);
      r.accepted += ok;
      r.failures += ok && res.any();
    }
  });
  DirectRate out;
  out.p = p;
  for (const auto &r : part) {
    out.trials += r.trials;
    out.accepted += r.accepted;
    out.failures += r.failures;
  }
  double n = static_cast<double>(out.accepted);
  if (n > 0) {
    double ph = static_cast<double>(out.failures) / n, z = 1.96;
    out.rate = ph;
    double denom = 1 + z * z / n;
    double center = (ph + z * z / (2 * n)) / denom;
    double half = z * std::sqrt(ph * (1 - ph) / n + z * z / (4 * n * n)) / denom;
    out.ci_low = std::max(0.0, center - half);
    out.ci_high = std::min(1.0, center + half);
  }
  return out;
}

}  // namespace bsft
