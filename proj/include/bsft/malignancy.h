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

#ifndef BSFT_MALIGNANCY_H
#define BSFT_MALIGNANCY_H

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "bsft/faultsim.h"
#include "bsft/gadgets.h"
#include "bsft/threshold.h"

namespace bsft {

/// Thrown when a sweep would exceed its configured resource cap.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malignant pair counts by location type, lower triangle alpha[i][j] with
/// i >= j over types 1..6 (stored zero-based).
struct AlphaMatrix {
  using Table = std::array<std::array<uint64_t, 6>, 6>;
  Table alpha{};    // pair counts once if X or Z fails
  Table alpha_x{};  // X failures
  Table alpha_z{};  // Z failures
  std::array<uint64_t, 6> type_counts{};
  uint64_t A = 0, A_x = 0, A_z = 0;
  uint64_t C = 0;
  double B = 0;  // C choose (t + 2) with t = 1
  uint64_t pairs_checked = 0;
  uint64_t assignments = 0;

  /// Sum of alpha over cells whose two types are both in `types` (1..6).
  uint64_t restricted_total(std::initializer_list<int> types) const;
};

struct Witness {
  std::vector<Fault> faults;
  bool x = false;
  bool z = false;
};

/// Linearized exRec evaluator. Every single fault and every classical
/// correction is reduced to its effect on measurement flips, the Rec-input
/// frame and the output frame; a fault set is then evaluated by XOR.
class CompiledExRec {
 public:
  /// Keeps a reference to `exrec`, which must outlive the engine.
  CompiledExRec(const ExRec &exrec, CnotModel model = CnotModel::kAll15);
  CompiledExRec(ExRec &&, CnotModel = CnotModel::kAll15) = delete;

  const ExRec &exrec() const { return *exrec_; }
  const std::vector<uint32_t> &placeable() const { return placeable_; }
  const std::vector<uint8_t> &descriptors_of(uint32_t loc) const;
  size_t words() const { return words_; }

  /// Incorrectness of a fault set (rejected runs are benign).
  Incorrectness evaluate(const std::vector<Fault> &faults) const;
  /// Incorrectness from a pre-accumulated raw effect vector (modified).
  Incorrectness evaluate_raw(uint64_t *acc, bool *accepted = nullptr) const;
  const uint64_t *effect(uint32_t loc, uint8_t desc) const {
    return &effects_[(static_cast<size_t>(loc) * 16 + desc) * words_];
  }

  /// Any nontrivial assignment on these locations breaking correctness.
  /// Assignments are tried in lexicographic order; if their number exceeds
  /// `budget` (0 = unlimited) a uniform sample of `budget` is tried instead.
  Incorrectness is_malignant(const std::vector<uint32_t> &locs, Witness *witness = nullptr, uint64_t budget = 0,
                             uint64_t seed = 0, uint64_t *evaluated = nullptr) const;

 private:
  struct Op {
    DirectiveKind kind;
    uint32_t out = 0;  // derived index
    std::vector<std::pair<uint32_t, uint64_t>> meas_mask;
    std::vector<uint32_t> derived_in;
    std::vector<uint32_t> bits_in;  // global bit ids (majority, lookup, postselect)
    std::vector<int32_t> table;     // lookup: correction effect index or -1
  };
  bool read_bit(const uint64_t *acc, const std::vector<uint8_t> &derived, uint32_t b) const;
  Logical decode_block(uint64_t x, uint64_t z) const;

  const ExRec *exrec_;
  CnotModel model_;
  size_t words_ = 0;
  size_t meas_words_ = 0;
  uint32_t num_meas_bits_ = 0;
  std::vector<uint32_t> placeable_;
  std::vector<std::vector<uint8_t>> descs_;
  std::vector<uint64_t> effects_;      // [loc][16][words]
  std::vector<uint64_t> corrections_;  // [index][words]
  std::vector<Op> ops_;
  size_t num_derived_ = 0;
  std::vector<uint64_t> col_masks_, row_masks_;
};

struct CountOptions {
  unsigned workers = 1;
  CnotModel model = CnotModel::kAll15;
  /// Cap on descriptor assignments evaluated; 0 = unlimited.
  uint64_t max_assignments = 0;
  bool collect_witnesses = true;
  /// Range of pair indices (row-major over placeable i < j) to sweep.
  uint64_t pair_begin = 0;
  uint64_t pair_end = UINT64_MAX;
};

struct PairCount {
  AlphaMatrix alpha;
  std::vector<Witness> witnesses;
};

uint64_t num_pairs(const CompiledExRec &engine);
PairCount count_pairs_exact(const CompiledExRec &engine, const CountOptions &opts = {});
AlphaMatrix count_pairs_exact(const ExRec &exrec, unsigned workers);
/// Adds the tallies of `b` into `a` (C, B and type counts are kept from `a`).
void merge_into(AlphaMatrix &a, const AlphaMatrix &b);

Incorrectness is_malignant(const ExRec &exrec, const std::vector<uint32_t> &locs);

struct McEstimate {
  size_t set_size = 0;
  uint64_t samples = 0;
  uint64_t malignant = 0;
  uint64_t malignant_x = 0;
  uint64_t malignant_z = 0;
  double f_hat = 0;
  double sigma = 0;
  double scaled = 0;  // f_hat * C(C, set_size)
  uint64_t budget = 0;
  uint64_t sampled_sets = 0;  // sets whose assignments were subsampled
};

struct McOptions {
  unsigned workers = 1;
  CnotModel model = CnotModel::kAll15;
  uint64_t descriptor_budget = 0;
  uint64_t first_sample = 0;  // resume offset
};

/// Uniform location sets of a fixed size, sample i drawn from a stream keyed
/// by (seed, i).
McEstimate count_sets_mc(const CompiledExRec &engine, size_t set_size, uint64_t n, uint64_t seed,
                         const McOptions &opts = {});
McEstimate finish_estimate(McEstimate e, uint64_t C);

struct DirectRate {
  double p = 0;
  uint64_t trials = 0;
  uint64_t accepted = 0;
  uint64_t failures = 0;
  double rate = 0;
  double ci_low = 0;
  double ci_high = 0;
};

/// Independent faults with probability p per placeable location, uniform
/// nontrivial descriptor; failure fraction among accepted runs with a 95%
/// Wilson interval.
DirectRate direct_failure_rate(const CompiledExRec &engine, double p, uint64_t trials, uint64_t seed,
                               unsigned workers = 1);

/// SplitMix64 stream; satisfies UniformRandomBitGenerator.
class SplitMix64 {
 public:
  using result_type = uint64_t;
  explicit SplitMix64(uint64_t seed) : s_(seed) {}
  static SplitMix64 keyed(uint64_t seed, uint64_t index);
  static constexpr uint64_t min() { return 0; }
  static constexpr uint64_t max() { return UINT64_MAX; }
  uint64_t operator()();

 private:
  uint64_t s_;
};

}  // namespace bsft

#endif
