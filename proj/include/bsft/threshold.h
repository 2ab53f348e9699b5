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

#ifndef BSFT_THRESHOLD_H
#define BSFT_THRESHOLD_H

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace bsft {

class ThresholdError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// n choose k as a double, rounded.
double binomial(uint64_t n, uint64_t k);

/// Positive root of A + B x^(-1/t) = x.
double solve_a_prime(double A, double B, int t);

/// C(C, t+1)^(-1/t).
double naive_threshold(uint64_t C, int t);

/// C(C, s) eps^s exp((C - s) eps).
double coherent_fault_sum_bound(uint64_t C, uint64_t s, double eps);

struct CoherentThreshold {
  double eps_thr = 0;
  double kappa = 1;
  // kappa minus the value exp((C-t-1) eps_thr) it is required to exceed;
  // nonnegative means the pair is self-consistent.
  double residual = 0;
};

/// (kappa C(C, t+1))^(-1/t) for a given kappa.
double coherent_threshold(uint64_t C, int t, double kappa);
/// Self-consistent kappa by one step from kappa = 1.
CoherentThreshold coherent_threshold_iterated(uint64_t C, int t);

struct TwoStage {
  double p_thr = 0;
  double level1_condition = 0;
};

/// Level 1 uses a1 p^2, higher levels use a_str p^2.
TwoStage two_stage_threshold(double a1, double a_str);

/// Level-1 and contracted maps p -> p'. Unconditioned models use
/// A'(A, B, t) p^(t+1); conditioned ones use
/// (1-p)^(-4 C0) (A + B p) p^(t+1).
struct RecursionModel {
  int t = 1;
  double A = 0, B = 0;
  double A_str = 0, B_str = 0;
  double C0 = 0, C0_str = 0;
  bool conditioned = false;

  double level1(double p) const;
  double contracted(double p) const;
  /// Coefficient a with contracted(p) <= a p^(t+1), evaluated at p.
  double contracted_coeff(double p) const;
};

/// Smallest positive fixed point of the contracted map.
double contracted_fixed_point(const RecursionModel &m);

/// Largest p (not above the contracted fixed point) whose level-1 image
/// stays below the contracted fixed point.
double conditioned_fixed_point(const RecursionModel &m);

/// 2 L p_thr (p / p_thr)^((t+1)^k).
double error_budget(double p, double p_thr, int t, double L, int k);
/// Smallest k with error_budget(p, p_thr, t, L, k) <= delta0.
int required_level(double p, double p_thr, int t, double L, double delta0);

struct PlusIResult {
  double exact = 0;  // iterated p^2 / (p^2 + (1-p)^2)
  double bound = 0;  // (1/2) (2p)^(2^rounds)
};
PlusIResult distill_plus_i(double p, int rounds);
constexpr double kPlusIThreshold = 0.5;

enum class ToffoliVariant { kCrude, kImproved };
using ToffoliState = std::array<double, 3>;
ToffoliState distill_toffoli(const ToffoliState &s, ToffoliVariant v);
double toffoli_threshold(ToffoliVariant v);

/// (d C(n_c, t+1) + C(d, t+1) n_c^(t+1))^(-1/t); requires d = 2t + 1.
double toffoli_recursive_prep_threshold(uint64_t n_c, uint64_t d, int t);

struct AncillaBound {
  double bound = 0;      // D * (explicit + tail) + (3 + s) p
  double explicit_sum = 0;
  double tail = 0;
  double injection = 0;  // (3 + s) p
  double last_level = 0; // p^(k_terms + 1)
};

/// D sum_j p^(j) over the level-1 then contracted recursion starting at p:
/// levels 0..k_terms+1 explicitly, the rest by a geometric tail bound.
/// `s` is the number of locations preparing the teleported state (1 for a
/// single qubit, 4 for Toffoli). Throws when the recursion does not shrink.
AncillaBound ancilla_accuracy_bound(const RecursionModel &m, double p, double D, int k_terms = 100, int s = 1);

/// Named parameter sets for the analysed configurations.
struct Preset {
  std::string name;
  std::string code;
  std::string ec_style;
  uint64_t exrec_locations = 0;
  RecursionModel model;
  double decoder_locations = 0;
};
Preset threshold_preset(const std::string &name);
const std::array<const char *, 3> &preset_names();

}  // namespace bsft

#endif
