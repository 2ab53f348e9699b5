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

#include "bsft/threshold.h"

#include <cmath>
#include <limits>

namespace bsft {

namespace {

// Root of a decreasing function on [lo, hi] with f(lo) >= 0 >= f(hi).
template <class F>
double bisect(F f, double lo, double hi) {
  for (int it = 0; it < 400 && hi - lo > 1e-15 * hi; it++) {
    double mid = 0.5 * (lo + hi);
    if (f(mid) >= 0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double pow_int(double x, int e) {
  double r = 1;
  for (int i = 0; i < e; i++) r *= x;
  return r;
}

}  // namespace

double binomial(uint64_t n, uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  double r = 1;
  for (uint64_t i = 1; i <= k; i++) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return std::round(r);
}

double solve_a_prime(double A, double B, int t) {
  if (!(A > 0) || B < 0 || t < 1) throw std::invalid_argument("solve_a_prime: need A > 0, B >= 0, t >= 1");
  if (B == 0) return A;
  if (t == 1) return 0.5 * A * (1 + std::sqrt(1 + 4 * B / (A * A)));
  auto f = [&](double x) { return A + B * std::pow(x, -1.0 / t) - x; };
  double lo = A, hi = A + B * std::pow(A, -1.0 / t);
  double x = bisect(f, lo, hi);
  if (std::abs(f(x)) > 1e-12 * x) throw ThresholdError("solve_a_prime: no convergence");
  return x;
}

double naive_threshold(uint64_t C, int t) {
  if (t < 1 || C <= static_cast<uint64_t>(t) + 1) {
    if (C == static_cast<uint64_t>(t) + 1) return 1;
    throw std::invalid_argument("naive_threshold: need C > t + 1");
  }
  return std::pow(binomial(C, t + 1), -1.0 / t);
}

double coherent_fault_sum_bound(uint64_t C, uint64_t s, double eps) {
  if (s > C || eps < 0) throw std::invalid_argument("coherent_fault_sum_bound: need 0 <= s <= C, eps >= 0");
  return binomial(C, s) * std::pow(eps, static_cast<double>(s)) * std::exp(static_cast<double>(C - s) * eps);
}

double coherent_threshold(uint64_t C, int t, double kappa) {
  return std::pow(kappa * binomial(C, t + 1), -1.0 / t);
}

CoherentThreshold coherent_threshold_iterated(uint64_t C, int t) {
  double k0 = 1;
  double e0 = coherent_threshold(C, t, k0);
  CoherentThreshold r;
  r.kappa = std::exp(static_cast<double>(C - t - 1) * e0);
  r.eps_thr = coherent_threshold(C, t, r.kappa);
  r.residual = r.kappa - std::exp(static_cast<double>(C - t - 1) * r.eps_thr);
  return r;
}

TwoStage two_stage_threshold(double a1, double a_str) {
  if (!(a1 > 0) || !(a_str > 0)) throw std::invalid_argument("two_stage_threshold: coefficients must be positive");
  TwoStage r;
  r.level1_condition = 1 / a_str;
  r.p_thr = std::sqrt(r.level1_condition / a1);
  return r;
}

double RecursionModel::level1(double p) const {
  if (conditioned) return std::pow(1 - p, -4 * C0) * (A + B * p) * pow_int(p, t + 1);
  return solve_a_prime(A, B, t) * pow_int(p, t + 1);
}

double RecursionModel::contracted_coeff(double p) const {
  if (conditioned) return std::pow(1 - p, -4 * C0_str) * (A_str + B_str * p);
  return solve_a_prime(A_str, B_str, t);
}

double RecursionModel::contracted(double p) const { return contracted_coeff(p) * pow_int(p, t + 1); }

double contracted_fixed_point(const RecursionModel &m) {
  if (!(m.A_str > 0)) throw std::invalid_argument("contracted_fixed_point: A_str must be positive");
  if (!m.conditioned) return std::pow(m.contracted_coeff(0), -1.0 / m.t);
  // contracted(p)/p is increasing, so the first crossing is unique.
  double hi = std::pow(m.A_str, -1.0 / m.t);
  if (hi >= 1) hi = 0.5;
  auto g = [&](double p) { return 1 - m.contracted_coeff(p) * pow_int(p, m.t); };
  if (g(hi) > 0) throw ThresholdError("contracted_fixed_point: no crossing below 1/2");
  return bisect(g, 0, hi);
}

double conditioned_fixed_point(const RecursionModel &m) {
  double ps = contracted_fixed_point(m);
  if (m.level1(ps) < ps) return ps;
  return bisect([&](double p) { return ps - m.level1(p); }, 0, ps);
}

double error_budget(double p, double p_thr, int t, double L, int k) {
  if (!(p < p_thr)) throw std::invalid_argument("error_budget: p must be below p_thr");
  return 2 * L * p_thr * std::pow(p / p_thr, std::pow(t + 1.0, k));
}

int required_level(double p, double p_thr, int t, double L, double delta0) {
  if (!(p < p_thr)) throw std::invalid_argument("required_level: p must be below p_thr");
  for (int k = 0; k < 256; k++)
    if (error_budget(p, p_thr, t, L, k) <= delta0) return k;
  throw ThresholdError("required_level: no level below 256 reaches the target");
}

PlusIResult distill_plus_i(double p, int rounds) {
  if (p < 0 || p > 1) throw std::invalid_argument("distill_plus_i: p outside [0, 1]");
  PlusIResult r;
  r.exact = p;
  for (int i = 0; i < rounds; i++) {
    double a = r.exact * r.exact, b = (1 - r.exact) * (1 - r.exact);
    r.exact = a / (a + b);
  }
  r.bound = 0.5 * std::pow(2 * p, std::pow(2.0, rounds));
  return r;
}

namespace {
constexpr double kBeta = 4.0 / 3.0;
constexpr double kGamma = 8.0 / 3.0;
constexpr double kImprovedWindow = 0.12;
}  // namespace

ToffoliState distill_toffoli(const ToffoliState &s, ToffoliVariant v) {
  for (double x : s)
    if (x < 0 || x > 1) throw std::invalid_argument("distill_toffoli: component outside [0, 1]");
  auto [a, b, c] = s;
  if (v == ToffoliVariant::kCrude) return {32 * a * a, 128 * b * b, 512 * c * c};
  for (double x : s)
    if (x > kImprovedWindow) throw std::invalid_argument("distill_toffoli: improved bound needs components <= 12%");
  double g2 = kGamma * kGamma;
  return {kBeta * g2 * a * a, kBeta * g2 * kGamma * b * b, kBeta * g2 * g2 * c * c};
}

double toffoli_threshold(ToffoliVariant v) {
  if (v == ToffoliVariant::kCrude) return 1.0 / 512;
  return 1 / (kBeta * pow_int(kGamma, 4));
}

double toffoli_recursive_prep_threshold(uint64_t n_c, uint64_t d, int t) {
  if (t < 1 || d != 2 * static_cast<uint64_t>(t) + 1)
    throw std::invalid_argument("toffoli_recursive_prep_threshold: need d = 2t + 1, t >= 1");
  double denom = static_cast<double>(d) * binomial(n_c, t + 1) +
                 binomial(d, t + 1) * pow_int(static_cast<double>(n_c), t + 1);
  return std::pow(denom, -1.0 / t);
}

AncillaBound ancilla_accuracy_bound(const RecursionModel &m, double p, double D, int k_terms, int s) {
  if (k_terms < 0) throw std::invalid_argument("ancilla_accuracy_bound: k_terms must be >= 0");
  double ps = contracted_fixed_point(m);
  double q = p;
  AncillaBound r;
  r.explicit_sum = q;
  q = m.level1(p);
  if (!(q < ps)) throw ThresholdError("ancilla_accuracy_bound: level-1 noise is not below the contracted fixed point");
  r.explicit_sum += q;
  for (int j = 0; j < k_terms; j++) {
    q = m.contracted(q);
    r.explicit_sum += q;
  }
  r.last_level = q;
  double a = m.contracted_coeff(q);
  double x = std::pow(a, 1.0 / m.t) * q;
  double xt = pow_int(x, m.t + 1);
  if (!(xt < 1)) throw ThresholdError("ancilla_accuracy_bound: tail does not converge");
  r.tail = std::pow(a, -1.0 / m.t) * xt / (1 - xt);
  r.injection = (3.0 + s) * p;
  r.bound = D * (r.explicit_sum + r.tail) + r.injection;
  return r;
}

Preset threshold_preset(const std::string &name) {
  Preset p;
  p.name = name;
  if (name == "bs3-steane") {
    p.code = "bs3";
    p.ec_style = "steane";
    p.exrec_locations = 297;
    p.model = {1, 12913, binomial(297, 3), 4939, binomial(153, 3), 0, 0, false};
    p.decoder_locations = 16;
  } else if (name == "bs3-knill") {
    // Ideal leading Bell measurements: 135 contracted locations.
    p.code = "bs3";
    p.ec_style = "knill";
    p.exrec_locations = 297;
    p.model = {1, 11184, binomial(297, 3), 5328, binomial(135, 3), 0, 0, false};
    p.decoder_locations = 16;
  } else if (name == "bs5-steane") {
    p.code = "bs5";
    p.ec_style = "steane";
    p.exrec_locations = 1185;
    p.model = {2, 16625488, binomial(1185, 4), 8653028, binomial(705, 4), 190, 120, true};
    p.decoder_locations = 48;
  } else {
    throw std::invalid_argument("unknown preset: " + name);
  }
  return p;
}

const std::array<const char *, 3> &preset_names() {
  static const std::array<const char *, 3> names = {"bs3-steane", "bs3-knill", "bs5-steane"};
  return names;
}

}  // namespace bsft
