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


#include "bsft/report.h"

#include <cstdio>
#include <fstream>
#include <set>

namespace bsft {

json JobConfig::to_json() const {
  json j;
  j["mode"] = mode;
  j["code"] = code;
  j["ec_style"] = ec_style;
  j["contracted"] = contracted;
  j["ideal_bell"] = ideal_bell;
  j["layout"] = layout;
  j["cnot_model"] = cnot_model;
  j["n"] = n;
  j["set_size"] = set_size;
  j["seed"] = seed;
  j["workers"] = workers;
  j["max_assignments"] = max_assignments;
  j["descriptor_budget"] = descriptor_budget;
  j["p"] = p;
  j["preset"] = preset;
  j["distill"] = distill;
  j["rounds"] = rounds;
  j["state"] = state;
  j["n_c"] = n_c;
  j["d"] = d;
  j["t"] = t;
  j["D"] = D;
  j["k_terms"] = k_terms;
  j["s"] = s;
  j["checkpoint_every"] = checkpoint_every;
  return j;
}

JobConfig JobConfig::from_json(const json &j) {
  JobConfig c;
  j.at("mode").get_to(c.mode);
  c.code = j.value("code", c.code);
  c.ec_style = j.value("ec_style", c.ec_style);
  c.contracted = j.value("contracted", c.contracted);
  c.ideal_bell = j.value("ideal_bell", c.ideal_bell);
  c.layout = j.value("layout", c.layout);
  c.cnot_model = j.value("cnot_model", c.cnot_model);
  c.n = j.value("n", c.n);
  c.set_size = j.value("set_size", c.set_size);
  c.seed = j.value("seed", c.seed);
  c.workers = j.value("workers", c.workers);
  c.max_assignments = j.value("max_assignments", c.max_assignments);
  c.descriptor_budget = j.value("descriptor_budget", c.descriptor_budget);
  c.p = j.value("p", c.p);
  c.preset = j.value("preset", c.preset);
  c.distill = j.value("distill", c.distill);
  c.rounds = j.value("rounds", c.rounds);
  c.state = j.value("state", c.state);
  c.n_c = j.value("n_c", c.n_c);
  c.d = j.value("d", c.d);
  c.t = j.value("t", c.t);
  c.D = j.value("D", c.D);
  c.k_terms = j.value("k_terms", c.k_terms);
  c.s = j.value("s", c.s);
  c.checkpoint_every = j.value("checkpoint_every", c.checkpoint_every);
  return c;
}

void JobConfig::validate() const {
  static const std::set<std::string> modes = {"exact-pairs", "mc",        "direct-sim", "threshold",
                                              "distill",     "anc-bound", "report"};
  auto fail = [](const std::string &m) { throw std::invalid_argument(m); };
  if (!modes.count(mode)) fail("unknown mode '" + mode + "'");
  if (workers < 1) fail("workers must be at least 1");
  bool counting = mode == "exact-pairs" || mode == "mc" || mode == "direct-sim";
  if (counting) {
    if (code != "bs3" && code != "bs5") fail("code must be bs3 or bs5");
    parse_ec_style(ec_style);
    if (layout != "self-dual" && layout != "uniform") fail("layout must be self-dual or uniform");
    if (cnot_model != "all15" && cnot_model != "separated") fail("cnot model must be all15 or separated");
    if (contracted && ideal_bell) fail("contracted and ideal_bell are exclusive");
    if (ideal_bell && ec_style != "knill") fail("ideal_bell needs the knill EC");
  }
  if (mode == "exact-pairs" && code != "bs3") fail("exact pair counts need a t = 1 code (bs3)");
  if (mode == "mc") {
    if (n == 0) fail("mc needs n > 0");
    if (set_size < 2) fail("set_size must be at least 2");
  }
  if (mode == "direct-sim") {
    if (n == 0) fail("direct-sim needs n > 0");
    if (!(p >= 0 && p < 1)) fail("p must lie in [0, 1)");
  }
  if (mode == "threshold" || mode == "anc-bound") threshold_preset(preset);
  if (mode == "anc-bound" && !(p > 0)) fail("anc-bound needs p > 0");
  if (mode == "distill") {
    if (distill == "plus-i") {
      if (!(p >= 0 && p <= 1)) fail("p must lie in [0, 1]");
    } else if (distill == "toffoli-crude" || distill == "toffoli-improved") {
      if (state.size() != 3) fail("toffoli state needs three components");
    } else if (distill != "toffoli-prep") {
      fail("unknown distillation '" + distill + "'");
    }
    if (rounds < 0) fail("rounds must be nonnegative");
  }
}

SubsystemCode code_of(const JobConfig &c) { return bacon_shor(c.code == "bs5" ? 5 : 3); }

ExRec exrec_of(const JobConfig &c) {
  return build_cnot_exrec(code_of(c), parse_ec_style(c.ec_style), c.contracted, c.ideal_bell,
                          c.layout == "uniform" ? EcLayout::kUniform : EcLayout::kSelfDual);
}

CnotModel cnot_model_of(const JobConfig &c) {
  return c.cnot_model == "separated" ? CnotModel::kSeparated : CnotModel::kAll15;
}

namespace {

json table_json(const AlphaMatrix::Table &t) {
  json rows = json::array();
  for (const auto &r : t) rows.push_back(r);
  return rows;
}

AlphaMatrix::Table table_from(const json &j) {
  AlphaMatrix::Table t{};
  for (size_t i = 0; i < 6; i++)
    for (size_t k = 0; k < 6; k++) t[i][k] = j.at(i).at(k).get<uint64_t>();
  return t;
}

const char *type_name(int i) {
  static const char *names[] = {"MEMORY", "PREP_0", "PREP_PLUS", "MEAS_X", "MEAS_Z", "CNOT"};
  return names[i];
}

std::string code_params(const std::string &code) {
  if (code == "bs3") return "[[9,1,3]]";
  if (code == "bs5") return "[[25,1,5]]";
  return "?";
}

}  // namespace

json alpha_to_json(const AlphaMatrix &a) {
  json j;
  j["alpha"] = table_json(a.alpha);
  j["alpha_x"] = table_json(a.alpha_x);
  j["alpha_z"] = table_json(a.alpha_z);
  j["type_counts"] = a.type_counts;
  j["A"] = a.A;
  j["A_x"] = a.A_x;
  j["A_z"] = a.A_z;
  j["C"] = a.C;
  j["B"] = a.B;
  j["pairs_checked"] = a.pairs_checked;
  j["assignments"] = a.assignments;
  return j;
}

AlphaMatrix alpha_from_json(const json &j) {
  AlphaMatrix a;
  a.alpha = table_from(j.at("alpha"));
  a.alpha_x = table_from(j.at("alpha_x"));
  a.alpha_z = table_from(j.at("alpha_z"));
  j.at("type_counts").get_to(a.type_counts);
  j.at("A").get_to(a.A);
  j.at("A_x").get_to(a.A_x);
  j.at("A_z").get_to(a.A_z);
  j.at("C").get_to(a.C);
  j.at("B").get_to(a.B);
  j.at("pairs_checked").get_to(a.pairs_checked);
  j.at("assignments").get_to(a.assignments);
  return a;
}

std::string alpha_csv(const AlphaMatrix &a) {
  std::string out = "type_i,type_j,kind_i,kind_j,alpha,alpha_x,alpha_z\n";
  for (int i = 0; i < 6; i++)
    for (int k = 0; k <= i; k++) {
      out += std::to_string(i + 1) + "," + std::to_string(k + 1) + "," + type_name(i) + "," + type_name(k) + "," +
             std::to_string(a.alpha[i][k]) + "," + std::to_string(a.alpha_x[i][k]) + "," +
             std::to_string(a.alpha_z[i][k]) + "\n";
    }
  return out;
}

json witnesses_to_json(const std::vector<Witness> &w, const Circuit &c) {
  json arr = json::array();
  for (const Witness &x : w) {
    json e;
    json faults = json::array();
    for (const Fault &f : x.faults) {
      LocKind k = c.locations.at(f.location).kind;
      faults.push_back({{"location", f.location}, {"kind", kind_name(k)}, {"descriptor", f.pauli},
                        {"name", descriptor_name(k, f.pauli)}});
    }
    e["faults"] = std::move(faults);
    e["x"] = x.x;
    e["z"] = x.z;
    arr.push_back(std::move(e));
  }
  return arr;
}

std::vector<Witness> witnesses_from_json(const json &j) {
  std::vector<Witness> out;
  for (const auto &e : j) {
    Witness w;
    for (const auto &f : e.at("faults"))
      w.faults.push_back({f.at("location").get<uint32_t>(), f.at("descriptor").get<uint8_t>()});
    w.x = e.at("x").get<bool>();
    w.z = e.at("z").get<bool>();
    out.push_back(std::move(w));
  }
  return out;
}

json make_result(const std::string &kind, const JobConfig &c) {
  json j;
  j["schema"] = kSchemaVersion;
  j["kind"] = kind;
  j["config"] = c.to_json();
  return j;
}

json count_result(const JobConfig &c, const ExRec &ex, const AlphaMatrix &a, const std::string &witnesses_path) {
  json j = make_result("count", c);
  j["code"] = c.code;
  j["ec_style"] = c.ec_style;
  j["contracted"] = c.contracted;
  j["ideal_bell"] = c.ideal_bell;
  j["layout"] = c.layout;
  j["cnot_model"] = c.cnot_model;
  j["gate"] = ex.gate_kind;
  j["C"] = a.C;
  j["alpha"] = table_json(a.alpha);
  j["alpha_x"] = table_json(a.alpha_x);
  j["alpha_z"] = table_json(a.alpha_z);
  j["type_counts"] = a.type_counts;
  j["A"] = a.A;
  j["A_x"] = a.A_x;
  j["A_z"] = a.A_z;
  j["B"] = a.B;
  j["pairs_checked"] = a.pairs_checked;
  j["assignments"] = a.assignments;
  j["malignancy_rule"] = "a pair counts once if its X or its Z failure occurs";
  j["witnesses_path"] = witnesses_path;
  j["workers"] = c.workers;
  j["seed"] = c.seed;
  return j;
}

json mc_result(const JobConfig &c, const McEstimate &e, uint64_t C) {
  json j = make_result("mc", c);
  j["code"] = c.code;
  j["ec_style"] = c.ec_style;
  j["contracted"] = c.contracted;
  j["C"] = C;
  j["set_size"] = e.set_size;
  j["samples"] = e.samples;
  j["malignant"] = e.malignant;
  j["malignant_x"] = e.malignant_x;
  j["malignant_z"] = e.malignant_z;
  j["f_hat"] = e.f_hat;
  j["sigma"] = e.sigma;
  j["scaled"] = e.scaled;
  j["scaled_sigma"] = e.sigma * binomial(C, e.set_size);
  j["descriptor_budget"] = e.budget;
  j["sampled_sets"] = e.sampled_sets;
  j["seed"] = c.seed;
  return j;
}

json direct_result(const JobConfig &c, const DirectRate &r, uint64_t C) {
  json j = make_result("direct-sim", c);
  j["code"] = c.code;
  j["ec_style"] = c.ec_style;
  j["C"] = C;
  j["p"] = r.p;
  j["trials"] = r.trials;
  j["accepted"] = r.accepted;
  j["failures"] = r.failures;
  j["rate"] = r.rate;
  j["ci95"] = {r.ci_low, r.ci_high};
  j["seed"] = c.seed;
  return j;
}

json threshold_result(const JobConfig &c, const Preset &p) {
  json j = make_result("threshold", c);
  const RecursionModel &m = p.model;
  j["preset"] = p.name;
  j["code"] = p.code;
  j["ec_style"] = p.ec_style;
  j["exrec_locations"] = p.exrec_locations;
  j["inputs"] = {{"t", m.t},         {"A", m.A},   {"B", m.B},           {"A_str", m.A_str},
                 {"B_str", m.B_str}, {"C0", m.C0}, {"C0_str", m.C0_str}, {"conditioned", m.conditioned}};
  j["naive_threshold"] = naive_threshold(p.exrec_locations, m.t);
  if (!m.conditioned) {
    double a1 = solve_a_prime(m.A, m.B, m.t);
    double as = solve_a_prime(m.A_str, m.B_str, m.t);
    TwoStage ts = two_stage_threshold(a1, as);
    j["A_prime"] = a1;
    j["A_prime_str"] = as;
    j["level1_condition"] = ts.level1_condition;
    j["p_thr"] = ts.p_thr;
  } else {
    double star = contracted_fixed_point(m);
    j["contracted_fixed_point"] = star;
    j["level1_condition"] = star;
    j["p_thr"] = conditioned_fixed_point(m);
  }
  json ref;
  if (p.name == "bs3-steane") {
    ref["p_thr"] = {1.21e-4, 1.22e-4};
    ref["level1_condition"] = 1.97e-4;
    ref["A_prime"] = 13241;
    ref["note"] = "the summary table and the derivation give different roundings";
  } else if (p.name == "bs3-knill") {
    ref["p_thr"] = {1.26e-4};
    ref["A_prime"] = 11559;
  } else if (p.name == "bs5-steane") {
    ref["p_thr"] = {1.94e-4};
  }
  j["reference"] = ref;
  return j;
}

json anc_bound_result(const JobConfig &c, const Preset &p, const AncillaBound &b) {
  json j = make_result("anc-bound", c);
  j["preset"] = p.name;
  j["p"] = c.p;
  j["D"] = c.D > 0 ? c.D : p.decoder_locations;
  j["k_terms"] = c.k_terms;
  j["s"] = c.s;
  j["explicit_sum"] = b.explicit_sum;
  j["tail"] = b.tail;
  j["gamma"] = p.model.contracted_coeff(b.last_level);
  j["last_level"] = b.last_level;
  j["injection"] = b.injection;
  j["bound"] = b.bound;
  return j;
}

json distill_result(const JobConfig &c) {
  json j = make_result("distill", c);
  j["distill"] = c.distill;
  if (c.distill == "plus-i") {
    PlusIResult r = distill_plus_i(c.p, c.rounds);
    j["p"] = c.p;
    j["rounds"] = c.rounds;
    j["exact"] = r.exact;
    j["bound"] = r.bound;
    j["threshold"] = kPlusIThreshold;
  } else if (c.distill == "toffoli-prep") {
    j["n_c"] = c.n_c;
    j["d"] = c.d;
    j["t"] = c.t;
    j["threshold"] = toffoli_recursive_prep_threshold(c.n_c, c.d, c.t);
  } else {
    ToffoliVariant v = c.distill == "toffoli-crude" ? ToffoliVariant::kCrude : ToffoliVariant::kImproved;
    ToffoliState s{c.state[0], c.state[1], c.state[2]};
    json traj = json::array({s});
    for (int r = 0; r < c.rounds; r++) {
      s = distill_toffoli(s, v);
      traj.push_back(s);
    }
    j["trajectory"] = traj;
    j["threshold"] = toffoli_threshold(v);
  }
  return j;
}

std::string summary_table_markdown(const std::vector<json> &results) {
  std::string out = "| code | parameters | EC style | exRec locations | p_thr |\n|---|---|---|---|---|\n";
  for (size_t i = 0; i < results.size(); i++) {
    const json &r = results[i];
    if (!r.is_object() || !r.contains("schema"))
      throw SchemaError("input " + std::to_string(i) + " has no schema field");
    if (r["schema"] != kSchemaVersion)
      throw SchemaError("input " + std::to_string(i) + " has schema " + r["schema"].dump() + ", expected " +
                        std::to_string(kSchemaVersion));
    std::string kind = r.value("kind", "");
    uint64_t locs = 0;
    std::string pthr = "-";
    if (kind == "threshold") {
      locs = r.at("exrec_locations").get<uint64_t>();
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.2e", r.at("p_thr").get<double>());
      pthr = buf;
    } else if (kind == "count" || kind == "mc") {
      locs = r.at("C").get<uint64_t>();
    } else {
      continue;
    }
    std::string code = r.at("code").get<std::string>();
    std::string style = r.at("ec_style").get<std::string>();
    if (r.value("contracted", false)) style += " (contracted)";
    out += "| " + code + " | " + code_params(code) + " | " + style + " | " + std::to_string(locs) + " | " + pthr +
           " |\n";
  }
  return out;
}

std::string dump(const json &doc) { return doc.dump(2) + "\n"; }

void write_result(const std::string &path, const json &doc, const json &meta) {
  auto put = [](const std::string &p, const std::string &text) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + p);
    f << text;
  };
  put(path, dump(doc));
  put(path + ".meta.json", dump(meta));
}

}  // namespace bsft
