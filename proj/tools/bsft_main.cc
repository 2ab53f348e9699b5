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


// Command-line front end: counts, thresholds, distillation and reports.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "bsft/report.h"

using namespace bsft;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitBudget = 3;

struct Io {
  std::string output;
  std::string csv;
  std::string witnesses;
  std::string checkpoint;
  bool resume = false;
};

int fail(const char *kind, const std::string &msg, int code) {
  json e;
  e["error"] = kind;
  e["message"] = msg;
  e["exit_code"] = code;
  std::cerr << e.dump() << "\n";
  return code;
}

unsigned default_workers() {
  if (const char *w = std::getenv("BSFT_WORKERS")) {
    char *end = nullptr;
    unsigned long v = std::strtoul(w, &end, 10);
    if (end != w && *end == '\0' && v >= 1) return static_cast<unsigned>(v);
  }
  return 1;
}

std::string read_file(const std::string &path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot read " + path);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

void write_text(const std::string &path, const std::string &text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

void write_atomic(const std::string &path, const std::string &text) {
  write_text(path + ".tmp", text);
  std::filesystem::rename(path + ".tmp", path);
}

std::string utc_now() {
  std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

// Loads a checkpoint and checks it belongs to this configuration.
json load_checkpoint(const Io &io, const JobConfig &cfg) {
  json cp = json::parse(read_file(io.checkpoint));
  if (cp.value("schema", 0) != kSchemaVersion || cp.value("kind", "") != "checkpoint")
    throw SchemaError("not a schema " + std::to_string(kSchemaVersion) + " checkpoint: " + io.checkpoint);
  json a = cp.at("config"), b = cfg.to_json();
  for (const char *k : {"workers", "max_assignments", "checkpoint_every"}) {
    a.erase(k);
    b.erase(k);
  }
  if (a != b) throw std::invalid_argument("checkpoint was written for a different configuration");
  return cp;
}

json checkpoint_doc(const JobConfig &cfg, uint64_t next) {
  json cp = make_result("checkpoint", cfg);
  cp["next"] = next;
  return cp;
}

json run_exact(const JobConfig &cfg, const Io &io) {
  ExRec ex = exrec_of(cfg);
  CompiledExRec eng(ex, cnot_model_of(cfg));
  uint64_t total = num_pairs(eng);
  CountOptions o;
  o.workers = cfg.workers;
  o.model = cnot_model_of(cfg);
  o.max_assignments = cfg.max_assignments;
  o.collect_witnesses = !io.witnesses.empty() || !io.checkpoint.empty();

  uint64_t next = 0;
  AlphaMatrix alpha;
  std::vector<Witness> wit;
  bool have = false;
  if (io.resume && !io.checkpoint.empty() && std::filesystem::exists(io.checkpoint)) {
    json cp = load_checkpoint(io, cfg);
    next = cp.at("next").get<uint64_t>();
    alpha = alpha_from_json(cp.at("alpha"));
    wit = witnesses_from_json(cp.at("witnesses"));
    have = true;
  }
  uint64_t chunk = cfg.checkpoint_every && !io.checkpoint.empty() ? cfg.checkpoint_every : total;
  if (!have) {
    o.pair_end = 0;
    alpha = count_pairs_exact(eng, o).alpha;  // C, B and type counts only
  }
  while (next < total) {
    o.pair_begin = next;
    o.pair_end = std::min(total, next + chunk);
    if (cfg.max_assignments) o.max_assignments = cfg.max_assignments - std::min(cfg.max_assignments, alpha.assignments);
    PairCount part = count_pairs_exact(eng, o);
    merge_into(alpha, part.alpha);
    wit.insert(wit.end(), part.witnesses.begin(), part.witnesses.end());
    next = o.pair_end;
    if (!io.checkpoint.empty()) {
      json cp = checkpoint_doc(cfg, next);
      cp["alpha"] = alpha_to_json(alpha);
      cp["witnesses"] = witnesses_to_json(wit, ex.circuit);
      write_atomic(io.checkpoint, dump(cp));
    }
  }
  if (!io.witnesses.empty()) write_text(io.witnesses, dump(witnesses_to_json(wit, ex.circuit)));
  if (!io.csv.empty()) write_text(io.csv, alpha_csv(alpha));
  return count_result(cfg, ex, alpha, io.witnesses);
}

json run_mc(const JobConfig &cfg, const Io &io) {
  ExRec ex = exrec_of(cfg);
  CompiledExRec eng(ex, cnot_model_of(cfg));
  uint64_t C = eng.placeable().size();
  McOptions o;
  o.workers = cfg.workers;
  o.model = cnot_model_of(cfg);
  o.descriptor_budget = cfg.descriptor_budget;

  McEstimate acc;
  acc.set_size = cfg.set_size;
  acc.budget = cfg.descriptor_budget;
  uint64_t next = 0;
  if (io.resume && !io.checkpoint.empty() && std::filesystem::exists(io.checkpoint)) {
    json cp = load_checkpoint(io, cfg);
    next = cp.at("next").get<uint64_t>();
    const json &t = cp.at("tally");
    acc.samples = t.at("samples");
    acc.malignant = t.at("malignant");
    acc.malignant_x = t.at("malignant_x");
    acc.malignant_z = t.at("malignant_z");
    acc.sampled_sets = t.at("sampled_sets");
  }
  uint64_t chunk = cfg.checkpoint_every && !io.checkpoint.empty() ? cfg.checkpoint_every : cfg.n;
  while (next < cfg.n) {
    o.first_sample = next;
    uint64_t m = std::min(chunk, cfg.n - next);
    McEstimate part = count_sets_mc(eng, cfg.set_size, m, cfg.seed, o);
    acc.samples += part.samples;
    acc.malignant += part.malignant;
    acc.malignant_x += part.malignant_x;
    acc.malignant_z += part.malignant_z;
    acc.sampled_sets += part.sampled_sets;
    next += m;
    if (!io.checkpoint.empty()) {
      json cp = checkpoint_doc(cfg, next);
      cp["tally"] = {{"samples", acc.samples},
                     {"malignant", acc.malignant},
                     {"malignant_x", acc.malignant_x},
                     {"malignant_z", acc.malignant_z},
                     {"sampled_sets", acc.sampled_sets}};
      write_atomic(io.checkpoint, dump(cp));
    }
  }
  return mc_result(cfg, finish_estimate(acc, C), C);
}

json run_job(const JobConfig &cfg, const Io &io) {
  cfg.validate();
  if (cfg.mode == "exact-pairs") return run_exact(cfg, io);
  if (cfg.mode == "mc") return run_mc(cfg, io);
  if (cfg.mode == "direct-sim") {
    ExRec ex = exrec_of(cfg);
    CompiledExRec eng(ex, cnot_model_of(cfg));
    return direct_result(cfg, direct_failure_rate(eng, cfg.p, cfg.n, cfg.seed, cfg.workers), eng.placeable().size());
  }
  if (cfg.mode == "threshold") return threshold_result(cfg, threshold_preset(cfg.preset));
  if (cfg.mode == "anc-bound") {
    Preset p = threshold_preset(cfg.preset);
    double D = cfg.D > 0 ? cfg.D : p.decoder_locations;
    return anc_bound_result(cfg, p, ancilla_accuracy_bound(p.model, cfg.p, D, cfg.k_terms, cfg.s));
  }
  if (cfg.mode == "distill") return distill_result(cfg);
  throw std::invalid_argument("unhandled mode " + cfg.mode);
}

void add_exrec_flags(CLI::App *c, JobConfig &cfg) {
  c->add_option("--code", cfg.code, "bs3 or bs5")->check(CLI::IsMember({"bs3", "bs5"}));
  c->add_option("--ec", cfg.ec_style, "gauge, steane or knill")->check(CLI::IsMember({"gauge", "steane", "knill"}));
  c->add_flag("--contracted", cfg.contracted, "omit the ECs on the prep/measurement side");
  c->add_flag("--ideal-bell", cfg.ideal_bell, "noiseless Bell pairs in the leading Knill ECs");
  c->add_option("--layout", cfg.layout, "self-dual or uniform EC layout")
      ->check(CLI::IsMember({"self-dual", "uniform"}));
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"bsft: malignant-set counting and threshold bounds for Bacon-Shor codes"};
  app.require_subcommand(1);
  JobConfig cfg;
  cfg.workers = default_workers();
  Io io;
  std::vector<std::string> inputs;
  std::string dump_what = "exrec";

  auto out_flag = [&io](CLI::App *c) { c->add_option("-o,--output", io.output, "result file (default stdout)"); };

  auto *count = app.add_subcommand("count", "count malignant location sets");
  add_exrec_flags(count, cfg);
  auto *grp = count->add_option_group("mode");
  bool exact = false, mc = false, direct = false;
  grp->add_flag("--exact-pairs", exact, "exhaustive pair sweep");
  grp->add_flag("--mc", mc, "sample location sets of a fixed size");
  grp->add_flag("--direct", direct, "simulate independent faults at rate p");
  grp->require_option(1);
  count->add_option("--cnot-model", cfg.cnot_model, "all15 or separated")
      ->check(CLI::IsMember({"all15", "separated"}));
  count->add_option("-n,--samples", cfg.n, "samples (mc) or trials (direct)");
  count->add_option("--set-size", cfg.set_size, "location set size for mc");
  count->add_option("--seed", cfg.seed);
  count->add_option("--workers", cfg.workers, "worker threads (default $BSFT_WORKERS or 1)")
      ->check(CLI::PositiveNumber);
  count->add_option("--max-assignments", cfg.max_assignments, "cap on evaluated assignments, 0 = none");
  count->add_option("--descriptor-budget", cfg.descriptor_budget, "assignments tried per sampled set, 0 = all");
  count->add_option("--p", cfg.p, "fault rate for --direct");
  count->add_option("--csv", io.csv, "alpha matrix CSV (exact pairs)");
  count->add_option("--witnesses", io.witnesses, "witness file (exact pairs)");
  count->add_option("--checkpoint", io.checkpoint, "partial tally file");
  count->add_option("--checkpoint-every", cfg.checkpoint_every, "pairs or samples between checkpoints");
  count->add_flag("--resume", io.resume, "continue from --checkpoint if present");
  out_flag(count);

  auto *thr = app.add_subcommand("threshold", "threshold for a preset");
  thr->add_option("--preset", cfg.preset)->required();
  out_flag(thr);

  auto *dist = app.add_subcommand("distill", "distillation maps and thresholds");
  dist->add_option("--kind", cfg.distill, "plus-i, toffoli-crude, toffoli-improved, toffoli-prep")->required();
  dist->add_option("--p", cfg.p);
  dist->add_option("--rounds", cfg.rounds);
  dist->add_option("--state", cfg.state, "three Toffoli error components")->expected(3);
  dist->add_option("--n-c", cfg.n_c);
  dist->add_option("--d", cfg.d);
  dist->add_option("--t", cfg.t);
  out_flag(dist);

  auto *anc = app.add_subcommand("anc-bound", "accuracy bound for injected ancillas");
  anc->add_option("--preset", cfg.preset)->required();
  anc->add_option("--p", cfg.p)->required();
  anc->add_option("--D", cfg.D, "decoder locations (default from preset)");
  anc->add_option("--k-terms", cfg.k_terms);
  anc->add_option("--s", cfg.s, "state preparation locations: 1 single-qubit, 4 Toffoli");
  out_flag(anc);

  auto *rep = app.add_subcommand("report", "markdown summary of result files");
  rep->add_option("inputs", inputs, "result JSON files");
  out_flag(rep);

  auto *dmp = app.add_subcommand("dump", "print a gadget circuit");
  add_exrec_flags(dmp, cfg);
  dmp->add_option("--what", dump_what, "exrec, ec or decoder")->check(CLI::IsMember({"exrec", "ec", "decoder"}));
  out_flag(dmp);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    return fail("validation", e.what(), kExitValidation);
  }

  try {
    auto t0 = std::chrono::steady_clock::now();
    std::string text;
    if (*count || *thr || *dist || *anc) {
      if (*count) cfg.mode = exact ? "exact-pairs" : mc ? "mc" : "direct-sim";
      if (*thr) cfg.mode = "threshold";
      if (*dist) cfg.mode = "distill";
      if (*anc) cfg.mode = "anc-bound";
      json doc = run_job(cfg, io);
      double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      json meta = {{"runtime_s", secs}, {"finished_utc", utc_now()}, {"workers", cfg.workers}};
      if (io.output.empty()) {
        std::cout << dump(doc);
      } else {
        write_result(io.output, doc, meta);
      }
      return 0;
    }
    if (*rep) {
      std::vector<json> docs;
      for (const auto &p : inputs) {
        try {
          docs.push_back(json::parse(read_file(p)));
        } catch (const json::parse_error &e) {
          throw SchemaError(p + ": " + e.what());
        }
      }
      text = summary_table_markdown(docs);
    } else {
      SubsystemCode code = code_of(cfg);
      if (dump_what == "ec") {
        text = build_ec(code, parse_ec_style(cfg.ec_style)).dump();
      } else if (dump_what == "decoder") {
        text = build_decoder(code).dump();
      } else {
        text = exrec_of(cfg).circuit.dump();
      }
    }
    if (io.output.empty()) {
      std::cout << text;
    } else {
      write_text(io.output, text);
    }
    return 0;
  } catch (const BudgetExceeded &e) {
    return fail("budget", e.what(), kExitBudget);
  } catch (const SchemaError &e) {
    return fail("schema", e.what(), kExitValidation);
  } catch (const ThresholdError &e) {
    return fail("threshold", e.what(), kExitValidation);
  } catch (const std::invalid_argument &e) {
    return fail("validation", e.what(), kExitValidation);
  } catch (const std::exception &e) {
    return fail("runtime", e.what(), 1);
  }
}
