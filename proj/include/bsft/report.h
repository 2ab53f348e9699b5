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


#ifndef BSFT_REPORT_H
#define BSFT_REPORT_H

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "bsft/malignancy.h"
#include "bsft/threshold.h"
#include "json.hpp"

namespace bsft {

using json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

/// Raised when result documents cannot be combined.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Everything that determines a run's output. Embedded in every result.
struct JobConfig {
  std::string mode;  // exact-pairs, mc, direct-sim, threshold, distill, anc-bound, report
  std::string code = "bs3";
  std::string ec_style = "steane";
  bool contracted = false;
  bool ideal_bell = false;
  std::string layout = "self-dual";
  std::string cnot_model = "all15";
  uint64_t n = 0;
  uint64_t set_size = 2;
  uint64_t seed = 1;
  unsigned workers = 1;
  uint64_t max_assignments = 0;
  uint64_t descriptor_budget = 0;
  double p = 0;
  std::string preset;
  std::string distill;
  int rounds = 1;
  std::vector<double> state;
  uint64_t n_c = 0, d = 0;
  int t = 1;
  double D = 0;
  int k_terms = 100;
  int s = 1;
  uint64_t checkpoint_every = 0;

  json to_json() const;
  static JobConfig from_json(const json &j);
  /// Throws std::invalid_argument on a missing or inconsistent field.
  void validate() const;
};

SubsystemCode code_of(const JobConfig &c);
ExRec exrec_of(const JobConfig &c);
CnotModel cnot_model_of(const JobConfig &c);

json alpha_to_json(const AlphaMatrix &a);
AlphaMatrix alpha_from_json(const json &j);
/// One row per lower-triangle cell: type_i,type_j,kind_i,kind_j,alpha,alpha_x,alpha_z.
std::string alpha_csv(const AlphaMatrix &a);

json witnesses_to_json(const std::vector<Witness> &w, const Circuit &c);
std::vector<Witness> witnesses_from_json(const json &j);

/// Result envelope: schema, kind, config, then the kind-specific fields.
json make_result(const std::string &kind, const JobConfig &c);
json count_result(const JobConfig &c, const ExRec &ex, const AlphaMatrix &a, const std::string &witnesses_path);
json mc_result(const JobConfig &c, const McEstimate &e, uint64_t C);
json direct_result(const JobConfig &c, const DirectRate &r, uint64_t C);
json threshold_result(const JobConfig &c, const Preset &p);
json anc_bound_result(const JobConfig &c, const Preset &p, const AncillaBound &b);
json distill_result(const JobConfig &c);

/// Markdown table with columns code, parameters, EC style, exRec
/// locations, p_thr; one row per input that carries a location count.
/// Throws SchemaError if an input has no schema or a different version.
std::string summary_table_markdown(const std::vector<json> &results);

/// Writes `doc` to `path` and non-deterministic fields to `path`.meta.json.
void write_result(const std::string &path, const json &doc, const json &meta);
std::string dump(const json &doc);

}  // namespace bsft

#endif
