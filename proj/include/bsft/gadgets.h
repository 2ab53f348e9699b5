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

#ifndef BSFT_GADGETS_H
#define BSFT_GADGETS_H

#include <array>
#include <string>
#include <vector>

#include "bsft/circuit.h"
#include "bsft/codes.h"

namespace bsft {

enum class EcStyle { kGauge, kSteane, kKnill };

const char *ec_style_name(EcStyle s);
EcStyle parse_ec_style(const std::string &s);

/// Gadget tags stored in Location::part for exRec circuits.
enum ExRecPart : uint8_t { kLeading0 = 0, kLeading1 = 1, kGa = 2, kTrailing0 = 3, kTrailing1 = 4 };

// Standalone gadgets on one Bacon-Shor block (n = 3 or 5). Blocks "in" and
// "out" list the data qubits in code order.
Circuit build_gauge_ec(const SubsystemCode &code);
Circuit build_steane_ec(const SubsystemCode &code);
Circuit build_knill_ec(const SubsystemCode &code);
Circuit build_ec(const SubsystemCode &code, EcStyle style);
/// Maps the block onto its last qubit (block "out" has size 1).
Circuit build_decoder(const SubsystemCode &code);
/// Transversal Hadamard; block "out" is the transposed grid.
Circuit build_logical_hadamard(const SubsystemCode &code);

/// How the two blocks of a CNOT exRec order their EC halves. kUniform runs
/// the same EC on both blocks. kSelfDual gives the target block the
/// X/Z-exchanged EC (Steane: X-error half first; Knill: |0>_L ancilla
/// measured in X), so the exRec maps to itself under transversal Hadamard
/// plus a block swap.
enum class EcLayout { kSelfDual, kUniform };

struct ExRec {
  Circuit circuit;
  SubsystemCode code;
  EcStyle style = EcStyle::kSteane;
  bool contracted = false;
  bool ideal_bell = false;
  EcLayout layout = EcLayout::kSelfDual;
  std::string gate_kind = "CNOT";
  std::vector<uint32_t> leading_ec_ids, ga_ids, trailing_ec_ids;
  // Data qubits of each block at the Rec input (after the leading ECs) and
  // at the exRec output, in code order. Block 0 is the CNOT control.
  std::array<std::vector<uint32_t>, 2> rec_input, output;
  // Rec input boundary: after all locations of this step.
  uint32_t checkpoint = 0;

  std::vector<uint32_t> placeable_ids() const;
};

ExRec build_cnot_exrec(const SubsystemCode &code, EcStyle style, bool contracted, bool ideal_bell,
                       EcLayout layout = EcLayout::kSelfDual);

/// Placeable cat-preparation locations (preps, CNOTs, waits, verifier
/// measurements) per EC of the exRec.
size_t cat_locations_per_ec(const ExRec &exrec);

}  // namespace bsft

#endif
