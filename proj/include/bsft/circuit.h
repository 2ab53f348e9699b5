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

#ifndef BSFT_CIRCUIT_H
#define BSFT_CIRCUIT_H

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bsft/codes.h"

namespace bsft {

enum class LocKind : uint8_t { kMemory, kPrep0, kPrepPlus, kMeasX, kMeasZ, kCnot, kHadamard };

constexpr uint32_t kNone = UINT32_MAX;

// Location flags.
constexpr uint8_t kFlagCat = 1;   // part of a cat-state preparation
constexpr uint8_t kFlagBell = 2;  // Knill Bell measurement

/// Index in the six-type location taxonomy (1..6); Hadamard maps to 0.
int type_index(LocKind k);
const char *kind_name(LocKind k);
inline bool is_prep(LocKind k) { return k == LocKind::kPrep0 || k == LocKind::kPrepPlus; }
inline bool is_meas(LocKind k) { return k == LocKind::kMeasX || k == LocKind::kMeasZ; }

struct Location {
  uint32_t id = 0;
  LocKind kind = LocKind::kMemory;
  uint32_t q0 = kNone;
  uint32_t q1 = kNone;
  uint32_t step = 0;
  uint32_t bit = kNone;  // classical bit written by a measurement
  uint8_t part = 0;      // gadget tag inside an exRec
  uint8_t flags = 0;     // kFlag* bits
  bool placeable = true;

  size_t arity() const { return kind == LocKind::kCnot ? 2 : 1; }
};

/// Pauli on a few qubits; letter code 1 = X, 2 = Z, 3 = Y.
struct SparsePauli {
  std::vector<std::pair<uint32_t, uint8_t>> terms;
  bool empty() const { return terms.empty(); }
  std::string str() const;
};

enum class DirectiveKind : uint8_t { kParity, kMajority, kLookup, kPostselect };

/// Classical post-processing executed after the measurements of `step`.
/// Bits are numbered globally; measurement bits come first.
struct Directive {
  DirectiveKind kind = DirectiveKind::kParity;
  uint32_t step = 0;
  uint32_t out = kNone;        // parity / majority
  std::vector<uint32_t> in;    // parity / majority / lookup inputs, postselect bit
  // Lookup only: table[index] is the correction, index bit i = in[i].
  // The correction is a frame update at the boundary after `apply_at`.
  std::vector<SparsePauli> table;
  std::vector<Logical> logical;  // optional record of the logical part
  uint32_t apply_at = 0;
  int block = -1;
};

struct Block {
  std::string name;
  std::vector<uint32_t> qubits;  // code order
};

class Circuit {
 public:
  uint32_t num_qubits = 0;
  uint32_t num_bits = 0;
  uint32_t num_meas_bits = 0;
  uint32_t num_steps = 0;
  std::vector<Location> locations;  // sorted by step; id == index
  std::vector<Directive> directives;  // sorted by step
  std::vector<Block> blocks;
  std::vector<uint32_t> inputs;
  std::vector<uint32_t> step_begin;  // locations of step t: [step_begin[t], step_begin[t+1])

  /// Throws std::logic_error on any structural violation.
  void validate() const;
  /// One line per location `t=<step> <KIND> q<a>[,q<b>]`, then directives.
  std::string dump() const;
  /// Meas bit -> location id.
  std::vector<uint32_t> meas_location_of_bit() const;
};

size_t count_locations(const Circuit &c, std::optional<LocKind> kind = std::nullopt);
size_t count_placeable(const Circuit &c, std::optional<LocKind> kind = std::nullopt);

class CircuitBuilder {
 public:
  uint32_t new_qubit() { return num_qubits_++; }
  std::vector<uint32_t> new_qubits(size_t n);
  /// Derived (directive-produced) bit; renumbered after the measurement bits.
  uint32_t new_bit() { return 0x80000000u | derived_bits_++; }
  void set_part(uint8_t p) { part_ = p; }
  void set_flags(uint8_t f) { flags_ = f; }
  void mark_input(uint32_t q) { inputs_.push_back(q); }
  /// Adds a location; returns the bit for measurements, kNone otherwise.
  uint32_t add(LocKind kind, uint32_t step, uint32_t q0, uint32_t q1 = kNone);
  void add_directive(Directive d) { directives_.push_back(std::move(d)); }
  void add_block(Block b) { blocks_.push_back(std::move(b)); }
  /// Inserts MEMORY locations on idle qubits between their first and last
  /// operations when requested, renumbers bits, sorts and validates.
  Circuit finish(bool insert_memory = true);

 private:
  struct Pending {
    Location loc;
    uint32_t seq;
  };
  std::vector<Pending> locs_;
  std::vector<Directive> directives_;
  std::vector<Block> blocks_;
  std::vector<uint32_t> inputs_;
  uint32_t num_qubits_ = 0;
  uint32_t meas_bits_ = 0;
  uint32_t derived_bits_ = 0;
  uint8_t part_ = 0;
  uint8_t flags_ = 0;
};

}  // namespace bsft

#endif
