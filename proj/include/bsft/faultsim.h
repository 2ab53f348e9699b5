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

#ifndef BSFT_FAULTSIM_H
#define BSFT_FAULTSIM_H

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "bsft/circuit.h"
#include "bsft/gadgets.h"
#include "bsft/pauli.h"

namespace bsft {

/// CNOT fault descriptor sets: all 15 two-qubit Paulis, or only the pure
/// X-type and pure Z-type ones (3 + 3).
enum class CnotModel { kAll15, kSeparated };

// Descriptor encoding. MEMORY / H: 1 = X, 2 = Z, 3 = Y. CNOT: bit 0 X on
// control, bit 1 Z on control, bit 2 X on target, bit 3 Z on target. PREP:
// 1 = flip (X after |0>, Z after |+>). MEAS: 1 = outcome flip.
std::vector<uint8_t> descriptors(LocKind kind, CnotModel model = CnotModel::kAll15);
std::string descriptor_name(LocKind kind, uint8_t d);

struct Fault {
  uint32_t location = 0;
  uint8_t pauli = 0;
  bool operator==(const Fault &) const = default;
};

class FaultAssignment {
 public:
  FaultAssignment() = default;
  FaultAssignment(std::initializer_list<Fault> faults);

  /// Sets the descriptor at a location, replacing any previous one.
  void set(uint32_t location, uint8_t pauli);
  const std::vector<Fault> &entries() const { return entries_; }
  size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  /// Throws std::invalid_argument on unknown locations or bad descriptors.
  void validate(const Circuit &c) const;
  std::string str() const;

 private:
  std::vector<Fault> entries_;  // sorted by location
};

struct FrameState {
  BitVec x, z;    // frame per qubit (measured qubits are cleared)
  BitVec bits;    // flipped classical bits, measurement bits first
  bool accepted = true;
  std::vector<Logical> logical_frame;  // logical corrections per block
  bool has_snapshot = false;
  BitVec snap_x, snap_z;  // frame at the checkpoint boundary

  PauliOp frame() const;
};

struct PropagateOptions {
  /// Record the frame after all locations of this step, including later
  /// corrections that apply at or before it. Negative disables.
  int64_t checkpoint = -1;
  bool run_directives = true;
  /// Inject the input frame at the boundary after this step instead of at
  /// the start; earlier locations are skipped. Negative disables.
  int64_t start_after = -1;
  std::string *trace = nullptr;
};

FrameState propagate(const Circuit &c, const FaultAssignment &faults, const PauliOp &input_frame,
                     const PropagateOptions &opts = {});

/// Frame restricted to a block, in the block's code order.
PauliOp block_frame(const BitVec &x, const BitVec &z, const std::vector<uint32_t> &qubits);

struct Incorrectness {
  bool x_bad = false;
  bool z_bad = false;
  bool any() const { return x_bad || z_bad; }
  bool operator==(const Incorrectness &) const = default;
};

/// Decoded logical action at the Rec input and output of each block.
struct ExRecDecoding {
  std::array<Logical, 2> in{Logical::I, Logical::I};
  std::array<Logical, 2> out{Logical::I, Logical::I};
};

ExRecDecoding decode_exrec(const ExRec &exrec, const FrameState &st);
Incorrectness compare_cnot(const ExRecDecoding &d);
Incorrectness exrec_is_incorrect(const ExRec &exrec, const FaultAssignment &faults);

}  // namespace bsft

#endif
