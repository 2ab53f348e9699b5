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

#ifndef BSFT_CODES_H
#define BSFT_CODES_H

#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "bsft/bits.h"
#include "bsft/pauli.h"

namespace bsft {

/// Logical action on the single protected qubit. Bit 0 is X, bit 1 is Z.
enum class Logical : uint8_t { I = 0, X = 1, Z = 2, Y = 3 };

inline Logical operator^(Logical a, Logical b) {
  return static_cast<Logical>(static_cast<uint8_t>(a) ^ static_cast<uint8_t>(b));
}
inline bool has_x(Logical l) { return static_cast<uint8_t>(l) & 1; }
inline bool has_z(Logical l) { return static_cast<uint8_t>(l) & 2; }
inline Logical make_logical(bool x, bool z) { return static_cast<Logical>(x | (z << 1)); }
char logical_char(Logical l);

/// Row-major square grid; (i, j) are zero-based row and column.
struct GridGeometry {
  size_t rows = 0;
  size_t cols = 0;
  size_t index(size_t i, size_t j) const { return i * cols + j; }
};

enum class DecodeRule {
  kGridMajority,  // Bacon-Shor: column parities of X, row parities of Z.
  kShorMajority,  // Shor: per-row repetition for X, row parities of Z.
  kLookup,        // minimum-weight table lookup
};

using BinaryMatrix = std::vector<std::vector<uint8_t>>;

class LookupDecoder;

struct SubsystemCode {
  std::string name;
  size_t n = 0;
  size_t k = 1;
  std::vector<PauliOp> stabilizers;
  std::vector<PauliOp> gauges;
  PauliOp logical_x;
  PauliOp logical_z;
  std::optional<GridGeometry> geometry;
  DecodeRule rule = DecodeRule::kLookup;
  std::shared_ptr<const LookupDecoder> lookup;

  /// Throws std::logic_error if any structural invariant fails.
  void validate() const;
};

/// Minimum-weight syndrome table, filled by increasing Pauli weight.
class LookupDecoder {
 public:
  explicit LookupDecoder(const SubsystemCode &code);
  /// Recovery for a syndrome; identity if the syndrome was never reached.
  PauliOp recovery(const BitVec &syndrome) const;

 private:
  size_t n_;
  std::unordered_map<uint64_t, PauliOp> table_;
};

SubsystemCode css_construct(const BinaryMatrix &h_x, const BinaryMatrix &h_z,
                            std::string name = "css");
SubsystemCode steane_code();
SubsystemCode shor_code(size_t n);
SubsystemCode bacon_shor(size_t n);

BitVec syndrome(const SubsystemCode &code, const PauliOp &error);

/// Residual logical action after the code's ideal recovery.
Logical ideal_decode(const SubsystemCode &code, const PauliOp &error);
/// Same, but always through the lookup table (built on demand).
Logical lookup_decode(const SubsystemCode &code, const PauliOp &error);
/// Logical class of an operator in the normalizer of the stabilizer.
Logical logical_class(const SubsystemCode &code, const PauliOp &op);

/// Minimum weight of a Pauli that commutes with the stabilizer but acts
/// nontrivially on the protected qubit. Returns 0 if none up to max_weight.
size_t brute_force_distance(const SubsystemCode &code, size_t max_weight);

/// Text export: header lines then one Pauli string per line per section.
std::string export_code(const SubsystemCode &code);

}  // namespace bsft

#endif
