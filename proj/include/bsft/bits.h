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

#ifndef BSFT_BITS_H
#define BSFT_BITS_H

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace bsft {

/// Fixed-length bit vector packed into 64-bit words.
class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(size_t n) : n_(n), words_((n + 63) / 64, 0) {}

  size_t size() const { return n_; }
  size_t num_words() const { return words_.size(); }

  bool get(size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }
  void set(size_t i, bool v) {
    uint64_t m = uint64_t{1} << (i & 63);
    if (v) {
      words_[i >> 6] |= m;
    } else {
      words_[i >> 6] &= ~m;
    }
  }
  void flip(size_t i) { words_[i >> 6] ^= uint64_t{1} << (i & 63); }
  void clear() { std::fill(words_.begin(), words_.end(), 0); }

  BitVec &operator^=(const BitVec &o) {
    for (size_t k = 0; k < words_.size(); k++) words_[k] ^= o.words_[k];
    return *this;
  }
  BitVec &operator&=(const BitVec &o) {
    for (size_t k = 0; k < words_.size(); k++) words_[k] &= o.words_[k];
    return *this;
  }
  BitVec &operator|=(const BitVec &o) {
    for (size_t k = 0; k < words_.size(); k++) words_[k] |= o.words_[k];
    return *this;
  }
  friend BitVec operator^(BitVec a, const BitVec &b) { return a ^= b; }
  friend BitVec operator&(BitVec a, const BitVec &b) { return a &= b; }
  friend BitVec operator|(BitVec a, const BitVec &b) { return a |= b; }

  size_t popcount() const {
    size_t c = 0;
    for (uint64_t w : words_) c += std::popcount(w);
    return c;
  }
  bool any() const {
    for (uint64_t w : words_)
      if (w) return true;
    return false;
  }
  /// Parity of the bitwise AND with `o`.
  bool dot(const BitVec &o) const {
    uint64_t acc = 0;
    for (size_t k = 0; k < words_.size(); k++) acc ^= words_[k] & o.words_[k];
    return std::popcount(acc) & 1;
  }

  uint64_t *data() { return words_.data(); }
  const uint64_t *data() const { return words_.data(); }

  bool operator==(const BitVec &o) const = default;

 private:
  size_t n_ = 0;
  std::vector<uint64_t> words_;
};

}  // namespace bsft

#endif
