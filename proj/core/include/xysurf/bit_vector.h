// Copyright 2026 xysurf Contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef XYSURF_BIT_VECTOR_H
#define XYSURF_BIT_VECTOR_H

#include <bit>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace xysurf {

/// Fixed-length vector over GF(2), packed into 64-bit words.
///
/// Bits beyond `size()` in the last word are always zero so that word-wise
/// comparisons and popcounts are exact.
class BitVector {
   public:
    BitVector() = default;
    explicit BitVector(size_t num_bits) : num_bits_(num_bits), words_((num_bits + 63) / 64, 0) {
    }

    size_t size() const {
        return num_bits_;
    }
    size_t num_words() const {
        return words_.size();
    }

    bool operator[](size_t k) const {
        return (words_[k >> 6] >> (k & 63)) & 1;
    }
    void set(size_t k, bool value) {
        uint64_t mask = uint64_t{1} << (k & 63);
        if (value) {
            words_[k >> 6] |= mask;
        } else {
            words_[k >> 6] &= ~mask;
        }
    }
    void flip(size_t k) {
        words_[k >> 6] ^= uint64_t{1} << (k & 63);
    }
    void clear() {
        for (auto &w : words_) {
            w = 0;
        }
    }

    BitVector &operator^=(const BitVector &other);
    BitVector operator^(const BitVector &other) const {
        BitVector r = *this;
        r ^= other;
        return r;
    }
    bool operator==(const BitVector &other) const = default;

    size_t popcount() const {
        size_t n = 0;
        for (auto w : words_) {
            n += std::popcount(w);
        }
        return n;
    }
    bool any() const {
        for (auto w : words_) {
            if (w) {
                return true;
            }
        }
        return false;
    }
    bool none() const {
        return !any();
    }

    /// Parity of the bitwise AND with `other`.
    bool dot(const BitVector &other) const;

    /// Indices of set bits, ascending.
    std::vector<size_t> ones() const;

    const uint64_t *data() const {
        return words_.data();
    }
    uint64_t *data() {
        return words_.data();
    }

    /// "0101..." with bit 0 first.
    std::string str() const;

   private:
    size_t num_bits_ = 0;
    std::vector<uint64_t> words_;
};

}  // namespace xysurf

#endif  // XYSURF_BIT_VECTOR_H
