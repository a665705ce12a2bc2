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

#include "xysurf/bit_vector.h"

#include "xysurf/errors.h"

namespace xysurf {

BitVector &BitVector::operator^=(const BitVector &other) {
    if (other.num_bits_ != num_bits_) {
        throw UsageError("BitVector size mismatch in xor");
    }
    for (size_t k = 0; k < words_.size(); k++) {
        words_[k] ^= other.words_[k];
    }
    return *this;
}

bool BitVector::dot(const BitVector &other) const {
    if (other.num_bits_ != num_bits_) {
        throw UsageError("BitVector size mismatch in dot");
    }
    uint64_t acc = 0;
    for (size_t k = 0; k < words_.size(); k++) {
        acc ^= words_[k] & other.words_[k];
    }
    return std::popcount(acc) & 1;
}

std::vector<size_t> BitVector::ones() const {
    std::vector<size_t> out;
    for (size_t w = 0; w < words_.size(); w++) {
        uint64_t bits = words_[w];
        while (bits) {
            out.push_back(w * 64 + std::countr_zero(bits));
            bits &= bits - 1;
        }
    }
    return out;
}

std::string BitVector::str() const {
    std::string s(num_bits_, '0');
    for (size_t k = 0; k < num_bits_; k++) {
        if ((*this)[k]) {
            s[k] = '1';
        }
    }
    return s;
}

}  // namespace xysurf
