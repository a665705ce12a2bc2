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

#ifndef XYSURF_PAULI_H
#define XYSURF_PAULI_H

#include <cstdint>
#include <string>
#include <string_view>

#include "xysurf/bit_vector.h"

namespace xysurf {

/// Single-qubit Pauli, encoded as (x bit) | (z bit << 1).
enum class Pauli : uint8_t { I = 0, X = 1, Z = 2, Y = 3 };

char pauli_char(Pauli p);
Pauli pauli_from_char(char c);

/// Phaseless n-qubit Pauli operator stored in symplectic form.
class PauliOperator {
   public:
    PauliOperator() = default;
    explicit PauliOperator(size_t num_qubits) : xs(num_qubits), zs(num_qubits) {
    }

    /// Parses a dense string such as "IXYZ".
    static PauliOperator from_string(std::string_view text);

    size_t num_qubits() const {
        return xs.size();
    }

    Pauli get(size_t q) const {
        return static_cast<Pauli>(static_cast<uint8_t>(xs[q]) | (static_cast<uint8_t>(zs[q]) << 1));
    }
    void set(size_t q, Pauli p) {
        xs.set(q, static_cast<uint8_t>(p) & 1);
        zs.set(q, static_cast<uint8_t>(p) & 2);
    }
    /// Multiplies qubit q by p (phases dropped).
    void apply(size_t q, Pauli p) {
        if (static_cast<uint8_t>(p) & 1) {
            xs.flip(q);
        }
        if (static_cast<uint8_t>(p) & 2) {
            zs.flip(q);
        }
    }

    PauliOperator &operator*=(const PauliOperator &other);
    PauliOperator operator*(const PauliOperator &other) const {
        PauliOperator r = *this;
        r *= other;
        return r;
    }
    bool operator==(const PauliOperator &other) const = default;

    bool commutes(const PauliOperator &other) const;
    size_t weight() const;
    bool is_identity() const {
        return xs.none() && zs.none();
    }

    std::string str() const;

    BitVector xs;
    BitVector zs;
};

/// Product of two Paulis, phases dropped.
PauliOperator compose(const PauliOperator &a, const PauliOperator &b);
bool commutes(const PauliOperator &a, const PauliOperator &b);

}  // namespace xysurf

#endif  // XYSURF_PAULI_H
