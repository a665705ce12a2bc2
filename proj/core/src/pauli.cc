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

#include "xysurf/pauli.h"

#include "xysurf/errors.h"

namespace xysurf {

char pauli_char(Pauli p) {
    return "IXZY"[static_cast<uint8_t>(p)];
}

Pauli pauli_from_char(char c) {
    switch (c) {
        case 'I':
        case '_':
            return Pauli::I;
        case 'X':
            return Pauli::X;
        case 'Y':
            return Pauli::Y;
        case 'Z':
            return Pauli::Z;
        default:
            throw UsageError(std::string("not a Pauli character: '") + c + "'");
    }
}

PauliOperator PauliOperator::from_string(std::string_view text) {
    PauliOperator r(text.size());
    for (size_t q = 0; q < text.size(); q++) {
        r.set(q, pauli_from_char(text[q]));
    }
    return r;
}

PauliOperator &PauliOperator::operator*=(const PauliOperator &other) {
    if (other.num_qubits() != num_qubits()) {
        throw UsageError("Pauli operators act on different numbers of qubits");
    }
    xs ^= other.xs;
    zs ^= other.zs;
    return *this;
}

bool PauliOperator::commutes(const PauliOperator &other) const {
    if (other.num_qubits() != num_qubits()) {
        throw UsageError("Pauli operators act on different numbers of qubits");
    }
    return xs.dot(other.zs) == zs.dot(other.xs);
}

size_t PauliOperator::weight() const {
    size_t n = 0;
    for (size_t w = 0; w < xs.num_words(); w++) {
        n += std::popcount(xs.data()[w] | zs.data()[w]);
    }
    return n;
}

std::string PauliOperator::str() const {
    std::string s(num_qubits(), 'I');
    for (size_t q = 0; q < num_qubits(); q++) {
        s[q] = pauli_char(get(q));
    }
    return s;
}

PauliOperator compose(const PauliOperator &a, const PauliOperator &b) {
    return a * b;
}

bool commutes(const PauliOperator &a, const PauliOperator &b) {
    return a.commutes(b);
}

}  // namespace xysurf
