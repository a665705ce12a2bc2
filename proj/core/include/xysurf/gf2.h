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

#ifndef XYSURF_GF2_H
#define XYSURF_GF2_H

#include <optional>
#include <vector>

#include "xysurf/bit_vector.h"
#include "xysurf/pauli.h"

namespace xysurf {

/// Dense matrix over GF(2) stored as packed rows.
class BinaryMatrix {
   public:
    BinaryMatrix() = default;
    BinaryMatrix(size_t num_rows, size_t num_cols);

    size_t num_rows() const {
        return rows_.size();
    }
    size_t num_cols() const {
        return num_cols_;
    }

    bool get(size_t r, size_t c) const {
        return rows_[r][c];
    }
    void set(size_t r, size_t c, bool value) {
        rows_[r].set(c, value);
    }
    const BitVector &row(size_t r) const {
        return rows_[r];
    }
    void append_row(BitVector row);

    /// Reduces in place to reduced row echelon form and drops zero rows.
    /// Returns the pivot column of each remaining row.
    std::vector<size_t> reduce();

    size_t rank() const;

    /// Basis of {v : M v = 0}.
    std::vector<BitVector> nullspace() const;

    /// Some v with M v = rhs, if one exists.
    std::optional<BitVector> solve(const BitVector &rhs) const;

   private:
    size_t num_cols_ = 0;
    std::vector<BitVector> rows_;
};

/// Symplectic row vector (x | z) of a Pauli operator.
BitVector symplectic_row(const PauliOperator &p);
PauliOperator pauli_from_symplectic(const BitVector &row, size_t num_qubits);

/// Stabilizer generators (possibly dependent) stacked as symplectic rows.
BinaryMatrix symplectic_matrix(const std::vector<PauliOperator> &generators);

size_t rank(const BinaryMatrix &m);

/// Membership test against the group generated by `generators`.
bool in_group(const PauliOperator &p, const std::vector<PauliOperator> &generators);

/// Precomputed echelon basis of a Pauli group for repeated membership tests.
class PauliGroupBasis {
   public:
    PauliGroupBasis() = default;
    explicit PauliGroupBasis(const std::vector<PauliOperator> &generators);

    size_t num_qubits() const {
        return num_qubits_;
    }
    size_t rank() const {
        return rows_.size();
    }
    bool contains(const PauliOperator &p) const;

   private:
    size_t num_qubits_ = 0;
    std::vector<BitVector> rows_;
    std::vector<size_t> pivots_;
};

}  // namespace xysurf

#endif  // XYSURF_GF2_H
