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

#include "xysurf/gf2.h"

#include "xysurf/errors.h"

namespace xysurf {

BinaryMatrix::BinaryMatrix(size_t num_rows, size_t num_cols) : num_cols_(num_cols) {
    rows_.assign(num_rows, BitVector(num_cols));
}

void BinaryMatrix::append_row(BitVector row) {
    if (rows_.empty() && num_cols_ == 0) {
        num_cols_ = row.size();
    }
    if (row.size() != num_cols_) {
        throw UsageError("row length does not match matrix width");
    }
    rows_.push_back(std::move(row));
}

std::vector<size_t> BinaryMatrix::reduce() {
    std::vector<size_t> pivots;
    size_t next = 0;
    for (size_t col = 0; col < num_cols_ && next < rows_.size(); col++) {
        size_t found = next;
        while (found < rows_.size() && !rows_[found][col]) {
            found++;
        }
        if (found == rows_.size()) {
            continue;
        }
        std::swap(rows_[next], rows_[found]);
        for (size_t r = 0; r < rows_.size(); r++) {
            if (r != next && rows_[r][col]) {
                rows_[r] ^= rows_[next];
            }
        }
        pivots.push_back(col);
        next++;
    }
    rows_.resize(next);
    return pivots;
}

size_t BinaryMatrix::rank() const {
    BinaryMatrix copy = *this;
    return copy.reduce().size();
}

std::vector<BitVector> BinaryMatrix::nullspace() const {
    BinaryMatrix red = *this;
    std::vector<size_t> pivots = red.reduce();
    std::vector<bool> is_pivot(num_cols_, false);
    for (auto p : pivots) {
        is_pivot[p] = true;
    }
    std::vector<BitVector> basis;
    for (size_t free_col = 0; free_col < num_cols_; free_col++) {
        if (is_pivot[free_col]) {
            continue;
        }
        BitVector v(num_cols_);
        v.set(free_col, true);
        for (size_t r = 0; r < pivots.size(); r++) {
            if (red.rows_[r][free_col]) {
                v.set(pivots[r], true);
            }
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<BitVector> BinaryMatrix::solve(const BitVector &rhs) const {
    if (rhs.size() != rows_.size()) {
        throw UsageError("right hand side length does not match row count");
    }
    // Augment with the right hand side as an extra column.
    BinaryMatrix aug(0, num_cols_ + 1);
    for (size_t r = 0; r < rows_.size(); r++) {
        BitVector row(num_cols_ + 1);
        for (auto c : rows_[r].ones()) {
            row.set(c, true);
        }
        row.set(num_cols_, rhs[r]);
        aug.append_row(std::move(row));
    }
    std::vector<size_t> pivots = aug.reduce();
    BitVector x(num_cols_);
    for (size_t r = 0; r < pivots.size(); r++) {
        if (pivots[r] == num_cols_) {
            return std::nullopt;
        }
        if (aug.rows_[r][num_cols_]) {
            x.set(pivots[r], true);
        }
    }
    return x;
}

BitVector symplectic_row(const PauliOperator &p) {
    size_t n = p.num_qubits();
    BitVector row(2 * n);
    for (auto q : p.xs.ones()) {
        row.set(q, true);
    }
    for (auto q : p.zs.ones()) {
        row.set(n + q, true);
    }
    return row;
}

PauliOperator pauli_from_symplectic(const BitVector &row, size_t num_qubits) {
    if (row.size() != 2 * num_qubits) {
        throw UsageError("symplectic row has wrong length");
    }
    PauliOperator p(num_qubits);
    for (auto k : row.ones()) {
        if (k < num_qubits) {
            p.xs.set(k, true);
        } else {
            p.zs.set(k - num_qubits, true);
        }
    }
    return p;
}

BinaryMatrix symplectic_matrix(const std::vector<PauliOperator> &generators) {
    size_t n = generators.empty() ? 0 : generators[0].num_qubits();
    BinaryMatrix m(0, 2 * n);
    for (const auto &g : generators) {
        if (g.num_qubits() != n) {
            throw UsageError("generators act on different numbers of qubits");
        }
        m.append_row(symplectic_row(g));
    }
    return m;
}

size_t rank(const BinaryMatrix &m) {
    return m.rank();
}

bool in_group(const PauliOperator &p, const std::vector<PauliOperator> &generators) {
    return PauliGroupBasis(generators).contains(p);
}

PauliGroupBasis::PauliGroupBasis(const std::vector<PauliOperator> &generators) {
    num_qubits_ = generators.empty() ? 0 : generators[0].num_qubits();
    BinaryMatrix m = symplectic_matrix(generators);
    pivots_ = m.reduce();
    for (size_t r = 0; r < m.num_rows(); r++) {
        rows_.push_back(m.row(r));
    }
}

bool PauliGroupBasis::contains(const PauliOperator &p) const {
    if (p.num_qubits() != num_qubits_) {
        throw UsageError("operator size does not match group");
    }
    BitVector v = symplectic_row(p);
    // Rows are in reduced echelon form, so one pass in pivot order suffices.
    for (size_t r = 0; r < rows_.size(); r++) {
        if (v[pivots_[r]]) {
            v ^= rows_[r];
        }
    }
    return v.none();
}

}  // namespace xysurf
