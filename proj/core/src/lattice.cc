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

#include "xysurf/lattice.h"

#include <iomanip>
#include <sstream>

#include "xysurf/errors.h"

namespace xysurf {

namespace {

/// Incrementally built echelon basis (rows reduced against earlier pivots).
struct IncrementalBasis {
    std::vector<BitVector> rows;
    std::vector<size_t> pivots;

    BitVector reduce(BitVector v) const {
        for (size_t i = 0; i < rows.size(); i++) {
            if (v[pivots[i]]) {
                v ^= rows[i];
            }
        }
        return v;
    }

    /// Adds v to the span; returns false if it was already there.
    bool insert(const BitVector &v) {
        BitVector r = reduce(v);
        std::vector<size_t> ones = r.ones();
        if (ones.empty()) {
            return false;
        }
        pivots.push_back(ones.front());
        rows.push_back(std::move(r));
        return true;
    }
};

bool symplectic_product(const BitVector &a, const BitVector &b, size_t n) {
    bool acc = false;
    for (auto k : a.ones()) {
        acc ^= b[k < n ? k + n : k - n];
    }
    return acc;
}

LogicalSet compute_logicals(const CodeLayout &layout, const std::vector<PauliOperator> &preferred) {
    size_t n = layout.num_faces();
    const auto &stabs = layout.stabilizers();

    // Centralizer: v = (x|z) with sz.x + sx.z = 0 for every stabilizer.
    BinaryMatrix constraints(0, 2 * n);
    for (const auto &s : stabs) {
        BitVector row(2 * n);
        for (auto q : s.zs.ones()) {
            row.set(q, true);
        }
        for (auto q : s.xs.ones()) {
            row.set(n + q, true);
        }
        constraints.append_row(std::move(row));
    }

    IncrementalBasis span;
    for (const auto &s : stabs) {
        span.insert(symplectic_row(s));
    }
    std::vector<BitVector> candidates;
    auto consider = [&](const BitVector &v) {
        if (span.insert(v)) {
            candidates.push_back(v);
        }
    };
    for (const auto &p : preferred) {
        consider(symplectic_row(p));
    }
    for (const auto &v : constraints.nullspace()) {
        consider(v);
    }

    // Symplectic Gram-Schmidt over the logical candidates.
    LogicalSet out;
    while (!candidates.empty()) {
        BitVector a = candidates.front();
        candidates.erase(candidates.begin());
        size_t partner = candidates.size();
        for (size_t k = 0; k < candidates.size(); k++) {
            if (symplectic_product(a, candidates[k], n)) {
                partner = k;
                break;
            }
        }
        if (partner == candidates.size()) {
            throw InternalError("logical candidate without a conjugate partner");
        }
        BitVector b = candidates[partner];
        candidates.erase(candidates.begin() + partner);
        for (auto &v : candidates) {
            bool with_b = symplectic_product(v, b, n);
            bool with_a = symplectic_product(v, a, n);
            if (with_b) {
                v ^= a;
            }
            if (with_a) {
                v ^= b;
            }
        }
        out.a.push_back(pauli_from_symplectic(a, n));
        out.b.push_back(pauli_from_symplectic(b, n));
    }
    return out;
}

}  // namespace

std::string boundary_name(Boundary b) {
    return b == Boundary::periodic ? "periodic" : "open";
}

Boundary parse_boundary(const std::string &text) {
    if (text == "periodic" || text == "torus") {
        return Boundary::periodic;
    }
    if (text == "open") {
        return Boundary::open;
    }
    throw UsageError("boundary must be 'periodic' or 'open', got '" + text + "'");
}

int CodeLayout::vertex_index(int r, int c) const {
    int n = vertex_extent();
    if (periodic()) {
        r = ((r % n) + n) % n;
        c = ((c % n) + n) % n;
    } else if (r < 0 || r >= n || c < 0 || c >= n) {
        throw UsageError("vertex coordinate outside the open lattice");
    }
    return r * n + c;
}

std::vector<int> CodeLayout::corner_vertices() const {
    if (periodic()) {
        return {};
    }
    return {vertex_index(0, 0), vertex_index(0, d_), vertex_index(d_, 0), vertex_index(d_, d_)};
}

BitVector CodeLayout::syndrome(const PauliOperator &error) const {
    if (static_cast<int>(error.num_qubits()) != num_faces()) {
        throw UsageError("error size does not match the layout");
    }
    BitVector s(stabilized_.size());
    // X stabilizers see the z component; Y stabilizers see x xor z.
    for (int f = 0; f < num_faces(); f++) {
        bool x = error.xs[f];
        bool z = error.zs[f];
        if (!x && !z) {
            continue;
        }
        for (int v : face_corners_[f]) {
            int k = stabilizer_of_vertex_[v];
            if (k < 0) {
                continue;
            }
            bool hit = color(v) == VertexColor::black ? z : (x != z);
            if (hit) {
                s.flip(k);
            }
        }
    }
    return s;
}

std::string CodeLayout::render() const {
    std::ostringstream out;
    int n = vertex_extent();
    out << boundary_name(boundary_) << " d=" << d_ << " stabilizers=" << stabilized_.size() << "\n";
    for (int r = 0; r < n; r++) {
        for (int c = 0; c < n; c++) {
            int v = r * n + c;
            char mark = '.';
            if (is_stabilized(v)) {
                mark = color(v) == VertexColor::black ? 'X' : 'Y';
            }
            out << mark;
            if (c + 1 < n || periodic()) {
                out << "---";
            }
        }
        out << "\n";
        if (r + 1 < n || periodic()) {
            for (int c = 0; c < n; c++) {
                out << "|";
                if (c < d_) {
                    out << std::left << std::setw(3) << face_index(r % d_, c);
                }
            }
            out << "\n";
        }
    }
    return out.str();
}

CodeLayout build_code(int d, Boundary boundary) {
    if (d < 3) {
        throw UsageError("code distance must be at least 3");
    }
    if (boundary == Boundary::periodic && d % 2 != 0) {
        throw UsageError("periodic layouts need an even distance for a consistent vertex colouring");
    }
    if (boundary == Boundary::open && d % 2 == 0) {
        throw UsageError("open layouts need an odd distance");
    }

    CodeLayout L;
    L.d_ = d;
    L.boundary_ = boundary;
    int n = L.vertex_extent();
    L.stabilizer_of_vertex_.assign(n * n, -1);
    L.vertex_faces_.assign(n * n, {});
    L.face_corners_.resize(d * d);

    for (int r = 0; r < d; r++) {
        for (int c = 0; c < d; c++) {
            int f = r * d + c;
            L.face_corners_[f] = {L.vertex_index(r, c), L.vertex_index(r, c + 1), L.vertex_index(r + 1, c),
                                  L.vertex_index(r + 1, c + 1)};
            for (int v : L.face_corners_[f]) {
                L.vertex_faces_[v].push_back(f);
            }
        }
    }

    for (int r = 0; r < n; r++) {
        for (int c = 0; c < n; c++) {
            bool stabilized = true;
            if (boundary == Boundary::open) {
                bool ns = (r == 0 || r == d) && c > 0 && c < d;
                bool ew = (c == 0 || c == d) && r > 0 && r < d;
                bool corner = (r == 0 || r == d) && (c == 0 || c == d);
                if (corner) {
                    stabilized = false;
                } else if (ns) {
                    stabilized = color_of(r, c) == VertexColor::black;
                } else if (ew) {
                    stabilized = color_of(r, c) == VertexColor::white;
                }
                if (!stabilized) {
                    L.unstabilized_boundary_.push_back(r * n + c);
                }
            }
            if (stabilized) {
                L.stabilizer_of_vertex_[r * n + c] = static_cast<int>(L.stabilized_.size());
                L.stabilized_.push_back(r * n + c);
            }
        }
    }

    for (int v : L.stabilized_) {
        PauliOperator s(d * d);
        Pauli kind = L.color(v) == VertexColor::black ? Pauli::X : Pauli::Y;
        for (int f : L.vertex_faces_[v]) {
            s.set(f, kind);
        }
        L.stabilizers_.push_back(std::move(s));
    }

    // Validate rather than assume the construction.
    for (size_t i = 0; i < L.stabilizers_.size(); i++) {
        for (size_t j = i + 1; j < L.stabilizers_.size(); j++) {
            if (!L.stabilizers_[i].commutes(L.stabilizers_[j])) {
                throw InternalError("constructed stabilizers do not commute");
            }
        }
    }
    auto group = std::make_shared<PauliGroupBasis>(L.stabilizers_);
    size_t expected_rank = boundary == Boundary::periodic ? d * d - 2 : d * d - 1;
    if (group->rank() != expected_rank) {
        throw InternalError("stabilizer rank " + std::to_string(group->rank()) + " differs from expected " +
                            std::to_string(expected_rank));
    }
    L.group_ = group;

    std::vector<PauliOperator> preferred;
    if (boundary == Boundary::periodic) {
        preferred.push_back(z_row_ring(L, 0));
        preferred.push_back(z_column_ring(L, 0));
    } else {
        PauliOperator all_z(d * d);
        for (int f = 0; f < d * d; f++) {
            all_z.set(f, Pauli::Z);
        }
        preferred.push_back(all_z);
    }
    auto logicals = std::make_shared<LogicalSet>(compute_logicals(L, preferred));
    size_t expected_k = boundary == Boundary::periodic ? 2 : 1;
    if (logicals->num_logical_qubits() != expected_k) {
        throw InternalError("unexpected number of logical qubits");
    }
    L.logicals_ = logicals;
    return L;
}

PauliOperator stabilizer_of(const CodeLayout &layout, int vertex) {
    if (vertex < 0 || vertex >= layout.num_vertices() || !layout.is_stabilized(vertex)) {
        throw UsageError("vertex " + std::to_string(vertex) + " carries no stabilizer");
    }
    return layout.stabilizers()[layout.stabilizer_index(vertex)];
}

std::vector<SymmetryLine> symmetry_lines(const CodeLayout &layout) {
    if (!layout.periodic()) {
        throw UsageError("symmetry lines are defined for periodic layouts");
    }
    int d = layout.distance();
    std::vector<SymmetryLine> lines;
    for (int r = 0; r < d; r++) {
        SymmetryLine line{SymmetryLine::Orientation::row, r, {}};
        for (int c = 0; c < d; c++) {
            line.vertices.push_back(layout.vertex_index(r, c));
        }
        lines.push_back(std::move(line));
    }
    for (int c = 0; c < d; c++) {
        SymmetryLine line{SymmetryLine::Orientation::column, c, {}};
        for (int r = 0; r < d; r++) {
            line.vertices.push_back(layout.vertex_index(r, c));
        }
        lines.push_back(std::move(line));
    }
    return lines;
}

const LogicalSet &logical_operators(const CodeLayout &layout) {
    return layout.logicals();
}

PauliOperator z_row_ring(const CodeLayout &layout, int r) {
    if (!layout.periodic()) {
        throw UsageError("Z rings only wind periodic layouts");
    }
    int d = layout.distance();
    PauliOperator p(d * d);
    for (int c = 0; c < d; c++) {
        p.set(layout.face_index(r, c), Pauli::Z);
    }
    return p;
}

PauliOperator z_column_ring(const CodeLayout &layout, int c) {
    if (!layout.periodic()) {
        throw UsageError("Z rings only wind periodic layouts");
    }
    int d = layout.distance();
    PauliOperator p(d * d);
    for (int r = 0; r < d; r++) {
        p.set(layout.face_index(r, c), Pauli::Z);
    }
    return p;
}

}  // namespace xysurf
