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

#ifndef XYSURF_LATTICE_H
#define XYSURF_LATTICE_H

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "xysurf/bit_vector.h"
#include "xysurf/gf2.h"
#include "xysurf/pauli.h"

namespace xysurf {

enum class Boundary : uint8_t { periodic, open };

std::string boundary_name(Boundary b);
Boundary parse_boundary(const std::string &text);

/// Black vertices carry X-type stabilizers, white vertices Y-type.
enum class VertexColor : uint8_t { black, white };

inline VertexColor color_of(int r, int c) {
    return ((r + c) & 1) ? VertexColor::white : VertexColor::black;
}

struct SymmetryLine {
    enum class Orientation : uint8_t { row, column };
    Orientation orientation;
    int index;
    std::vector<int> vertices;
};

/// One conjugate pair (a[i], b[i]) per logical qubit.
struct LogicalSet {
    std::vector<PauliOperator> a;
    std::vector<PauliOperator> b;

    size_t num_logical_qubits() const {
        return a.size();
    }
};

/// Geometry of the XY surface code: qubits on the d x d faces of a square
/// lattice, stabilizers on (a subset of) its vertices.
///
/// Face (r, c) has corner vertices (r, c), (r, c+1), (r+1, c), (r+1, c+1).
/// Periodic layouts identify vertex rows/columns modulo d (d even, so the
/// two-colouring survives the wraparound). Open layouts use vertices
/// 0..d in each direction (d odd).
class CodeLayout {
   public:
    int distance() const {
        return d_;
    }
    Boundary boundary() const {
        return boundary_;
    }
    bool periodic() const {
        return boundary_ == Boundary::periodic;
    }

    int num_faces() const {
        return d_ * d_;
    }
    int face_index(int r, int c) const {
        return r * d_ + c;
    }
    int face_row(int f) const {
        return f / d_;
    }
    int face_col(int f) const {
        return f % d_;
    }

    /// Vertex coordinates run over [0, vertex_extent()).
    int vertex_extent() const {
        return periodic() ? d_ : d_ + 1;
    }
    int num_vertices() const {
        return vertex_extent() * vertex_extent();
    }
    /// Wraps coordinates on the torus; open layouts require in-range input.
    int vertex_index(int r, int c) const;
    int vertex_row(int v) const {
        return v / vertex_extent();
    }
    int vertex_col(int v) const {
        return v % vertex_extent();
    }
    VertexColor color(int v) const {
        return color_of(vertex_row(v), vertex_col(v));
    }

    bool is_stabilized(int v) const {
        return stabilizer_of_vertex_[v] >= 0;
    }
    /// Index of v's stabilizer among stabilized_vertices(), or -1.
    int stabilizer_index(int v) const {
        return stabilizer_of_vertex_[v];
    }
    const std::vector<int> &stabilized_vertices() const {
        return stabilized_;
    }
    int num_stabilizers() const {
        return static_cast<int>(stabilized_.size());
    }

    /// Faces touching vertex v (1 to 4 of them).
    const std::vector<int> &faces_of_vertex(int v) const {
        return vertex_faces_[v];
    }
    /// Corner vertices of face f in the order (r,c), (r,c+1), (r+1,c), (r+1,c+1).
    const std::array<int, 4> &corners_of_face(int f) const {
        return face_corners_[f];
    }

    /// Boundary vertices without a stabilizer (open layouts only), ascending.
    const std::vector<int> &unstabilized_boundary_vertices() const {
        return unstabilized_boundary_;
    }
    /// The four lattice corners (open layouts only).
    std::vector<int> corner_vertices() const;

    const std::vector<PauliOperator> &stabilizers() const {
        return stabilizers_;
    }
    const PauliGroupBasis &stabilizer_group() const {
        return *group_;
    }
    const LogicalSet &logicals() const {
        return *logicals_;
    }

    /// Syndrome bit for every stabilizer (indexed like stabilized_vertices()).
    BitVector syndrome(const PauliOperator &error) const;

    /// Text rendering of the stabilizer pattern for debugging.
    std::string render() const;

   private:
    friend CodeLayout build_code(int d, Boundary boundary);
    CodeLayout() = default;

    int d_ = 0;
    Boundary boundary_ = Boundary::periodic;
    std::vector<int> stabilized_;
    std::vector<int> stabilizer_of_vertex_;
    std::vector<std::vector<int>> vertex_faces_;
    std::vector<std::array<int, 4>> face_corners_;
    std::vector<int> unstabilized_boundary_;
    std::vector<PauliOperator> stabilizers_;
    std::shared_ptr<const PauliGroupBasis> group_;
    std::shared_ptr<const LogicalSet> logicals_;
};

/// Builds and validates a layout. Periodic layouts need even d >= 4, open
/// layouts odd d >= 3.
CodeLayout build_code(int d, Boundary boundary);

PauliOperator stabilizer_of(const CodeLayout &layout, int vertex);

/// Rows and columns of vertices on a periodic layout.
std::vector<SymmetryLine> symmetry_lines(const CodeLayout &layout);

const LogicalSet &logical_operators(const CodeLayout &layout);

/// Pure-Z ring on face-row r of a periodic layout.
PauliOperator z_row_ring(const CodeLayout &layout, int r);
/// Pure-Z ring on face-column c of a periodic layout.
PauliOperator z_column_ring(const CodeLayout &layout, int c);

}  // namespace xysurf

#endif  // XYSURF_LATTICE_H
