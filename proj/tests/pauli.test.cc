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

#include <gtest/gtest.h>

#include <random>

#include "xysurf/errors.h"
#include "xysurf/gf2.h"

using namespace xysurf;

namespace {

PauliOperator single(size_t n, size_t q, Pauli p) {
    PauliOperator op(n);
    op.set(q, p);
    return op;
}

PauliOperator random_pauli(size_t n, std::mt19937_64 &rng) {
    PauliOperator op(n);
    for (size_t q = 0; q < n; q++) {
        op.set(q, static_cast<Pauli>(rng() & 3));
    }
    return op;
}

// Stabilizers of the X/Y vertex code on a d x d torus, without validation.
std::vector<PauliOperator> raw_torus_generators(int d) {
    std::vector<PauliOperator> gens;
    for (int r = 0; r < d; r++) {
        for (int c = 0; c < d; c++) {
            PauliOperator s(d * d);
            Pauli kind = (r + c) % 2 ? Pauli::Y : Pauli::X;
            for (auto [dr, dc] : {std::pair{-1, -1}, {-1, 0}, {0, -1}, {0, 0}}) {
                int fr = (r + dr + d) % d;
                int fc = (c + dc + d) % d;
                s.set(fr * d + fc, kind);
            }
            gens.push_back(s);
        }
    }
    return gens;
}

}  // namespace

TEST(pauli, compose_examples) {
    auto x0 = single(4, 0, Pauli::X);
    auto z0 = single(4, 0, Pauli::Z);
    EXPECT_TRUE(compose(x0, x0).is_identity());
    auto y = compose(x0, z0);
    EXPECT_EQ(y.get(0), Pauli::Y);
    EXPECT_TRUE(y.xs[0] && y.zs[0]);
    auto z3 = single(4, 3, Pauli::Z);
    EXPECT_EQ(compose(PauliOperator(4), z3), z3);
    EXPECT_THROW(compose(x0, PauliOperator(5)), UsageError);
}

TEST(pauli, commutes_examples) {
    EXPECT_FALSE(commutes(single(2, 0, Pauli::X), single(2, 0, Pauli::Z)));
    EXPECT_TRUE(commutes(single(2, 0, Pauli::Z), single(2, 1, Pauli::Z)));
    EXPECT_FALSE(commutes(single(2, 0, Pauli::Y), single(2, 0, Pauli::X)));
    EXPECT_THROW(commutes(PauliOperator(2), PauliOperator(3)), UsageError);
}

TEST(pauli, string_round_trip) {
    auto p = PauliOperator::from_string("IXYZ_");
    EXPECT_EQ(p.str(), "IXYZI");
    EXPECT_EQ(p.weight(), 3u);
    EXPECT_THROW(PauliOperator::from_string("IQ"), UsageError);
}

TEST(pauli, symplectic_form_properties) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 500; trial++) {
        size_t n = 1 + rng() % 130;
        auto p = random_pauli(n, rng);
        auto q = random_pauli(n, rng);
        auto r = random_pauli(n, rng);
        EXPECT_EQ(commutes(p, q), commutes(q, p));
        bool lhs = !commutes(compose(p, q), r);
        bool rhs = (!commutes(p, r)) != (!commutes(q, r));
        EXPECT_EQ(lhs, rhs);
    }
}

TEST(gf2, rank_examples) {
    BinaryMatrix id(7, 7);
    for (size_t k = 0; k < 7; k++) {
        id.set(k, k, true);
    }
    EXPECT_EQ(rank(id), 7u);
    EXPECT_EQ(rank(BinaryMatrix(5, 9)), 0u);
    EXPECT_EQ(rank(symplectic_matrix(raw_torus_generators(4))), 14u);
}

TEST(gf2, in_group_examples) {
    auto gens = raw_torus_generators(3);
    EXPECT_TRUE(in_group(PauliOperator(9), gens));
    EXPECT_TRUE(in_group(compose(gens[0], gens[4]), gens));
    EXPECT_FALSE(in_group(single(9, 4, Pauli::Z), gens));
}

TEST(gf2, nullspace_and_solve) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; trial++) {
        size_t rows = 1 + rng() % 12;
        size_t cols = 1 + rng() % 20;
        BinaryMatrix m(rows, cols);
        for (size_t r = 0; r < rows; r++) {
            for (size_t c = 0; c < cols; c++) {
                m.set(r, c, rng() & 1);
            }
        }
        auto basis = m.nullspace();
        EXPECT_EQ(basis.size() + m.rank(), cols);
        for (const auto &v : basis) {
            for (size_t r = 0; r < rows; r++) {
                EXPECT_FALSE(m.row(r).dot(v));
            }
        }
        BitVector x(cols);
        for (size_t c = 0; c < cols; c++) {
            x.set(c, rng() & 1);
        }
        BitVector rhs(rows);
        for (size_t r = 0; r < rows; r++) {
            rhs.set(r, m.row(r).dot(x));
        }
        auto sol = m.solve(rhs);
        ASSERT_TRUE(sol.has_value());
        for (size_t r = 0; r < rows; r++) {
            EXPECT_EQ(m.row(r).dot(*sol), rhs[r]);
        }
    }
}

TEST(gf2, in_group_matches_enumeration) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 60; trial++) {
        size_t n = 2 + rng() % 5;
        size_t g = 1 + rng() % 12;
        std::vector<PauliOperator> gens;
        for (size_t k = 0; k < g; k++) {
            gens.push_back(random_pauli(n, rng));
        }
        // Every element of the group by enumeration.
        std::vector<PauliOperator> group;
        for (uint32_t mask = 0; mask < (1u << g); mask++) {
            PauliOperator acc(n);
            for (size_t k = 0; k < g; k++) {
                if (mask >> k & 1) {
                    acc *= gens[k];
                }
            }
            group.push_back(acc);
        }
        PauliGroupBasis basis(gens);
        for (int probe = 0; probe < 20; probe++) {
            auto p = random_pauli(n, rng);
            bool expected = std::find(group.begin(), group.end(), p) != group.end();
            EXPECT_EQ(basis.contains(p), expected);
            EXPECT_EQ(in_group(p, gens), expected);
        }
    }
}
