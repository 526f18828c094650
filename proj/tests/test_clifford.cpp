// Copyright 2026 The wwmsim Authors
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

#include <gtest/gtest.h>

#include <random>

#include "wwm/clifford.hpp"
#include "wwm/phasespace.hpp"

using namespace wwm;

namespace {

const FloatOps FL{3};

ComplexOperator random_density(size_t D, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    ComplexOperator A(D, 0.0);
    for (size_t i = 0; i < D; i++) {
        for (size_t j = 0; j < D; j++) {
            A(i, j) = {g(rng), g(rng)};
        }
    }
    auto rho = A * adjoint(A);
    auto t = rho.trace();
    for (auto &v : rho.e) {
        v /= t;
    }
    return rho;
}

/// W_{U rho U^dag}(x) == W_rho(M^{-1} x) at every phase point.
bool covariant(const ComplexOperator &U, const AffineSymplectic &M, const ComplexOperator &rho, size_t n) {
    auto out = weyl_symbol(U * rho * adjoint(U), n, FL);
    auto in = weyl_symbol(rho, n, FL);
    auto Mi = inverse(M);
    for (uint64_t idx = 0; idx < out.values.size(); idx++) {
        auto x = PhasePoint::from_index(idx, n, 3);
        if (std::abs(out.values[idx] - in.at(Mi.apply(x))) > 1e-10) {
            return false;
        }
    }
    return true;
}

ComplexOperator unitary_power(size_t i, size_t j, size_t n, int64_t pow) {
    auto U = cnot_unitary(i, j, n, FL);
    auto R = identity_matrix(U.dim, FL);
    for (int64_t k = 0; k < pow; k++) {
        R = U * R;
    }
    return R;
}

}  // namespace

TEST(CnotMap, ImageAndOrder) {
    auto c = cnot_map(1, 2, 2, 3);
    // (x_p1, x_p2, x_q1, x_q2) = (1, 0, 1, 0) -> (1, 2, 1, 0)
    EXPECT_EQ(c.apply(std::vector<int64_t>{1, 0, 1, 0}), (std::vector<int64_t>{1, 2, 1, 0}));
    EXPECT_EQ(compose({c, c, c}), AffineSymplectic::identity(2, 3));
    EXPECT_TRUE(is_symplectic(c));
    EXPECT_THROW(cnot_map(1, 1, 2, 3), std::invalid_argument);
    EXPECT_THROW(cnot_map(1, 3, 2, 3), std::invalid_argument);
}

TEST(Compose, IdentityInverseAndSymplectic) {
    std::mt19937_64 rng(4);
    EXPECT_EQ(compose({AffineSymplectic::identity(3, 3)}), AffineSymplectic::identity(3, 3));
    for (int t = 0; t < 100; t++) {
        size_t n = 2 + t % 4;
        std::vector<AffineSymplectic> seq;
        size_t g = 1 + rng() % 10;
        for (size_t k = 0; k < g; k++) {
            size_t i = 1 + rng() % n, j;
            do {
                j = 1 + rng() % n;
            } while (j == i);
            seq.push_back(cnot_map(i, j, n, 3));
        }
        auto A = compose(seq);
        EXPECT_TRUE(is_symplectic(A));
        EXPECT_EQ(compose({A, inverse(A)}), AffineSymplectic::identity(n, 3));
    }
}

TEST(Compose, LeftToRightLaw) {
    auto a = cnot_map(1, 2, 2, 3), b = cnot_map(2, 1, 2, 3);
    std::vector<int64_t> x{1, 2, 0, 1};
    EXPECT_EQ(compose({a, b}).apply(x), b.apply(a.apply(x)));
    EXPECT_THROW(compose({a, cnot_map(1, 2, 3, 3)}), std::invalid_argument);
}

TEST(Canned, SequencesAreSymplecticAndInvertible) {
    for (auto name : {"C3", "C6", "C12"}) {
        auto s = canned_sequence(name);
        EXPECT_EQ(s.n, canned_size(name));
        EXPECT_TRUE(is_symplectic(s)) << name;
        EXPECT_NE(determinant(s.M), 0) << name;
    }
    EXPECT_EQ(canned_gates("C3").size(), 3u);
    EXPECT_EQ(canned_gates("C6").size(), 24u);
    EXPECT_EQ(canned_gates("C12").size(), 45u);
    EXPECT_THROW(canned_sequence("C5"), std::invalid_argument);
}

TEST(Canned, C3SubstitutionsAsStated) {
    // C(1,2)^2: y1 -> y1 - y2; C(1,3)^2: y1 -> y1 - y3; C(2,3): y2 -> y2 + y3.
    auto g = canned_gates("C3");
    auto q = [&](const GateToken &t) {
        return power(cnot_map(t.i, t.j, 3, 3), t.pow).q_block();
    };
    auto g0 = q(g[0]), g1 = q(g[1]), g2 = q(g[2]);
    EXPECT_EQ(g0(0, 0), 1);
    EXPECT_EQ(g0(0, 1), 2);
    EXPECT_EQ(g1(0, 2), 2);
    EXPECT_EQ(g2(1, 1), 1);
    EXPECT_EQ(g2(1, 2), 1);
    // Successive substitution: y1 -> y1 - y2 + y3, y2 -> y2 + y3.
    ModMatrix expect = ModMatrix::identity(3, 3);
    expect(0, 1) = 2;
    expect(0, 2) = 1;
    expect(1, 2) = 1;
    EXPECT_EQ(canned_sequence("C3").q_block(), expect);
}

TEST(Canned, GateListParser) {
    auto g = parse_gate_list("# comment\nC 1 2 2\n\nC 2 3 1  # trailing\n");
    ASSERT_EQ(g.size(), 2u);
    EXPECT_EQ(g[0].pow, 2);
    EXPECT_EQ(g[1].j, 3u);
    EXPECT_THROW(parse_gate_list("X 1 2 1\n"), std::invalid_argument);
}

TEST(CnotUnitary, DefinitionAndUnitarity) {
    auto U = cnot_unitary(1, 2, 2, FL);
    // |1,1> -> |1,2>
    EXPECT_EQ(U(basis_index({1, 2}, 3), basis_index({1, 1}, 3)), std::complex<double>(1, 0));
    EXPECT_TRUE(same_matrix(U * adjoint(U), identity_matrix(9, FL), 1e-15));
    EXPECT_THROW(cnot_unitary(1, 2, 7, FL), std::length_error);
}

TEST(Covariance, RandomStatesTwoQudits) {
    std::mt19937_64 rng(10);
    for (int t = 0; t < 20; t++) {
        auto rho = random_density(9, rng);
        // cnot_map(i, j) pairs with the unitary of control j, target i.
        EXPECT_TRUE(covariant(cnot_unitary(2, 1, 2, FL), cnot_map(1, 2, 2, 3), rho, 2));
        EXPECT_TRUE(covariant(cnot_unitary(1, 2, 2, FL), cnot_map(2, 1, 2, 3), rho, 2));
    }
}

TEST(Covariance, EveryCannedGate) {
    std::mt19937_64 rng(12);
    auto rho3 = random_density(27, rng);
    for (const auto &t : canned_gates("C3")) {
        EXPECT_TRUE(covariant(unitary_power(t.j, t.i, 3, t.pow), power(cnot_map(t.i, t.j, 3, 3), t.pow), rho3, 3));
    }
    // Larger sequences: each gate checked on its own qudit pair.
    auto rho2 = random_density(9, rng);
    for (auto name : {"C6", "C12"}) {
        for (const auto &t : canned_gates(name)) {
            size_t a = t.i < t.j ? 1 : 2, b = 3 - a;
            EXPECT_TRUE(covariant(unitary_power(b, a, 2, t.pow), power(cnot_map(a, b, 2, 3), t.pow), rho2, 2))
                << name << " gate " << t.i << "," << t.j;
        }
    }
}

TEST(SubstitutionMap, EqualsReversedCompose) {
    auto g = canned_gates("C6");
    std::vector<AffineSymplectic> seq;
    for (auto it = g.rbegin(); it != g.rend(); ++it) {
        seq.push_back(power(cnot_map(it->i, it->j, 6, 3), it->pow));
    }
    EXPECT_EQ(substitution_map(g, 6, 3), compose(seq));
    EXPECT_EQ(substitution_map(g, 6, 3), canned_sequence("C6"));
}
