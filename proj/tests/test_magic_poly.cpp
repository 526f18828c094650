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

#include <array>
#include <numeric>
#include <random>

#include "wwm/magic_poly.hpp"

using namespace wwm;

namespace {

const Modulus kMd = Modulus::checked(3, 2);

/// Exact dense Wigner table of |T>^k.
const WignerTable &dense_magic(size_t k) {
    static std::map<size_t, WignerTable> cache;
    auto it = cache.find(k);
    if (it == cache.end()) {
        auto psi = magic_state_vector(k, kMd);
        it = cache.emplace(k, weyl_symbol(outer(psi, psi), k, ExactOps{kMd})).first;
    }
    return it->second;
}

/// Product of single-qutrit table values.
CyclotomicAmplitude product_oracle(const PhasePoint &x) {
    const auto &one = dense_magic(1);
    auto v = CyclotomicAmplitude::integer(kMd, 1);
    for (size_t i = 0; i < x.n(); i++) {
        v = v * one.exact[(uint64_t)(mod(x.xp[i], 3) * 3 + mod(x.xq[i], 3))];
    }
    return v;
}

PhasePoint random_point(std::mt19937_64 &rng, size_t n) {
    PhasePoint x;
    for (size_t i = 0; i < n; i++) {
        x.xp.push_back((int64_t)(rng() % 3));
        x.xq.push_back((int64_t)(rng() % 3));
    }
    return x;
}

AffineSymplectic random_cnot_product(std::mt19937_64 &rng, size_t n) {
    std::vector<AffineSymplectic> seq;
    size_t g = 1 + rng() % 6;
    for (size_t t = 0; t < g; t++) {
        size_t i = 1 + rng() % n, j;
        do {
            j = 1 + rng() % n;
        } while (j == i);
        seq.push_back(cnot_map(i, j, n, 3));
    }
    return compose(seq);
}

/// Full y vector with the cubic entries filled in and zeros elsewhere.
std::vector<int64_t> full_y(size_t k, const VariableClassification &cls, const std::vector<int64_t> &cubic) {
    std::vector<int64_t> y(k, 0);
    for (size_t i = 0; i < cls.cubic.size(); i++) {
        y[cls.cubic[i]] = cubic[i];
    }
    return y;
}

std::vector<int64_t> printed_vals(size_t k, const std::vector<int64_t> &y, const PhasePoint &x) {
    std::vector<int64_t> v(3 * k);
    for (size_t i = 0; i < k; i++) {
        v[i] = y[i];
        v[k + i] = mod(-x.xp[i], 3);
        v[2 * k + i] = x.xq[i];
    }
    return v;
}

std::vector<int64_t> digits(uint64_t t, size_t n) {
    std::vector<int64_t> v(n);
    for (size_t i = 0; i < n; i++) {
        v[i] = (int64_t)(t % 3);
        t /= 3;
    }
    return v;
}

}  // namespace

TEST(SingleQutrit, MatchesDenseWigner) {
    auto one = single_qutrit_poly();
    const auto &W = dense_magic(1);
    for (uint64_t idx = 0; idx < 9; idx++) {
        EXPECT_EQ(one.evaluate(PhasePoint::from_index(idx, 1, 3)), W.exact[idx]) << idx;
    }
    // 7 y^3 and 8 xq^3 as in the two-qutrit display.
    EXPECT_EQ(one.P.terms.at(Monomial{0, 0, 0}), 7);
    EXPECT_EQ(one.P.terms.at(Monomial{2, 2, 2}), 8);
    EXPECT_EQ(one.P.degree(), 3u);
    EXPECT_EQ(one.prefactor, -2);
}

TEST(TensorPoly, DenseOracleSmallK) {
    for (size_t k = 1; k <= 3; k++) {
        auto p = tensor_poly(k);
        const auto &W = dense_magic(k);
        for (uint64_t idx = 0; idx < W.exact.size(); idx++) {
            ASSERT_EQ(p.evaluate(PhasePoint::from_index(idx, k, 3)), W.exact[idx]) << "k=" << k << " idx=" << idx;
        }
    }
    EXPECT_TRUE(tensor_poly(1).P == single_qutrit_poly().P);
    EXPECT_THROW(tensor_poly(0), std::invalid_argument);
}

TEST(TensorPoly, ProductOracleK2AndK6) {
    auto p2 = tensor_poly(2);
    for (uint64_t idx = 0; idx < 81; idx++) {
        auto x = PhasePoint::from_index(idx, 2, 3);
        EXPECT_EQ(p2.evaluate(x), product_oracle(x));
    }
    auto p6 = tensor_poly(6);
    std::mt19937_64 rng(6);
    for (int s = 0; s < 10000; s++) {
        auto x = random_point(rng, 6);
        ASSERT_EQ(p6.evaluate(x), product_oracle(x)) << "sample " << s;
    }
}

TEST(TransformPoly, IdentityIsNoop) {
    auto p = tensor_poly(3);
    auto q = transform_poly(p, ModMatrix::identity(3, 3), AffineSymplectic::identity(3, 3));
    EXPECT_TRUE(q.P == p.P);
}

TEST(TransformPoly, RandomYMapKeepsSum) {
    std::mt19937_64 rng(21);
    auto p = tensor_poly(3);
    for (int t = 0; t < 5; t++) {
        ModMatrix Q(3, 3, 3);
        do {
            for (auto &v : Q.a) {
                v = (int64_t)(rng() % 3);
            }
        } while (!inverse(Q));
        auto q = transform_poly(p, Q, AffineSymplectic::identity(3, 3));
        for (int s = 0; s < 20; s++) {
            auto x = random_point(rng, 3);
            EXPECT_EQ(q.evaluate(x), p.evaluate(x));
        }
    }
}

TEST(TransformPoly, RejectsSingularMap) {
    auto p = tensor_poly(2);
    ModMatrix Q(2, 2, 3);
    Q(0, 0) = 1;
    EXPECT_THROW(transform_poly(p, Q, AffineSymplectic::identity(2, 3)), std::invalid_argument);
}

TEST(TransformPoly, SoundnessOnRestrictedDomains) {
    // Transformed evaluation at x is the original at M x, so a sum over a
    // domain D equals the original summed over M(D).
    std::mt19937_64 rng(50);
    auto p = tensor_poly(2);
    const auto &W = dense_magic(2);
    for (int t = 0; t < 50; t++) {
        auto a = random_cnot_product(rng, 2);
        auto q = transform_poly(p, a);
        int64_t fix = (int64_t)(rng() % 3);
        auto lhs = CyclotomicAmplitude::integer(kMd, 0), rhs = lhs;
        for (uint64_t idx = 0; idx < 81; idx++) {
            auto x = PhasePoint::from_index(idx, 2, 3);
            if (x.xq[1] != fix) {
                continue;
            }
            lhs += q.evaluate(x);
            rhs += W.exact[a.apply(x).index(3)];
        }
        EXPECT_EQ(lhs, rhs) << "trial " << t;
    }
}

TEST(AppendixB, FixtureEqualsTransform) {
    auto a2 = appendix_fixture("A2");
    auto calc = transformed_magic_poly(2);
    EXPECT_TRUE(a2.P == calc.P);
    auto g = power(cnot_map(1, 2, 2, 3), 2);
    const auto &W = dense_magic(2);
    for (uint64_t idx = 0; idx < 81; idx++) {
        auto x = PhasePoint::from_index(idx, 2, 3);
        EXPECT_EQ(a2.evaluate(x), W.exact[g.apply(x).index(3)]) << idx;
    }
}

TEST(AppendixC, FixtureEqualsTransform) {
    EXPECT_TRUE(appendix_fixture("C3_FULL").P == transformed_magic_poly(3).P);
}

TEST(AppendixD, FixtureMatchesOracle) {
    auto p = appendix_fixture("C6_FULL");
    auto a = canned_sequence("C6");
    std::mt19937_64 rng(66);
    for (int s = 0; s < 2000; s++) {
        auto x = random_point(rng, 6);
        ASSERT_EQ(p.evaluate(x), product_oracle(a.apply(x))) << "sample " << s;
    }
}

TEST(Transformed, K6MatchesProductOracle) {
    auto p = transformed_magic_poly(6);
    auto a = canned_sequence("C6");
    std::mt19937_64 rng(67);
    for (int s = 0; s < 2000; s++) {
        auto x = random_point(rng, 6);
        ASSERT_EQ(p.evaluate(x), product_oracle(a.apply(x)));
    }
}

TEST(AppendixE, SigmaStructureAgrees) {
    // The full printed exponent is known to differ from the transform; the
    // y-only part must agree.
    auto printed = appendix_fixture("C12_FULL");
    auto calc = transformed_magic_poly(12);
    size_t k = 12;
    auto pure_y = [&](const Poly &P) {
        Poly r(P.modulus);
        for (const auto &[mono, c] : P.terms) {
            if (std::all_of(mono.begin(), mono.end(), [&](int16_t v) {
                    return (size_t)v < k;
                })) {
                r.add(mono, c);
            }
        }
        return r;
    };
    EXPECT_TRUE(pure_y(printed.P) == pure_y(calc.P));
    auto a = classify_variables(printed), b = classify_variables(calc);
    EXPECT_EQ(a.quadratic, b.quadratic);
}

TEST(Classification, CannedTransforms) {
    using V = std::vector<size_t>;
    EXPECT_EQ(classify_variables(transformed_magic_poly(2)).quadratic, V({1}));
    EXPECT_EQ(classify_variables(transformed_magic_poly(2)).cubic, V({0}));
    EXPECT_EQ(classify_variables(transformed_magic_poly(3)).quadratic, V({2}));
    auto c6 = classify_variables(transformed_magic_poly(6));
    EXPECT_EQ(c6.quadratic, V({1, 4, 5}));
    EXPECT_EQ(c6.cubic, V({0, 2, 3}));
    EXPECT_EQ(classify_variables(transformed_magic_poly(12)).quadratic, V({6, 7, 8, 9, 10, 11}));
    EXPECT_TRUE(classify_variables(tensor_poly(4)).quadratic.empty());
}

TEST(GaussSlice, AllZeroAssignmentIsPartialSum) {
    auto p = transformed_magic_poly(3);
    auto cls = classify_variables(p);
    PhasePoint x{{0, 0, 0}, {0, 0, 0}};
    auto s = gauss_slice(p, cls, {0, 0}, x);
    std::vector<int64_t> hist(9, 0);
    for (int64_t y3 = 0; y3 < 3; y3++) {
        hist[p.phase({0, 0, y3}, x)]++;
    }
    EXPECT_EQ(eval_closed(s), CyclotomicAmplitude::from_coeffs(kMd, hist));
    EXPECT_THROW(gauss_slice(p, cls, {0}, x), std::invalid_argument);
}

TEST(GaussSlice, SlicesSumToEvaluation) {
    std::mt19937_64 rng(8);
    for (size_t k : {3u, 6u}) {
        auto p = transformed_magic_poly(k);
        SliceEvaluator ev(p, classify_variables(p));
        size_t nc = ev.classification().cubic.size();
        for (int s = 0; s < 30; s++) {
            auto x = random_point(rng, k);
            ev.set_x(x);
            auto acc = CyclotomicAmplitude::integer(kMd, 0);
            for (uint64_t t = 0; t < ipow_u(3, nc); t++) {
                acc += ev.slice_value(digits(t, nc));
            }
            EXPECT_EQ(acc.scaled(-2 * p.prefactor), p.evaluate(x));
        }
    }
}

TEST(GaussSlice, C3CoefficientsMatchRecords) {
    const auto &fx = appendix_file("C");
    auto p = appendix_fixture("C3_FULL");
    auto cls = classify_variables(p);
    for (uint64_t idx = 0; idx < 729; idx++) {
        auto x = PhasePoint::from_index(idx, 3, 3);
        for (uint64_t t = 0; t < 9; t++) {
            auto c = digits(t, 2);
            auto s = gauss_slice(p, cls, c, x);
            auto vals = printed_vals(3, full_y(3, cls, c), x);
            ASSERT_EQ(s.A(0, 0), mod(fx.record("SIGMA").eval(vals), 3));
            ASSERT_EQ(s.beta[0], mod(fx.record("DELTA").eval(vals), 3));
        }
    }
}

TEST(GaussSlice, C6CoefficientsMatchRecords) {
    const auto &fx = appendix_file("D");
    auto p = appendix_fixture("C6_FULL");
    auto cls = classify_variables(p);
    std::mt19937_64 rng(60);
    const char *sig[] = {"SIGMA_Y2", "SIGMA_Y5", "SIGMA_Y6"};
    const char *del[] = {"DELTA_Y2", "DELTA_Y5", "DELTA_Y6"};
    for (int s = 0; s < 2000; s++) {
        auto x = random_point(rng, 6);
        auto c = digits(rng() % 27, 3);
        auto spec = gauss_slice(p, cls, c, x);
        auto vals = printed_vals(6, full_y(6, cls, c), x);
        for (size_t q = 0; q < 3; q++) {
            ASSERT_EQ(spec.A(q, q), mod(fx.record(sig[q]).eval(vals), 3)) << sig[q];
            ASSERT_EQ(spec.beta[q], mod(fx.record(del[q]).eval(vals), 3)) << del[q];
        }
    }
}

TEST(AppendixC, ZeroTermClaim) {
    const auto &fx = appendix_file("C");
    auto p = transformed_magic_poly(3);
    SliceEvaluator ev(p, classify_variables(p));
    size_t hits = 0;
    for (uint64_t idx = 0; idx < 729; idx++) {
        auto x = PhasePoint::from_index(idx, 3, 3);
        ev.set_x(x);
        int64_t y1 = x.xq[0];
        for (int64_t y2 = 0; y2 < 3; y2++) {
            auto vals = printed_vals(3, {y1, y2, 0}, x);
            if (mod(fx.record("DELTA").eval(vals), 3) == 0) {
                continue;
            }
            hits++;
            ASSERT_TRUE(ev.slice_value({y1, y2}).is_zero()) << "idx " << idx << " y2 " << y2;
        }
    }
    EXPECT_GT(hits, 0u);
}

TEST(AppendixC, SummaryEqualsUnbracketedSum) {
    auto sum = appendix_summary("C3_SUMMARY");
    auto p = appendix_fixture("C3_FULL");
    auto cls = classify_variables(p);
    SliceEvaluator ev(p, cls);
    for (uint64_t idx = 0; idx < 729; idx++) {
        auto x = PhasePoint::from_index(idx, 3, 3);
        ev.set_x(x);
        auto full = CyclotomicAmplitude::integer(kMd, 0), bracket = full;
        for (uint64_t t = 0; t < 9; t++) {
            auto c = digits(t, 2);
            auto v = ev.slice_value(c);
            full += v;
            auto w = summary_term_weights(sum, full_y(3, cls, c), x);
            ASSERT_LE(std::count_if(w.begin(), w.end(), [](int64_t u) {
                          return u != 0;
                      }),
                      1);
            bracket += v * CyclotomicAmplitude::integer(kMd, std::accumulate(w.begin(), w.end(), int64_t{0}));
        }
        ASSERT_EQ(bracket, full) << idx;
    }
}

TEST(AppendixD, SummaryTermsDisjointAndExact) {
    auto sum = appendix_summary("C6_SUMMARY");
    auto p = appendix_fixture("C6_FULL");
    auto cls = classify_variables(p);
    SliceEvaluator ev(p, cls);
    std::mt19937_64 rng(16);
    for (int s = 0; s < 300; s++) {
        auto x = random_point(rng, 6);
        ev.set_x(x);
        auto full = CyclotomicAmplitude::integer(kMd, 0), bracket = full;
        for (uint64_t t = 0; t < 27; t++) {
            auto c = digits(t, 3);
            auto v = ev.slice_value(c);
            full += v;
            auto w = summary_term_weights(sum, full_y(6, cls, c), x);
            ASSERT_LE(std::count_if(w.begin(), w.end(), [](int64_t u) {
                          return u != 0;
                      }),
                      1);
            bracket += v * CyclotomicAmplitude::integer(kMd, std::accumulate(w.begin(), w.end(), int64_t{0}));
        }
        ASSERT_EQ(bracket, full) << "sample " << s;
    }
}

TEST(AppendixD, PairClaim) {
    // With y1 = xq1 the two families y3 = xq3 + 1 and y3 = xq3 + 2 (summed
    // over y4) are complex conjugates, so together they are twice the real
    // part of either one.
    auto p = transformed_magic_poly(6);
    SliceEvaluator ev(p, classify_variables(p));  // cubic order y1, y3, y4
    std::mt19937_64 rng(17);
    size_t complex_pairs = 0;
    for (int s = 0; s < 10000; s++) {
        auto x = random_point(rng, 6);
        ev.set_x(x);
        int64_t y1 = x.xq[0];
        std::array<CyclotomicAmplitude, 2> tot{CyclotomicAmplitude::integer(kMd, 0), CyclotomicAmplitude::integer(kMd, 0)};
        for (int f = 0; f < 2; f++) {
            int64_t y3 = mod(x.xq[2] + 1 + f, 3);
            for (int64_t y4 = 0; y4 < 3; y4++) {
                tot[f] += ev.slice_value({y1, y3, y4});
            }
        }
        ASSERT_EQ(tot[0], tot[1].conj()) << "sample " << s;
        complex_pairs += tot[0] == tot[1] ? 0 : 1;
    }
    // Plain equality is not the general case.
    EXPECT_GT(complex_pairs, 0u);
}

TEST(AppendixE, MagnitudeClaimWithoutPlaneWaves) {
    auto p = transformed_magic_poly(12);
    SliceEvaluator ev(p, classify_variables(p));  // cubic y1..y6, quadratic y7..y12
    std::mt19937_64 rng(3);
    size_t checked = 0;
    for (int s = 0; s < 100; s++) {
        auto x = random_point(rng, 12);
        ev.set_x(x);
        for (uint64_t t = 0; t < 243; t++) {
            auto a = digits(t, 5);
            a.push_back(0);
            std::array<GaussSumSpec, 3> sp;
            for (int64_t y6 = 0; y6 < 3; y6++) {
                a[5] = y6;
                sp[y6] = ev.spec(a);
            }
            // Designated pair: Sigma_y7 at one y6 equals Sigma_y11 at the other.
            int pa = -1, pb = -1;
            for (int u = 0; u < 3 && pa < 0; u++) {
                for (int v = 0; v < 3; v++) {
                    if (u != v && sp[u].A(0, 0) == sp[v].A(4, 4)) {
                        pa = u;
                        pb = v;
                        break;
                    }
                }
            }
            if (pa < 0) {
                continue;
            }
            bool plane = false;
            for (int u : {pa, pb}) {
                for (size_t i = 0; i < 6; i++) {
                    plane = plane || (sp[u].A(i, i) == 0 && sp[u].beta[i] == 0);
                }
            }
            if (plane) {
                continue;
            }
            checked++;
            ASSERT_NEAR(std::abs(eval_closed(sp[pa]).to_complex()), std::abs(eval_closed(sp[pb]).to_complex()), 1e-9);
        }
    }
    EXPECT_GE(checked, 100u);
}

TEST(AppendixE, SummaryTermsDisjoint) {
    auto sum = appendix_summary("C12_SUMMARY");
    ASSERT_EQ(sum.terms.size(), 7u);
    std::mt19937_64 rng(12);
    for (int s = 0; s < 3000; s++) {
        auto x = random_point(rng, 12);
        std::vector<int64_t> y(12);
        for (auto &v : y) {
            v = (int64_t)(rng() % 3);
        }
        auto w = summary_term_weights(sum, y, x);
        ASSERT_LE(std::count_if(w.begin(), w.end(), [](int64_t u) {
                      return u != 0;
                  }),
                  1);
    }
}

TEST(Fixtures, ParserErrors) {
    EXPECT_THROW(parse_fixture("qudits 2\nrecord A mod 9\n1 yq1\n"), std::invalid_argument);
    EXPECT_THROW(parse_fixture("qudits 2\nrecord A mod 9\n1 zz1\nend\n"), std::invalid_argument);
    EXPECT_THROW(parse_fixture("qudits 2\nrecord A mod 9\n1 yq3\nend\n"), std::invalid_argument);
    EXPECT_THROW(appendix_fixture("Z9"), std::invalid_argument);
    EXPECT_THROW(appendix_summary("C4_SUMMARY"), std::invalid_argument);
    auto fx = parse_fixture("qudits 1\nfull mod 9 R:1\nrecord R mod 9\n2 yq1^2 xq1\n1 xp1\nend\n");
    EXPECT_EQ(fx.record("R").terms.size(), 2u);
    EXPECT_THROW(fx.record("S"), std::invalid_argument);
}

TEST(Fixtures, RecordsAreDeterministic) {
    EXPECT_TRUE(appendix_fixture("C6_FULL").P == appendix_fixture("C6_FULL").P);
    EXPECT_EQ(appendix_file("E").k, 12u);
}
