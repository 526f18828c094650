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

#ifndef WWM_VERIFY_HPP
#define WWM_VERIFY_HPP

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wwm/magic_poly.hpp"
#include "wwm/phasespace.hpp"

namespace wwm {

/// Outcome of one fixture check; diffs are capped so reports stay readable.
struct VerifyReport {
    std::string name;
    bool ok = true;
    size_t points = 0;
    size_t exact = 0;
    std::vector<std::string> diffs;
    size_t diff_count = 0;
    nlohmann::json details = nlohmann::json::object();

    void mismatch(const std::string &what) {
        ok = false;
        diff_count++;
        if (diffs.size() < 64) {
            diffs.push_back(what);
        }
    }

    std::string summary() const {
        std::string s = name + ": " + std::to_string(exact) + "/" + std::to_string(points) + " points exact";
        if (diff_count) {
            s += ", " + std::to_string(diff_count) + " differences";
        }
        return s;
    }

    nlohmann::json to_json() const {
        return {{"name", name},       {"ok", ok},       {"points", points},   {"exact", exact},
                {"summary", summary()}, {"diff_count", diff_count}, {"diffs", diffs}, {"details", details}};
    }
};

/// Exact dense Wigner table of |T>^k from the Hilbert-space state.
inline WignerTable dense_magic_wigner(size_t k) {
    const Modulus md = Modulus::checked(3, 2);
    auto psi = magic_state_vector(k, md);
    return weyl_symbol(outer(psi, psi), k, ExactOps{md});
}

/// Product of dense single-qutrit values; the Wigner function of a product state factorizes.
inline CyclotomicAmplitude magic_product_oracle(const PhasePoint &x) {
    static const WignerTable one = dense_magic_wigner(1);
    auto v = CyclotomicAmplitude::integer(Modulus::checked(3, 2), 1);
    for (size_t i = 0; i < x.n(); i++) {
        v = v * one.exact[(uint64_t)(mod(x.xp[i], 3) * 3 + mod(x.xq[i], 3))];
    }
    return v;
}

namespace detail {

inline std::string point_str(const PhasePoint &x) {
    std::string s = "xp=";
    for (auto v : x.xp) {
        s += std::to_string(v);
    }
    s += " xq=";
    for (auto v : x.xq) {
        s += std::to_string(v);
    }
    return s;
}

inline std::vector<int64_t> digits3(uint64_t t, size_t n) {
    std::vector<int64_t> v(n);
    for (size_t i = 0; i < n; i++) {
        v[i] = (int64_t)(t % 3);
        t /= 3;
    }
    return v;
}

inline std::vector<int64_t> full_y(size_t k, const VariableClassification &cls, const std::vector<int64_t> &cubic) {
    std::vector<int64_t> y(k, 0);
    for (size_t i = 0; i < cls.cubic.size(); i++) {
        y[cls.cubic[i]] = cubic[i];
    }
    return y;
}

inline PhasePoint random_point(std::mt19937_64 &rng, size_t n) {
    PhasePoint x;
    for (size_t i = 0; i < n; i++) {
        x.xp.push_back((int64_t)(rng() % 3));
        x.xq.push_back((int64_t)(rng() % 3));
    }
    return x;
}

/// Bracketed sum over cubic assignments; counts overlapping terms.
inline CyclotomicAmplitude bracket_sum(const SummaryIdentity &s, SliceEvaluator &ev, const PhasePoint &x,
                                       CyclotomicAmplitude &full, size_t &overlaps) {
    const auto &cls = ev.classification();
    const size_t k = ev.poly().k;
    const Modulus md = ev.poly().md;
    const size_t nc = cls.cubic.size();
    ev.set_x(x);
    full = CyclotomicAmplitude::integer(md, 0);
    auto bracket = full;
    for (uint64_t t = 0; t < ipow_u(3, nc); t++) {
        auto c = digits3(t, nc);
        auto v = ev.slice_value(c);
        full += v;
        int64_t w = 0;
        size_t on = 0;
        for (auto u : summary_term_weights(s, full_y(k, cls, c), x)) {
            w += u;
            on += u != 0;
        }
        overlaps += on > 1;
        if (w) {
            bracket += v * CyclotomicAmplitude::integer(md, w);
        }
    }
    return bracket;
}

}  // namespace detail

/// Two-qutrit fixture against the dense oracle at every C(1,2)^2-transformed point.
inline VerifyReport verify_appendix_b() {
    VerifyReport r;
    r.name = "appendix B";
    auto fx = appendix_fixture("A2");
    auto g = power(cnot_map(1, 2, 2, 3), 2);
    auto W = dense_magic_wigner(2);
    for (uint64_t idx = 0; idx < 81; idx++) {
        auto x = PhasePoint::from_index(idx, 2, 3);
        r.points++;
        auto want = W.exact[g.apply(x).index(3)];
        auto got = fx.evaluate(x);
        if (got == want) {
            r.exact++;
        } else {
            r.mismatch(detail::point_str(x) + " fixture " + got.str() + " oracle " + want.str());
        }
    }
    bool same = fx.P == transformed_magic_poly(2).P;
    r.details["fixture_equals_transform"] = same;
    if (!same) {
        r.mismatch("fixture polynomial differs from the transformed tensor polynomial");
    }
    return r;
}

/// Three-qutrit bracket identity, dense oracle, and the excluded-term zeros, all 729 points.
inline VerifyReport verify_appendix_c() {
    VerifyReport r;
    r.name = "appendix C";
    const auto &fx = appendix_file("C");
    auto p = appendix_fixture("C3_FULL");
    auto sum = appendix_summary("C3_SUMMARY");
    SliceEvaluator ev(p, classify_variables(p));
    auto M = canned_sequence("C3");
    auto W = dense_magic_wigner(3);
    size_t overlaps = 0, excluded = 0, excluded_zero = 0;
    for (uint64_t idx = 0; idx < 729; idx++) {
        auto x = PhasePoint::from_index(idx, 3, 3);
        r.points++;
        CyclotomicAmplitude full;
        auto bracket = detail::bracket_sum(sum, ev, x, full, overlaps);
        auto want = W.exact[M.apply(x).index(3)];
        bool ok = true;
        if (!(bracket == full)) {
            ok = false;
            r.mismatch(detail::point_str(x) + " bracket " + bracket.str() + " vs unbracketed " + full.str());
        }
        if (!(full.scaled(-2 * p.prefactor) == want)) {
            ok = false;
            r.mismatch(detail::point_str(x) + " unbracketed vs oracle " + want.str());
        }
        // Excluded terms: y1 = xq1 with the printed linear coefficient in {1, 2}.
        int64_t y1 = x.xq[0];
        for (int64_t y2 = 0; y2 < 3; y2++) {
            std::vector<int64_t> vals{y1, y2, 0, mod(-x.xp[0], 3), mod(-x.xp[1], 3), mod(-x.xp[2], 3),
                                      x.xq[0], x.xq[1], x.xq[2]};
            if (eval_record_ref(fx, "DELTA", vals) == 0) {
                continue;
            }
            excluded++;
            if (ev.slice_value({y1, y2}).is_zero()) {
                excluded_zero++;
            } else {
                ok = false;
                r.mismatch(detail::point_str(x) + " excluded term y2=" + std::to_string(y2) + " is nonzero");
            }
        }
        r.exact += ok;
    }
    if (overlaps) {
        r.mismatch(std::to_string(overlaps) + " assignments with more than one active bracket term");
    }
    r.details["excluded_terms"] = excluded;
    r.details["excluded_terms_zero"] = excluded_zero;
    r.details["fixture_equals_transform"] = p.P == transformed_magic_poly(3).P;
    return r;
}

/// Six-qutrit fixture: polynomial identity with the transform, sampled oracle and
/// bracket checks, and the conjugate-family claim at y1 = xq1.
inline VerifyReport verify_appendix_d(size_t samples = 2000, uint64_t seed = 1) {
    VerifyReport r;
    r.name = "appendix D";
    auto p = appendix_fixture("C6_FULL");
    auto calc = transformed_magic_poly(6);
    bool same = p.P == calc.P;
    r.details["fixture_equals_transform"] = same;
    if (!same) {
        r.mismatch("fixture polynomial differs from the transformed tensor polynomial");
    }
    auto sum = appendix_summary("C6_SUMMARY");
    SliceEvaluator ev(p, classify_variables(p));  // cubic y1, y3, y4
    auto M = canned_sequence("C6");
    std::mt19937_64 rng(seed);
    size_t overlaps = 0, conj_pairs = 0, equal_pairs = 0;
    for (size_t s = 0; s < samples; s++) {
        auto x = detail::random_point(rng, 6);
        r.points++;
        CyclotomicAmplitude full;
        auto bracket = detail::bracket_sum(sum, ev, x, full, overlaps);
        bool ok = bracket == full;
        if (!ok) {
            r.mismatch(detail::point_str(x) + " bracket differs from unbracketed sum");
        }
        if (!(full.scaled(-2 * p.prefactor) == magic_product_oracle(M.apply(x)))) {
            ok = false;
            r.mismatch(detail::point_str(x) + " unbracketed sum differs from the product oracle");
        }
        std::array<CyclotomicAmplitude, 2> tot;
        for (int f = 0; f < 2; f++) {
            tot[f] = CyclotomicAmplitude::integer(p.md, 0);
            for (int64_t y4 = 0; y4 < 3; y4++) {
                tot[f] += ev.slice_value({x.xq[0], mod(x.xq[2] + 1 + f, 3), y4});
            }
        }
        conj_pairs += tot[0] == tot[1].conj();
        equal_pairs += tot[0] == tot[1];
        r.exact += ok;
    }
    if (overlaps) {
        r.mismatch(std::to_string(overlaps) + " assignments with more than one active bracket term");
    }
    if (conj_pairs != samples) {
        r.mismatch("y3 != xq3 families are not conjugate at " + std::to_string(samples - conj_pairs) + " samples");
    }
    r.details["seed"] = seed;
    r.details["family_totals_conjugate"] = conj_pairs;
    r.details["family_totals_equal"] = equal_pairs;
    return r;
}

/// Twelve-qutrit fixture against the transform, monomial by monomial.
inline VerifyReport verify_appendix_e() {
    VerifyReport r;
    r.name = "appendix E";
    auto p = appendix_fixture("C12_FULL");
    auto calc = transformed_magic_poly(12);
    auto lay = p.layout();
    std::map<Monomial, std::pair<int64_t, int64_t>> all;
    for (const auto &[m, c] : p.P.terms) {
        all[m].first = c;
    }
    for (const auto &[m, c] : calc.P.terms) {
        all[m].second = c;
    }
    bool pure_y_ok = true;
    for (const auto &[m, cc] : all) {
        r.points++;
        if (cc.first == cc.second) {
            r.exact++;
            continue;
        }
        bool pure_y = std::all_of(m.begin(), m.end(), [](int16_t v) {
            return (size_t)v < 12;
        });
        pure_y_ok = pure_y_ok && !pure_y;
        r.mismatch(format_monomial(m, lay) + ": printed " + std::to_string(cc.first) + ", transform " +
                   std::to_string(cc.second));
    }
    r.details["unit"] = "monomials";
    r.details["pure_y_part_agrees"] = pure_y_ok;
    r.details["classification_agrees"] =
        classify_variables(p).quadratic == classify_variables(calc).quadratic;
    return r;
}

inline VerifyReport verify_appendix(const std::string &letter) {
    if (letter == "B") {
        return verify_appendix_b();
    }
    if (letter == "C") {
        return verify_appendix_c();
    }
    if (letter == "D") {
        return verify_appendix_d();
    }
    if (letter == "E") {
        return verify_appendix_e();
    }
    throw std::invalid_argument("unknown appendix: " + letter);
}

struct MagnitudeScan {
    size_t checked = 0;
    size_t failed = 0;
    size_t skipped_plane = 0;
};

/// Twelve-qutrit paired slices: Sigma_y7 at y6 = a equal to Sigma_y11 at y6 = b
/// implies equal magnitudes, for pairs without a plane-wave direction.
/// Expects the cubic order y1..y6 and quadratic order y7..y12.
inline MagnitudeScan pair_magnitude_scan(SliceEvaluator &ev, const PhasePoint &x) {
    MagnitudeScan m;
    ev.set_x(x);
    for (uint64_t t = 0; t < 243; t++) {
        auto a = detail::digits3(t, 5);
        a.push_back(0);
        std::array<GaussSumSpec, 3> sp;
        for (int64_t y6 = 0; y6 < 3; y6++) {
            a[5] = y6;
            sp[y6] = ev.spec(a);
        }
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
            for (size_t i = 0; i < sp[u].m; i++) {
                plane = plane || (sp[u].A(i, i) == 0 && sp[u].beta[i] == 0);
            }
        }
        if (plane) {
            m.skipped_plane++;
            continue;
        }
        m.checked++;
        auto va = eval_closed(sp[pa]), vb = eval_closed(sp[pb]);
        if (!((va * va.conj()) == (vb * vb.conj()))) {
            m.failed++;
        }
    }
    return m;
}

}  // namespace wwm

#endif
