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

#ifndef WWM_MAGIC_POLY_HPP
#define WWM_MAGIC_POLY_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "wwm/clifford.hpp"
#include "wwm/gauss_sum.hpp"
#include "wwm/modlinalg.hpp"
#include "wwm/phasespace.hpp"
#include "wwm/ring.hpp"

namespace wwm {

/// Sorted multiset of variable ids.
using Monomial = std::vector<int16_t>;

/// Sparse polynomial with coefficients mod `modulus`.
struct Poly {
    int64_t modulus = 9;
    std::map<Monomial, int64_t> terms;

    Poly() = default;
    explicit Poly(int64_t m) : modulus(m) {
    }

    static Poly constant(int64_t m, int64_t c) {
        Poly p(m);
        p.add({}, c);
        return p;
    }
    static Poly variable(int64_t m, int16_t v) {
        Poly p(m);
        p.add({v}, 1);
        return p;
    }

    void add(Monomial mono, int64_t c) {
        std::sort(mono.begin(), mono.end());
        c = mod(c, modulus);
        if (c == 0) {
            return;
        }
        auto &slot = terms[mono];
        slot = mod(slot + c, modulus);
        if (slot == 0) {
            terms.erase(mono);
        }
    }

    Poly &operator+=(const Poly &o) {
        for (const auto &[mono, c] : o.terms) {
            add(mono, c);
        }
        return *this;
    }

    Poly scaled(int64_t f) const {
        Poly r(modulus);
        for (const auto &[mono, c] : terms) {
            r.add(mono, c * f);
        }
        return r;
    }

    /// Same coefficients reread modulo m2 (lifts or reductions).
    Poly with_modulus(int64_t m2) const {
        Poly r(m2);
        for (const auto &[mono, c] : terms) {
            r.add(mono, c);
        }
        return r;
    }

    Poly operator*(const Poly &o) const {
        Poly r(modulus);
        for (const auto &[a, ca] : terms) {
            for (const auto &[b, cb] : o.terms) {
                Monomial m = a;
                m.insert(m.end(), b.begin(), b.end());
                r.add(std::move(m), ca * cb);
            }
        }
        return r;
    }

    size_t degree() const {
        size_t d = 0;
        for (const auto &[mono, c] : terms) {
            d = std::max(d, mono.size());
        }
        return d;
    }

    int64_t eval(const std::vector<int64_t> &vals) const {
        int64_t s = 0;
        for (const auto &[mono, c] : terms) {
            int64_t t = c;
            for (auto v : mono) {
                t = t * vals[v] % modulus;
            }
            s += t;
        }
        return mod(s, modulus);
    }

    /// Replace every variable v by images[v] (same modulus).
    Poly substitute(const std::vector<Poly> &images) const {
        Poly r(modulus);
        for (const auto &[mono, c] : terms) {
            Poly t = Poly::constant(modulus, c);
            for (auto v : mono) {
                t = t * images[v];
            }
            r += t;
        }
        return r;
    }

    bool operator==(const Poly &o) const {
        return modulus == o.modulus && terms == o.terms;
    }
};

/// Variable layout for k qudits: y_q 0..k-1, x_p k..2k-1, x_q 2k..3k-1.
struct VarLayout {
    size_t k = 1;
    int16_t y(size_t i) const {
        return (int16_t)i;
    }
    int16_t xp(size_t i) const {
        return (int16_t)(k + i);
    }
    int16_t xq(size_t i) const {
        return (int16_t)(2 * k + i);
    }
    size_t count() const {
        return 3 * k;
    }
    std::string name(int16_t v) const {
        size_t i = (size_t)v;
        if (i < k) {
            return "yq" + std::to_string(i + 1);
        }
        if (i < 2 * k) {
            return "xp" + std::to_string(i - k + 1);
        }
        return "xq" + std::to_string(i - 2 * k + 1);
    }
    int16_t parse(const std::string &s) const {
        auto idx = [&](size_t off) -> size_t {
            size_t i = std::stoul(s.substr(off));
            if (i < 1 || i > k) {
                throw std::invalid_argument("variable index out of range: " + s);
            }
            return i - 1;
        };
        if (s.rfind("yq", 0) == 0) {
            return y(idx(2));
        }
        if (s.rfind("xp", 0) == 0) {
            return xp(idx(2));
        }
        if (s.rfind("xq", 0) == 0) {
            return xq(idx(2));
        }
        throw std::invalid_argument("unknown variable: " + s);
    }
};

inline std::string format_monomial(const Monomial &m, const VarLayout &lay) {
    if (m.empty()) {
        return "1";
    }
    std::string s;
    for (size_t i = 0; i < m.size();) {
        size_t j = i;
        while (j < m.size() && m[j] == m[i]) {
            j++;
        }
        if (!s.empty()) {
            s += " ";
        }
        s += lay.name(m[i]);
        if (j - i > 1) {
            s += "^" + std::to_string(j - i);
        }
        i = j;
    }
    return s;
}

/// prefactor * sum_{y in (Z/d)^k} exp(2 pi i P(y, x) / d^h).
struct ExponentialSumPoly {
    size_t k = 1;
    Modulus md = Modulus::checked(3, 2);
    Poly P{9};
    int prefactor = 0;  // power of d

    VarLayout layout() const {
        return VarLayout{k};
    }

    /// Reduce to the canonical representative of the function (Z/d)^{3k} -> Z/d^h.
    void canonicalize() {
        const int64_t d = md.d;
        const int64_t m = md.m;
        const int64_t lowmod = m / d;  // d^{h-1}
        Poly r(m);
        for (auto [mono, c] : P.terms) {
            if (mod(c, lowmod) == 0) {
                // v^d == v on Z/d once the coefficient kills the carry.
                Monomial out;
                for (size_t i = 0; i < mono.size();) {
                    size_t j = i;
                    while (j < mono.size() && mono[j] == mono[i]) {
                        j++;
                    }
                    size_t e = j - i;
                    while (e >= (size_t)d) {
                        e -= (size_t)(d - 1);
                    }
                    out.insert(out.end(), e, mono[i]);
                    i = j;
                }
                r.add(out, c);
            } else {
                r.add(mono, c);
            }
        }
        if (d == 3 && md.h >= 2) {
            // A genuine cube c v^3 absorbs the linear term of v.
            std::vector<std::pair<Monomial, int64_t>> moves;
            for (const auto &[mono, c] : r.terms) {
                if (mono.size() == 3 && mono[0] == mono[2] && mod(c, lowmod) != 0) {
                    auto it = r.terms.find(Monomial{mono[0]});
                    if (it != r.terms.end() && mod(it->second, lowmod) == 0) {
                        moves.emplace_back(mono, it->second);
                    }
                }
            }
            for (auto &[mono, lin] : moves) {
                r.add(Monomial{mono[0]}, -lin);
                r.add(mono, lin);
            }
        }
        P = std::move(r);
    }

    int64_t phase(const std::vector<int64_t> &y, const PhasePoint &x) const {
        std::vector<int64_t> vals(3 * k);
        for (size_t i = 0; i < k; i++) {
            vals[i] = y[i];
            vals[k + i] = x.xp[i];
            vals[2 * k + i] = x.xq[i];
        }
        return P.eval(vals);
    }

    /// Exact value at x, summing y over (Z/d)^k.
    CyclotomicAmplitude evaluate(const PhasePoint &x) const {
        std::vector<int64_t> hist(md.m, 0);
        std::vector<int64_t> vals(3 * k, 0);
        for (size_t i = 0; i < k; i++) {
            vals[k + i] = mod(x.xp[i], md.d);
            vals[2 * k + i] = mod(x.xq[i], md.d);
        }
        // Fold x in once, then enumerate y.
        Poly yp(md.m);
        for (const auto &[mono, c] : P.terms) {
            int64_t t = c;
            Monomial rest;
            for (auto v : mono) {
                if ((size_t)v < k) {
                    rest.push_back(v);
                } else {
                    t = t * vals[v] % md.m;
                }
            }
            yp.add(rest, t);
        }
        std::vector<std::pair<std::vector<int16_t>, int64_t>> flat(yp.terms.begin(), yp.terms.end());
        uint64_t total = ipow_u((uint64_t)md.d, k);
        std::vector<int64_t> y(k, 0);
        for (uint64_t t = 0; t < total; t++) {
            uint64_t r = t;
            for (size_t i = 0; i < k; i++) {
                y[i] = (int64_t)(r % md.d);
                r /= md.d;
            }
            int64_t s = 0;
            for (const auto &[mono, c] : flat) {
                int64_t v = c;
                for (auto w : mono) {
                    v *= y[w];
                }
                s += v;
            }
            hist[mod(s, md.m)]++;
        }
        return CyclotomicAmplitude::from_coeffs(md, hist).scaled(-2 * prefactor);
    }
};

/// P'(y, x) = P(Q y, M x + v).
inline ExponentialSumPoly transform_poly(const ExponentialSumPoly &p, const ModMatrix &Q, const AffineSymplectic &xmap) {
    const size_t k = p.k;
    if (Q.rows != k || Q.cols != k || xmap.n != k) {
        throw std::invalid_argument("transform shape mismatch");
    }
    if (determinant(Q) == 0 || determinant(xmap.M) == 0) {
        throw std::invalid_argument("transform maps must be invertible");
    }
    const int64_t m = p.md.m;
    VarLayout lay{k};
    std::vector<Poly> images(3 * k, Poly(m));
    for (size_t i = 0; i < k; i++) {
        for (size_t j = 0; j < k; j++) {
            if (Q(i, j)) {
                images[lay.y(i)].add({lay.y(j)}, Q(i, j));
            }
        }
    }
    // Flat x index r in 0..2k-1 maps to variable k + r.
    for (size_t r = 0; r < 2 * k; r++) {
        Poly &img = images[k + r];
        for (size_t c = 0; c < 2 * k; c++) {
            if (xmap.M(r, c)) {
                img.add({(int16_t)(k + c)}, xmap.M(r, c));
            }
        }
        if (xmap.v[r]) {
            img.add({}, xmap.v[r]);
        }
    }
    ExponentialSumPoly out = p;
    out.P = p.P.substitute(images);
    out.canonicalize();
    return out;
}

/// Same map on intermediate variables (via the x_q block) and on final variables.
inline ExponentialSumPoly transform_poly(const ExponentialSumPoly &p, const AffineSymplectic &a) {
    return transform_poly(p, a.q_block(), a);
}

/// x_p -> -x_p; relates the printed appendix formulas to this library's Weyl convention.
inline Poly momentum_reflect(const Poly &P, size_t k) {
    std::vector<Poly> images;
    for (size_t v = 0; v < 3 * k; v++) {
        Poly img = Poly::variable(P.modulus, (int16_t)v);
        if (v >= k && v < 2 * k) {
            img = img.scaled(-1);
        }
        images.push_back(img);
    }
    return P.substitute(images);
}

/// Record-based fixture text: `record NAME mod M` ... `end`, one term per line.
struct FixtureFile {
    size_t k = 0;
    std::map<std::string, Poly> records;  // as printed
    std::vector<std::pair<std::string, int64_t>> full_recipe;
    int64_t full_modulus = 9;

    struct Condition {
        std::string kind;  // zero nonzero allnonzero anyplane noplane equal
        std::vector<std::string> refs;
    };
    struct Term {
        int64_t weight = 1;
        std::vector<Condition> conds;
    };
    std::map<std::string, std::vector<Term>> summaries;

    /// Record value, with optional `[yqN=v]` substitution in the reference.
    const Poly &record(const std::string &name) const {
        auto it = records.find(name);
        if (it == records.end()) {
            throw std::invalid_argument("unknown fixture record: " + name);
        }
        return it->second;
    }

    /// Full exponent, as printed (stored momentum sign).
    Poly full_exponent() const {
        Poly r(full_modulus);
        for (const auto &[name, f] : full_recipe) {
            r += record(name).with_modulus(full_modulus).scaled(f);
        }
        return r;
    }
};

inline Poly parse_factor_power(const std::string &tok, const VarLayout &lay, int64_t m,
                               const std::map<std::string, Poly> &done) {
    std::string base = tok;
    int pw = 1;
    auto caret = tok.find('^');
    if (caret != std::string::npos) {
        base = tok.substr(0, caret);
        pw = std::stoi(tok.substr(caret + 1));
    }
    Poly f(m);
    if (!base.empty() && base[0] == '@') {
        auto it = done.find(base.substr(1));
        if (it == done.end()) {
            throw std::invalid_argument("record referenced before definition: " + base);
        }
        f = it->second.with_modulus(m);
    } else {
        f = Poly::variable(m, lay.parse(base));
    }
    Poly r = Poly::constant(m, 1);
    for (int i = 0; i < pw; i++) {
        r = r * f;
    }
    return r;
}

inline FixtureFile parse_fixture(std::string_view text) {
    FixtureFile fx;
    std::istringstream in{std::string(text)};
    std::string line, cur, cur_summary;
    int64_t cur_mod = 9;
    int lineno = 0;
    auto fail = [&](const std::string &why) {
        throw std::invalid_argument("fixture line " + std::to_string(lineno) + ": " + why);
    };
    while (std::getline(in, line)) {
        lineno++;
        auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.resize(hash);
        }
        std::istringstream ls(line);
        std::vector<std::string> tok;
        std::string t;
        while (ls >> t) {
            tok.push_back(t);
        }
        if (tok.empty()) {
            continue;
        }
        if (tok[0] == "qudits") {
            fx.k = std::stoul(tok.at(1));
            continue;
        }
        if (tok[0] == "full") {
            if (tok.size() < 4 || tok[1] != "mod") {
                fail("expected `full mod M NAME:F ...`");
            }
            fx.full_modulus = std::stoll(tok[2]);
            for (size_t i = 3; i < tok.size(); i++) {
                auto c = tok[i].find(':');
                if (c == std::string::npos) {
                    fail("expected NAME:F");
                }
                fx.full_recipe.emplace_back(tok[i].substr(0, c), std::stoll(tok[i].substr(c + 1)));
            }
            continue;
        }
        if (tok[0] == "record") {
            if (tok.size() != 4 || tok[2] != "mod" || !cur.empty() || !cur_summary.empty()) {
                fail("expected `record NAME mod M`");
            }
            if (fx.k == 0) {
                fail("`qudits` must come before records");
            }
            cur = tok[1];
            cur_mod = std::stoll(tok[3]);
            fx.records[cur] = Poly(cur_mod);
            continue;
        }
        if (tok[0] == "summary") {
            if (tok.size() != 2 || !cur.empty() || !cur_summary.empty()) {
                fail("expected `summary NAME`");
            }
            cur_summary = tok[1];
            fx.summaries[cur_summary];
            continue;
        }
        if (tok[0] == "end") {
            if (cur.empty() && cur_summary.empty()) {
                fail("`end` without an open block");
            }
            cur.clear();
            cur_summary.clear();
            continue;
        }
        if (!cur_summary.empty()) {
            // term W cond [; cond ...], cond = kind ref ref ...
            if (tok[0] != "term" || tok.size() < 2) {
                fail("expected `term W ...`");
            }
            FixtureFile::Term term;
            term.weight = std::stoll(tok[1]);
            FixtureFile::Condition c;
            for (size_t i = 2; i <= tok.size(); i++) {
                if (i == tok.size() || tok[i] == ";") {
                    if (!c.kind.empty()) {
                        term.conds.push_back(c);
                    }
                    c = {};
                    continue;
                }
                if (c.kind.empty()) {
                    c.kind = tok[i];
                } else {
                    c.refs.push_back(tok[i]);
                }
            }
            fx.summaries[cur_summary].push_back(term);
            continue;
        }
        if (cur.empty()) {
            fail("term outside a record");
        }
        VarLayout lay{fx.k};
        Poly term = Poly::constant(cur_mod, std::stoll(tok[0]));
        for (size_t i = 1; i < tok.size(); i++) {
            term = term * parse_factor_power(tok[i], lay, cur_mod, fx.records);
        }
        fx.records[cur] += term;
    }
    if (!cur.empty() || !cur_summary.empty()) {
        throw std::invalid_argument("fixture ends inside a block");
    }
    return fx;
}

inline const FixtureFile &appendix_file(const std::string &letter) {
    static std::map<std::string, FixtureFile> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(letter);
    if (it != cache.end()) {
        return it->second;
    }
    std::string name;
    if (letter == "B") {
        name = "fixtures/appendix_b.poly";
    } else if (letter == "C") {
        name = "fixtures/appendix_c.poly";
    } else if (letter == "D") {
        name = "fixtures/appendix_d.poly";
    } else if (letter == "E") {
        name = "fixtures/appendix_e.poly";
    } else {
        throw std::invalid_argument("unknown appendix: " + letter);
    }
    return cache.emplace(letter, parse_fixture(embedded_file(name))).first->second;
}

/// Printed full exponent as an ExponentialSumPoly in this library's convention
/// (x_p reflected), prefactor d^{-2k}.
inline ExponentialSumPoly fixture_poly(const FixtureFile &fx) {
    ExponentialSumPoly p;
    p.k = fx.k;
    p.md = Modulus::checked(3, 2);
    p.P = momentum_reflect(fx.full_exponent(), fx.k);
    p.prefactor = -2 * (int)fx.k;
    p.canonicalize();
    return p;
}

/// Appendix fixture by name: A2, C3_FULL, C6_FULL, C12_FULL.
inline ExponentialSumPoly appendix_fixture(const std::string &name) {
    if (name == "A2") {
        return fixture_poly(appendix_file("B"));
    }
    if (name == "C3_FULL") {
        return fixture_poly(appendix_file("C"));
    }
    if (name == "C6_FULL") {
        return fixture_poly(appendix_file("D"));
    }
    if (name == "C12_FULL") {
        return fixture_poly(appendix_file("E"));
    }
    throw std::invalid_argument("unknown appendix fixture: " + name);
}

/// Bracketed summary (delta terms) by name: C3_SUMMARY, C6_SUMMARY, C12_SUMMARY.
struct SummaryIdentity {
    const FixtureFile *file = nullptr;
    std::string name;
    std::vector<FixtureFile::Term> terms;
};

inline SummaryIdentity appendix_summary(const std::string &name) {
    const FixtureFile *f = nullptr;
    if (name == "C3_SUMMARY") {
        f = &appendix_file("C");
    } else if (name == "C6_SUMMARY") {
        f = &appendix_file("D");
    } else if (name == "C12_SUMMARY") {
        f = &appendix_file("E");
    } else {
        throw std::invalid_argument("unknown appendix summary: " + name);
    }
    auto it = f->summaries.find(name);
    if (it == f->summaries.end()) {
        throw std::invalid_argument("fixture has no summary " + name);
    }
    return SummaryIdentity{f, name, it->second};
}

/// Evaluate a record reference like `SIGMA_Y7[yq6=0]` at (y, x), printed convention.
inline int64_t eval_record_ref(const FixtureFile &fx, const std::string &ref, std::vector<int64_t> vals) {
    std::string name = ref;
    auto br = ref.find('[');
    VarLayout lay{fx.k};
    if (br != std::string::npos) {
        name = ref.substr(0, br);
        std::string inner = ref.substr(br + 1, ref.size() - br - 2);
        std::istringstream ss(inner);
        std::string asg;
        while (std::getline(ss, asg, ',')) {
            auto eq = asg.find('=');
            vals[lay.parse(asg.substr(0, eq))] = std::stoll(asg.substr(eq + 1));
        }
    }
    return mod(fx.record(name).eval(vals), 3);
}

/// Bracket weight of each term at one (y, x), x in this library's convention.
inline std::vector<int64_t> summary_term_weights(const SummaryIdentity &s, const std::vector<int64_t> &y,
                                                 const PhasePoint &x) {
    const FixtureFile &fx = *s.file;
    const size_t k = fx.k;
    std::vector<int64_t> vals(3 * k);
    for (size_t i = 0; i < k; i++) {
        vals[i] = y[i];
        vals[k + i] = mod(-x.xp[i], 3);  // records are stored as printed
        vals[2 * k + i] = x.xq[i];
    }
    auto ev = [&](const std::string &r) {
        return eval_record_ref(fx, r, vals);
    };
    std::vector<int64_t> out;
    for (const auto &t : s.terms) {
        bool on = true;
        for (const auto &c : t.conds) {
            bool ok;
            if (c.kind == "zero") {
                ok = ev(c.refs.at(0)) == 0;
            } else if (c.kind == "nonzero") {
                ok = ev(c.refs.at(0)) != 0;
            } else if (c.kind == "allnonzero") {
                ok = std::all_of(c.refs.begin(), c.refs.end(), [&](const std::string &r) {
                    return ev(r) != 0;
                });
            } else if (c.kind == "anyplane" || c.kind == "noplane") {
                bool any = false;
                for (size_t i = 0; i + 1 < c.refs.size(); i += 2) {
                    any = any || (ev(c.refs[i]) == 0 && ev(c.refs[i + 1]) == 0);
                }
                ok = c.kind == "anyplane" ? any : !any;
            } else if (c.kind == "equal") {
                ok = ev(c.refs.at(0)) == ev(c.refs.at(1));
            } else {
                throw std::invalid_argument("unknown summary condition: " + c.kind);
            }
            on = on && ok;
        }
        out.push_back(on ? t.weight : 0);
    }
    return out;
}

/// Single-qutrit polynomial, recovered from the two-qutrit fixture by undoing
/// C(1,2)^2 on both variable sets and splitting the separable result.
inline ExponentialSumPoly single_qutrit_poly() {
    static const ExponentialSumPoly cached = [] {
        ExponentialSumPoly two = appendix_fixture("A2");
        AffineSymplectic g = power(cnot_map(1, 2, 2, 3), 2);
        AffineSymplectic gi = inverse(g);
        ExponentialSumPoly sep = transform_poly(two, *inverse(g.q_block()), gi);
        VarLayout lay2{2};
        auto qudit_of = [&](int16_t v) {
            return (size_t)v % 2;
        };
        ExponentialSumPoly one;
        one.k = 1;
        one.md = two.md;
        one.prefactor = -2;
        one.P = Poly(two.md.m);
        Poly second(two.md.m);
        for (const auto &[mono, c] : sep.P.terms) {
            bool has0 = false, has1 = false;
            Monomial relabeled;
            for (auto v : mono) {
                (qudit_of(v) == 0 ? has0 : has1) = true;
                relabeled.push_back((int16_t)(v / 2));
            }
            if (has0 && has1) {
                throw std::runtime_error("two-qutrit fixture is not separable: cross term " +
                                         format_monomial(mono, lay2));
            }
            if (mono.empty()) {
                throw std::runtime_error("two-qutrit fixture has a constant term");
            }
            (has0 ? one.P : second).add(relabeled, c);
        }
        if (!(one.P == second)) {
            throw std::runtime_error("two-qutrit fixture halves differ; transcription error");
        }
        one.canonicalize();
        return one;
    }();
    return cached;
}

/// Sum of k relabeled single-qutrit copies.
inline ExponentialSumPoly tensor_poly(size_t k) {
    if (k < 1) {
        throw std::invalid_argument("tensor_poly needs k >= 1");
    }
    ExponentialSumPoly one = single_qutrit_poly();
    ExponentialSumPoly out;
    out.k = k;
    out.md = one.md;
    out.prefactor = one.prefactor * (int)k;
    out.P = Poly(one.md.m);
    VarLayout lay{k};
    for (size_t i = 0; i < k; i++) {
        for (const auto &[mono, c] : one.P.terms) {
            Monomial m;
            for (auto v : mono) {
                // v in {0: y, 1: xp, 2: xq}
                m.push_back(v == 0 ? lay.y(i) : v == 1 ? lay.xp(i) : lay.xq(i));
            }
            out.P.add(m, c);
        }
    }
    out.canonicalize();
    return out;
}

/// Quadratic variables are summed in closed form; cubic ones index the Gauss sums.
struct VariableClassification {
    std::vector<size_t> cubic;      // 0-based y indices
    std::vector<size_t> quadratic;  // 0-based y indices
};

/// Genuine cubes are cubic. The quadratic set is the largest set S of the
/// rest such that no monomial has degree > 2 in S and every S-monomial is a
/// multiple of d^{h-1}; ties go to higher indices.
inline VariableClassification classify_variables(const ExponentialSumPoly &p) {
    const size_t k = p.k;
    if (k > 20) {
        throw std::length_error("classification enumerates subsets; k <= 20");
    }
    const int64_t lowmod = p.md.m / p.md.d;
    uint32_t forbidden = 0;
    for (const auto &[mono, c] : p.P.terms) {
        if (mod(c, lowmod) != 0) {
            for (auto v : mono) {
                if ((size_t)v < k) {
                    forbidden |= 1u << v;
                }
            }
        }
    }
    std::vector<uint32_t> ymasks;
    for (const auto &[mono, c] : p.P.terms) {
        (void)c;
        uint32_t mm = 0;
        for (auto v : mono) {
            if ((size_t)v < k) {
                mm |= 1u << v;
            }
        }
        if (mm) {
            ymasks.push_back(mm);
        }
    }
    std::vector<std::vector<int16_t>> ymonos;
    for (const auto &[mono, c] : p.P.terms) {
        (void)c;
        std::vector<int16_t> ys;
        for (auto v : mono) {
            if ((size_t)v < k) {
                ys.push_back(v);
            }
        }
        if (ys.size() >= 3) {
            ymonos.push_back(ys);
        }
    }
    uint32_t best = 0;
    int best_size = -1;
    for (uint32_t S = 0; S < (1u << k); S++) {
        if (S & forbidden) {
            continue;
        }
        int size = __builtin_popcount(S);
        if (size < best_size || (size == best_size && S < best)) {
            continue;
        }
        bool ok = true;
        for (const auto &ys : ymonos) {
            int deg = 0;
            for (auto v : ys) {
                deg += (S >> v) & 1;
            }
            if (deg > 2) {
                ok = false;
                break;
            }
        }
        if (ok) {
            best = S;
            best_size = size;
        }
    }
    VariableClassification cls;
    for (size_t i = 0; i < k; i++) {
        ((best >> i) & 1 ? cls.quadratic : cls.cubic).push_back(i);
    }
    return cls;
}

/// Per-x specialization of a polynomial into Gauss sums over the quadratic set.
class SliceEvaluator {
   public:
    SliceEvaluator(const ExponentialSumPoly &p, VariableClassification cls) : p_(p), cls_(std::move(cls)) {
        const size_t k = p.k;
        role_.assign(k, {-1, -1});
        for (size_t i = 0; i < cls_.cubic.size(); i++) {
            role_[cls_.cubic[i]] = {0, (int)i};
        }
        for (size_t i = 0; i < cls_.quadratic.size(); i++) {
            role_[cls_.quadratic[i]] = {1, (int)i};
        }
        for (const auto &[mono, c] : p.P.terms) {
            Term t;
            t.coeff = c;
            for (auto v : mono) {
                if ((size_t)v < k) {
                    auto [kind, idx] = role_[v];
                    (kind == 0 ? t.cubic : t.quad).push_back((int16_t)idx);
                } else {
                    t.xvars.push_back((int16_t)(v - k));
                }
            }
            if (t.quad.size() > 2) {
                throw std::invalid_argument("monomial of degree > 2 in the quadratic set");
            }
            terms_.push_back(std::move(t));
        }
    }

    const VariableClassification &classification() const {
        return cls_;
    }
    const ExponentialSumPoly &poly() const {
        return p_;
    }

    /// Fold the phase point into the coefficients.
    void set_x(const PhasePoint &x) {
        const int64_t m = p_.md.m;
        auto flat = x.flat();
        folded_.clear();
        std::map<std::pair<std::vector<int16_t>, std::vector<int16_t>>, int64_t> acc;
        for (const auto &t : terms_) {
            int64_t c = t.coeff;
            for (auto v : t.xvars) {
                c = c * mod(flat[v], p_.md.d) % m;
            }
            if (c == 0) {
                continue;
            }
            auto &slot = acc[{t.cubic, t.quad}];
            slot = mod(slot + c, m);
        }
        for (auto &[key, c] : acc) {
            if (c) {
                folded_.push_back(Term{c, key.first, key.second, {}});
            }
        }
    }

    /// Gauss sum over the quadratic variables for one cubic assignment.
    GaussSumSpec spec(const std::vector<int64_t> &cubic_values) const {
        if (cubic_values.size() != cls_.cubic.size()) {
            throw std::invalid_argument("assignment must cover exactly the cubic variables");
        }
        const int64_t d = p_.md.d;
        const int64_t m = p_.md.m;
        const int64_t low = m / d;
        const size_t q = cls_.quadratic.size();
        GaussSumSpec s = GaussSumSpec::zero_form(q, d, p_.md.h);
        int64_t half = *mod_inverse(2, d);
        for (const auto &t : folded_) {
            int64_t c = t.coeff;
            for (auto v : t.cubic) {
                c = c * cubic_values[v] % m;
            }
            if (c == 0) {
                continue;
            }
            if (t.quad.empty()) {
                s.c += c;
                continue;
            }
            int64_t r = mod(c, m) / low;
            if (t.quad.size() == 1) {
                s.beta[t.quad[0]] += r;
            } else if (t.quad[0] == t.quad[1]) {
                s.A(t.quad[0], t.quad[0]) += r;
            } else {
                s.A(t.quad[0], t.quad[1]) += r * half;
                s.A(t.quad[1], t.quad[0]) += r * half;
            }
        }
        s.c = mod(s.c, m);
        for (auto &v : s.beta) {
            v = mod(v, d);
        }
        for (auto &v : s.A.a) {
            v = mod(v, d);
        }
        return s;
    }

    /// Exact slice value, without the global prefactor.
    CyclotomicAmplitude slice_value(const std::vector<int64_t> &cubic_values) const {
        return eval_closed(spec(cubic_values));
    }

   private:
    struct Term {
        int64_t coeff;
        std::vector<int16_t> cubic;
        std::vector<int16_t> quad;
        std::vector<int16_t> xvars;
    };
    ExponentialSumPoly p_;
    VariableClassification cls_;
    std::vector<std::pair<int, int>> role_;
    std::vector<Term> terms_;
    std::vector<Term> folded_;
};

/// Convenience wrapper matching the one-shot form.
inline GaussSumSpec gauss_slice(const ExponentialSumPoly &p, const VariableClassification &cls,
                                const std::vector<int64_t> &cubic_values, const PhasePoint &x) {
    SliceEvaluator ev(p, cls);
    ev.set_x(x);
    return ev.spec(cubic_values);
}

/// Transformed tensor polynomial for the canned sequences C3/C6/C12 (k = 2 uses C(1,2)^2).
inline ExponentialSumPoly transformed_magic_poly(size_t k) {
    AffineSymplectic a;
    if (k == 1) {
        return tensor_poly(1);
    } else if (k == 2) {
        a = power(cnot_map(1, 2, 2, 3), 2);
    } else if (k == 3 || k == 6 || k == 12) {
        a = canned_sequence("C" + std::to_string(k));
    } else {
        throw std::invalid_argument("no canned transform for k = " + std::to_string(k));
    }
    return transform_poly(tensor_poly(k), a);
}

}  // namespace wwm

#endif
