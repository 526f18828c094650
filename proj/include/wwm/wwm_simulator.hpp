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

#ifndef WWM_WWM_SIMULATOR_HPP
#define WWM_WWM_SIMULATOR_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "wwm/clifford.hpp"
#include "wwm/magic_poly.hpp"
#include "wwm/modlinalg.hpp"
#include "wwm/phasespace.hpp"
#include "wwm/rank_counter.hpp"

namespace wwm {

/// n qudits; 1..k hold |T>, k+1..n hold |0>. Gates are CNOT powers
/// (control i, target j); the projector is |outcome><outcome| on one qudit.
struct CircuitSpec {
    size_t n = 1;
    size_t k = 0;
    int64_t d = 3;
    std::vector<GateToken> gates;
    size_t target = 1;
    int64_t outcome = 0;

    void validate() const {
        if (n < 1 || k > n) {
            throw std::invalid_argument("circuit needs n >= 1 and k <= n");
        }
        if (!is_prime(d) || d == 2) {
            throw std::invalid_argument("circuit dimension must be an odd prime");
        }
        if (k > 0 && d != 3) {
            throw std::invalid_argument("magic inputs are defined for qutrits only");
        }
        for (const auto &g : gates) {
            if (g.i < 1 || g.j < 1 || g.i > n || g.j > n || g.i == g.j) {
                throw std::invalid_argument("gate index out of range");
            }
        }
        if (target < 1 || target > n) {
            throw std::invalid_argument("projector qudit out of range");
        }
        if (outcome < 0 || outcome >= d) {
            throw std::invalid_argument("projector outcome out of range");
        }
    }

    std::string str() const {
        std::ostringstream os;
        os << n << ' ' << k << ' ' << d << '\n';
        for (const auto &g : gates) {
            os << "C " << g.i << ' ' << g.j << ' ' << g.pow << '\n';
        }
        os << "P " << target << ' ' << outcome << '\n';
        return os.str();
    }
};

/// Header `n k d`, then `C i j pow` lines and one `P idx outcome` line.
inline CircuitSpec parse_circuit(std::string_view text) {
    CircuitSpec c;
    std::istringstream in{std::string(text)};
    std::string line;
    bool header = false, proj = false;
    int lineno = 0;
    while (std::getline(in, line)) {
        lineno++;
        auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.resize(hash);
        }
        std::istringstream ls(line);
        std::string head;
        if (!(ls >> head)) {
            continue;
        }
        auto fail = [&](const std::string &why) {
            throw std::invalid_argument("circuit line " + std::to_string(lineno) + ": " + why);
        };
        if (!header) {
            std::istringstream hs(line);
            if (!(hs >> c.n >> c.k >> c.d)) {
                fail("expected header `n k d`");
            }
            header = true;
        } else if (head == "C") {
            GateToken g;
            if (!(ls >> g.i >> g.j >> g.pow)) {
                fail("expected `C i j pow`");
            }
            c.gates.push_back(g);
        } else if (head == "P") {
            if (proj) {
                fail("only one projector line is allowed");
            }
            if (!(ls >> c.target >> c.outcome)) {
                fail("expected `P idx outcome`");
            }
            proj = true;
        } else {
            fail("unknown token " + head);
        }
    }
    if (!header || !proj) {
        throw std::invalid_argument("circuit needs a header and a projector line");
    }
    c.validate();
    return c;
}

/// Point map of the whole circuit: W_out(x) = W_in(M^{-1} x).
inline AffineSymplectic circuit_map(const CircuitSpec &c) {
    std::vector<AffineSymplectic> seq;
    for (const auto &g : c.gates) {
        // Control i, target j acts on phase space as the (j, i) map.
        seq.push_back(power(cnot_map(g.j, g.i, c.n, c.d), g.pow));
    }
    if (seq.empty()) {
        return AffineSymplectic::identity(c.n, c.d);
    }
    return compose(seq);
}

/// Rows R x = b (mod d^h) cutting out the support of the integrand.
struct DomainRestriction {
    size_t n = 0;
    int64_t d = 3;
    int64_t h = 1;
    ModMatrix rows;
    std::vector<int64_t> rhs;
    std::vector<std::string> labels;

    bool contains(const PhasePoint &x) const {
        auto f = x.flat();
        auto r = rows.apply(f);
        for (size_t i = 0; i < r.size(); i++) {
            if (mod(r[i] - rhs[i], d) != 0) {
                return false;
            }
        }
        return true;
    }

    size_t dimension() const {
        return 2 * n - rank(rows);
    }

    /// All points of the coset, in a fixed order.
    std::vector<PhasePoint> enumerate() const {
        auto sol = solve(rows, rhs);
        if (!sol) {
            return {};
        }
        size_t dim = sol->basis.size();
        uint64_t total = ipow_u((uint64_t)d, dim);
        std::vector<PhasePoint> pts;
        pts.reserve(total);
        for (uint64_t t = 0; t < total; t++) {
            auto v = sol->particular;
            uint64_t r = t;
            for (size_t b = 0; b < dim; b++) {
                int64_t c = (int64_t)(r % d);
                r /= d;
                for (size_t i = 0; i < v.size(); i++) {
                    v[i] = mod(v[i] + c * sol->basis[b][i], d);
                }
            }
            pts.push_back(PhasePoint::from_flat(v));
        }
        return pts;
    }
};

/// Basis state |o> has Wigner support x_q = -o in this convention.
inline int64_t projector_row_value(int64_t outcome, int64_t d) {
    return mod(-outcome, d);
}

inline DomainRestriction domain_restriction(const CircuitSpec &c) {
    c.validate();
    const size_t n = c.n;
    AffineSymplectic Minv = inverse(circuit_map(c));
    DomainRestriction D;
    D.n = n;
    D.d = c.d;
    D.h = 1;  // CNOT maps are affine mod d
    size_t nrows = (n - c.k) + 1;
    D.rows = ModMatrix(nrows, 2 * n, c.d);
    size_t r = 0;
    for (size_t j = c.k; j < n; j++, r++) {
        for (size_t col = 0; col < 2 * n; col++) {
            D.rows(r, col) = Minv.M(n + j, col);
        }
        D.rhs.push_back(mod(-Minv.v[n + j], c.d));
        D.labels.push_back("(M^-1 x)_q" + std::to_string(j + 1) + " = 0");
    }
    D.rows(r, n + c.target - 1) = 1;
    D.rhs.push_back(projector_row_value(c.outcome, c.d));
    D.labels.push_back("x_q" + std::to_string(c.target) + " = " + std::to_string(D.rhs.back()));
    return D;
}

/// Exact single-qutrit |T> Wigner values indexed by (xp, xq).
inline const std::vector<CyclotomicAmplitude> &magic_wigner_table() {
    static const std::vector<CyclotomicAmplitude> table = [] {
        auto p = single_qutrit_poly();
        std::vector<CyclotomicAmplitude> t(9);
        for (int64_t xp = 0; xp < 3; xp++) {
            for (int64_t xq = 0; xq < 3; xq++) {
                t[xp * 3 + xq] = p.evaluate(PhasePoint{{xp}, {xq}});
            }
        }
        return t;
    }();
    return table;
}

struct SimulationResult {
    double p = 0;
    CyclotomicAmplitude exact;
    std::string method;
    size_t terms_evaluated = 0;
    uint64_t seed = 0;
    double ci = 0;
    int64_t h = 1;

    nlohmann::json to_json() const {
        nlohmann::json j = {{"p", p}, {"method", method}, {"terms_evaluated", terms_evaluated}, {"seed", seed}, {"ci", ci}};
        if (exact.typed()) {
            j["exact"] = exact.str();
        }
        if (h != 1) {
            j["flags"] = {"restriction modulus needs h > 1"};
        }
        return j;
    }
};

constexpr size_t kWwmMagicCap = 6;

/// P = sum over the restricted coset of the product of input Wigner values.
inline SimulationResult simulate_wwm(const CircuitSpec &c) {
    if (c.k > kWwmMagicCap) {
        throw std::length_error("simulate_wwm enumerates at most k = 6 magic qudits");
    }
    DomainRestriction D = domain_restriction(c);
    if (D.dimension() > 24) {
        throw std::length_error("restricted domain too large to enumerate");
    }
    const Modulus md = c.d == 3 ? Modulus::checked(3, 2) : Modulus::checked(c.d, 1);
    AffineSymplectic Minv = inverse(circuit_map(c));
    const auto &WT = magic_wigner_table();
    CyclotomicAmplitude acc = CyclotomicAmplitude::integer(md, 0);
    size_t terms = 0;
    for (const auto &x : D.enumerate()) {
        PhasePoint z = Minv.apply(x);
        CyclotomicAmplitude term = CyclotomicAmplitude::integer(md, 1);
        for (size_t i = 0; i < c.k; i++) {
            term *= WT[mod(z.xp[i], 3) * 3 + mod(z.xq[i], 3)];
        }
        acc += term;
        terms++;
    }
    // Each |0> factor contributes 1/d on its support.
    acc = acc.scaled(2 * (int)(c.n - c.k));
    SimulationResult r;
    r.exact = acc;
    r.p = acc.to_complex().real();
    r.method = "wwm";
    r.terms_evaluated = terms;
    r.h = D.h;
    return r;
}

/// Hilbert-space oracle: apply the CNOT permutations to the product state.
inline SimulationResult simulate_dense(const CircuitSpec &c) {
    c.validate();
    if ((int)c.n > kDenseQuditCap) {
        throw std::length_error("dense oracle is capped at 6 qudits");
    }
    const Modulus md = c.d == 3 ? Modulus::checked(3, 2) : Modulus::checked(c.d, 1);
    const int64_t d = c.d;
    const size_t D = dense_dim(c.n, d);
    std::vector<CyclotomicAmplitude> psi(D, CyclotomicAmplitude::integer(md, 0));
    if (c.k > 0) {
        auto mag = magic_state_vector(c.k, md);
        uint64_t tail = ipow_u((uint64_t)d, c.n - c.k);
        for (size_t i = 0; i < mag.size(); i++) {
            psi[i * tail] = mag[i];
        }
    } else {
        psi[0] = CyclotomicAmplitude::integer(md, 1);
    }
    for (const auto &g : c.gates) {
        std::vector<CyclotomicAmplitude> next(D, CyclotomicAmplitude::integer(md, 0));
        for (size_t idx = 0; idx < D; idx++) {
            auto q = basis_digits(idx, c.n, d);
            q[g.j - 1] = mod(q[g.j - 1] + g.pow * q[g.i - 1], d);
            next[basis_index(q, d)] = psi[idx];
        }
        psi = std::move(next);
    }
    CyclotomicAmplitude acc = CyclotomicAmplitude::integer(md, 0);
    for (size_t idx = 0; idx < D; idx++) {
        auto q = basis_digits(idx, c.n, d);
        if (q[c.target - 1] == c.outcome) {
            acc += psi[idx] * psi[idx].conj();
        }
    }
    SimulationResult r;
    r.exact = acc;
    r.p = acc.to_complex().real();
    r.method = "dense";
    r.terms_evaluated = D;
    return r;
}

/// Per-qudit input distribution: W values and their absolute sum.
struct InputWigner {
    std::vector<double> w;  // index xp*d + xq
    double negativity = 1;  // sum |w|
};

inline std::vector<InputWigner> input_wigner(const CircuitSpec &c) {
    std::vector<InputWigner> out;
    const int64_t d = c.d;
    for (size_t i = 0; i < c.n; i++) {
        InputWigner iw;
        iw.w.assign(d * d, 0.0);
        if (i < c.k) {
            const auto &WT = magic_wigner_table();
            for (size_t t = 0; t < 9; t++) {
                iw.w[t] = WT[t].to_complex().real();
            }
        } else {
            for (int64_t xp = 0; xp < d; xp++) {
                iw.w[xp * d + 0] = 1.0 / (double)d;
            }
        }
        iw.negativity = 0;
        for (double v : iw.w) {
            iw.negativity += std::abs(v);
        }
        out.push_back(iw);
    }
    return out;
}

inline double total_negativity(const CircuitSpec &c) {
    double N = 1;
    for (const auto &iw : input_wigner(c)) {
        N *= iw.negativity;
    }
    return N;
}

/// Hoeffding sample count for half-width eps at confidence 1 - alpha.
inline size_t prescribed_samples(double negativity, double eps = 1e-2, double alpha = 0.05) {
    return (size_t)std::ceil(2.0 * negativity * negativity * std::log(2.0 / alpha) / (eps * eps));
}

inline double hoeffding_half_width(double negativity, size_t samples, double alpha = 0.05) {
    return negativity * std::sqrt(2.0 * std::log(2.0 / alpha) / (double)samples);
}

/// Importance sampling z ~ |W_in|, estimator N sign(W_in(z)) [projector row at M z].
/// Worker w draws from its own stream seeded by (seed, w); results depend on
/// the seed and the worker count only.
inline SimulationResult estimate_negativity_mc(const CircuitSpec &c, size_t samples, uint64_t seed,
                                               unsigned workers = 1) {
    c.validate();
    if (samples == 0) {
        throw std::invalid_argument("negativity sampler needs at least one sample");
    }
    auto in = input_wigner(c);
    double N = 1;
    for (const auto &iw : in) {
        if (iw.negativity <= 0) {
            throw std::invalid_argument("input Wigner function has zero total weight");
        }
        N *= iw.negativity;
    }
    const int64_t d = c.d;
    const size_t n = c.n;
    AffineSymplectic M = circuit_map(c);
    const int64_t want = projector_row_value(c.outcome, d);
    // Only the q_target row of M matters.
    std::vector<int64_t> row(2 * n);
    for (size_t col = 0; col < 2 * n; col++) {
        row[col] = M.M(n + c.target - 1, col);
    }
    const int64_t off = M.v[n + c.target - 1];
    workers = std::max(1u, workers);
    std::vector<double> partial(workers, 0.0);
    auto work = [&](unsigned w) {
        std::seed_seq ss{(uint32_t)seed, (uint32_t)(seed >> 32), (uint32_t)w};
        std::mt19937_64 rng(ss);
        std::vector<std::discrete_distribution<int>> dist;
        for (const auto &iw : in) {
            std::vector<double> a(iw.w.size());
            for (size_t t = 0; t < a.size(); t++) {
                a[t] = std::abs(iw.w[t]);
            }
            dist.emplace_back(a.begin(), a.end());
        }
        size_t lo = samples * w / workers, hi = samples * (w + 1) / workers;
        double s = 0;
        std::vector<int64_t> z(2 * n);
        for (size_t t = lo; t < hi; t++) {
            double sign = 1;
            for (size_t i = 0; i < n; i++) {
                int cell = dist[i](rng);
                z[i] = cell / d;
                z[n + i] = cell % d;
                if (in[i].w[cell] < 0) {
                    sign = -sign;
                }
            }
            int64_t q = off;
            for (size_t col = 0; col < 2 * n; col++) {
                q += row[col] * z[col];
            }
            if (mod(q, d) == want) {
                s += sign;
            }
        }
        partial[w] = s;
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; w++) {
            pool.emplace_back(work, w);
        }
        for (auto &t : pool) {
            t.join();
        }
    }
    double total = 0;
    for (double s : partial) {
        total += s;
    }
    SimulationResult r;
    r.p = N * total / (double)samples;
    r.method = "negativity-mc";
    r.terms_evaluated = samples;
    r.seed = seed;
    r.ci = hoeffding_half_width(N, samples);
    return r;
}

struct CurvePoint {
    size_t t;
    std::string family;
    double log3_terms;
};

/// log3 cost of each tensor-bound family and of the negativity sampler
/// (samples for a 1e-2 half-width at 95%, one |T> per magic qudit).
inline std::vector<CurvePoint> term_count_curve(size_t t_max, const std::map<size_t, uint64_t> &base) {
    std::vector<CurvePoint> out;
    CircuitSpec one;
    one.n = one.k = 1;
    const double n1 = total_negativity(one);
    const double ln3 = std::log(3.0);
    for (size_t t = 1; t <= t_max; t++) {
        for (const auto &[k, xi] : base) {
            if (k == 0) {
                continue;
            }
            out.push_back({t, "xi_" + std::to_string(k), (double)t / (double)k * std::log((double)xi) / ln3});
        }
        double cost = std::log(2.0 * std::log(40.0) / 1e-4) + 2.0 * (double)t * std::log(n1);
        out.push_back({t, "negativity", cost / ln3});
    }
    return out;
}

/// Random CNOT-power circuit for oracle suites.
inline CircuitSpec random_circuit(std::mt19937_64 &rng, size_t max_n, size_t max_k, size_t max_gates) {
    CircuitSpec c;
    c.n = std::uniform_int_distribution<size_t>(1, max_n)(rng);
    c.k = std::uniform_int_distribution<size_t>(0, std::min(max_k, c.n))(rng);
    size_t g = c.n > 1 ? std::uniform_int_distribution<size_t>(0, max_gates)(rng) : 0;
    for (size_t t = 0; t < g; t++) {
        GateToken tok;
        tok.i = std::uniform_int_distribution<size_t>(1, c.n)(rng);
        do {
            tok.j = std::uniform_int_distribution<size_t>(1, c.n)(rng);
        } while (tok.j == tok.i);
        tok.pow = std::uniform_int_distribution<int64_t>(1, 2)(rng);
        c.gates.push_back(tok);
    }
    c.target = std::uniform_int_distribution<size_t>(1, c.n)(rng);
    c.outcome = std::uniform_int_distribution<int64_t>(0, 2)(rng);
    return c;
}

}  // namespace wwm

#endif
