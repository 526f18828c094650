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

#ifndef WWM_STAB_SEARCH_HPP
#define WWM_STAB_SEARCH_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "wwm/modlinalg.hpp"
#include "wwm/phasespace.hpp"
#include "wwm/ring.hpp"

namespace wwm {

using cvec = std::vector<std::complex<double>>;

/// Pauli string W(a, b) = tau^{-a.b} X^a Z^b with tau = -exp(i pi / d), so W^d = I.
struct PauliString {
    std::vector<int64_t> a;  // X powers
    std::vector<int64_t> b;  // Z powers

    bool is_identity() const {
        return std::all_of(a.begin(), a.end(), [](int64_t v) { return v == 0; }) &&
               std::all_of(b.begin(), b.end(), [](int64_t v) { return v == 0; });
    }
};

inline int64_t symplectic_product(const PauliString &p, const PauliString &q, int64_t d) {
    int64_t s = 0;
    for (size_t i = 0; i < p.a.size(); i++) {
        s += p.a[i] * q.b[i] - p.b[i] * q.a[i];
    }
    return mod(s, d);
}

inline std::complex<double> root_of_unity(int64_t e, int64_t d) {
    double ang = 2.0 * M_PI * (double)mod(e, d) / (double)d;
    return {std::cos(ang), std::sin(ang)};
}

/// Apply W(a, b) to a state on n qudits (qudit 1 most significant).
inline cvec apply_pauli(const PauliString &P, const cvec &v, size_t n, int64_t d) {
    const size_t D = v.size();
    int64_t ab = 0;
    for (size_t i = 0; i < n; i++) {
        ab += P.a[i] * P.b[i];
    }
    // tau^{-ab} = exp(-i pi ab (d+1) / d)
    double ang = -M_PI * (double)ab * (double)(d + 1) / (double)d;
    std::complex<double> tau_pow{std::cos(ang), std::sin(ang)};
    cvec out(D);
    for (size_t idx = 0; idx < D; idx++) {
        auto c = basis_digits(idx, n, d);
        int64_t ph = 0;
        for (size_t i = 0; i < n; i++) {
            ph += P.b[i] * c[i];
            c[i] = mod(c[i] + P.a[i], d);
        }
        out[basis_index(c, d)] = tau_pow * root_of_unity(ph, d) * v[idx];
    }
    return out;
}

inline double norm(const cvec &v) {
    double s = 0;
    for (auto z : v) {
        s += std::norm(z);
    }
    return std::sqrt(s);
}

inline std::complex<double> inner(const cvec &a, const cvec &b) {
    std::complex<double> s = 0;
    for (size_t i = 0; i < a.size(); i++) {
        s += std::conj(a[i]) * b[i];
    }
    return s;
}

/// Generators W_j with W_j psi = omega^{e_j} psi.
struct StabilizerCertificate {
    size_t n = 0;
    int64_t d = 3;
    std::vector<PauliString> generators;
    std::vector<int64_t> eigen;

    /// Independent, commuting, and each an eigen-relation of psi.
    bool verify(const cvec &psi, double tol = 1e-8) const {
        if (generators.size() != n || eigen.size() != n) {
            return false;
        }
        ModMatrix G(n, 2 * n, d);
        for (size_t j = 0; j < n; j++) {
            for (size_t i = 0; i < n; i++) {
                G(j, i) = mod(generators[j].a[i], d);
                G(j, n + i) = mod(generators[j].b[i], d);
            }
            for (size_t k = 0; k < j; k++) {
                if (symplectic_product(generators[j], generators[k], d) != 0) {
                    return false;
                }
            }
        }
        if (rank(G) != n) {
            return false;
        }
        for (size_t j = 0; j < n; j++) {
            cvec w = apply_pauli(generators[j], psi, n, d);
            auto lam = root_of_unity(eigen[j], d);
            for (size_t i = 0; i < w.size(); i++) {
                if (std::abs(w[i] - lam * psi[i]) > tol) {
                    return false;
                }
            }
        }
        return true;
    }

    nlohmann::json to_json() const {
        nlohmann::json g = nlohmann::json::array();
        for (size_t j = 0; j < generators.size(); j++) {
            g.push_back({{"x", generators[j].a}, {"z", generators[j].b}, {"eigen_exponent", eigen[j]}});
        }
        return g;
    }
};

struct StabilizerState {
    cvec amps;
    StabilizerCertificate cert;
};

/// Project v onto the joint eigenspace named by (generators, eigen).
inline cvec project_joint(const std::vector<PauliString> &gens, const std::vector<int64_t> &eigen, cvec v,
                          size_t n, int64_t d) {
    for (size_t j = 0; j < gens.size(); j++) {
        cvec acc = v;
        cvec cur = v;
        for (int64_t m = 1; m < d; m++) {
            cur = apply_pauli(gens[j], cur, n, d);
            auto f = root_of_unity(-eigen[j] * m, d);
            for (size_t i = 0; i < acc.size(); i++) {
                acc[i] += f * cur[i];
            }
        }
        for (auto &z : acc) {
            z /= (double)d;
        }
        v = std::move(acc);
    }
    return v;
}

/// Fix the global phase: first amplitude above 1e-9 made real positive.
inline void canonical_phase(cvec &v) {
    for (auto z : v) {
        if (std::abs(z) > 1e-9) {
            auto ph = std::conj(z) / std::abs(z);
            for (auto &w : v) {
                w *= ph;
            }
            return;
        }
    }
}

/// Unit state of the joint eigenspace (always one-dimensional for a full group).
inline cvec state_from_group(const std::vector<PauliString> &gens, const std::vector<int64_t> &eigen, size_t n,
                             int64_t d) {
    const size_t D = dense_dim(n, d);
    for (size_t seed_idx = 0; seed_idx < D; seed_idx++) {
        cvec e(D, 0.0);
        e[seed_idx] = 1.0;
        cvec v = project_joint(gens, eigen, e, n, d);
        double nv = norm(v);
        if (nv > 1e-6) {
            for (auto &z : v) {
                z /= nv;
            }
            canonical_phase(v);
            return v;
        }
    }
    throw std::logic_error("empty joint eigenspace");
}

inline PauliString random_pauli(size_t n, int64_t d, std::mt19937_64 &rng, bool nonidentity = true) {
    std::uniform_int_distribution<int64_t> dig(0, d - 1);
    PauliString p{std::vector<int64_t>(n), std::vector<int64_t>(n)};
    do {
        for (size_t i = 0; i < n; i++) {
            p.a[i] = dig(rng);
            p.b[i] = dig(rng);
        }
    } while (nonidentity && p.is_identity());
    return p;
}

/// Uniform stabilizer state: a uniformly random Lagrangian (grown one commuting
/// independent generator at a time) and uniform eigenvalues.
inline StabilizerState random_stabilizer_state(size_t n, int64_t d, std::mt19937_64 &rng) {
    if (n < 1 || n > 4 || d != 3) {
        throw std::invalid_argument("random_stabilizer_state supports d = 3, 1 <= n <= 4");
    }
    StabilizerCertificate cert;
    cert.n = n;
    cert.d = d;
    while (cert.generators.size() < n) {
        PauliString p = random_pauli(n, d, rng);
        bool ok = true;
        for (const auto &g : cert.generators) {
            ok = ok && symplectic_product(g, p, d) == 0;
        }
        if (!ok) {
            continue;
        }
        size_t r = cert.generators.size() + 1;
        ModMatrix G(r, 2 * n, d);
        for (size_t j = 0; j < r; j++) {
            const auto &g = j + 1 < r ? cert.generators[j] : p;
            for (size_t i = 0; i < n; i++) {
                G(j, i) = g.a[i];
                G(j, n + i) = g.b[i];
            }
        }
        if (rank(G) == r) {
            cert.generators.push_back(p);
        }
    }
    std::uniform_int_distribution<int64_t> dig(0, d - 1);
    for (size_t j = 0; j < n; j++) {
        cert.eigen.push_back(dig(rng));
    }
    return StabilizerState{state_from_group(cert.generators, cert.eigen, n, d), cert};
}

inline StabilizerState random_stabilizer_state(size_t n, int64_t d, uint64_t seed) {
    std::mt19937_64 rng(seed);
    return random_stabilizer_state(n, d, rng);
}

/// Every stabilizer state for small n, each with a certificate.
inline std::vector<StabilizerState> enumerate_stabilizer_states(size_t n, int64_t d) {
    if (n < 1 || n > 2 || !is_prime(d)) {
        throw std::invalid_argument("enumeration supports n <= 2 and prime d");
    }
    const size_t N2 = 2 * n;
    const uint64_t vecs = ipow_u((uint64_t)d, N2);
    auto to_pauli = [&](uint64_t code) {
        PauliString p{std::vector<int64_t>(n), std::vector<int64_t>(n)};
        for (size_t i = 0; i < N2; i++) {
            int64_t c = (int64_t)(code % d);
            code /= d;
            (i < n ? p.a[i] : p.b[i - n]) = c;
        }
        return p;
    };
    // Lagrangians keyed by their sorted element codes.
    std::map<std::vector<uint64_t>, std::vector<PauliString>> lagr;
    std::vector<uint64_t> idx(n, 1);
    std::function<void(size_t, std::vector<PauliString> &)> grow = [&](size_t depth, std::vector<PauliString> &gens) {
        if (depth == n) {
            std::vector<uint64_t> elems;
            uint64_t combos = ipow_u((uint64_t)d, n);
            for (uint64_t c = 0; c < combos; c++) {
                std::vector<int64_t> v(N2, 0);
                uint64_t r = c;
                for (size_t j = 0; j < n; j++) {
                    int64_t m = (int64_t)(r % d);
                    r /= d;
                    for (size_t i = 0; i < n; i++) {
                        v[i] += m * gens[j].a[i];
                        v[n + i] += m * gens[j].b[i];
                    }
                }
                uint64_t code = 0;
                for (size_t i = N2; i-- > 0;) {
                    code = code * d + (uint64_t)mod(v[i], d);
                }
                elems.push_back(code);
            }
            std::sort(elems.begin(), elems.end());
            lagr.emplace(elems, gens);
            return;
        }
        for (uint64_t code = 1; code < vecs; code++) {
            PauliString p = to_pauli(code);
            bool ok = true;
            for (const auto &g : gens) {
                ok = ok && symplectic_product(g, p, d) == 0;
            }
            if (!ok) {
                continue;
            }
            ModMatrix G(depth + 1, N2, d);
            for (size_t j = 0; j <= depth; j++) {
                const auto &g = j < depth ? gens[j] : p;
                for (size_t i = 0; i < n; i++) {
                    G(j, i) = g.a[i];
                    G(j, n + i) = g.b[i];
                }
            }
            if (rank(G) != depth + 1) {
                continue;
            }
            gens.push_back(p);
            grow(depth + 1, gens);
            gens.pop_back();
        }
    };
    std::vector<PauliString> gens;
    grow(0, gens);
    std::vector<StabilizerState> out;
    for (const auto &[key, g] : lagr) {
        uint64_t combos = ipow_u((uint64_t)d, n);
        for (uint64_t c = 0; c < combos; c++) {
            StabilizerCertificate cert;
            cert.n = n;
            cert.d = d;
            cert.generators = g;
            uint64_t r = c;
            for (size_t j = 0; j < n; j++) {
                cert.eigen.push_back((int64_t)(r % d));
                r /= d;
            }
            out.push_back({state_from_group(g, cert.eigen, n, d), cert});
        }
    }
    return out;
}

/// d^n prod_{j=1..n} (d^j + 1).
inline uint64_t count_stabilizer_states(size_t n, int64_t d) {
    if (n < 1 || !is_prime(d)) {
        throw std::invalid_argument("count needs n >= 1 and prime d");
    }
    uint64_t c = ipow_u((uint64_t)d, n);
    for (size_t j = 1; j <= n; j++) {
        c *= ipow_u((uint64_t)d, j) + 1;
    }
    return c;
}

/// Distinct states (up to global phase) in a list.
inline size_t count_distinct_states(const std::vector<StabilizerState> &states) {
    std::set<std::vector<long long>> seen;
    for (const auto &s : states) {
        cvec v = s.amps;
        canonical_phase(v);
        std::vector<long long> key;
        for (auto z : v) {
            key.push_back(std::llround(z.real() * 1e6));
            key.push_back(std::llround(z.imag() * 1e6));
        }
        seen.insert(key);
    }
    return seen.size();
}

/// ||Pi target|| with Pi the projector onto span(states); target must be unit.
inline double fidelity(const std::vector<cvec> &states, const cvec &target, double tol = 1e-10) {
    std::vector<cvec> basis;
    for (const auto &s : states) {
        cvec v = s;
        for (int pass = 0; pass < 2; pass++) {
            for (const auto &e : basis) {
                auto c = inner(e, v);
                for (size_t i = 0; i < v.size(); i++) {
                    v[i] -= c * e[i];
                }
            }
        }
        double nv = norm(v);
        if (nv > tol) {
            for (auto &z : v) {
                z /= nv;
            }
            basis.push_back(std::move(v));
        }
    }
    double s = 0;
    for (const auto &e : basis) {
        s += std::norm(inner(e, target));
    }
    return std::min(1.0, std::sqrt(s));
}

struct Ensemble {
    size_t n = 1;
    int64_t d = 3;
    std::vector<StabilizerState> states;

    std::vector<cvec> vectors() const {
        std::vector<cvec> v;
        for (const auto &s : states) {
            v.push_back(s.amps);
        }
        return v;
    }
};

inline double fidelity(const Ensemble &e, const cvec &target) {
    return fidelity(e.vectors(), target);
}

/// Certificate of (I - P)(I - w P) psi, P = omega^c W(h), from psi's certificate.
inline StabilizerCertificate project_certificate(const StabilizerCertificate &cert, const PauliString &h,
                                                 const cvec &result) {
    const int64_t d = cert.d;
    StabilizerCertificate out = cert;
    size_t pivot = cert.n;
    for (size_t j = 0; j < cert.n; j++) {
        if (symplectic_product(cert.generators[j], h, d) != 0) {
            pivot = j;
            break;
        }
    }
    if (pivot == cert.n) {
        return out;  // h is in the group up to phase; the state is unchanged
    }
    int64_t sp = symplectic_product(cert.generators[pivot], h, d);
    int64_t inv = *mod_inverse(sp, d);
    for (size_t j = 0; j < cert.n; j++) {
        if (j == pivot) {
            continue;
        }
        int64_t s = symplectic_product(cert.generators[j], h, d);
        if (s == 0) {
            continue;
        }
        int64_t m = mod(-s * inv, d);
        auto &g = out.generators[j];
        for (size_t i = 0; i < cert.n; i++) {
            g.a[i] = mod(g.a[i] + m * cert.generators[pivot].a[i], d);
            g.b[i] = mod(g.b[i] + m * cert.generators[pivot].b[i], d);
        }
    }
    out.generators[pivot] = h;
    // Eigenphases read off the new state.
    for (size_t j = 0; j < cert.n; j++) {
        auto w = apply_pauli(out.generators[j], result, cert.n, d);
        double ang = std::arg(inner(result, w));
        out.eigen[j] = mod((int64_t)std::llround(ang * (double)d / (2.0 * M_PI)), d);
    }
    return out;
}

struct StepOutcome {
    bool accepted = false;
    bool zero_candidate = false;
    double F = 0;
};

/// One Metropolis move. F' >= F is always accepted; F' < F with exp(-beta (F - F')).
inline StepOutcome metropolis_step(Ensemble &e, const cvec &target, double beta, double F, std::mt19937_64 &rng) {
    StepOutcome out;
    out.F = F;
    std::uniform_int_distribution<size_t> pick(0, e.states.size() - 1);
    size_t i = pick(rng);
    PauliString h = random_pauli(e.n, e.d, rng);
    int64_t c = std::uniform_int_distribution<int64_t>(0, e.d - 1)(rng);
    const auto &phi = e.states[i].amps;
    // P = omega^c W(h); cand = (I - P)(I - omega P) phi
    auto lam = root_of_unity(c, e.d);
    auto w = root_of_unity(1, e.d);
    cvec Pphi = apply_pauli(h, phi, e.n, e.d);
    cvec t(phi.size());
    for (size_t k = 0; k < t.size(); k++) {
        t[k] = phi[k] - w * lam * Pphi[k];
    }
    cvec Pt = apply_pauli(h, t, e.n, e.d);
    cvec cand(phi.size());
    for (size_t k = 0; k < t.size(); k++) {
        cand[k] = t[k] - lam * Pt[k];
    }
    double nc = norm(cand);
    if (nc < 1e-9) {
        out.zero_candidate = true;
        return out;
    }
    for (auto &z : cand) {
        z /= nc;
    }
    auto saved = e.states[i];
    e.states[i].amps = cand;
    double F2 = fidelity(e, target);
    bool accept = F2 >= F || std::uniform_real_distribution<double>(0.0, 1.0)(rng) < std::exp(-beta * (F - F2));
    if (!accept) {
        e.states[i] = std::move(saved);
        return out;
    }
    e.states[i].cert = project_certificate(saved.cert, h, cand);
    out.accepted = true;
    out.F = F2;
    return out;
}

struct AnnealSchedule {
    double beta_start = 1.0;
    double beta_end = 1e4;
    size_t steps = 1000000;
    size_t trace_every = 0;  // 0: about 10^4 rows per walk

    void validate() const {
        if (!(beta_start > 0 && beta_start < beta_end) || steps < 1) {
            throw std::invalid_argument("anneal schedule needs 0 < beta_start < beta_end and steps >= 1");
        }
    }

    double beta(size_t step) const {
        if (steps == 1) {
            return beta_start;
        }
        return beta_start * std::pow(beta_end / beta_start, (double)step / (double)(steps - 1));
    }
};

struct TraceRow {
    size_t step;
    double beta;
    double F;
    bool accepted;
};

struct AnnealResult {
    double best_F = 0;
    Ensemble best;
    size_t best_restart = 0;
    std::vector<double> restart_F;  // best F per restart
    std::vector<size_t> restart_steps;
    std::vector<TraceRow> trace;  // walk of the best restart
    size_t successes = 0;         // restarts reaching the stop threshold
};

constexpr double kAnnealStopGap = 1e-6;

struct RestartOutcome {
    double best_F = 0;
    Ensemble best;
    std::vector<TraceRow> trace;
    size_t steps = 0;
};

inline RestartOutcome anneal_once(const cvec &target, size_t n, size_t chi, const AnnealSchedule &sched,
                                  uint64_t seed) {
    std::mt19937_64 rng(seed);
    Ensemble e;
    e.n = n;
    e.d = 3;
    for (size_t i = 0; i < chi; i++) {
        e.states.push_back(random_stabilizer_state(n, 3, rng));
    }
    RestartOutcome r;
    double F = fidelity(e, target);
    r.best_F = F;
    r.best = e;
    const size_t every = sched.trace_every ? sched.trace_every : std::max<size_t>(1, sched.steps / 10000);
    for (size_t s = 0; s < sched.steps; s++) {
        double beta = sched.beta(s);
        auto o = metropolis_step(e, target, beta, F, rng);
        F = o.F;
        r.steps = s + 1;
        bool done = F >= 1.0 - kAnnealStopGap;
        if (s % every == 0 || done || s + 1 == sched.steps) {
            r.trace.push_back({s, beta, F, o.accepted});
        }
        if (F > r.best_F) {
            r.best_F = F;
            r.best = e;
        }
        if (done) {
            break;
        }
    }
    return r;
}

/// Independent restarts, restart r seeded by (seed, r); results do not depend on threads.
inline AnnealResult anneal_search(const cvec &target, size_t n, size_t chi, const AnnealSchedule &sched,
                                  size_t restarts, uint64_t seed, unsigned jobs = 1) {
    if (chi < 1 || restarts < 1) {
        throw std::invalid_argument("anneal_search needs chi >= 1 and restarts >= 1");
    }
    sched.validate();
    std::vector<RestartOutcome> outs(restarts);
    auto run = [&](size_t r) {
        std::seed_seq ss{(uint32_t)seed, (uint32_t)(seed >> 32), (uint32_t)r};
        std::mt19937_64 g(ss);
        outs[r] = anneal_once(target, n, chi, sched, g());
    };
    jobs = std::max(1u, jobs);
    if (jobs == 1) {
        for (size_t r = 0; r < restarts; r++) {
            run(r);
        }
    } else {
        for (size_t lo = 0; lo < restarts; lo += jobs) {
            std::vector<std::thread> pool;
            for (size_t r = lo; r < std::min(restarts, lo + jobs); r++) {
                pool.emplace_back(run, r);
            }
            for (auto &t : pool) {
                t.join();
            }
        }
    }
    AnnealResult res;
    res.best_F = -1;
    for (size_t r = 0; r < restarts; r++) {
        res.restart_F.push_back(outs[r].best_F);
        res.restart_steps.push_back(outs[r].steps);
        if (outs[r].best_F >= 1.0 - kAnnealStopGap) {
            res.successes++;
        }
        if (outs[r].best_F > res.best_F) {
            res.best_F = outs[r].best_F;
            res.best_restart = r;
        }
    }
    res.best = outs[res.best_restart].best;
    res.trace = std::move(outs[res.best_restart].trace);
    return res;
}

/// |T>^{tensor t} as a dense complex vector.
inline cvec magic_target(size_t t) {
    return to_complex(magic_state_vector(t, Modulus::checked(3, 2)));
}

}  // namespace wwm

#endif
