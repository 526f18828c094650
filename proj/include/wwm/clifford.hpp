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

#ifndef WWM_CLIFFORD_HPP
#define WWM_CLIFFORD_HPP

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "wwm/embedded_data.hpp"
#include "wwm/modlinalg.hpp"
#include "wwm/phasespace.hpp"

namespace wwm {

/// x -> M x + v on (Z/dZ)^{2n}, coordinates ordered (x_p block, x_q block).
struct AffineSymplectic {
    size_t n = 0;
    int64_t d = 3;
    ModMatrix M;
    std::vector<int64_t> v;

    static AffineSymplectic identity(size_t n, int64_t d) {
        return AffineSymplectic{n, d, ModMatrix::identity(2 * n, d), std::vector<int64_t>(2 * n, 0)};
    }

    std::vector<int64_t> apply(const std::vector<int64_t> &x) const {
        auto r = M.apply(x);
        for (size_t k = 0; k < r.size(); k++) {
            r[k] = mod(r[k] + v[k], d);
        }
        return r;
    }

    PhasePoint apply(const PhasePoint &x) const {
        return PhasePoint::from_flat(apply(x.flat()));
    }

    /// The x_q block of M, which is how intermediate variables transform.
    ModMatrix q_block() const {
        ModMatrix Q(n, n, d);
        for (size_t i = 0; i < n; i++) {
            for (size_t j = 0; j < n; j++) {
                Q(i, j) = M(n + i, n + j);
            }
        }
        return Q;
    }

    bool operator==(const AffineSymplectic &o) const {
        if (n != o.n || d != o.d || !(M == o.M)) {
            return false;
        }
        for (size_t k = 0; k < v.size(); k++) {
            if (mod(v[k], d) != mod(o.v[k], d)) {
                return false;
            }
        }
        return true;
    }
};

/// J = [[0, I], [-I, 0]] in block order.
inline ModMatrix symplectic_form(size_t n, int64_t d) {
    ModMatrix J(2 * n, 2 * n, d);
    for (size_t i = 0; i < n; i++) {
        J(i, n + i) = 1;
        J(n + i, i) = d - 1;
    }
    return J;
}

inline bool is_symplectic(const ModMatrix &M, size_t n) {
    auto J = symplectic_form(n, M.p);
    return M.transpose() * J * M == J;
}

inline bool is_symplectic(const AffineSymplectic &a) {
    return is_symplectic(a.M, a.n);
}

/// C_{i,j} (1-based): x_{p_j} -> x_{p_j} - x_{p_i}, x_{q_i} -> x_{q_i} + x_{q_j}.
inline AffineSymplectic cnot_map(size_t i, size_t j, size_t n, int64_t d) {
    if (i == j || i < 1 || j < 1 || i > n || j > n) {
        throw std::invalid_argument("cnot_map needs distinct indices in 1..n");
    }
    auto a = AffineSymplectic::identity(n, d);
    a.M(j - 1, i - 1) = d - 1;
    a.M(n + i - 1, n + j - 1) = 1;
    return a;
}

/// Applies seq[0] first: (M2, v2) after (M1, v1) is (M2 M1, M2 v1 + v2).
inline AffineSymplectic compose(const std::vector<AffineSymplectic> &seq) {
    if (seq.empty()) {
        throw std::invalid_argument("compose of an empty sequence");
    }
    AffineSymplectic r = seq[0];
    for (size_t k = 1; k < seq.size(); k++) {
        const auto &g = seq[k];
        if (g.n != r.n || g.d != r.d) {
            throw std::invalid_argument("compose shape mismatch");
        }
        auto v = g.M.apply(r.v);
        for (size_t t = 0; t < v.size(); t++) {
            v[t] = mod(v[t] + g.v[t], r.d);
        }
        r.M = g.M * r.M;
        r.v = std::move(v);
    }
    return r;
}

inline AffineSymplectic inverse(const AffineSymplectic &a) {
    auto Mi = wwm::inverse(a.M);
    if (!Mi) {
        throw std::invalid_argument("affine map is not invertible");
    }
    auto v = Mi->apply(a.v);
    for (auto &c : v) {
        c = mod(-c, a.d);
    }
    return AffineSymplectic{a.n, a.d, *Mi, v};
}

inline AffineSymplectic power(const AffineSymplectic &a, int64_t e) {
    if (e == 0) {
        return AffineSymplectic::identity(a.n, a.d);
    }
    std::vector<AffineSymplectic> seq((size_t)e, a);
    return compose(seq);
}

/// One `C i j pow` line.
struct GateToken {
    size_t i = 1;
    size_t j = 2;
    int64_t pow = 1;
};

/// Parses gate lines; blank lines and '#' comments are skipped.
inline std::vector<GateToken> parse_gate_list(std::string_view text) {
    std::vector<GateToken> out;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        lineno++;
        auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.resize(hash);
        }
        std::istringstream ls(line);
        std::string kind;
        if (!(ls >> kind)) {
            continue;
        }
        GateToken g;
        if (kind != "C" || !(ls >> g.i >> g.j)) {
            throw std::invalid_argument("bad gate line " + std::to_string(lineno) + ": " + line);
        }
        if (!(ls >> g.pow)) {
            g.pow = 1;
        }
        out.push_back(g);
    }
    return out;
}

inline size_t max_gate_index(const std::vector<GateToken> &gates) {
    size_t n = 0;
    for (const auto &g : gates) {
        n = std::max(n, std::max(g.i, g.j));
    }
    return n;
}

/// Gates read as successive variable substitutions: the listed gate G1 is
/// substituted first, so the result is M = G1 G2 ... Gn. As a point map that
/// equals compose() of the reversed list.
inline AffineSymplectic substitution_map(const std::vector<GateToken> &gates, size_t n, int64_t d) {
    auto r = AffineSymplectic::identity(n, d);
    for (const auto &g : gates) {
        r.M = r.M * cnot_map(g.i, g.j, n, d).M.pow(mod(g.pow, d));
    }
    return r;
}

inline std::vector<GateToken> canned_gates(std::string_view name) {
    if (name != "C3" && name != "C6" && name != "C12") {
        throw std::invalid_argument("unknown canned sequence: " + std::string(name));
    }
    return parse_gate_list(embedded_file("gates/" + std::string(name) + ".gates"));
}

inline size_t canned_size(std::string_view name) {
    if (name == "C3") {
        return 3;
    }
    if (name == "C6") {
        return 6;
    }
    if (name == "C12") {
        return 12;
    }
    throw std::invalid_argument("unknown canned sequence: " + std::string(name));
}

/// Composite map of the named appendix gate list (qutrits).
inline AffineSymplectic canned_sequence(std::string_view name, int64_t d = 3) {
    return substitution_map(canned_gates(name), canned_size(name), d);
}

/// |.., q_i, .., q_j, ..> -> |.., q_i, .., q_j + q_i, ..> (1-based indices).
template <typename Ops>
DenseMatrix<typename Ops::T> cnot_unitary(size_t i, size_t j, size_t n, const Ops &ops) {
    if (i == j || i < 1 || j < 1 || i > n || j > n) {
        throw std::invalid_argument("cnot_unitary needs distinct indices in 1..n");
    }
    int64_t d = ops.d();
    size_t D = dense_dim(n, d);
    DenseMatrix<typename Ops::T> U(D, ops.zero());
    for (size_t c = 0; c < D; c++) {
        auto q = basis_digits(c, n, d);
        q[j - 1] = mod(q[j - 1] + q[i - 1], d);
        U(basis_index(q, d), c) = ops.one();
    }
    return U;
}

}  // namespace wwm

#endif
