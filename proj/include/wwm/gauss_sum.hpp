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

#ifndef WWM_GAUSS_SUM_HPP
#define WWM_GAUSS_SUM_HPP

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "wwm/modlinalg.hpp"
#include "wwm/ring.hpp"

namespace wwm {

/// w_{d^h}^c * sum_{x in (Z/d)^m} w_d^{x^T A x + beta.x}
struct GaussSumSpec {
    size_t m = 0;
    int64_t d = 3;
    int64_t h = 1;
    ModMatrix A;
    std::vector<int64_t> beta;
    int64_t c = 0;

    static GaussSumSpec zero_form(size_t m, int64_t d, int64_t h = 1) {
        return GaussSumSpec{m, d, h, ModMatrix(m, m, d), std::vector<int64_t>(m, 0), 0};
    }

    Modulus modulus() const {
        return Modulus::checked(d, h);
    }

    bool symmetric() const {
        for (size_t i = 0; i < m; i++) {
            for (size_t j = 0; j < i; j++) {
                if (mod(A(i, j) - A(j, i), d) != 0) {
                    return false;
                }
            }
        }
        return true;
    }
};

constexpr size_t kGaussBruteCap = 8;

inline CyclotomicAmplitude eval_brute(const GaussSumSpec &s) {
    if (s.m > kGaussBruteCap) {
        throw std::length_error("eval_brute is capped at 8 variables");
    }
    Modulus md = s.modulus();
    // Histogram the phases first, then build one amplitude.
    std::vector<int64_t> hist(s.d, 0);
    std::vector<int64_t> x(s.m, 0);
    uint64_t total = 1;
    for (size_t k = 0; k < s.m; k++) {
        total *= (uint64_t)s.d;
    }
    for (uint64_t t = 0; t < total; t++) {
        uint64_t r = t;
        for (size_t k = 0; k < s.m; k++) {
            x[k] = (int64_t)(r % s.d);
            r /= s.d;
        }
        int64_t ph = 0;
        for (size_t i = 0; i < s.m; i++) {
            if (x[i] == 0) {
                continue;
            }
            ph += s.beta[i] * x[i];
            for (size_t j = 0; j < s.m; j++) {
                ph += x[i] * s.A(i, j) * x[j];
            }
        }
        hist[mod(ph, s.d)]++;
    }
    CyclotomicAmplitude acc = CyclotomicAmplitude::integer(md, 0);
    for (int64_t k = 0; k < s.d; k++) {
        if (hist[k]) {
            acc += CyclotomicAmplitude::root_d(md, k) * CyclotomicAmplitude::integer(md, hist[k]);
        }
    }
    return acc * CyclotomicAmplitude::root(md, s.c);
}

/// Congruent diagonalization D = P^T A P, linear part beta' = P^T beta.
/// The first `rank` entries of diag are the nonzero pivots.
struct ReducedForm {
    std::vector<int64_t> diag;
    size_t rank = 0;
    std::vector<int64_t> linear;
    std::vector<int64_t> residual;  // linear coefficients on the null directions
    ModMatrix P;

    bool provably_zero() const {
        for (auto b : residual) {
            if (b != 0) {
                return true;
            }
        }
        return false;
    }
};

inline ReducedForm reduce_form(const GaussSumSpec &s) {
    if (!s.symmetric()) {
        throw std::invalid_argument("Gauss sum form must be symmetric");
    }
    const int64_t d = s.d;
    const size_t m = s.m;
    ModMatrix A = s.A;
    for (auto &v : A.a) {
        v = mod(v, d);
    }
    ModMatrix P = ModMatrix::identity(m, d);
    auto add_col = [&](ModMatrix &X, size_t dst, size_t src, int64_t f) {
        for (size_t r = 0; r < X.rows; r++) {
            X(r, dst) = mod(X(r, dst) + f * X(r, src), d);
        }
    };
    auto add_row = [&](ModMatrix &X, size_t dst, size_t src, int64_t f) {
        for (size_t c = 0; c < X.cols; c++) {
            X(dst, c) = mod(X(dst, c) + f * X(src, c), d);
        }
    };
    auto swap_var = [&](size_t a, size_t b) {
        if (a == b) {
            return;
        }
        for (size_t t = 0; t < m; t++) {
            std::swap(A(a, t), A(b, t));
        }
        for (size_t t = 0; t < m; t++) {
            std::swap(A(t, a), A(t, b));
        }
        for (size_t t = 0; t < m; t++) {
            std::swap(P(t, a), P(t, b));
        }
    };
    size_t k = 0;
    for (; k < m; k++) {
        size_t piv = m;
        for (size_t i = k; i < m; i++) {
            if (A(i, i) != 0) {
                piv = i;
                break;
            }
        }
        if (piv == m) {
            // Zero diagonal: use e_i + e_j for some nonzero off-diagonal entry.
            size_t pi = m, pj = m;
            for (size_t i = k; i < m && pi == m; i++) {
                for (size_t j = i + 1; j < m; j++) {
                    if (A(i, j) != 0) {
                        pi = i;
                        pj = j;
                        break;
                    }
                }
            }
            if (pi == m) {
                break;
            }
            add_col(A, pi, pj, 1);
            add_row(A, pi, pj, 1);
            add_col(P, pi, pj, 1);
            piv = pi;
        }
        swap_var(k, piv);
        int64_t inv = *mod_inverse(A(k, k), d);
        for (size_t i = k + 1; i < m; i++) {
            if (A(i, k) == 0) {
                continue;
            }
            int64_t f = mod(-A(i, k) * inv, d);
            add_col(A, i, k, f);
            add_row(A, i, k, f);
            add_col(P, i, k, f);
        }
    }
    ReducedForm r;
    r.rank = k;
    r.diag.assign(m, 0);
    for (size_t i = 0; i < m; i++) {
        r.diag[i] = A(i, i);
    }
    r.linear = P.transpose().apply(s.beta);
    r.residual.assign(r.linear.begin() + (long)k, r.linear.end());
    r.P = P;
    return r;
}

/// Exact sum_{z in Z/d} w_d^{z^2}.
inline CyclotomicAmplitude gauss_unit_sum(Modulus md) {
    CyclotomicAmplitude g = CyclotomicAmplitude::integer(md, 0);
    for (int64_t z = 0; z < md.d; z++) {
        g += CyclotomicAmplitude::root_d(md, z * z);
    }
    return g;
}

/// Closed form through reduce_form: a product of rank one-dimensional sums,
/// d^{m-rank}, and a delta on the residual linear part.
inline CyclotomicAmplitude eval_closed(const GaussSumSpec &s) {
    Modulus md = s.modulus();
    ReducedForm r = reduce_form(s);
    if (r.provably_zero()) {
        return CyclotomicAmplitude::integer(md, 0);
    }
    const int64_t d = s.d;
    int64_t free = 1;
    for (size_t i = r.rank; i < s.m; i++) {
        free *= d;
    }
    // sum_z w^{a z^2 + b z} = w^{-b^2 / (4a)} (a/d) g(1)
    int64_t phase = 0;
    int sign = 1;
    for (size_t i = 0; i < r.rank; i++) {
        int64_t a = r.diag[i];
        int64_t b = r.linear[i];
        int64_t inv4a = *mod_inverse(mod(4 * a, d), d);
        phase += -b * b % d * inv4a;
        if (pow_mod(a, (d - 1) / 2, d) != 1) {
            sign = -sign;
        }
    }
    CyclotomicAmplitude g = gauss_unit_sum(md);
    CyclotomicAmplitude v = CyclotomicAmplitude::integer(md, sign * free);
    for (size_t i = 0; i < r.rank; i++) {
        v = v * g;
    }
    return v * CyclotomicAmplitude::root_d(md, phase) * CyclotomicAmplitude::root(md, s.c);
}

}  // namespace wwm

#endif
