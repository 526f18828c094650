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

#ifndef WWM_PHASESPACE_HPP
#define WWM_PHASESPACE_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "wwm/ring.hpp"

namespace wwm {

/// Largest qudit count the dense oracle accepts.
constexpr int kDenseQuditCap = 6;

/// Point (x_p, x_q) of (Z/dZ)^{2n}.
struct PhasePoint {
    std::vector<int64_t> xp;
    std::vector<int64_t> xq;

    size_t n() const {
        return xq.size();
    }

    /// Block layout: all x_p, then all x_q.
    std::vector<int64_t> flat() const {
        std::vector<int64_t> v = xp;
        v.insert(v.end(), xq.begin(), xq.end());
        return v;
    }

    static PhasePoint from_flat(const std::vector<int64_t> &v) {
        size_t n = v.size() / 2;
        return PhasePoint{
            std::vector<int64_t>(v.begin(), v.begin() + n), std::vector<int64_t>(v.begin() + n, v.end())};
    }

    /// Inverse of index(); the first flat coordinate is the most significant digit.
    static PhasePoint from_index(uint64_t idx, size_t n, int64_t d) {
        std::vector<int64_t> v(2 * n);
        for (size_t k = 2 * n; k-- > 0;) {
            v[k] = (int64_t)(idx % d);
            idx /= d;
        }
        return from_flat(v);
    }

    uint64_t index(int64_t d) const {
        uint64_t r = 0;
        for (auto c : flat()) {
            r = r * d + (uint64_t)mod(c, d);
        }
        return r;
    }

    bool operator==(const PhasePoint &o) const {
        return xp == o.xp && xq == o.xq;
    }
};

inline uint64_t ipow_u(uint64_t b, uint64_t e) {
    uint64_t r = 1;
    while (e-- > 0) {
        r *= b;
    }
    return r;
}

/// Scalar policies for exact and floating evaluation.
struct ExactOps {
    using T = CyclotomicAmplitude;
    Modulus md;

    int64_t d() const {
        return md.d;
    }
    T zero() const {
        return T::integer(md, 0);
    }
    T one() const {
        return T::integer(md, 1);
    }
    T integer(int64_t v) const {
        return T::integer(md, v);
    }
    /// exp(2 pi i k / d)
    T root_d(int64_t k) const {
        return T::root_d(md, k);
    }
    /// v * d^(-s/2)
    T scale(const T &v, int s) const {
        return v.scaled(s);
    }
    static T conj(const T &v) {
        return v.conj();
    }
};

struct FloatOps {
    using T = std::complex<double>;
    int64_t dd = 3;

    int64_t d() const {
        return dd;
    }
    T zero() const {
        return {0.0, 0.0};
    }
    T one() const {
        return {1.0, 0.0};
    }
    T integer(int64_t v) const {
        return {(double)v, 0.0};
    }
    T root_d(int64_t k) const {
        double a = 2.0 * std::numbers::pi * (double)mod(k, dd) / (double)dd;
        return {std::cos(a), std::sin(a)};
    }
    T scale(const T &v, int s) const {
        return v * std::pow((double)dd, -s / 2.0);
    }
    static T conj(const T &v) {
        return std::conj(v);
    }
};

/// Square matrix on (C^d)^{tensor n}; basis index uses qudit 1 as the most significant digit.
template <typename T>
struct DenseMatrix {
    size_t dim = 0;
    std::vector<T> e;

    DenseMatrix() = default;
    DenseMatrix(size_t n, T zero) : dim(n), e(n * n, zero) {
    }

    T &operator()(size_t r, size_t c) {
        return e[r * dim + c];
    }
    const T &operator()(size_t r, size_t c) const {
        return e[r * dim + c];
    }

    DenseMatrix operator*(const DenseMatrix &o) const {
        if (dim != o.dim) {
            throw std::invalid_argument("dimension mismatch");
        }
        DenseMatrix r(dim, T{});
        for (size_t i = 0; i < dim; i++) {
            for (size_t k = 0; k < dim; k++) {
                const T &v = (*this)(i, k);
                if (is_zero_value(v)) {
                    continue;
                }
                for (size_t j = 0; j < dim; j++) {
                    if (!is_zero_value(o(k, j))) {
                        r(i, j) += v * o(k, j);
                    }
                }
            }
        }
        return r;
    }

    DenseMatrix operator+(const DenseMatrix &o) const {
        DenseMatrix r = *this;
        for (size_t k = 0; k < e.size(); k++) {
            r.e[k] += o.e[k];
        }
        return r;
    }

    T trace() const {
        T t{};
        for (size_t i = 0; i < dim; i++) {
            t += (*this)(i, i);
        }
        return t;
    }

    static bool is_zero_value(const CyclotomicAmplitude &v) {
        return !v.typed() || v.is_zero();
    }
    static bool is_zero_value(const std::complex<double> &v) {
        return v == std::complex<double>(0.0, 0.0);
    }
};

using DenseOperator = DenseMatrix<CyclotomicAmplitude>;
using ComplexOperator = DenseMatrix<std::complex<double>>;

template <typename Ops>
DenseMatrix<typename Ops::T> identity_matrix(size_t D, const Ops &ops) {
    DenseMatrix<typename Ops::T> I(D, ops.zero());
    for (size_t i = 0; i < D; i++) {
        I(i, i) = ops.one();
    }
    return I;
}

template <typename T>
DenseMatrix<T> adjoint(const DenseMatrix<T> &m) {
    DenseMatrix<T> r(m.dim, T{});
    for (size_t i = 0; i < m.dim; i++) {
        for (size_t j = 0; j < m.dim; j++) {
            if constexpr (std::is_same_v<T, CyclotomicAmplitude>) {
                r(j, i) = m(i, j).conj();
            } else {
                r(j, i) = std::conj(m(i, j));
            }
        }
    }
    return r;
}

template <typename T>
DenseMatrix<T> kron(const DenseMatrix<T> &a, const DenseMatrix<T> &b) {
    DenseMatrix<T> r(a.dim * b.dim, T{});
    for (size_t i = 0; i < a.dim; i++) {
        for (size_t j = 0; j < a.dim; j++) {
            if (DenseMatrix<T>::is_zero_value(a(i, j))) {
                continue;
            }
            for (size_t k = 0; k < b.dim; k++) {
                for (size_t l = 0; l < b.dim; l++) {
                    r(i * b.dim + k, j * b.dim + l) = a(i, j) * b(k, l);
                }
            }
        }
    }
    return r;
}

template <typename T>
bool same_matrix(const DenseMatrix<T> &a, const DenseMatrix<T> &b, double tol = 0.0) {
    if (a.dim != b.dim) {
        return false;
    }
    for (size_t k = 0; k < a.e.size(); k++) {
        if constexpr (std::is_same_v<T, CyclotomicAmplitude>) {
            if (a.e[k] != b.e[k]) {
                return false;
            }
        } else {
            if (std::abs(a.e[k] - b.e[k]) > tol) {
                return false;
            }
        }
    }
    return true;
}

inline size_t dense_dim(size_t n, int64_t d) {
    if ((int)n > kDenseQuditCap) {
        throw std::length_error("dense oracle is capped at " + std::to_string(kDenseQuditCap) + " qudits");
    }
    return (size_t)ipow_u((uint64_t)d, n);
}

/// Digits of a basis index, qudit 1 first.
inline std::vector<int64_t> basis_digits(size_t idx, size_t n, int64_t d) {
    std::vector<int64_t> q(n);
    for (size_t k = n; k-- > 0;) {
        q[k] = (int64_t)(idx % d);
        idx /= d;
    }
    return q;
}

inline size_t basis_index(const std::vector<int64_t> &q, int64_t d) {
    size_t r = 0;
    for (auto v : q) {
        r = r * d + (size_t)mod(v, d);
    }
    return r;
}

/// Single-qudit X (|q> -> |q+1>) and Z (|q> -> w_d^q |q>).
template <typename Ops>
std::pair<DenseMatrix<typename Ops::T>, DenseMatrix<typename Ops::T>> pauli_xz(const Ops &ops) {
    using T = typename Ops::T;
    int64_t d = ops.d();
    DenseMatrix<T> X(d, ops.zero()), Z(d, ops.zero());
    for (int64_t q = 0; q < d; q++) {
        X((q + 1) % d, q) = ops.one();
        Z(q, q) = ops.root_d(q);
    }
    return {X, Z};
}

/// Z^{yp} X^{yq} on n qudits.
template <typename Ops>
DenseMatrix<typename Ops::T> pauli_zx(const Ops &ops, const std::vector<int64_t> &yp, const std::vector<int64_t> &yq) {
    using T = typename Ops::T;
    size_t n = yq.size();
    int64_t d = ops.d();
    size_t D = dense_dim(n, d);
    DenseMatrix<T> P(D, ops.zero());
    for (size_t c = 0; c < D; c++) {
        auto q = basis_digits(c, n, d);
        int64_t ph = 0;
        for (size_t i = 0; i < n; i++) {
            q[i] = mod(q[i] + yq[i], d);
            ph += yp[i] * q[i];
        }
        P(basis_index(q, d), c) = ops.root_d(ph);
    }
    return P;
}

/// Weyl operator from its defining sum:
/// R(x) = d^{-n} sum_y w^{yp.xq - yq.xp - (1/2) yp.yq} Z^{yp} X^{yq}.
template <typename Ops>
DenseMatrix<typename Ops::T> weyl_operator(const PhasePoint &x, const Ops &ops) {
    using T = typename Ops::T;
    size_t n = x.n();
    int64_t d = ops.d();
    size_t D = dense_dim(n, d);
    int64_t half = *mod_inverse(2, d);
    DenseMatrix<T> R(D, ops.zero());
    uint64_t count = ipow_u((uint64_t)d, 2 * n);
    for (uint64_t t = 0; t < count; t++) {
        PhasePoint y = PhasePoint::from_index(t, n, d);
        int64_t ph = 0;
        for (size_t i = 0; i < n; i++) {
            ph += y.xp[i] * x.xq[i] - y.xq[i] * x.xp[i] - half * y.xp[i] * y.xq[i];
        }
        T w = ops.root_d(ph);
        auto P = pauli_zx(ops, y.xp, y.xq);
        for (size_t k = 0; k < P.e.size(); k++) {
            if (!DenseMatrix<T>::is_zero_value(P.e[k])) {
                R.e[k] += w * P.e[k];
            }
        }
    }
    for (auto &v : R.e) {
        v = ops.scale(v, 2 * (int)n);
    }
    return R;
}

/// The one nonzero entry per column of R(x): R(x)|c> = w^{-(r-c).xp} |r>, r = -2 xq - c.
template <typename Ops>
void weyl_column(const PhasePoint &x, size_t c, const Ops &ops, size_t &row, int64_t &phase) {
    int64_t d = ops.d();
    size_t n = x.n();
    auto q = basis_digits(c, n, d);
    int64_t ph = 0;
    for (size_t i = 0; i < n; i++) {
        int64_t r = mod(-2 * x.xq[i] - q[i], d);
        ph -= (r - q[i]) * x.xp[i];
        q[i] = r;
    }
    row = basis_index(q, d);
    phase = mod(ph, d);
}

/// Real-valued quasi-probability table over all d^{2n} points, indexed by PhasePoint::index.
struct WignerTable {
    size_t n = 0;
    int64_t d = 3;
    std::vector<double> values;
    std::vector<CyclotomicAmplitude> exact;  // empty in float mode

    double at(const PhasePoint &x) const {
        return values[x.index(d)];
    }

    void write_csv(std::ostream &os) const {
        for (size_t i = 0; i < n; i++) {
            os << "xp_" << i + 1 << ",";
        }
        for (size_t i = 0; i < n; i++) {
            os << "xq_" << i + 1 << ",";
        }
        if (exact.empty()) {
            os << "value\n";
        } else {
            size_t phi = exact.empty() ? 0 : exact[0].coeffs().size();
            for (size_t j = 0; j < phi; j++) {
                os << "coeff_" << j << ",";
            }
            os << "scale\n";
        }
        os.precision(17);
        for (size_t idx = 0; idx < values.size(); idx++) {
            auto x = PhasePoint::from_index(idx, n, d);
            for (auto v : x.flat()) {
                os << v << ",";
            }
            if (exact.empty()) {
                os << values[idx] << "\n";
            } else {
                for (auto c : exact[idx].coeffs()) {
                    os << c << ",";
                }
                os << exact[idx].scale() << "\n";
            }
        }
    }
};

/// A(x) = d^{-n} Tr(R(x) A), so that sum_x rho(x) = 1 and sum_x A(x) R(x) = A.
template <typename Ops>
typename Ops::T weyl_symbol_at(const DenseMatrix<typename Ops::T> &A, const PhasePoint &x, const Ops &ops) {
    using T = typename Ops::T;
    T acc = ops.zero();
    for (size_t c = 0; c < A.dim; c++) {
        size_t r;
        int64_t ph;
        weyl_column(x, c, ops, r, ph);
        const T &a = A(c, r);
        if (!DenseMatrix<T>::is_zero_value(a)) {
            acc += ops.root_d(ph) * a;
        }
    }
    return ops.scale(acc, 2 * (int)x.n());
}

template <typename Ops>
WignerTable weyl_symbol(const DenseMatrix<typename Ops::T> &A, size_t n, const Ops &ops) {
    int64_t d = ops.d();
    if (A.dim != dense_dim(n, d)) {
        throw std::invalid_argument("operator dimension does not match n qudits");
    }
    WignerTable t;
    t.n = n;
    t.d = d;
    uint64_t count = ipow_u((uint64_t)d, 2 * n);
    t.values.resize(count);
    constexpr bool exact = std::is_same_v<typename Ops::T, CyclotomicAmplitude>;
    if constexpr (exact) {
        t.exact.resize(count);
    }
    for (uint64_t idx = 0; idx < count; idx++) {
        auto x = PhasePoint::from_index(idx, n, d);
        auto v = weyl_symbol_at(A, x, ops);
        if constexpr (exact) {
            t.values[idx] = v.to_complex().real();
            t.exact[idx] = v;
        } else {
            t.values[idx] = v.real();
        }
    }
    return t;
}

/// |T>^{tensor k}, |T> = (|0> + e^{2 pi i/9}|1> + e^{-2 pi i/9}|2>)/sqrt(3). Needs d = 3, h >= 2.
inline std::vector<CyclotomicAmplitude> magic_state_vector(size_t k, Modulus md) {
    if (md.d != 3 || md.h < 2) {
        throw std::invalid_argument("magic state phases are defined for qutrits with a 9th root of unity");
    }
    if ((int)k > kDenseQuditCap) {
        throw std::length_error("dense oracle is capped at " + std::to_string(kDenseQuditCap) + " qudits");
    }
    int64_t step = md.m / 9;
    const int64_t e1[3] = {0, 1, -1};
    size_t D = (size_t)ipow_u(3, k);
    std::vector<CyclotomicAmplitude> v(D);
    for (size_t idx = 0; idx < D; idx++) {
        auto q = basis_digits(idx, k, 3);
        int64_t e = 0;
        for (auto c : q) {
            e += e1[c];
        }
        v[idx] = CyclotomicAmplitude::root(md, e * step).scaled((int)k);
    }
    return v;
}

template <typename T>
DenseMatrix<T> outer(const std::vector<T> &a, const std::vector<T> &b) {
    DenseMatrix<T> r(a.size(), T{});
    for (size_t i = 0; i < a.size(); i++) {
        for (size_t j = 0; j < b.size(); j++) {
            if constexpr (std::is_same_v<T, CyclotomicAmplitude>) {
                r(i, j) = a[i] * b[j].conj();
            } else {
                r(i, j) = a[i] * std::conj(b[j]);
            }
        }
    }
    return r;
}

inline std::vector<std::complex<double>> to_complex(const std::vector<CyclotomicAmplitude> &v) {
    std::vector<std::complex<double>> r(v.size());
    for (size_t k = 0; k < v.size(); k++) {
        r[k] = v[k].to_complex();
    }
    return r;
}

}  // namespace wwm

#endif
