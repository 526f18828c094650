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

#ifndef WWM_MODLINALG_HPP
#define WWM_MODLINALG_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wwm/ring.hpp"

namespace wwm {

/// Dense matrix over Z/pZ for a prime p.
struct ModMatrix {
    int64_t p = 3;
    size_t rows = 0;
    size_t cols = 0;
    std::vector<int64_t> a;

    ModMatrix() = default;
    ModMatrix(size_t r, size_t c, int64_t p_) : p(p_), rows(r), cols(c), a(r * c, 0) {
    }

    static ModMatrix identity(size_t n, int64_t p) {
        ModMatrix m(n, n, p);
        for (size_t i = 0; i < n; i++) {
            m(i, i) = 1;
        }
        return m;
    }

    int64_t &operator()(size_t i, size_t j) {
        return a[i * cols + j];
    }
    int64_t operator()(size_t i, size_t j) const {
        return a[i * cols + j];
    }

    bool operator==(const ModMatrix &o) const {
        if (rows != o.rows || cols != o.cols || p != o.p) {
            return false;
        }
        for (size_t k = 0; k < a.size(); k++) {
            if (mod(a[k], p) != mod(o.a[k], p)) {
                return false;
            }
        }
        return true;
    }

    ModMatrix transpose() const {
        ModMatrix t(cols, rows, p);
        for (size_t i = 0; i < rows; i++) {
            for (size_t j = 0; j < cols; j++) {
                t(j, i) = (*this)(i, j);
            }
        }
        return t;
    }

    ModMatrix operator*(const ModMatrix &o) const {
        if (cols != o.rows || p != o.p) {
            throw std::invalid_argument("matrix shape mismatch");
        }
        ModMatrix r(rows, o.cols, p);
        for (size_t i = 0; i < rows; i++) {
            for (size_t k = 0; k < cols; k++) {
                int64_t v = (*this)(i, k);
                if (v == 0) {
                    continue;
                }
                for (size_t j = 0; j < o.cols; j++) {
                    r(i, j) += v * o(k, j);
                }
            }
            for (size_t j = 0; j < o.cols; j++) {
                r(i, j) = mod(r(i, j), p);
            }
        }
        return r;
    }

    std::vector<int64_t> apply(const std::vector<int64_t> &v) const {
        if (v.size() != cols) {
            throw std::invalid_argument("vector length mismatch");
        }
        std::vector<int64_t> r(rows, 0);
        for (size_t i = 0; i < rows; i++) {
            int64_t s = 0;
            for (size_t j = 0; j < cols; j++) {
                s += (*this)(i, j) * v[j];
            }
            r[i] = mod(s, p);
        }
        return r;
    }

    ModMatrix pow(int64_t e) const {
        ModMatrix r = identity(rows, p);
        ModMatrix b = *this;
        while (e > 0) {
            if (e & 1) {
                r = r * b;
            }
            b = b * b;
            e >>= 1;
        }
        return r;
    }
};

/// Reduced row echelon form in place; returns pivot columns.
inline std::vector<size_t> rref(ModMatrix &m) {
    std::vector<size_t> pivots;
    size_t r = 0;
    for (size_t c = 0; c < m.cols && r < m.rows; c++) {
        size_t piv = r;
        while (piv < m.rows && mod(m(piv, c), m.p) == 0) {
            piv++;
        }
        if (piv == m.rows) {
            continue;
        }
        for (size_t j = 0; j < m.cols; j++) {
            std::swap(m(r, j), m(piv, j));
        }
        int64_t inv = *mod_inverse(m(r, c), m.p);
        for (size_t j = 0; j < m.cols; j++) {
            m(r, j) = mod(m(r, j) * inv, m.p);
        }
        for (size_t i = 0; i < m.rows; i++) {
            if (i == r) {
                continue;
            }
            int64_t f = mod(m(i, c), m.p);
            if (f == 0) {
                continue;
            }
            for (size_t j = 0; j < m.cols; j++) {
                m(i, j) = mod(m(i, j) - f * m(r, j), m.p);
            }
        }
        pivots.push_back(c);
        r++;
    }
    return pivots;
}

inline size_t rank(ModMatrix m) {
    return rref(m).size();
}

inline std::optional<ModMatrix> inverse(const ModMatrix &m) {
    if (m.rows != m.cols) {
        return std::nullopt;
    }
    size_t n = m.rows;
    ModMatrix aug(n, 2 * n, m.p);
    for (size_t i = 0; i < n; i++) {
        for (size_t j = 0; j < n; j++) {
            aug(i, j) = mod(m(i, j), m.p);
        }
        aug(i, n + i) = 1;
    }
    auto piv = rref(aug);
    if (piv.size() < n || piv[n - 1] != n - 1) {
        return std::nullopt;
    }
    ModMatrix r(n, n, m.p);
    for (size_t i = 0; i < n; i++) {
        for (size_t j = 0; j < n; j++) {
            r(i, j) = aug(i, n + j);
        }
    }
    return r;
}

inline int64_t determinant(ModMatrix m) {
    if (m.rows != m.cols) {
        throw std::invalid_argument("determinant of non-square matrix");
    }
    size_t n = m.rows;
    int64_t det = 1;
    for (size_t c = 0; c < n; c++) {
        size_t piv = c;
        while (piv < n && mod(m(piv, c), m.p) == 0) {
            piv++;
        }
        if (piv == n) {
            return 0;
        }
        if (piv != c) {
            for (size_t j = 0; j < n; j++) {
                std::swap(m(c, j), m(piv, j));
            }
            det = -det;
        }
        det = mod(det * m(c, c), m.p);
        int64_t inv = *mod_inverse(m(c, c), m.p);
        for (size_t i = c + 1; i < n; i++) {
            int64_t f = mod(m(i, c) * inv, m.p);
            if (f == 0) {
                continue;
            }
            for (size_t j = c; j < n; j++) {
                m(i, j) = mod(m(i, j) - f * m(c, j), m.p);
            }
        }
    }
    return mod(det, m.p);
}

/// Solution set {x0 + span(basis)} of A x = b, or nullopt if inconsistent.
struct AffineSolution {
    std::vector<int64_t> particular;
    std::vector<std::vector<int64_t>> basis;
};

inline std::optional<AffineSolution> solve(const ModMatrix &A, const std::vector<int64_t> &b) {
    size_t n = A.cols;
    ModMatrix aug(A.rows, n + 1, A.p);
    for (size_t i = 0; i < A.rows; i++) {
        for (size_t j = 0; j < n; j++) {
            aug(i, j) = mod(A(i, j), A.p);
        }
        aug(i, n) = mod(b[i], A.p);
    }
    auto piv = rref(aug);
    if (!piv.empty() && piv.back() == n) {
        return std::nullopt;
    }
    AffineSolution s;
    s.particular.assign(n, 0);
    std::vector<bool> is_piv(n, false);
    for (size_t r = 0; r < piv.size(); r++) {
        is_piv[piv[r]] = true;
        s.particular[piv[r]] = aug(r, n);
    }
    for (size_t f = 0; f < n; f++) {
        if (is_piv[f]) {
            continue;
        }
        std::vector<int64_t> v(n, 0);
        v[f] = 1;
        for (size_t r = 0; r < piv.size(); r++) {
            v[piv[r]] = mod(-aug(r, f), A.p);
        }
        s.basis.push_back(std::move(v));
    }
    return s;
}

}  // namespace wwm

#endif
