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

#ifndef WWM_RING_HPP
#define WWM_RING_HPP

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace wwm {

/// Non-negative residue of a mod m.
inline int64_t mod(int64_t a, int64_t m) {
    int64_t r = a % m;
    return r < 0 ? r + m : r;
}

inline int64_t pow_mod(int64_t base, int64_t e, int64_t m) {
    int64_t r = 1 % m;
    base = mod(base, m);
    while (e > 0) {
        if (e & 1) {
            r = r * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    return r;
}

inline bool is_prime(int64_t n) {
    if (n < 2) {
        return false;
    }
    for (int64_t f = 2; f * f <= n; f++) {
        if (n % f == 0) {
            return false;
        }
    }
    return true;
}

/// Inverse of a modulo m, or nullopt when gcd(a, m) != 1.
inline std::optional<int64_t> mod_inverse(int64_t a, int64_t m) {
    if (m <= 0) {
        return std::nullopt;
    }
    int64_t r0 = m, r1 = mod(a, m);
    int64_t s0 = 0, s1 = 1;
    while (r1 != 0) {
        int64_t q = r0 / r1;
        std::tie(r0, r1) = std::make_pair(r1, r0 - q * r1);
        std::tie(s0, s1) = std::make_pair(s1, s0 - q * s1);
    }
    if (r0 != 1) {
        return std::nullopt;
    }
    return mod(s0, m);
}

/// delta(not alpha) for prime p, computed through the power formula
/// delta((alpha^(p-1) - 1)^(p-1) mod p). Returns 1 iff alpha != 0 mod p.
inline int logical_negation_delta(int64_t alpha, int64_t p) {
    int64_t inner = mod(pow_mod(alpha, p - 1, p) - 1, p);
    int64_t outer = pow_mod(inner, p - 1, p);
    return outer == 0 ? 1 : 0;
}

/// Modulus d^h with d an odd prime.
struct Modulus {
    int64_t d = 3;
    int64_t h = 1;
    int64_t m = 3;

    static std::optional<Modulus> make(int64_t d, int64_t h) {
        if (!is_prime(d) || d == 2 || h < 1) {
            return std::nullopt;
        }
        int64_t m = 1;
        for (int64_t i = 0; i < h; i++) {
            m *= d;
        }
        return Modulus{d, h, m};
    }

    static Modulus checked(int64_t d, int64_t h) {
        auto r = make(d, h);
        if (!r) {
            throw std::invalid_argument("modulus needs an odd prime d and h >= 1");
        }
        return *r;
    }

    /// Euler phi of d^h.
    int64_t phi() const {
        return m / d * (d - 1);
    }

    bool operator==(const Modulus &o) const {
        return d == o.d && h == o.h;
    }
};

/// Power basis data for Z[w], w = exp(2 pi i / m), m = d^h.
/// powers[e] holds the reduced coefficients of w^e for 0 <= e < m.
struct CyclotomicRing {
    Modulus modulus;
    int64_t phi;
    std::vector<std::vector<int64_t>> powers;

    explicit CyclotomicRing(Modulus md) : modulus(md), phi(md.phi()) {
        // Phi_m(x) = sum_{i<d} x^(i m/d); x^phi = -sum_{i<d-1} x^(i m/d).
        int64_t step = md.m / md.d;
        powers.assign(md.m, std::vector<int64_t>(phi, 0));
        for (int64_t e = 0; e < phi; e++) {
            powers[e][e] = 1;
        }
        for (int64_t e = phi; e < md.m; e++) {
            // w^e = w * w^(e-1), shifting and folding the top coefficient.
            const auto &prev = powers[e - 1];
            auto &cur = powers[e];
            int64_t top = prev[phi - 1];
            for (int64_t j = phi - 1; j > 0; j--) {
                cur[j] = prev[j - 1];
            }
            cur[0] = 0;
            for (int64_t i = 0; i < md.d - 1; i++) {
                cur[i * step] -= top;
            }
        }
    }

    static std::shared_ptr<const CyclotomicRing> get(Modulus md) {
        static std::mutex mu;
        static std::map<std::pair<int64_t, int64_t>, std::shared_ptr<const CyclotomicRing>> cache;
        std::lock_guard<std::mutex> lock(mu);
        auto key = std::make_pair(md.d, md.h);
        auto it = cache.find(key);
        if (it != cache.end()) {
            return it->second;
        }
        auto r = std::make_shared<const CyclotomicRing>(md);
        cache.emplace(key, r);
        return r;
    }
};

/// Exact element d^(-scale/2) * sum_j coeffs[j] w^j of Z[w][1/sqrt(d)].
///
/// A default-constructed value is an untyped zero; it adopts the modulus of
/// whatever it is combined with.
class CyclotomicAmplitude {
   public:
    CyclotomicAmplitude() = default;

    explicit CyclotomicAmplitude(Modulus md) : ring_(CyclotomicRing::get(md)), c_(ring_->phi, 0) {
    }

    static CyclotomicAmplitude integer(Modulus md, int64_t v) {
        CyclotomicAmplitude r(md);
        r.c_[0] = v;
        r.normalize();
        return r;
    }

    /// w^e with w = exp(2 pi i / d^h).
    static CyclotomicAmplitude root(Modulus md, int64_t e) {
        CyclotomicAmplitude r(md);
        r.c_ = r.ring_->powers[mod(e, md.m)];
        return r;
    }

    /// w_d^e with w_d = exp(2 pi i / d), embedded in the d^h ring.
    static CyclotomicAmplitude root_d(Modulus md, int64_t e) {
        return root(md, mod(e, md.d) * (md.m / md.d));
    }

    static CyclotomicAmplitude from_coeffs(Modulus md, std::vector<int64_t> coeffs, int scale = 0) {
        CyclotomicAmplitude r(md);
        if ((int64_t)coeffs.size() > r.ring_->phi) {
            // Fold higher powers back into the basis.
            std::vector<int64_t> acc(r.ring_->phi, 0);
            for (size_t j = 0; j < coeffs.size(); j++) {
                r.accumulate_power(acc, (int64_t)j, coeffs[j]);
            }
            coeffs = std::move(acc);
        }
        coeffs.resize(r.ring_->phi, 0);
        r.c_ = std::move(coeffs);
        r.scale_ = scale;
        r.normalize();
        return r;
    }

    bool typed() const {
        return ring_ != nullptr;
    }
    const Modulus &modulus() const {
        check_typed();
        return ring_->modulus;
    }
    const std::vector<int64_t> &coeffs() const {
        return c_;
    }
    int scale() const {
        return scale_;
    }

    bool is_zero() const {
        for (auto v : c_) {
            if (v != 0) {
                return false;
            }
        }
        return true;
    }

    /// Multiply by d^(-s/2).
    CyclotomicAmplitude scaled(int s) const {
        CyclotomicAmplitude r = *this;
        r.scale_ += s;
        r.normalize();
        return r;
    }

    CyclotomicAmplitude conj() const {
        if (!typed()) {
            return *this;
        }
        CyclotomicAmplitude r(ring_->modulus);
        r.scale_ = scale_;
        int64_t m = ring_->modulus.m;
        for (int64_t j = 0; j < ring_->phi; j++) {
            if (c_[j] != 0) {
                accumulate_power(r.c_, m - j, c_[j]);
            }
        }
        return r;
    }

    CyclotomicAmplitude operator-() const {
        CyclotomicAmplitude r = *this;
        for (auto &v : r.c_) {
            v = -v;
        }
        return r;
    }

    CyclotomicAmplitude &operator+=(const CyclotomicAmplitude &o) {
        if (!o.typed() || o.is_zero()) {
            return *this;
        }
        if (!typed() || is_zero()) {
            *this = o;
            return *this;
        }
        check_same(o);
        if ((scale_ - o.scale_) % 2 != 0) {
            throw std::domain_error("cannot add amplitudes whose scales differ by an odd power of sqrt(d)");
        }
        int64_t d = ring_->modulus.d;
        if (scale_ >= o.scale_) {
            int64_t f = ipow(d, (scale_ - o.scale_) / 2);
            for (size_t j = 0; j < c_.size(); j++) {
                c_[j] += f * o.c_[j];
            }
        } else {
            int64_t f = ipow(d, (o.scale_ - scale_) / 2);
            for (size_t j = 0; j < c_.size(); j++) {
                c_[j] = c_[j] * f + o.c_[j];
            }
            scale_ = o.scale_;
        }
        normalize();
        return *this;
    }

    CyclotomicAmplitude &operator-=(const CyclotomicAmplitude &o) {
        return *this += -o;
    }

    friend CyclotomicAmplitude operator+(CyclotomicAmplitude a, const CyclotomicAmplitude &b) {
        a += b;
        return a;
    }
    friend CyclotomicAmplitude operator-(CyclotomicAmplitude a, const CyclotomicAmplitude &b) {
        a -= b;
        return a;
    }

    friend CyclotomicAmplitude operator*(const CyclotomicAmplitude &a, const CyclotomicAmplitude &b) {
        if (!a.typed() || !b.typed()) {
            return CyclotomicAmplitude();
        }
        a.check_same(b);
        CyclotomicAmplitude r(a.ring_->modulus);
        int64_t phi = a.ring_->phi;
        std::vector<int64_t> full(2 * phi - 1, 0);
        for (int64_t i = 0; i < phi; i++) {
            if (a.c_[i] == 0) {
                continue;
            }
            for (int64_t j = 0; j < phi; j++) {
                full[i + j] += a.c_[i] * b.c_[j];
            }
        }
        for (int64_t e = 0; e < (int64_t)full.size(); e++) {
            if (full[e] != 0) {
                r.accumulate_power(r.c_, e, full[e]);
            }
        }
        r.scale_ = a.scale_ + b.scale_;
        r.normalize();
        return r;
    }

    CyclotomicAmplitude &operator*=(const CyclotomicAmplitude &o) {
        *this = *this * o;
        return *this;
    }

    /// Multiply by w^e without a full product.
    CyclotomicAmplitude times_root(int64_t e) const {
        if (!typed()) {
            return *this;
        }
        CyclotomicAmplitude r(ring_->modulus);
        r.scale_ = scale_;
        for (int64_t j = 0; j < ring_->phi; j++) {
            if (c_[j] != 0) {
                accumulate_power(r.c_, j + e, c_[j]);
            }
        }
        return r;
    }

    friend bool operator==(const CyclotomicAmplitude &a, const CyclotomicAmplitude &b) {
        bool az = !a.typed() || a.is_zero();
        bool bz = !b.typed() || b.is_zero();
        if (az || bz) {
            return az && bz;
        }
        a.check_same(b);
        return a.scale_ == b.scale_ && a.c_ == b.c_;
    }
    friend bool operator!=(const CyclotomicAmplitude &a, const CyclotomicAmplitude &b) {
        return !(a == b);
    }

    std::complex<double> to_complex() const {
        if (!typed()) {
            return {0.0, 0.0};
        }
        int64_t m = ring_->modulus.m;
        // Sum with long double to keep the 1e-12 relative contract for
        // moderately large coefficients.
        long double re = 0, im = 0;
        for (int64_t j = 0; j < ring_->phi; j++) {
            if (c_[j] != 0) {
                long double ang = 2.0L * std::numbers::pi_v<long double> * j / m;
                re += c_[j] * std::cos(ang);
                im += c_[j] * std::sin(ang);
            }
        }
        long double f = std::pow((long double)ring_->modulus.d, -scale_ / 2.0L);
        return {(double)(re * f), (double)(im * f)};
    }

    std::string str() const {
        std::string s = "(";
        for (size_t j = 0; j < c_.size(); j++) {
            if (j) {
                s += ",";
            }
            s += std::to_string(c_[j]);
        }
        s += ")*d^(-" + std::to_string(scale_) + "/2)";
        return s;
    }

    friend std::ostream &operator<<(std::ostream &os, const CyclotomicAmplitude &a) {
        return os << a.str();
    }

   private:
    std::shared_ptr<const CyclotomicRing> ring_;
    std::vector<int64_t> c_;
    int scale_ = 0;

    static int64_t ipow(int64_t b, int64_t e) {
        int64_t r = 1;
        while (e-- > 0) {
            r *= b;
        }
        return r;
    }

    void check_typed() const {
        if (!typed()) {
            throw std::logic_error("untyped zero amplitude has no modulus");
        }
    }

    void check_same(const CyclotomicAmplitude &o) const {
        if (ring_ != o.ring_ && !(ring_->modulus == o.ring_->modulus)) {
            throw std::invalid_argument("cyclotomic modulus mismatch");
        }
    }

    void accumulate_power(std::vector<int64_t> &acc, int64_t e, int64_t coeff) const {
        const auto &p = ring_->powers[mod(e, ring_->modulus.m)];
        for (int64_t j = 0; j < ring_->phi; j++) {
            acc[j] += coeff * p[j];
        }
    }

    /// Pull whole factors of d out of the coefficients; zero gets scale 0.
    void normalize() {
        if (!typed()) {
            return;
        }
        if (is_zero()) {
            scale_ = 0;
            return;
        }
        int64_t d = ring_->modulus.d;
        while (true) {
            for (auto v : c_) {
                if (v % d != 0) {
                    return;
                }
            }
            for (auto &v : c_) {
                v /= d;
            }
            scale_ -= 2;
        }
    }
};

}  // namespace wwm

#endif
