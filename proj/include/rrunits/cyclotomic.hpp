#pragma once

#include <algorithm>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "rrunits/rational.hpp"

namespace rrunits {

namespace detail {

// Quotient of integer polynomials, exact division by a monic divisor.
inline std::vector<Int> poly_divide_exact(std::vector<Int> num, const std::vector<Int>& den) {
    if (den.empty() || den.back() != 1)
        throw std::invalid_argument("poly_divide_exact: divisor must be monic");
    if (num.size() < den.size()) throw std::invalid_argument("poly_divide_exact: degree underflow");
    std::vector<Int> quot(num.size() - den.size() + 1);
    for (size_t i = quot.size(); i-- > 0;) {
        Int c = num[i + den.size() - 1];
        quot[i] = c;
        if (c == 0) continue;
        for (size_t j = 0; j < den.size(); ++j) num[i + j] -= c * den[j];
    }
    for (const Int& c : num)
        if (c != 0) throw std::runtime_error("poly_divide_exact: nonzero remainder");
    return quot;
}

inline unsigned euler_phi(unsigned n) {
    unsigned result = n, m = n;
    for (unsigned p = 2; p * p <= m; ++p) {
        if (m % p == 0) {
            result -= result / p;
            while (m % p == 0) m /= p;
        }
    }
    if (m > 1) result -= result / m;
    return result;
}

}  // namespace detail

/// Per-level data for Q(zeta_M): the cyclotomic polynomial Phi_M and the
/// reduction table expressing x^i mod Phi_M for phi(M) <= i < M. Computed
/// once per level and shared read-only afterwards.
class CycLevel {
public:
    unsigned M;
    unsigned phi;
    std::vector<Int> cyclo;  // coefficients of Phi_M, degree phi, monic
    // red[i - phi] = sparse canonical form of x^i, for i in [phi, M)
    std::vector<std::vector<std::pair<unsigned, Int>>> red;

    static const CycLevel& get(unsigned M) {
        static std::mutex mu;
        static std::map<unsigned, std::unique_ptr<CycLevel>> cache;
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(M);
        if (it == cache.end()) it = cache.emplace(M, build(M)).first;
        return *it->second;
    }

private:
    // Phi_M(x) = (x^M - 1) / prod_{d | M, d < M} Phi_d(x), computed for all
    // divisors bottom-up.
    static std::unique_ptr<CycLevel> build(unsigned M) {
        if (M == 0) throw std::invalid_argument("CycLevel: level must be positive");
        std::map<unsigned, std::vector<Int>> phis;
        for (unsigned d = 1; d <= M; ++d) {
            if (M % d != 0) continue;
            std::vector<Int> num(d + 1);
            num[0] = -1;
            num[d] = 1;
            for (const auto& [e, phi_e] : phis)
                if (d % e == 0) num = detail::poly_divide_exact(std::move(num), phi_e);
            phis[d] = std::move(num);
        }
        auto lv = std::make_unique<CycLevel>();
        lv->M = M;
        lv->cyclo = phis[M];
        lv->phi = static_cast<unsigned>(lv->cyclo.size() - 1);
        if (lv->phi != detail::euler_phi(M)) throw std::runtime_error("CycLevel: phi mismatch");

        // rows x^i mod Phi_M, built iteratively: x^i = x * x^{i-1}
        std::vector<Int> cur(lv->phi);  // dense, previous row
        if (lv->phi > 0) {
            std::vector<Int> base(lv->phi);  // x^phi = -(lower part of Phi)
            for (unsigned j = 0; j < lv->phi; ++j) base[j] = -lv->cyclo[j];
            cur = base;
            lv->red.reserve(M - lv->phi);
            for (unsigned i = lv->phi; i < M; ++i) {
                std::vector<std::pair<unsigned, Int>> sparse;
                for (unsigned j = 0; j < lv->phi; ++j)
                    if (cur[j] != 0) sparse.emplace_back(j, cur[j]);
                lv->red.push_back(std::move(sparse));
                if (i + 1 < M) {
                    // multiply current row by x
                    Int top = cur[lv->phi - 1];
                    for (unsigned j = lv->phi - 1; j > 0; --j) cur[j] = cur[j - 1];
                    cur[0] = 0;
                    if (top != 0)
                        for (unsigned j = 0; j < lv->phi; ++j) cur[j] += top * base[j];
                }
            }
        }
        return lv;
    }
};

/// Element of Q(zeta_M), stored as a rational coefficient vector of length
/// phi(M) in canonical form modulo the M-th cyclotomic polynomial. Values
/// are immutable once constructed; all operations return new values.
/// Level 1 is plain Q.
class CycNum {
public:
    CycNum() : level_(1), c_(1) {}
    explicit CycNum(const Rat& r) : level_(1), c_{r} {}
    explicit CycNum(long n) : level_(1), c_{Rat(n)} {}

    CycNum(unsigned level, std::vector<Rat> coeffs) : level_(level), c_(std::move(coeffs)) {
        if (c_.size() != CycLevel::get(level_).phi)
            throw std::invalid_argument("CycNum: coefficient vector has wrong length");
    }

    static CycNum zero(unsigned level = 1) {
        return CycNum(level, std::vector<Rat>(CycLevel::get(level).phi));
    }

    static CycNum one() { return CycNum(Rat(1)); }

    /// zeta_M^k for any integer k (reduced mod M, then mod Phi_M).
    static CycNum root(unsigned level, long k) {
        const CycLevel& lv = CycLevel::get(level);
        unsigned idx = static_cast<unsigned>(mod_norm(k, level));
        std::vector<Rat> c(lv.phi);
        if (idx < lv.phi) {
            c[idx] = 1;
        } else {
            for (const auto& [j, v] : lv.red[idx - lv.phi]) c[j] = Rat(v);
        }
        return CycNum(level, std::move(c));
    }

    /// e(x) = exp(2 pi i x) as an exact root of unity at the given level.
    /// The denominator of x must divide the level.
    static CycNum e(const Rat& x, unsigned level) {
        const Int& den = x.get_den();
        if (!mpz_divisible_p(Int(level).get_mpz_t(), den.get_mpz_t()))
            throw std::domain_error("cyc_e: denominator of exponent does not divide level " +
                                    std::to_string(level));
        Rat scaled = x * level;  // integer by the check above
        long k = static_cast<long>(mpz_fdiv_ui(scaled.get_num().get_mpz_t(), level));
        return root(level, k);
    }

    unsigned level() const { return level_; }
    const std::vector<Rat>& coeffs() const { return c_; }

    bool is_zero() const {
        for (const Rat& x : c_)
            if (x != 0) return false;
        return true;
    }

    /// A value is rational iff its canonical coordinates beyond the constant
    /// term vanish ({1, zeta, ..., zeta^{phi-1}} is a Q-basis).
    bool is_rational() const {
        for (size_t i = 1; i < c_.size(); ++i)
            if (c_[i] != 0) return false;
        return true;
    }

    Rat rational_value() const {
        if (!is_rational()) throw std::domain_error("CycNum: value is not rational");
        return c_[0];
    }

    bool is_one() const { return is_rational() && c_[0] == 1; }

    /// Embedding into Q(zeta_{M'}) for level | M'.
    CycNum lifted(unsigned target) const {
        if (target == level_) return *this;
        if (target % level_ != 0)
            throw std::domain_error("CycNum::lifted: target level not a multiple of " +
                                    std::to_string(level_));
        unsigned stride = target / level_;
        const CycLevel& lv = CycLevel::get(target);
        std::vector<Rat> out(lv.phi);
        for (size_t j = 0; j < c_.size(); ++j) {
            if (c_[j] == 0) continue;
            add_power(out, lv, j * stride, c_[j]);
        }
        return CycNum(target, std::move(out));
    }

    friend CycNum operator+(const CycNum& a, const CycNum& b) {
        auto [x, y] = unify(a, b);
        for (size_t i = 0; i < x.c_.size(); ++i) x.c_[i] += y.c_[i];
        return x;
    }

    friend CycNum operator-(const CycNum& a, const CycNum& b) {
        auto [x, y] = unify(a, b);
        for (size_t i = 0; i < x.c_.size(); ++i) x.c_[i] -= y.c_[i];
        return x;
    }

    CycNum operator-() const {
        CycNum r = *this;
        for (Rat& x : r.c_) x = -x;
        return r;
    }

    friend CycNum operator*(const CycNum& a, const CycNum& b) {
        auto [x, y] = unify(a, b);
        const CycLevel& lv = CycLevel::get(x.level_);
        if (lv.phi == 1) return CycNum(x.level_, {x.c_[0] * y.c_[0]});
        // schoolbook product of degree < 2 phi - 1; wrap exponents >= M via
        // x^M = 1, then fold [phi, M) through the reduction table
        std::vector<Rat> acc(2 * lv.phi - 1);
        for (size_t i = 0; i < lv.phi; ++i) {
            if (x.c_[i] == 0) continue;
            for (size_t j = 0; j < lv.phi; ++j) {
                if (y.c_[j] == 0) continue;
                acc[i + j] += x.c_[i] * y.c_[j];
            }
        }
        for (size_t i = acc.size(); i-- > lv.M;)
            if (acc[i] != 0) acc[i - lv.M] += acc[i];
        std::vector<Rat> out(acc.begin(), acc.begin() + lv.phi);
        size_t hi = std::min<size_t>(acc.size(), lv.M);
        for (size_t i = lv.phi; i < hi; ++i) {
            if (acc[i] == 0) continue;
            for (const auto& [j, v] : lv.red[i - lv.phi]) out[j] += acc[i] * v;
        }
        return CycNum(x.level_, std::move(out));
    }

    /// Fast multiply by s * zeta^k (k any integer): cyclic rotation mod
    /// x^M - 1 followed by table reduction. Used heavily by series builders.
    CycNum mul_root(long k, const Rat& s = Rat(1)) const {
        const CycLevel& lv = CycLevel::get(level_);
        unsigned kk = static_cast<unsigned>(mod_norm(k, level_));
        std::vector<Rat> out(lv.phi);
        for (size_t j = 0; j < c_.size(); ++j) {
            if (c_[j] == 0) continue;
            add_power(out, lv, (j + kk) % lv.M, c_[j] * s);
        }
        return CycNum(level_, std::move(out));
    }

    /// Galois twist zeta_M -> zeta_M^d for gcd(d, M) = 1. Ring homomorphism
    /// fixing Q; d = 1 is the identity.
    CycNum galois(long d) const {
        long dn = mod_norm(d, level_);
        if (std::gcd(static_cast<unsigned long>(dn), static_cast<unsigned long>(level_)) != 1)
            throw std::domain_error("cyc_galois: exponent not coprime to level");
        const CycLevel& lv = CycLevel::get(level_);
        std::vector<Rat> out(lv.phi);
        for (size_t j = 0; j < c_.size(); ++j) {
            if (c_[j] == 0) continue;
            add_power(out, lv, static_cast<unsigned>((j * static_cast<unsigned long>(dn)) % lv.M),
                      c_[j]);
        }
        return CycNum(level_, std::move(out));
    }

    /// Complex conjugation zeta -> zeta^{-1}.
    CycNum conj() const { return level_ == 1 ? *this : galois(static_cast<long>(level_) - 1); }

    /// Field inverse: the product of all nontrivial Galois conjugates
    /// divided by the norm (which lands in Q). Conjugation is a cheap
    /// index permutation, so this avoids coefficient blowup entirely.
    CycNum inverse() const {
        if (is_zero()) throw std::domain_error("CycNum::inverse: division by zero");
        if (level_ == 1 || is_rational()) {
            CycNum r = CycNum::zero(level_);
            r.c_[0] = Rat(1) / c_[0];
            return r;
        }
        CycNum prod = CycNum::one().lifted(level_);
        for (unsigned long u = 2; u < level_; ++u) {
            if (std::gcd(u, static_cast<unsigned long>(level_)) != 1) continue;
            prod = prod * galois(static_cast<long>(u));
        }
        CycNum n = *this * prod;
        if (!n.is_rational() || n.is_zero())
            throw std::runtime_error("CycNum::inverse: norm computation failed");
        Rat scale = Rat(1) / n.rational_value();
        CycNum out = std::move(prod);
        for (Rat& x : out.c_) x *= scale;
        return out;
    }

    CycNum pow(long e) const {
        if (e < 0) return inverse().pow(-e);
        CycNum r = CycNum::one();
        CycNum b = *this;
        unsigned long ee = static_cast<unsigned long>(e);
        while (ee) {
            if (ee & 1) r = r * b;
            b = b * b;
            ee >>= 1;
        }
        return r;
    }

    friend bool operator==(const CycNum& a, const CycNum& b) {
        if (a.level_ == b.level_) return a.c_ == b.c_;
        auto [x, y] = unify(a, b);
        return x.c_ == y.c_;
    }
    friend bool operator!=(const CycNum& a, const CycNum& b) { return !(a == b); }

    /// Numeric value at zeta_M = exp(2 pi i / M), double precision.
    std::complex<double> embed_double() const {
        std::complex<double> acc(0.0, 0.0);
        constexpr double two_pi = 6.283185307179586476925286766559;
        for (size_t j = 0; j < c_.size(); ++j) {
            if (c_[j] == 0) continue;
            double ang = two_pi * static_cast<double>(j) / level_;
            acc += rat_to_double(c_[j]) * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        return acc;
    }

private:
    unsigned level_;
    std::vector<Rat> c_;

    static void add_power(std::vector<Rat>& out, const CycLevel& lv, unsigned long idx,
                          const Rat& v) {
        if (idx < lv.phi) {
            out[idx] += v;
        } else {
            for (const auto& [j, w] : lv.red[idx - lv.phi]) out[j] += v * w;
        }
    }

    static std::pair<CycNum, CycNum> unify(const CycNum& a, const CycNum& b) {
        if (a.level_ == b.level_) return {a, b};
        unsigned target =
            static_cast<unsigned>(lcm_ul(a.level_, b.level_));
        return {a.lifted(target), b.lifted(target)};
    }
};

/// e(x) = exp(2 pi i x) at the given level (denominator of x must divide it).
inline CycNum cyc_e(const Rat& x, unsigned level) { return CycNum::e(x, level); }

inline CycNum cyc_galois(const CycNum& u, long d) { return u.galois(d); }

}  // namespace rrunits
