#pragma once

#include <gmpxx.h>

#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <string>

namespace rrunits {

using Int = mpz_class;
using Rat = mpq_class;

// Exact rational p/q in canonical form. q must be nonzero.
inline Rat rat(long p, long q = 1) {
    if (q == 0) throw std::invalid_argument("rat: zero denominator");
    Rat r(p, q);
    r.canonicalize();
    return r;
}

inline Rat rat(const Int& p, const Int& q) {
    if (q == 0) throw std::invalid_argument("rat: zero denominator");
    Rat r(p, q);
    r.canonicalize();
    return r;
}

inline std::string rat_str(const Rat& x) {
    if (x.get_den() == 1) return x.get_num().get_str();
    return x.get_num().get_str() + "/" + x.get_den().get_str();
}

inline std::string int_str(const Int& x) { return x.get_str(); }

// Parses "p", "-p" or "p/q". Throws on malformed input.
inline Rat rat_parse(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rat(Int(s));
        Int num(s.substr(0, slash));
        Int den(s.substr(slash + 1));
        return rat(num, den);
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("rat_parse: malformed rational '" + s + "'");
    }
}

inline Int rat_floor(const Rat& x) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
    return q;
}

// Fractional part {x} in [0,1); exact.
inline Rat frac_part(const Rat& x) { return x - Rat(rat_floor(x)); }

inline bool is_integer(const Rat& x) { return x.get_den() == 1; }

inline Int int_lcm(const Int& a, const Int& b) {
    Int r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline Int int_gcd(const Int& a, const Int& b) {
    Int r;
    mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline Int int_pow(const Int& base, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline double rat_to_double(const Rat& x) { return x.get_d(); }

// x mod m normalized into [0, m)
inline long mod_norm(long x, long m) {
    long r = x % m;
    return r < 0 ? r + m : r;
}

inline long mod_mul(long a, long b, long m) { return mod_norm((a % m) * (b % m), m); }

inline long mod_pow(long base, unsigned long e, long m) {
    long r = 1 % m;
    long b = mod_norm(base, m);
    while (e) {
        if (e & 1) r = mod_mul(r, b, m);
        b = mod_mul(b, b, m);
        e >>= 1;
    }
    return r;
}

inline long mod_inv(long a, long m) {
    long t = 0, nt = 1, r = m, nr = mod_norm(a, m);
    while (nr != 0) {
        long q = r / nr;
        long tmp = t - q * nt;
        t = nt;
        nt = tmp;
        tmp = r - q * nr;
        r = nr;
        nr = tmp;
    }
    if (r != 1) throw std::invalid_argument("mod_inv: not invertible");
    return mod_norm(t, m);
}

inline unsigned long gcd_ul(unsigned long a, unsigned long b) { return std::gcd(a, b); }

inline unsigned long lcm_ul(unsigned long a, unsigned long b) {
    if (a == 0 || b == 0) return 0;
    return a / std::gcd(a, b) * b;
}

}  // namespace rrunits
