#pragma once

#include <tuple>
#include <vector>

#include "rrunits/exact_linalg.hpp"
#include "rrunits/rational.hpp"

namespace rrunits {

/// B_2({x}) = {x}^2 - {x} + 1/6, the second Bernoulli polynomial at the
/// fractional part. Correct for negative arguments.
inline Rat bernoulli_b2_frac(const Rat& x) {
    Rat f = frac_part(x);
    return f * f - f + rat(1, 6);
}

inline bool is_prime(unsigned long n) {
    if (n < 2) return false;
    for (unsigned long p = 2; p * p <= n; ++p)
        if (n % p == 0) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Kubert-Lang modularity criterion (quadratic congruence sums)
// ---------------------------------------------------------------------------

/// Index data of a formal Siegel-function product: integer numerators
/// (p, r) of a = (p/ell, r/ell) together with a multiplicity.
struct KLIndex {
    long p;
    long r;
    int mult;
};

struct KLSums {
    Int a1_sq;  // sum m(a) p^2
    Int a2_sq;  // sum m(a) r^2
    Int a1_a2;  // sum m(a) p r
    Int mult;   // sum m(a)
    unsigned ell;

    bool passes() const {
        Int l(static_cast<long>(ell));
        return a1_sq % l == 0 && a2_sq % l == 0 && a1_a2 % l == 0 && mult % 12 == 0;
    }
};

/// The four Kubert-Lang sums for a product prod g_a^{m(a)} at odd level
/// ell >= 5; the product is a modular unit of level ell iff all four
/// congruences hold.
inline KLSums kl_sums(const std::vector<KLIndex>& idx, unsigned ell) {
    if (ell < 5 || ell % 2 == 0)
        throw std::domain_error("kl_sums: criterion requires odd level >= 5");
    KLSums s{Int(0), Int(0), Int(0), Int(0), ell};
    for (const auto& [p, r, m] : idx) {
        if (mod_norm(p, ell) == 0 && mod_norm(r, ell) == 0)
            throw std::invalid_argument("kl_sums: index lies in Z^2");
        s.a1_sq += Int(m) * p * p;
        s.a2_sq += Int(m) * r * r;
        s.a1_a2 += Int(m) * p * r;
        s.mult += m;
    }
    return s;
}

inline bool kl_check(const std::vector<KLIndex>& idx, unsigned ell) {
    return kl_sums(idx, ell).passes();
}

// ---------------------------------------------------------------------------
// divisor vectors on the cusp set
// ---------------------------------------------------------------------------

/// Orders of a unit at the k = (ell-1)/2 cusps gamma(1)inf .. gamma(k)inf.
struct DivisorVector {
    unsigned ell;
    std::vector<Rat> ord;  // length k

    DivisorVector& operator+=(const DivisorVector& o) {
        for (size_t i = 0; i < ord.size(); ++i) ord[i] += o.ord[i];
        return *this;
    }
    DivisorVector& operator-=(const DivisorVector& o) {
        for (size_t i = 0; i < ord.size(); ++i) ord[i] -= o.ord[i];
        return *this;
    }
    friend bool operator==(const DivisorVector& a, const DivisorVector& b) {
        return a.ell == b.ell && a.ord == b.ord;
    }
};

/// V(m): entry i is (ell/2) B_2({i m / ell}), the order of g(m) at the
/// cusp gamma(i)inf. Requires ell prime >= 5 and m not divisible by ell.
inline DivisorVector divisor_vector_g(long m, unsigned ell) {
    if (!is_prime(ell) || ell < 5)
        throw std::domain_error("divisor_vector_g: level must be a prime >= 5");
    if (mod_norm(m, ell) == 0) throw std::invalid_argument("divisor_vector_g: m divisible by ell");
    unsigned k = (ell - 1) / 2;
    DivisorVector v{ell, {}};
    v.ord.reserve(k);
    for (unsigned i = 1; i <= k; ++i)
        v.ord.push_back(Rat(static_cast<long>(ell)) / 2 *
                        bernoulli_b2_frac(rat(static_cast<long>(i) * m, static_cast<long>(ell))));
    return v;
}

/// Divisor of a formal product prod g(m)^{e_m} of the capital-G functions.
inline DivisorVector divisor_vector_combo(const std::vector<std::pair<long, int>>& gexp,
                                          unsigned ell) {
    unsigned k = (ell - 1) / 2;
    DivisorVector v{ell, std::vector<Rat>(k, Rat(0))};
    for (const auto& [m, e] : gexp) {
        DivisorVector g = divisor_vector_g(m, ell);
        for (unsigned i = 0; i < k; ++i) v.ord[i] += Rat(e) * g.ord[i];
    }
    return v;
}

/// V(s_{ell,m}) = sum_{j=1}^m V(2j) - V(j).
inline DivisorVector divisor_vector_s(unsigned ell, unsigned m) {
    std::vector<std::pair<long, int>> gexp;
    for (unsigned j = 1; j <= m; ++j) {
        gexp.emplace_back(2L * j, 1);
        gexp.emplace_back(static_cast<long>(j), -1);
    }
    return divisor_vector_combo(gexp, ell);
}

/// V of the quotient g(m)/g(1) underlying the r-family.
inline DivisorVector divisor_vector_r(unsigned ell, long m) {
    return divisor_vector_combo({{m, 1}, {1L, -1}}, ell);
}

/// ord_infinity of s_{ell,m} in powers of q^{1/ell}:
/// m(m+1)(2m+1-ell)/4, always nonzero for 1 <= m <= k-1.
inline Rat ord_infinity_s(unsigned ell, unsigned m) {
    if (ell % 2 == 0 || ell < 5) throw std::domain_error("ord_infinity_s: ell must be odd >= 5");
    Rat v = rat(static_cast<long>(m) * (m + 1), 4) *
            Rat(2L * m + 1 - static_cast<long>(ell));
    if (v == 0) throw std::runtime_error("ord_infinity_s: vanishing order");
    return v;
}

// ---------------------------------------------------------------------------
// rank computations
// ---------------------------------------------------------------------------

/// Least d >= 1 with c^d = +-1 mod ell: the order of c in (Z/ell)^x / {+-1}.
inline unsigned mult_order_mod_pm(long c, unsigned ell) {
    if (std::gcd(mod_norm(c, ell), static_cast<long>(ell)) != 1)
        throw std::invalid_argument("mult_order_mod_pm: c not coprime to ell");
    long x = mod_norm(c, ell);
    long cur = x;
    for (unsigned d = 1; d <= ell; ++d) {
        if (cur == 1 || cur == static_cast<long>(ell) - 1) return d;
        cur = mod_mul(cur, x, ell);
    }
    throw std::runtime_error("mult_order_mod_pm: order not found");
}

struct RankReport {
    unsigned ell;
    long c;
    unsigned k;
    unsigned d;             // order of c in (Z/ell)^x / {+-1}
    unsigned formula_rank;  // k - k/d
    unsigned matrix_rank;   // exact rank of the k x k matrix with rows V(cm) - V(m)
    bool agree;
};

/// Rank of the k x k matrix with rows V(cm) - V(m), m = 1..k, against the
/// closed formula k - k/d. For c = 2 this is Rank(U_ell^R).
inline RankReport rank_report(unsigned ell, long c) {
    if (!is_prime(ell) || ell < 5) throw std::domain_error("rank_report: level must be prime >= 5");
    unsigned k = (ell - 1) / 2;
    unsigned d = mult_order_mod_pm(c, ell);
    std::vector<std::vector<Rat>> rows;
    rows.reserve(k);
    for (unsigned m = 1; m <= k; ++m) {
        DivisorVector vm = divisor_vector_g(m, ell);
        DivisorVector vcm = divisor_vector_g(mod_norm(c * static_cast<long>(m), ell), ell);
        vcm -= vm;
        rows.push_back(std::move(vcm.ord));
    }
    RankReport rep{ell, c, k, d, k - k / d, rational_matrix_rank(rows), false};
    rep.agree = rep.formula_rank == rep.matrix_rank;
    return rep;
}

/// The k x k matrix A with rows V(m), m = 1..k, has full rank (quoted
/// independence of the V(m); verified here by exact elimination).
inline bool full_rank_check_A(unsigned ell) {
    unsigned k = (ell - 1) / 2;
    std::vector<std::vector<Rat>> rows;
    rows.reserve(k);
    for (unsigned m = 1; m <= k; ++m) rows.push_back(divisor_vector_g(m, ell).ord);
    return rational_matrix_rank(rows) == k;
}

}  // namespace rrunits
