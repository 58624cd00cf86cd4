#pragma once

#include <iostream>
#include <map>
#include <mutex>
#include <tuple>
#include <vector>

#include "rrunits/qseries.hpp"
#include "rrunits/units.hpp"

namespace rrunits {

/// Index a = (p/ell, r/ell) of a Siegel function, a in (1/ell)Z^2 \ Z^2.
struct SiegelIndex {
    unsigned ell;
    long p;
    long r;

    SiegelIndex(unsigned ell_, long p_, long r_) : ell(ell_), p(p_), r(r_) {
        if (ell == 0) throw std::invalid_argument("SiegelIndex: level must be positive");
        if (mod_norm(p, ell) == 0 && mod_norm(r, ell) == 0)
            throw std::invalid_argument("SiegelIndex: index lies in Z^2");
    }

    bool is_reduced() const {
        return 0 <= p && p < static_cast<long>(ell) && 0 <= r && r < static_cast<long>(ell);
    }

    SiegelIndex reduced() const {
        return SiegelIndex(ell, mod_norm(p, ell), mod_norm(r, ell));
    }

    friend bool operator==(const SiegelIndex& a, const SiegelIndex& b) {
        return a.ell == b.ell && a.p == b.p && a.r == b.r;
    }
};

/// Formal product prod g_a^{m(a)} with a root-of-unity prefactor.
/// argument_scale distinguishes g_a(tau) (1) from g_a(ell tau) (ell).
struct UnitExpr {
    unsigned ell;
    unsigned argument_scale = 1;
    CycNum prefactor = CycNum::one();
    std::vector<std::pair<SiegelIndex, int>> factors;
};

namespace detail {

/// Core product expansion of g_{(p/ell, r/ell)}(tau) with 0 <= p < ell and
/// r any integer ("literal" second component): the prefactor is not
/// periodic in r, so unreduced r gives a genuinely different (conjugate
/// etc.) series. Coefficients at level 2 ell^2, or rational when r = 0.
inline QSeries siegel_g_literal(unsigned ell, long p, long r, const Rat& order) {
    if (p < 0 || p >= static_cast<long>(ell))
        throw std::domain_error("siegel_g: first index component must lie in [0,1)");
    if (p == 0 && mod_norm(r, ell) == 0)
        throw std::invalid_argument("siegel_g: index lies in Z^2");
    const long L = static_cast<long>(ell);
    const unsigned M = 2 * ell * ell;
    const bool rational = (r == 0);
    const unsigned level = rational ? 1 : M;
    Rat lead = bernoulli_b2_frac(rat(p, L)) / 2;
    // -e(a2 (a1 - 1)/2) = -zeta_M^{r (p - ell)}
    CycNum pref =
        rational ? CycNum(-1L) : -CycNum::root(M, r * (p - L));
    std::vector<BinomialFactor> fs;
    const long rk = rational ? 0 : mod_norm(2 * L * r, M);
    const long rkneg = rational ? 0 : mod_norm(-2 * L * r, M);
    Rat rel = order - lead;
    for (long n = 1;; ++n) {
        Rat x1 = rat(L * (n - 1) + p, L);
        Rat x2 = rat(L * n - p, L);
        if (x1 >= rel && x2 >= rel) break;
        if (x1 < rel) fs.push_back({x1, rk, Rat(1), 1});
        if (x2 < rel) fs.push_back({x2, rkneg, Rat(1), 1});
    }
    return product_of_binomials(pref, lead, fs, order, level);
}

}  // namespace detail

/// Siegel function g_a as an exact q-series. The index must be reduced to
/// [0,1)^2; reduction is an explicit separate step so that root-of-unity
/// bookkeeping is never silent.
inline QSeries siegel_g(const SiegelIndex& a, const Rat& order) {
    if (!a.is_reduced())
        throw std::invalid_argument("siegel_g: index must be reduced to [0,1)^2 first");
    return detail::siegel_g_literal(a.ell, a.p, a.r, order);
}

/// g_a(ell tau): exponent dilation of the g_a(tau) product.
inline QSeries siegel_g_dilated(const SiegelIndex& a, const Rat& order) {
    long L = static_cast<long>(a.ell);
    return siegel_g(a, order / L).dilated(Rat(L));
}

/// Klein function k_a = g_a / eta^2.
inline QSeries klein_series(const SiegelIndex& a, const Rat& order) {
    QSeries eta2 = eta_series(order + 1);
    eta2 = eta2 * eta2;
    return (siegel_g(a, order + 1) * eta2.inverted()).truncated(order);
}

/// g(m) = prod_{s=0}^{ell-1} g_{(m/ell, s/ell)}(tau), exact over
/// Q(zeta_{2 ell^2}). Requires m not divisible by ell; the index numerator
/// is reduced mod ell.
inline QSeries g_capital(long m, unsigned ell, const Rat& order) {
    const long mm = mod_norm(m, ell);
    if (mm == 0) throw std::invalid_argument("g_capital: m divisible by ell");
    const long L = static_cast<long>(ell);
    const unsigned M = 2 * ell * ell;
    Rat lead = Rat(L) * bernoulli_b2_frac(rat(mm, L)) / 2;
    CycNum pref = CycNum::one();
    for (long s = 0; s < L; ++s)
        pref = pref * (-CycNum::root(M, s * (mm - L)));
    std::vector<BinomialFactor> fs;
    Rat rel = order - lead;
    for (long s = 0; s < L; ++s) {
        long rk = mod_norm(2 * L * s, M);
        long rkneg = mod_norm(-2 * L * s, M);
        for (long n = 1;; ++n) {
            Rat x1 = rat(L * (n - 1) + mm, L);
            Rat x2 = rat(L * n - mm, L);
            if (x1 >= rel && x2 >= rel) break;
            if (x1 < rel) fs.push_back({x1, rk, Rat(1), 1});
            if (x2 < rel) fs.push_back({x2, rkneg, Rat(1), 1});
        }
    }
    return product_of_binomials(pref, lead, fs, order, M);
}

/// Series identity g(m) = e(k(m - ell)/(2 ell)) g_{(m/ell, 0)}(ell tau),
/// checked exactly through the order. 1 <= m <= ell - 1.
inline bool reduction_lemma_check(unsigned ell, long m, const Rat& order) {
    if (ell < 5 || ell % 2 == 0)
        throw std::domain_error("reduction_lemma_check: ell must be odd >= 5");
    if (m < 1 || m >= static_cast<long>(ell))
        throw std::invalid_argument("reduction_lemma_check: need 1 <= m <= ell-1");
    const long L = static_cast<long>(ell);
    const long k = (L - 1) / 2;
    const unsigned M = 2 * ell * ell;
    QSeries lhs = g_capital(m, ell, order);
    CycNum phase = cyc_e(rat(k * (m - L), 2 * L), M);
    QSeries rhs = siegel_g_dilated(SiegelIndex(ell, m, 0), order).scaled(phase);
    return equal_through(lhs, rhs, order);
}

/// The Rogers-Ramanujan continued fraction as the level-5 product
/// q^{1/5} (q;q^5)(q^4;q^5) / ((q^2;q^5)(q^3;q^5)).
inline QSeries rr_continued_fraction_series(const Rat& order) {
    Rat O = order + 1;
    QSeries num = pochhammer_inf(Rat(1), Rat(5), O) * pochhammer_inf(Rat(4), Rat(5), O);
    QSeries den = pochhammer_inf(Rat(2), Rat(5), O) * pochhammer_inf(Rat(3), Rat(5), O);
    return (num * den.inverted()).shifted(rat(1, 5)).truncated(order);
}

/// r_{ell, k+1-m}(tau) = (-1)^{m-1} g_{(m/ell,0)}(ell tau) / g_{(1/ell,0)}(ell tau),
/// parameterized by the m of the right-hand side and extended to all
/// m not divisible by ell (the sign uses the literal m). Rational coefficients.
inline QSeries r_unit(unsigned ell, long m, const Rat& order) {
    const long mm = mod_norm(m, ell);
    if (mm == 0) throw std::invalid_argument("r_unit: m divisible by ell");
    const long L = static_cast<long>(ell);
    Rat lead = Rat(L) / 2 * (bernoulli_b2_frac(rat(mm, L)) - bernoulli_b2_frac(rat(1, L)));
    CycNum pref((m - 1) % 2 == 0 ? 1L : -1L);
    std::vector<BinomialFactor> fs;
    Rat rel = order - lead;
    auto add = [&](long p, int expo) {
        for (long n = 1;; ++n) {
            Rat x1(L * (n - 1) + p);
            Rat x2(L * n - p);
            if (x1 >= rel && x2 >= rel) break;
            if (x1 < rel) fs.push_back({x1, 0, Rat(1), expo});
            if (x2 < rel) fs.push_back({x2, 0, Rat(1), expo});
        }
    };
    add(mm, 1);
    add(1, -1);
    return product_of_binomials(pref, lead, fs, order);
}

namespace detail {

inline void check_s_args(unsigned ell, unsigned m) {
    if (ell < 5 || ell % 2 == 0) throw std::domain_error("s_unit: ell must be odd >= 5");
    unsigned k = (ell - 1) / 2;
    if (m < 1 || m > k) throw std::invalid_argument("s_unit: need 1 <= m <= k");
    if (m == k)
        std::cerr << "rrunits: warning: s_unit called with m = k = " << k
                  << " (outside the 1 <= m <= k-1 family)\n";
}

}  // namespace detail

/// The quotient shape of s_{ell,m}: prod_{j=1}^m g_{(2j/ell,0)}(ell tau) /
/// g_{(j/ell,0)}(ell tau). Rational coefficients; cheap to build.
inline QSeries s_unit_product_form(unsigned ell, unsigned m, const Rat& order) {
    detail::check_s_args(ell, m);
    const long L = static_cast<long>(ell);
    Rat lead(0);
    for (unsigned j = 1; j <= m; ++j)
        lead += Rat(L) / 2 *
                (bernoulli_b2_frac(rat(2L * j, L)) - bernoulli_b2_frac(rat(static_cast<long>(j), L)));
    std::vector<BinomialFactor> fs;
    Rat rel = order - lead;
    auto add = [&](long p, int expo) {
        for (long n = 1;; ++n) {
            Rat x1(L * (n - 1) + p);
            Rat x2(L * n - p);
            if (x1 >= rel && x2 >= rel) break;
            if (x1 < rel) fs.push_back({x1, 0, Rat(1), expo});
            if (x2 < rel) fs.push_back({x2, 0, Rat(1), expo});
        }
    };
    for (unsigned j = 1; j <= m; ++j) {
        add(2L * j, 1);
        add(static_cast<long>(j), -1);
    }
    return product_of_binomials(CycNum::one(), lead, fs, order);
}

/// s_{ell,m} built along BOTH routes: the g_{(.,0)}(ell tau) quotient and
/// the capital-G product e(-km(m+1)/(4 ell)) prod g(2j)/g(j). The two
/// expansions are compared exactly before returning; a mismatch signals an
/// implementation bug, not bad input. Results are memoized per
/// (ell, m, order).
inline QSeries s_unit(unsigned ell, unsigned m, const Rat& order) {
    detail::check_s_args(ell, m);
    static std::mutex mu;
    static std::map<std::tuple<unsigned, unsigned, std::string>, QSeries> cache;
    std::tuple<unsigned, unsigned, std::string> key{ell, m, rat_str(order)};
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }

    QSeries form_a = s_unit_product_form(ell, m, order);

    const long L = static_cast<long>(ell);
    const long k = (L - 1) / 2;
    const unsigned M = 2 * ell * ell;
    Rat lead = form_a.leading_exponent();
    CycNum pref = cyc_e(rat(-k * static_cast<long>(m) * (m + 1), 4 * L), M);
    std::vector<BinomialFactor> fs;
    Rat rel = order - lead;
    auto add_g = [&](long mm, int expo) {
        for (long s = 0; s < L; ++s) {
            pref = pref * (expo > 0 ? -CycNum::root(M, s * (mm - L))
                                    : (-CycNum::root(M, s * (mm - L))).inverse());
            long rk = mod_norm(2 * L * s, M);
            for (long n = 1;; ++n) {
                Rat x1 = rat(L * (n - 1) + mm, L);
                Rat x2 = rat(L * n - mm, L);
                if (x1 >= rel && x2 >= rel) break;
                if (x1 < rel) fs.push_back({x1, rk, Rat(1), expo});
                if (x2 < rel) fs.push_back({x2, mod_norm(-rk, M), Rat(1), expo});
            }
        }
    };
    for (unsigned j = 1; j <= m; ++j) {
        add_g(2L * j, 1);
        add_g(static_cast<long>(j), -1);
    }
    QSeries form_b = product_of_binomials(pref, lead, fs, order, M);

    if (!form_b.all_coeffs_rational())
        throw std::runtime_error("s_unit: capital-G route produced non-rational coefficients");
    Rat win = std::min(form_a.order(), form_b.order());
    if (!equal_through(form_a.truncated(win), form_b.truncated(win), win))
        throw std::runtime_error("s_unit: the two construction routes disagree");

    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(std::move(key), form_a);
    return form_a;
}

/// Product identity s_{ell,m} = prod_{j=1}^m (-1)^j r_{ell,k+1-2j}/r_{ell,k+1-j},
/// verified at the level of the actual r-series.
inline bool s_from_r_check(unsigned ell, unsigned m, const Rat& order) {
    detail::check_s_args(ell, m);
    const long L = static_cast<long>(ell);
    auto lead_r = [&](long p) -> Rat {
        return Rat(L) / 2 * (bernoulli_b2_frac(rat(p, L)) - bernoulli_b2_frac(rat(1, L)));
    };
    // slack so that the repeated divisions keep a window of size >= order
    Rat slack(1);
    for (unsigned j = 1; j <= m; ++j) {
        Rat l2 = lead_r(2L * j), l1 = lead_r(static_cast<long>(j));
        slack += (l2 < 0 ? -l2 : l2) + 2 * (l1 < 0 ? -l1 : l1);
    }
    Rat O = order + slack;
    QSeries prod = QSeries::one(O);
    for (unsigned j = 1; j <= m; ++j) {
        QSeries factor = r_unit(ell, 2L * j, O) * r_unit(ell, static_cast<long>(j), O).inverted();
        if (j % 2 == 1) factor = -factor;
        prod = prod * factor;
    }
    if (prod.order() < order) throw std::logic_error("s_from_r_check: slack underestimated");
    return equal_through(prod.truncated(order), s_unit_product_form(ell, m, order), order);
}

// ---------------------------------------------------------------------------
// formal index data (inputs to the Kubert-Lang criterion and divisors)
// ---------------------------------------------------------------------------

/// s_{ell,m} as a pure Siegel product at argument scale 1:
/// e(-km(m+1)/(4 ell)) prod_j prod_s g_{(2j/ell,s/ell)} / g_{(j/ell,s/ell)}.
inline UnitExpr unit_expr_s(unsigned ell, unsigned m) {
    detail::check_s_args(ell, m);
    const long L = static_cast<long>(ell);
    const long k = (L - 1) / 2;
    UnitExpr u{ell, 1, cyc_e(rat(-k * static_cast<long>(m) * (m + 1), 4 * L), 2 * ell * ell), {}};
    for (unsigned j = 1; j <= m; ++j)
        for (long s = 0; s < L; ++s) {
            u.factors.emplace_back(SiegelIndex(ell, 2L * j, s), 1);
            u.factors.emplace_back(SiegelIndex(ell, static_cast<long>(j), s), -1);
        }
    return u;
}

/// g(m)/g(n) as a scale-1 Siegel product (prefactor 1).
inline UnitExpr unit_expr_g_quotient(unsigned ell, long m, long n) {
    const long L = static_cast<long>(ell);
    long mm = mod_norm(m, ell), nn = mod_norm(n, ell);
    if (mm == 0 || nn == 0) throw std::invalid_argument("unit_expr_g_quotient: index divisible by ell");
    UnitExpr u{ell, 1, CycNum::one(), {}};
    for (long s = 0; s < L; ++s) {
        u.factors.emplace_back(SiegelIndex(ell, mm, s), 1);
        u.factors.emplace_back(SiegelIndex(ell, nn, s), -1);
    }
    return u;
}

/// Kubert-Lang modularity criterion on the index data of a scale-1 product.
inline KLSums kl_unit_sums(const UnitExpr& u) {
    if (u.argument_scale != 1)
        throw std::invalid_argument("kl_unit_check: criterion applies to scale-1 products");
    std::vector<KLIndex> idx;
    idx.reserve(u.factors.size());
    for (const auto& [a, e] : u.factors) {
        SiegelIndex red = a.reduced();
        idx.push_back({red.p, red.r, e});
    }
    return kl_sums(idx, u.ell);
}

inline bool kl_unit_check(const UnitExpr& u) { return kl_unit_sums(u).passes(); }

/// Divisor vector of a UnitExpr whose factors assemble into capital-G
/// orbits (every second component 0..ell-1 with one multiplicity).
inline DivisorVector divisor_vector_unit(const UnitExpr& u) {
    std::map<long, std::map<long, int>> by_p;
    for (const auto& [a, e] : u.factors) {
        SiegelIndex red = a.reduced();
        by_p[red.p][red.r] += e;
    }
    std::vector<std::pair<long, int>> gexp;
    for (const auto& [p, rs] : by_p) {
        if (u.argument_scale == u.ell) {
            // g_{(p/ell,0)}(ell tau) differs from g(p) by a constant
            for (const auto& [r, e] : rs) {
                if (r != 0) throw std::invalid_argument(
                    "divisor_vector_unit: scale-ell factors must have second component 0");
                if (e != 0) gexp.emplace_back(p, e);
            }
            continue;
        }
        int e0 = rs.count(0) ? rs.at(0) : 0;
        for (long r = 0; r < static_cast<long>(u.ell); ++r) {
            int er = rs.count(r) ? rs.at(r) : 0;
            if (er != e0)
                throw std::invalid_argument(
                    "divisor_vector_unit: factors do not form capital-G orbits");
        }
        if (e0 != 0) gexp.emplace_back(p, e0);
    }
    return divisor_vector_combo(gexp, u.ell);
}

}  // namespace rrunits
