#pragma once

#include <array>
#include <vector>

#include "rrunits/cyclotomic.hpp"
#include "rrunits/siegel.hpp"
#include "rrunits/units.hpp"

namespace rrunits {

/// Element of GL_2(Z/ell)/{+-I}: entries in [0, ell) with det != 0, stored
/// as the lexicographically smaller of the pair {gamma, -gamma}.
struct GL2Class {
    unsigned ell;
    std::array<long, 4> m;  // a b c d, row-major

    GL2Class(unsigned ell_, long a, long b, long c, long d)
        : ell(ell_), m{mod_norm(a, ell_), mod_norm(b, ell_), mod_norm(c, ell_), mod_norm(d, ell_)} {
        if (det() == 0) throw std::invalid_argument("GL2Class: singular matrix");
        canonicalize();
    }

    long det() const { return mod_norm(m[0] * m[3] - m[1] * m[2], ell); }

    void canonicalize() {
        std::array<long, 4> neg;
        for (int i = 0; i < 4; ++i) neg[i] = mod_norm(-m[i], ell);
        if (neg < m) m = neg;
    }

    friend bool operator==(const GL2Class& x, const GL2Class& y) {
        return x.ell == y.ell && x.m == y.m;
    }
    friend bool operator<(const GL2Class& x, const GL2Class& y) { return x.m < y.m; }

    GL2Class operator*(const GL2Class& o) const {
        return GL2Class(ell, m[0] * o.m[0] + m[1] * o.m[2], m[0] * o.m[1] + m[1] * o.m[3],
                        m[2] * o.m[0] + m[3] * o.m[2], m[2] * o.m[1] + m[3] * o.m[3]);
    }

    GL2Class inverse() const {
        long di = mod_inv(det(), ell);
        return GL2Class(ell, di * m[3], -di * m[1], -di * m[2], di * m[0]);
    }

    bool is_gamma_d() const { return m[0] == 1 && m[1] == 0 && m[2] == 0; }
};

/// All classes of GL_2(Z/ell)/{+-I}, each exactly once;
/// count = (ell^2 - 1)(ell^2 - ell)/2.
inline std::vector<GL2Class> gl2_classes(unsigned ell) {
    if (!is_prime(ell)) throw std::domain_error("gl2_classes: ell must be prime");
    std::vector<GL2Class> out;
    long L = static_cast<long>(ell);
    for (long a = 0; a < L; ++a)
        for (long b = 0; b < L; ++b)
            for (long c = 0; c < L; ++c)
                for (long d = 0; d < L; ++d) {
                    if (mod_norm(a * d - b * c, ell) == 0) continue;
                    std::array<long, 4> mm{a, b, c, d};
                    std::array<long, 4> neg;
                    for (int i = 0; i < 4; ++i) neg[i] = mod_norm(-mm[i], ell);
                    if (neg < mm) continue;  // emit the canonical one only
                    out.push_back(GL2Class(ell, a, b, c, d));
                }
    return out;
}

/// ord_infinity of gamma . s_{ell,m} in powers of q^{1/ell}:
/// (ell/2) sum_{j=1}^m sum_{s=0}^{ell-1} B2((2aj+cs)/ell) - B2((aj+cs)/ell).
/// Vanishes whenever c != 0 mod ell.
inline Rat ord_inf_under(const GL2Class& g, unsigned ell, unsigned m) {
    long L = static_cast<long>(ell);
    Rat acc(0);
    for (long j = 1; j <= static_cast<long>(m); ++j)
        for (long s = 0; s < L; ++s) {
            acc += bernoulli_b2_frac(rat(2 * g.m[0] * j + g.m[2] * s, L));
            acc -= bernoulli_b2_frac(rat(g.m[0] * j + g.m[2] * s, L));
        }
    return Rat(L) / 2 * acc;
}

/// Phase picked up by s_{ell,m} under tau -> tau + b:
/// e(b m(m+1)(2m+1-ell)/(4 ell)), an exact root of unity.
inline CycNum translation_phase(long b, unsigned ell, unsigned m) {
    long L = static_cast<long>(ell);
    Rat x = Rat(b) * rat(static_cast<long>(m) * (m + 1), 4) * Rat(2L * m + 1 - L) / L;
    return cyc_e(x, 2 * ell * ell);
}

/// s_{ell,m}(tau + 1) computed term-by-term (q^x picks up e(x)) equals
/// translation_phase(1) times s_{ell,m}(tau), as exact series.
inline bool translation_series_check(unsigned ell, unsigned m, const Rat& order) {
    QSeries s = s_unit_product_form(ell, m, order);
    unsigned M = 2 * ell * ell;
    QSeries lhs(s.order());
    for (const auto& [e, c] : s.terms()) lhs.raw_terms()[e] = c * cyc_e(e, M).lifted(M);
    QSeries rhs = s.scaled(translation_phase(1, ell, m));
    return equal_through(lhs, rhs, order);
}

/// The subgroup of GL_2(Z/ell)/{+-I} fixing s_{ell,m}, computed by the
/// three filters: (i) the ord-at-infinity equation (forces c = 0, a = +-1),
/// (ii) trivial translation phase (forces b = 0), (iii) the gamma_d
/// coefficient action fixes the expansion (coefficients are rational).
/// Expected: exactly the classes gamma_d = (1 0; 0 d), ell - 1 of them.
inline std::vector<GL2Class> stabilizer(unsigned ell, unsigned m, const Rat& probe_order = Rat(6)) {
    if (!is_prime(ell) || ell < 5) throw std::domain_error("stabilizer: ell must be prime >= 5");
    unsigned k = (ell - 1) / 2;
    if (m < 1 || m > k - 1) throw std::invalid_argument("stabilizer: need 1 <= m <= k-1");
    long L = static_cast<long>(ell);
    Rat target = ord_infinity_s(ell, m);

    // filter (iii) data: a short window of the rational expansion
    QSeries probe = s_unit_product_form(ell, m, probe_order);
    if (!probe.all_coeffs_rational())
        throw std::runtime_error("stabilizer: expansion unexpectedly non-rational");

    std::vector<GL2Class> out;
    for (const GL2Class& g : gl2_classes(ell)) {
        if (ord_inf_under(g, ell, m) != target) continue;  // (i)
        // normalize the representative to a = 1 (the class contains +-gamma)
        std::array<long, 4> mm = g.m;
        if (mm[2] != 0) continue;
        if (mm[0] == L - 1)
            for (auto& x : mm) x = mod_norm(-x, L);
        if (mm[0] != 1) continue;
        if (!translation_phase(mm[1], ell, m).is_one()) continue;  // (ii)
        // (iii): gamma_d acts on Fourier coefficients through zeta_ell -> zeta_ell^d
        long d = mm[3];
        bool fixes = true;
        for (const auto& [e, c] : probe.terms()) {
            CycNum lifted = c.lifted(ell);
            if (!(cyc_galois(lifted, d) == lifted)) {
                fixes = false;
                break;
            }
        }
        if (!fixes) continue;
        out.push_back(g);
    }
    return out;
}

/// True iff the set is exactly {gamma_d : d in (Z/ell)^x}.
inline bool is_gamma_d_set(const std::vector<GL2Class>& classes, unsigned ell) {
    if (classes.size() != ell - 1) return false;
    std::vector<bool> seen(ell, false);
    for (const GL2Class& g : classes) {
        if (!g.is_gamma_d()) return false;
        if (seen[g.m[3]]) return false;
        seen[g.m[3]] = true;
    }
    return true;
}

/// Subgroup sanity: closed under product and inverse.
inline bool is_subgroup(const std::vector<GL2Class>& classes) {
    for (const GL2Class& a : classes) {
        bool found_inv = false;
        for (const GL2Class& b : classes)
            if (a.inverse() == b) found_inv = true;
        if (!found_inv) return false;
        for (const GL2Class& b : classes) {
            GL2Class p = a * b;
            bool found = false;
            for (const GL2Class& c : classes)
                if (p == c) found = true;
            if (!found) return false;
        }
    }
    return true;
}

}  // namespace rrunits
