#pragma once

#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "rrunits/cyclotomic.hpp"
#include "rrunits/exact_linalg.hpp"
#include "rrunits/units.hpp"

namespace rrunits {

/// Standard cyclotomic-unit generator xi_a = zeta^{(1-a)/2} (1-zeta^a)/(1-zeta)
/// of Q(zeta_ell)^+, computed exactly in Q(zeta_{2 ell}) under the principal
/// half-power convention zeta^{x/2} = e(x/(2 ell)). xi_1 = 1; indices obey
/// xi_{ell-a} = xi_a.
inline CycNum xi_generator(unsigned ell, long a) {
    if (ell < 3 || ell % 2 == 0) throw std::domain_error("xi_generator: need odd ell >= 3");
    long aa = mod_norm(a, ell);
    if (aa == 0) throw std::invalid_argument("xi_generator: index divisible by ell");
    unsigned M = 2 * ell;
    long L = static_cast<long>(ell);
    CycNum zeta_a = CycNum::root(M, 2 * aa);  // zeta_ell^a
    CycNum zeta = CycNum::root(M, 2);
    CycNum half = cyc_e(rat(1 - aa, 2 * L), M);
    return half * (CycNum::one() - zeta_a) * (CycNum::one() - zeta).inverse();
}

/// Limit of s_{ell,m} at the cusp 0:
/// prod_{j=1}^m zeta^{-j/2} (1 - zeta^{2j})/(1 - zeta^j), exact in
/// Q(zeta_{2 ell}). The value is real (fixed by conjugation); verified.
inline CycNum cusp_limit(unsigned ell, unsigned m) {
    if (!is_prime(ell) || ell < 5) throw std::domain_error("cusp_limit: ell must be prime >= 5");
    unsigned k = (ell - 1) / 2;
    if (m > k - 1) throw std::invalid_argument("cusp_limit: need 0 <= m <= k-1");
    static std::mutex mu;
    static std::map<std::pair<unsigned, unsigned>, CycNum> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({ell, m});
    if (it != cache.end()) return it->second;
    unsigned M = 2 * ell;
    long L = static_cast<long>(ell);
    // built incrementally: each step multiplies by
    // e(-j/(2 ell)) (1 - zeta^{2j})/(1 - zeta^j); the inverted factor is a
    // sparse binomial, which keeps the norm-based inverse cheap
    CycNum acc = CycNum::one();
    unsigned start = 0;
    for (unsigned j = m; j >= 1; --j) {
        auto prev = cache.find({ell, j - 1});
        if (prev != cache.end()) {
            acc = prev->second;
            start = j - 1;
            break;
        }
    }
    for (unsigned j = start + 1; j <= m; ++j) {
        long jj = j;
        CycNum num = CycNum::one() - CycNum::root(M, 2 * mod_norm(2 * jj, L));
        CycNum den = CycNum::one() - CycNum::root(M, 2 * jj);
        acc = acc * cyc_e(rat(-jj, 2 * L), M) * num * den.inverse();
        if (!(acc.conj() == acc)) throw std::runtime_error("cusp_limit: value not real");
        cache.emplace(std::make_pair(ell, j), acc);
    }
    return acc;
}

/// Folsom's limit of the extended r-family at the cusp 0:
/// lim r_unit(ell, v) = (-1)^{v-1} zeta^{(1-v)/2} (zeta^v - 1)/(zeta - 1).
inline CycNum r_unit_cusp_limit(unsigned ell, long v) {
    long vv = mod_norm(v, ell);
    if (vv == 0) throw std::invalid_argument("r_unit_cusp_limit: v divisible by ell");
    unsigned M = 2 * ell;
    long L = static_cast<long>(ell);
    CycNum num = CycNum::root(M, 2 * vv) - CycNum::one();
    CycNum den = CycNum::root(M, 2) - CycNum::one();
    CycNum val = cyc_e(rat(1 - v, 2 * L), M) * num * den.inverse();
    return (v - 1) % 2 == 0 ? val : -val;
}

/// Recomputes the cusp-0 limit through the r-limit formula composed per the
/// product s_{ell,m} = prod_j (-1)^j r_{ell,k+1-2j}/r_{ell,k+1-j} and checks
/// exact equality with cusp_limit.
inline bool limit_via_r_check(unsigned ell, unsigned m) {
    CycNum acc = CycNum::one();
    for (unsigned j = 1; j <= m; ++j) {
        CycNum num = r_unit_cusp_limit(ell, 2L * j);
        CycNum den = r_unit_cusp_limit(ell, static_cast<long>(j));
        acc = acc * num * den.inverse();
        if (j % 2 == 1) acc = -acc;
    }
    return acc == cusp_limit(ell, m);
}

/// Exponents of cusp_limit(ell, m) over the generators xi_2..xi_k, with the
/// residual root of unity tracked exactly.
struct CycUnitVector {
    unsigned ell;
    std::vector<long> exps;  // index a = 2..k at position a-2
    CycNum torsion;
};

/// Reduction a -> min(a mod ell, ell - a mod ell); contributes nothing when
/// the reduced index is 1 (xi_1 = 1).
inline CycUnitVector exponent_vector(unsigned ell, unsigned m) {
    unsigned k = (ell - 1) / 2;
    CycUnitVector v{ell, std::vector<long>(k - 1, 0), CycNum::one()};
    auto bump = [&](long a, long e) {
        long aa = mod_norm(a, ell);
        long red = std::min(aa, static_cast<long>(ell) - aa);
        if (red == 1) return;
        v.exps[static_cast<size_t>(red) - 2] += e;
    };
    for (unsigned j = 1; j <= m; ++j) {
        bump(2L * j, 1);
        bump(static_cast<long>(j), -1);
    }
    // reassembly: prod xi_a^{e_a} * torsion == cusp_limit, exactly;
    // numerator/denominator are kept split so only one inverse is needed
    CycNum num = CycNum::one(), den = CycNum::one();
    for (unsigned a = 2; a <= k; ++a) {
        long e = v.exps[a - 2];
        if (e > 0)
            num = num * xi_generator(ell, a).pow(e);
        else if (e < 0)
            den = den * xi_generator(ell, a).pow(-e);
    }
    CycNum lim = cusp_limit(ell, m);
    if (num == lim * den) {
        v.torsion = CycNum::one();
        return v;
    }
    v.torsion = lim * den * num.inverse();
    // the residual must be a root of unity of Q(zeta_{2 ell})
    if (!(v.torsion.pow(2L * ell) == CycNum::one()))
        throw std::runtime_error("exponent_vector: residual is not a root of unity");
    return v;
}

struct CycloRankReport {
    unsigned ell;
    unsigned k;
    unsigned d;             // order of 2 in (Z/ell)^x/{+-1}
    unsigned exact_rank;    // rank of the exponent lattice, Bareiss
    unsigned formula_rank;  // k - k/d
    unsigned numeric_rank;  // log-embedding oracle (floating point)
    bool agree;             // exact == formula
    bool numeric_agree;     // exact == numeric
};

/// Rank of the subgroup of cyclotomic units generated by the cusp-0 limits
/// of s_{ell,1..k-1}: exact lattice rank over the xi-generators, checked
/// against k - k/d and against a floating-point logarithmic embedding.
inline CycloRankReport cyclotomic_rank_report(unsigned ell) {
    if (!is_prime(ell) || ell < 5)
        throw std::domain_error("cyclotomic_rank: ell must be prime >= 5");
    unsigned k = (ell - 1) / 2;
    unsigned d = mult_order_mod_pm(2, ell);
    std::vector<std::vector<long>> rows;
    std::vector<CycUnitVector> vecs;
    for (unsigned m = 1; m + 1 <= k; ++m) {
        CycUnitVector v = exponent_vector(ell, m);
        rows.push_back(v.exps);
        vecs.push_back(std::move(v));
    }
    CycloRankReport rep{ell, k, d, 0, k - k / d, 0, false, false};
    rep.exact_rank = rows.empty() ? 0 : int_matrix_rank(rows);

    // oracle: log |sigma_a(u_m)| over the real embeddings of Q(zeta_ell)^+
    std::vector<std::vector<double>> logm;
    for (unsigned m = 1; m + 1 <= k; ++m) {
        CycNum u = cusp_limit(ell, m);
        std::vector<double> row;
        for (unsigned a = 1; a <= k; ++a) {
            long rep_a = a % 2 == 1 ? a : static_cast<long>(ell) - a;  // odd, coprime to 2 ell
            double av = std::abs(u.galois(rep_a).embed_double());
            row.push_back(std::log(av));
        }
        logm.push_back(std::move(row));
    }
    rep.numeric_rank = logm.empty() ? 0 : numeric_rank(logm, 1e-6);
    rep.agree = rep.exact_rank == rep.formula_rank;
    rep.numeric_agree = rep.exact_rank == rep.numeric_rank;
    return rep;
}

/// Exact rank; throws if it disagrees with the closed formula k - k/d.
inline unsigned cyclotomic_rank(unsigned ell) {
    CycloRankReport rep = cyclotomic_rank_report(ell);
    if (!rep.agree)
        throw std::runtime_error("cyclotomic_rank: exact rank disagrees with k - k/d");
    return rep.exact_rank;
}

}  // namespace rrunits
