#pragma once

#include <map>
#include <utility>
#include <vector>

#include "rrunits/partitions.hpp"
#include "rrunits/qseries.hpp"
#include "rrunits/siegel.hpp"

namespace rrunits {

// ---------------------------------------------------------------------------
// symbolic Hall-Littlewood polynomials (small variable counts)
// ---------------------------------------------------------------------------

/// dense polynomial in t with integer coefficients
using TPoly = std::vector<Int>;

inline void tpoly_trim(TPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

inline TPoly tpoly_one() { return {Int(1)}; }

inline TPoly tpoly_mul(const TPoly& a, const TPoly& b) {
    if (a.empty() || b.empty()) return {};
    TPoly r(a.size() + b.size() - 1);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    tpoly_trim(r);
    return r;
}

inline TPoly tpoly_add(TPoly a, const TPoly& b) {
    if (a.size() < b.size()) a.resize(b.size());
    for (size_t i = 0; i < b.size(); ++i) a[i] += b[i];
    tpoly_trim(a);
    return a;
}

/// 1 - t^e
inline TPoly tpoly_one_minus_pow(unsigned e) {
    TPoly p(e + 1);
    p[0] = 1;
    p[e] -= 1;
    return p;
}

inline Int tpoly_eval(const TPoly& p, const Int& t) {
    Int acc(0);
    for (size_t i = p.size(); i-- > 0;) acc = acc * t + p[i];
    return acc;
}

/// Polynomial in x_1..x_N with TPoly coefficients, stored as a monomial map.
/// Exponent vectors have fixed length N.
using Monomial = std::vector<unsigned>;
using XPoly = std::map<Monomial, TPoly>;

inline XPoly xpoly_add(XPoly a, const XPoly& b) {
    for (const auto& [m, c] : b) {
        auto [it, fresh] = a.emplace(m, c);
        if (!fresh) {
            it->second = tpoly_add(it->second, c);
            if (it->second.empty()) a.erase(it);
        }
    }
    return a;
}

/// Hall-Littlewood P_lambda(x_1..x_N; t) by the branching rule
/// P_lambda(x_1..x_N) = sum_{mu: lambda/mu horizontal strip}
///     psi_{lambda/mu}(t) x_N^{|lambda|-|mu|} P_mu(x_1..x_{N-1}).
/// Intended for small N (oracle checks); the principal specialization below
/// is the workhorse.
inline XPoly hl_poly(const Partition& lam, unsigned nvars) {
    if (!is_partition(lam)) throw std::invalid_argument("hl_poly: not a partition");
    static std::mutex mu_;
    static std::map<std::pair<Partition, unsigned>, XPoly> memo;
    std::lock_guard<std::mutex> lock(mu_);
    std::function<XPoly(const Partition&, unsigned)> go = [&](const Partition& l,
                                                              unsigned n) -> XPoly {
        if (l.size() > n) return {};  // zero
        if (n == 0) return XPoly{{Monomial{}, tpoly_one()}};
        auto key = std::make_pair(l, n);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        unsigned sz = partition_size(l);
        XPoly acc;
        for_each_strip_predecessor(l, [&](const Partition& m) {
            TPoly psi = tpoly_one();
            for (unsigned e : psi_strip_exponents(l, m)) psi = tpoly_mul(psi, tpoly_one_minus_pow(e));
            XPoly sub = go(m, n - 1);
            unsigned deg = sz - partition_size(m);
            XPoly shifted;
            for (const auto& [mono, c] : sub) {
                Monomial ext = mono;
                ext.resize(n, 0);
                ext[n - 1] = deg;
                shifted.emplace(std::move(ext), tpoly_mul(c, psi));
            }
            acc = xpoly_add(std::move(acc), shifted);
        });
        memo.emplace(key, acc);
        return acc;
    };
    return go(lam, nvars);
}

// ---------------------------------------------------------------------------
// principal specialization P_lambda(1, q, q^2, ...; q^{t_exp})
// ---------------------------------------------------------------------------

/// Layered evaluation of F(lambda, N) := P_lambda(1, q, .., q^{N-1}; q^{t_exp})
/// truncated at a fixed order. Layer N is computed from layer N-1 alone;
/// the table keeps only the last layer and stops when two successive layers
/// agree, which happens once N-1 >= order. Every partition with parts
/// <= max_part and n(lambda) < order is tracked (anything else is zero
/// through the order, since the lowest exponent of F is n(lambda)).
class HLPrincipalTable {
public:
    HLPrincipalTable(unsigned max_part, unsigned t_exponent, Rat order)
        : order_(std::move(order)), t_exp_(t_exponent) {
        unsigned max_n = order_ <= 0 ? 0 : static_cast<unsigned>(rat_floor(order_).get_si());
        // n(lambda) >= binom(len, 2), so lengths are bounded
        unsigned max_len = 1;
        while (max_len * (max_len - 1) / 2 <= max_n) ++max_len;
        unsigned cap = max_part * max_len;
        universe_ = partitions_up_to(max_part, cap);
        universe_.erase(std::remove_if(universe_.begin(), universe_.end(),
                                       [&](const Partition& p) {
                                           return Rat(static_cast<long>(partition_n(p))) >= order_;
                                       }),
                        universe_.end());
        unsigned longest = 0;
        for (const auto& p : universe_) longest = std::max<unsigned>(longest, p.size());

        std::map<Partition, QSeries> layer;
        for (const auto& p : universe_)
            layer.emplace(p, p.empty() ? QSeries::one(order_) : QSeries::zero(order_));
        unsigned n_max = max_n + longest + 3;
        for (layers_ = 1;; ++layers_) {
            if (layers_ > n_max)
                throw std::runtime_error("HLPrincipalTable: stabilization failed (internal bug)");
            std::map<Partition, QSeries> next;
            for (const auto& lam : universe_) next.emplace(lam, step(lam, layer));
            if (next == layer) break;
            layer = std::move(next);
        }
        final_ = std::move(layer);
    }

    /// F(lambda, N) for stabilized N; zero series if n(lambda) >= order.
    const QSeries& value(const Partition& lam) const {
        auto it = final_.find(lam);
        if (it != final_.end()) return it->second;
        if (Rat(static_cast<long>(partition_n(lam))) >= order_) {
            zero_ = QSeries::zero(order_);
            return zero_;
        }
        throw std::invalid_argument("HLPrincipalTable: partition outside the table universe");
    }

    unsigned stabilized_after() const { return layers_; }
    const Rat& order() const { return order_; }

private:
    Rat order_;
    unsigned t_exp_;
    unsigned layers_ = 0;
    std::vector<Partition> universe_;
    std::map<Partition, QSeries> final_;
    mutable QSeries zero_;

    QSeries step(const Partition& lam, const std::map<Partition, QSeries>& prev) const {
        QSeries acc = QSeries::zero(order_);
        unsigned sz = partition_size(lam);
        long xexp = static_cast<long>(layers_) - 1;  // new variable is q^{N-1}
        for_each_strip_predecessor(lam, [&](const Partition& mu) {
            auto it = prev.find(mu);
            if (it == prev.end() || it->second.is_zero()) return;
            unsigned delta = sz - partition_size(mu);
            Rat shift(xexp * static_cast<long>(delta));
            if (it->second.leading_exponent() + shift >= order_) return;
            QSeries c = it->second.shifted(shift).truncated(order_);
            for (unsigned e : psi_strip_exponents(lam, mu)) {
                Rat y(static_cast<long>(t_exp_) * e);
                c = (c - c.shifted(y)).truncated(order_);
            }
            acc = acc + c;
        });
        return acc;
    }
};

/// P_lambda(1, q, q^2, ...; q^{t_exponent}) truncated at the order, raising
/// the variable count until two successive values agree.
inline QSeries hl_principal(const Partition& lam, unsigned t_exponent, const Rat& order) {
    if (!is_partition(lam)) throw std::invalid_argument("hl_principal: not a partition");
    unsigned maxpart = lam.empty() ? 1 : lam[0];
    HLPrincipalTable table(maxpart, t_exponent, order);
    return table.value(lam);
}

// ---------------------------------------------------------------------------
// the generalized Rogers-Ramanujan series and their product sides
// ---------------------------------------------------------------------------

inline unsigned order_floor(const Rat& order) {
    if (order <= 0) return 0;
    return static_cast<unsigned>(rat_floor(order).get_si());
}

/// sum side of (gRR1)/(gRR2) without normalization prefactor:
/// sum_{lambda: lambda_1 <= m} q^{c |lambda|} P_{2 lambda}(1,q,..; q^{2n-1}),
/// with c = 1 for side a, c = 2 for side b.
inline QSeries grr_sum_side(unsigned m, unsigned n, char side, const Rat& order) {
    if (m < 1 || n < 1) throw std::invalid_argument("grr_sum_side: need m, n >= 1");
    if (side != 'a' && side != 'b') throw std::invalid_argument("grr_sum_side: side is 'a' or 'b'");
    long c = side == 'a' ? 1 : 2;
    HLPrincipalTable table(2 * m, 2 * n - 1, order);
    QSeries acc = QSeries::zero(order);
    unsigned max_sz = order_floor(order);
    for (const auto& lam : partitions_up_to(m, max_sz)) {
        long sz = static_cast<long>(partition_size(lam));
        long low = c * sz + 2 * static_cast<long>(partition_n(lam));
        if (Rat(low) >= order) continue;
        acc = acc + table.value(doubled(lam)).shifted(Rat(c * sz)).truncated(order);
    }
    return acc;
}

/// product side of (gRR1): (q^l;q^l)^n/(q)^n prod_i theta(q^{i+m};q^l)
/// prod_{i<j} theta(q^{j-i}, q^{i+j-1}; q^l), with l = 2m+2n+1.
inline QSeries grr_product_side(unsigned m, unsigned n, char side, const Rat& order) {
    if (m < 1 || n < 1) throw std::invalid_argument("grr_product_side: need m, n >= 1");
    long ell = 2L * m + 2 * n + 1;
    Rat O = order + 1;
    QSeries acc = QSeries::one(O);
    for (unsigned i = 1; i <= n; ++i) {
        Rat e(side == 'a' ? static_cast<long>(i + m) : static_cast<long>(i));
        acc = (acc * theta_series(e, Rat(ell), O)).truncated(O);
    }
    for (unsigned i = 1; i <= n; ++i)
        for (unsigned j = i + 1; j <= n; ++j) {
            Rat e1(static_cast<long>(j - i));
            Rat e2(side == 'a' ? static_cast<long>(i + j - 1) : static_cast<long>(i + j));
            acc = (acc * theta_series(e1, Rat(ell), O)).truncated(O);
            acc = (acc * theta_series(e2, Rat(ell), O)).truncated(O);
        }
    QSeries etaq = pochhammer_inf(Rat(1), Rat(1), O);
    QSeries etal = pochhammer_inf(Rat(ell), Rat(ell), O);
    QSeries ratio = (etal * etaq.inverted()).truncated(O);
    for (unsigned i = 0; i < n; ++i) acc = (acc * ratio).truncated(O);
    return acc.truncated(order);
}

/// (gRR1)/(gRR2): sum side equals product side through the order, exactly.
inline bool grr_identity_check(unsigned m, unsigned n, char side, const Rat& order) {
    return equal_through(grr_sum_side(m, n, side, order), grr_product_side(m, n, side, order),
                         order);
}

/// Prefactor exponents of the normalized series Phi_{1a}, Phi_{1b}.
inline Rat phi_1a_prefactor_exponent(unsigned m, unsigned n) {
    long mm = m, nn = n, ell = 2 * mm + 2 * nn + 1;
    return rat(mm * nn * (4 * mm * nn - 4 * mm + 2 * nn - 3), 12 * ell);
}

inline Rat phi_1b_prefactor_exponent(unsigned m, unsigned n) {
    long mm = m, nn = n, ell = 2 * mm + 2 * nn + 1;
    return rat(mm * nn * (4 * mm * nn + 2 * mm + 2 * nn + 3), 12 * ell);
}

/// Phi_{1a}(m,n) = q^{mn(4mn-4m+2n-3)/(12 l)} * (gRR1 sum side).
inline QSeries phi_1a(unsigned m, unsigned n, const Rat& order) {
    Rat pre = phi_1a_prefactor_exponent(m, n);
    return grr_sum_side(m, n, 'a', order - pre).shifted(pre);
}

/// Phi_{1b}(m,n) = q^{mn(4mn+2m+2n+3)/(12 l)} * (gRR2 sum side).
inline QSeries phi_1b(unsigned m, unsigned n, const Rat& order) {
    Rat pre = phi_1b_prefactor_exponent(m, n);
    return grr_sum_side(m, n, 'b', order - pre).shifted(pre);
}

/// Psi_1(m,n) = Phi_{1a}/Phi_{1b}; leading exponent -mn(m+1)/(2 l).
inline QSeries psi_1(unsigned m, unsigned n, const Rat& order) {
    Rat pre_b = phi_1b_prefactor_exponent(m, n);
    // the inverse of Phi_{1b} loses a window of 2 pre_b
    Rat O = order + 2 * pre_b + 1;
    QSeries quotient = phi_1a(m, n, O) * phi_1b(m, n, O).inverted();
    if (quotient.order() < order) throw std::logic_error("psi_1: window underestimated");
    return quotient.truncated(order);
}

/// Psi_1(m, n) coincides exactly with the Siegel quotient of s_{l,m},
/// l = 2m + 2n + 1.
inline bool psi_equals_siegel_check(unsigned m, unsigned n, const Rat& order) {
    unsigned ell = 2 * m + 2 * n + 1;
    return equal_through(psi_1(m, n, order), s_unit_product_form(ell, m, order), order);
}

}  // namespace rrunits
