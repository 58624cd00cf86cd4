#pragma once

#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "rrunits/cyclotomic.hpp"
#include "rrunits/rational.hpp"

namespace rrunits {

/// Truncated formal series in fractional powers of q with exact coefficients
/// (rational, or cyclotomic at a stated level). Terms at exponents >= order()
/// are unknown and never reported. Exponents may be negative; the exponent
/// lattice is whatever the stored terms require.
class QSeries {
public:
    using TermMap = std::map<Rat, CycNum>;

    QSeries() : order_(0) {}
    explicit QSeries(Rat order) : order_(std::move(order)) {}

    static QSeries zero(const Rat& order) { return QSeries(order); }

    static QSeries constant(const CycNum& c, const Rat& order) {
        QSeries s(order);
        if (!c.is_zero() && order > 0) s.terms_[Rat(0)] = c;
        return s;
    }

    static QSeries one(const Rat& order) { return constant(CycNum::one(), order); }

    /// c * q^e truncated at the given order.
    static QSeries monomial(const CycNum& c, const Rat& e, const Rat& order) {
        QSeries s(order);
        if (!c.is_zero() && e < order) s.terms_[e] = c;
        return s;
    }

    const Rat& order() const { return order_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    size_t term_count() const { return terms_.size(); }

    /// Leading exponent of a nonzero series; for the zero series the
    /// truncation order (nothing is known below it).
    Rat leading_exponent() const { return terms_.empty() ? order_ : terms_.begin()->first; }

    CycNum leading_coefficient() const {
        if (terms_.empty()) throw std::domain_error("QSeries: zero series has no leading term");
        return terms_.begin()->second;
    }

    CycNum coeff(const Rat& e) const {
        if (e >= order_) throw std::domain_error("QSeries::coeff: exponent beyond truncation order");
        auto it = terms_.find(e);
        return it == terms_.end() ? CycNum() : it->second;
    }

    /// lcm of the denominators of all stored exponents (and the order).
    unsigned long denom() const {
        unsigned long d = order_.get_den().fits_ulong_p() ? order_.get_den().get_ui() : 1;
        for (const auto& [e, c] : terms_) d = lcm_ul(d, e.get_den().get_ui());
        return d;
    }

    /// 1 for all-rational coefficients, else the lcm of coefficient levels.
    unsigned coeff_level() const {
        unsigned long lv = 1;
        for (const auto& [e, c] : terms_)
            if (!c.is_rational()) lv = lcm_ul(lv, c.level());
        return static_cast<unsigned>(lv);
    }

    bool all_coeffs_rational() const {
        for (const auto& [e, c] : terms_)
            if (!c.is_rational()) return false;
        return true;
    }

    QSeries truncated(const Rat& new_order) const {
        QSeries r(new_order < order_ ? new_order : order_);
        for (const auto& [e, c] : terms_) {
            if (e >= r.order_) break;
            r.terms_[e] = c;
        }
        return r;
    }

    QSeries shifted(const Rat& e) const {
        QSeries r(order_ + e);
        for (const auto& [x, c] : terms_) r.terms_[x + e] = c;
        return r;
    }

    /// Exponent dilation q -> q^s for s > 0 (e.g. passing from g(tau) to
    /// g(ell tau) expansions).
    QSeries dilated(const Rat& s) const {
        if (s <= 0) throw std::invalid_argument("QSeries::dilated: factor must be positive");
        QSeries r(order_ * s);
        for (const auto& [x, c] : terms_) r.terms_[x * s] = c;
        return r;
    }

    QSeries scaled(const CycNum& c) const {
        QSeries r(order_);
        if (c.is_zero()) return r;
        for (const auto& [e, v] : terms_) {
            CycNum w = v * c;
            if (!w.is_zero()) r.terms_[e] = w;
        }
        return r;
    }

    friend QSeries operator+(const QSeries& a, const QSeries& b) {
        QSeries r(a.order_ < b.order_ ? a.order_ : b.order_);
        for (const auto& [e, c] : a.terms_) {
            if (e >= r.order_) break;
            r.terms_[e] = c;
        }
        for (const auto& [e, c] : b.terms_) {
            if (e >= r.order_) break;
            auto [it, fresh] = r.terms_.emplace(e, c);
            if (!fresh) it->second = it->second + c;
        }
        r.prune();
        return r;
    }

    friend QSeries operator-(const QSeries& a, const QSeries& b) { return a + b.scaled(CycNum(-1L)); }

    QSeries operator-() const { return scaled(CycNum(-1L)); }

    /// Truncated product. The result is valid through
    /// min(ord(a) + lead(b), ord(b) + lead(a)).
    friend QSeries operator*(const QSeries& a, const QSeries& b) {
        Rat oa = a.order_ + b.leading_exponent();
        Rat ob = b.order_ + a.leading_exponent();
        QSeries r(oa < ob ? oa : ob);
        for (const auto& [ea, ca] : a.terms_) {
            for (const auto& [eb, cb] : b.terms_) {
                Rat e = ea + eb;
                if (e >= r.order_) break;  // b ascending: later terms only larger
                CycNum prod = ca * cb;
                if (prod.is_zero()) continue;
                auto [it, fresh] = r.terms_.emplace(std::move(e), prod);
                if (!fresh) it->second = it->second + prod;
            }
        }
        r.prune();
        return r;
    }

    /// Multiplicative inverse through order ord(a) - 2*lead(a). Requires a
    /// nonzero (invertible leading coefficient).
    QSeries inverted() const {
        if (terms_.empty()) throw std::domain_error("QSeries::inverted: zero series");
        const Rat lead = leading_exponent();
        const CycNum c0inv = leading_coefficient().inverse();
        // normalize to 1 + u with u supported on (0, R)
        QSeries u = shifted(-lead).scaled(c0inv);
        const Rat R = u.order_;
        // recurrence over the additive lattice generated by supp(u) \ {0}
        unsigned long grid = 1;
        for (const auto& [e, c] : u.terms_)
            if (e != 0) grid = lcm_ul(grid, e.get_den().get_ui());
        Rat step = rat(1, static_cast<long>(grid));
        if (R * grid > 2000000)
            throw std::runtime_error("QSeries::inverted: exponent lattice too fine");
        QSeries inv(R);
        inv.terms_[Rat(0)] = CycNum::one();
        for (Rat t = step; t < R; t += step) {
            CycNum acc;
            for (const auto& [s, us] : u.terms_) {
                if (s <= 0) continue;
                if (s > t) break;
                auto it = inv.terms_.find(t - s);
                if (it == inv.terms_.end()) continue;
                acc = acc + us * it->second;
            }
            if (!acc.is_zero()) inv.terms_[t] = -acc;
        }
        return inv.shifted(-lead).scaled(c0inv);
    }

    QSeries pow(long n) const {
        if (n < 0) return inverted().pow(-n);
        // preserve the precision window of repeated multiplication
        if (n == 0) return QSeries::one(order_ - leading_exponent());
        QSeries r = *this;
        for (long i = 1; i < n; ++i) r = r * *this;
        return r;
    }

    friend bool operator==(const QSeries& a, const QSeries& b) {
        return a.order_ == b.order_ && a.terms_ == b.terms_;
    }

    std::string str(size_t max_terms = 12) const {
        std::ostringstream os;
        size_t n = 0;
        for (const auto& [e, c] : terms_) {
            if (n++ >= max_terms) {
                os << " + ...";
                break;
            }
            if (n > 1) os << " + ";
            os << "(" << (c.is_rational() ? rat_str(c.rational_value()) : "cyc") << ")q^"
               << rat_str(e);
        }
        if (terms_.empty()) os << "0";
        os << " [O(q^" << rat_str(order_) << ")]";
        return os.str();
    }

    // internal: used by builders that maintain the invariants themselves
    TermMap& raw_terms() { return terms_; }
    void set_order(Rat o) { order_ = std::move(o); }
    void prune() {
        for (auto it = terms_.begin(); it != terms_.end();) {
            if (it->second.is_zero() || it->first >= order_)
                it = terms_.erase(it);
            else
                ++it;
        }
    }

private:
    TermMap terms_;
    Rat order_;
};

/// Exact equality of all coefficients with exponent < through. Throws if
/// either side's truncation order is insufficient to decide.
inline bool equal_through(const QSeries& a, const QSeries& b, const Rat& through) {
    if (a.order() < through || b.order() < through)
        throw std::logic_error("equal_through: series not built to the requested order");
    auto ia = a.terms().begin(), ib = b.terms().begin();
    while (true) {
        while (ia != a.terms().end() && ia->first >= through) ia = a.terms().end();
        while (ib != b.terms().end() && ib->first >= through) ib = b.terms().end();
        bool ea = ia == a.terms().end(), eb = ib == b.terms().end();
        if (ea && eb) return true;
        if (ea != eb) return false;
        if (ia->first != ib->first || !(ia->second == ib->second)) return false;
        ++ia;
        ++ib;
    }
}

inline bool is_zero_through(const QSeries& a, const Rat& through) {
    if (a.order() < through)
        throw std::logic_error("is_zero_through: series not built to the requested order");
    for (const auto& [e, c] : a.terms())
        if (e < through) return false;
    return true;
}

// ---------------------------------------------------------------------------
// streaming product of binomials (1 - c q^x)^{+-1}
// ---------------------------------------------------------------------------

/// One factor (1 - c q^x)^expo with c = scalar * zeta_level^root_k.
/// x = 0 factors are constants and are folded into the prefactor.
struct BinomialFactor {
    Rat x;
    long root_k = 0;
    Rat scalar = Rat(1);
    int expo = 1;
};

/// prefactor * q^lead * prod of binomial factors, all at coefficient level
/// `level` (1 for rational products), truncated at `order`. Cost is linear
/// in the number of stored terms per factor; division by a binomial is the
/// ascending-order recurrence.
inline QSeries product_of_binomials(const CycNum& prefactor, const Rat& lead,
                                    const std::vector<BinomialFactor>& factors, const Rat& order,
                                    unsigned level = 1) {
    QSeries acc = QSeries::monomial(prefactor.lifted(level), lead, order);
    if (acc.is_zero()) return acc;
    auto& terms = acc.raw_terms();
    auto apply_coeff = [&](const CycNum& v, const BinomialFactor& f) {
        return level == 1 ? v * CycNum(f.scalar) : v.mul_root(f.root_k, f.scalar);
    };
    for (const auto& f : factors) {
        if (f.x < 0) throw std::invalid_argument("product_of_binomials: negative factor exponent");
        if (f.x == 0) {
            // constant factor (1 - c)^expo
            CycNum c = level == 1 ? CycNum(f.scalar) : CycNum::root(level, f.root_k) * CycNum(f.scalar);
            CycNum v = CycNum::one() - c;
            if (v.is_zero()) throw std::domain_error("product_of_binomials: vanishing constant factor");
            acc = acc.scaled(f.expo > 0 ? v : v.inverse());
            continue;
        }
        if (f.expo == 1) {
            std::vector<std::pair<Rat, CycNum>> updates;
            for (const auto& [e, v] : terms) {
                Rat t = e + f.x;
                if (t >= order) break;
                updates.emplace_back(std::move(t), apply_coeff(v, f));
            }
            for (auto& [t, w] : updates) {
                auto [it, fresh] = terms.emplace(std::move(t), -w);
                if (!fresh) it->second = it->second - w;
            }
        } else if (f.expo == -1) {
            // ascending in-place recurrence: new[e + x] += c * new[e]
            for (auto it = terms.begin(); it != terms.end(); ++it) {
                Rat t = it->first + f.x;
                if (t >= order) continue;
                CycNum w = apply_coeff(it->second, f);
                if (w.is_zero()) continue;
                auto [jt, fresh] = terms.emplace(std::move(t), w);
                if (!fresh) jt->second = jt->second + w;
            }
        } else {
            throw std::invalid_argument("product_of_binomials: exponent must be +-1");
        }
    }
    acc.prune();
    return acc;
}

// ---------------------------------------------------------------------------
// classical building blocks
// ---------------------------------------------------------------------------

/// (q^e; q^step)_infty = prod_{j >= 0} (1 - q^{e + j step}), truncated.
/// e = 0 is rejected: the j = 0 factor vanishes identically.
inline QSeries pochhammer_inf(const Rat& e, const Rat& step, const Rat& order) {
    if (e == 0) throw std::domain_error("pochhammer_inf: vanishing factor (e = 0)");
    if (e < 0 || step <= 0) throw std::invalid_argument("pochhammer_inf: bad parameters");
    std::vector<BinomialFactor> fs;
    for (Rat x = e; x < order; x += step) fs.push_back({x, 0, Rat(1), 1});
    return product_of_binomials(CycNum::one(), Rat(0), fs, order);
}

/// finite (q^e; q^step)_n
inline QSeries pochhammer_fin(const Rat& e, const Rat& step, unsigned n, const Rat& order) {
    std::vector<BinomialFactor> fs;
    Rat x = e;
    for (unsigned j = 0; j < n; ++j, x += step)
        if (x < order) fs.push_back({x, 0, Rat(1), 1});
    return product_of_binomials(CycNum::one(), Rat(0), fs, order);
}

/// theta(q^e; q^modulus) = (q^e; q^modulus)_inf (q^{modulus-e}; q^modulus)_inf
/// for 0 < e < modulus.
inline QSeries theta_series(const Rat& e, const Rat& modulus, const Rat& order) {
    if (e <= 0 || e >= modulus)
        throw std::domain_error("theta_series: theta vanishes at this argument");
    return pochhammer_inf(e, modulus, order) * pochhammer_inf(modulus - e, modulus, order);
}

/// Dedekind eta: q^{1/24} (q; q)_inf. Requires order > 1/24.
inline QSeries eta_series(const Rat& order) {
    if (order <= rat(1, 24)) throw std::invalid_argument("eta_series: order too small");
    return pochhammer_inf(Rat(1), Rat(1), order - rat(1, 24)).shifted(rat(1, 24));
}

// ---------------------------------------------------------------------------
// Selberg function and the classical Rogers-Ramanujan identities
// ---------------------------------------------------------------------------

/// Polynomial in an auxiliary variable z with QSeries coefficients.
struct BiSeries {
    std::vector<QSeries> z;  // z[n] = coefficient of z^n

    size_t zdeg() const { return z.empty() ? 0 : z.size() - 1; }

    /// substitute z -> z q^j
    BiSeries z_scaled_by_q(unsigned j) const {
        BiSeries r;
        r.z.reserve(z.size());
        for (size_t n = 0; n < z.size(); ++n)
            r.z.push_back(z[n].shifted(Rat(static_cast<long>(j * n))));
        return r;
    }

    /// multiply by z q^e
    BiSeries times_zq(const Rat& e) const {
        BiSeries r;
        r.z.reserve(z.size() + 1);
        r.z.push_back(QSeries::zero(z.empty() ? Rat(0) : z.front().order() + e));
        for (const auto& c : z) r.z.push_back(c.shifted(e));
        return r;
    }

    friend BiSeries operator-(const BiSeries& a, const BiSeries& b) {
        BiSeries r;
        size_t n = std::max(a.z.size(), b.z.size());
        for (size_t i = 0; i < n; ++i) {
            if (i >= a.z.size())
                r.z.push_back(-b.z[i]);
            else if (i >= b.z.size())
                r.z.push_back(a.z[i]);
            else
                r.z.push_back(a.z[i] - b.z[i]);
        }
        return r;
    }

    bool vanishes_through(size_t zdeg_limit, const Rat& q_order) const {
        for (size_t n = 0; n <= zdeg_limit && n < z.size(); ++n)
            if (!is_zero_through(z[n], q_order)) return false;
        return true;
    }
};

/// S(z; q) = sum_n z^n q^{n^2} / (q; q)_n through z-degree Z.
/// Terms follow the recurrence c_n = c_{n-1} q^{2n-1} / (1 - q^n).
inline BiSeries selberg_S(unsigned zdeg, const Rat& order) {
    BiSeries s;
    QSeries c = QSeries::one(order);
    s.z.push_back(c);
    for (unsigned n = 1; n <= zdeg; ++n) {
        c = c.shifted(Rat(2L * n - 1));
        c = product_of_binomials(CycNum::one(), Rat(0),
                                 {{Rat(static_cast<long>(n)), 0, Rat(1), -1}}, order + Rat(1)) *
            c;
        c = c.truncated(order);
        s.z.push_back(c);
    }
    return s;
}

/// Verifies S(z) - S(zq) - z q S(zq^2) = 0 through (z^Z, q^order).
inline bool selberg_recurrence_check(unsigned zdeg, const Rat& order) {
    if (zdeg < 2) throw std::invalid_argument("selberg_recurrence_check: need z-degree >= 2");
    BiSeries s = selberg_S(zdeg, order);
    BiSeries lhs = s - s.z_scaled_by_q(1) - s.z_scaled_by_q(2).times_zq(Rat(1));
    return lhs.vanishes_through(zdeg, order);
}

/// Sum side of (RR1) (which = 1) or (RR2) (which = 2):
/// sum_n q^{n^2 (+n)} / (q; q)_n.
inline QSeries rr_sum_side(int which, const Rat& order) {
    if (which != 1 && which != 2) throw std::invalid_argument("rr_sum_side: which must be 1 or 2");
    QSeries sum = QSeries::one(order), term = QSeries::one(order);
    for (unsigned n = 1; Rat(static_cast<long>(n) * (n + which - 1)) < order; ++n) {
        QSeries invn = product_of_binomials(CycNum::one(), Rat(0),
                                            {{Rat(static_cast<long>(n)), 0, Rat(1), -1}}, order);
        term = (term.shifted(Rat(2L * n - 2 + which)) * invn).truncated(order);
        sum = sum + term;
    }
    return sum;
}

/// Product side of (RR1)/(RR2): 1/((q^a; q^5)(q^{5-a}; q^5)) with a = which.
inline QSeries rr_product_side(int which, const Rat& order) {
    if (which != 1 && which != 2)
        throw std::invalid_argument("rr_product_side: which must be 1 or 2");
    Rat a(static_cast<long>(which));
    return (pochhammer_inf(a, Rat(5), order) * pochhammer_inf(Rat(5) - a, Rat(5), order))
        .inverted()
        .truncated(order);
}

/// Both classical identities, sum side == product side through the order.
inline bool rr_classical_check(const Rat& order) {
    if (order < 1) throw std::invalid_argument("rr_classical_check: order must be >= 1");
    return equal_through(rr_sum_side(1, order), rr_product_side(1, order), order) &&
           equal_through(rr_sum_side(2, order), rr_product_side(2, order), order);
}

}  // namespace rrunits
