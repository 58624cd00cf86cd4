#pragma once

#include <mpfr.h>

#include <string>
#include <utility>

#include "rrunits/qseries.hpp"
#include "rrunits/siegel.hpp"

namespace rrunits {

/// Thin RAII wrapper over mpfr_t. Results carry the larger precision of
/// their operands.
class Real {
public:
    explicit Real(mpfr_prec_t bits = 128) {
        mpfr_init2(r_, bits);
        mpfr_set_ui(r_, 0, MPFR_RNDN);
    }
    Real(const Real& o) {
        mpfr_init2(r_, mpfr_get_prec(o.r_));
        mpfr_set(r_, o.r_, MPFR_RNDN);
    }
    Real(Real&& o) noexcept {
        mpfr_init2(r_, mpfr_get_prec(o.r_));
        mpfr_swap(r_, o.r_);
    }
    Real& operator=(const Real& o) {
        if (this != &o) {
            mpfr_set_prec(r_, mpfr_get_prec(o.r_));
            mpfr_set(r_, o.r_, MPFR_RNDN);
        }
        return *this;
    }
    Real& operator=(Real&& o) noexcept {
        mpfr_swap(r_, o.r_);
        return *this;
    }
    ~Real() { mpfr_clear(r_); }

    static Real of(double x, mpfr_prec_t bits) {
        Real r(bits);
        mpfr_set_d(r.r_, x, MPFR_RNDN);
        return r;
    }
    static Real of(const Rat& x, mpfr_prec_t bits) {
        Real r(bits);
        mpfr_set_q(r.r_, x.get_mpq_t(), MPFR_RNDN);
        return r;
    }
    static Real of(long x, mpfr_prec_t bits) {
        Real r(bits);
        mpfr_set_si(r.r_, x, MPFR_RNDN);
        return r;
    }
    static Real pi(mpfr_prec_t bits) {
        Real r(bits);
        mpfr_const_pi(r.r_, MPFR_RNDN);
        return r;
    }

    mpfr_prec_t prec() const { return mpfr_get_prec(r_); }
    double to_double() const { return mpfr_get_d(r_, MPFR_RNDN); }
    bool is_negative() const { return mpfr_sgn(r_) < 0; }

    std::string str(size_t digits) const {
        char* s = nullptr;
        if (mpfr_asprintf(&s, "%.*Rg", static_cast<int>(digits), r_) < 0)
            throw std::runtime_error("Real::str: mpfr_asprintf failed");
        std::string out(s);
        mpfr_free_str(s);
        return out;
    }

    friend Real operator+(const Real& a, const Real& b) {
        Real r(std::max(a.prec(), b.prec()));
        mpfr_add(r.r_, a.r_, b.r_, MPFR_RNDN);
        return r;
    }
    friend Real operator-(const Real& a, const Real& b) {
        Real r(std::max(a.prec(), b.prec()));
        mpfr_sub(r.r_, a.r_, b.r_, MPFR_RNDN);
        return r;
    }
    friend Real operator*(const Real& a, const Real& b) {
        Real r(std::max(a.prec(), b.prec()));
        mpfr_mul(r.r_, a.r_, b.r_, MPFR_RNDN);
        return r;
    }
    friend Real operator/(const Real& a, const Real& b) {
        Real r(std::max(a.prec(), b.prec()));
        mpfr_div(r.r_, a.r_, b.r_, MPFR_RNDN);
        return r;
    }
    Real operator-() const {
        Real r(prec());
        mpfr_neg(r.r_, r_, MPFR_RNDN);
        return r;
    }

    friend Real sqrt(const Real& a) {
        Real r(a.prec());
        mpfr_sqrt(r.r_, a.r_, MPFR_RNDN);
        return r;
    }
    friend Real exp(const Real& a) {
        Real r(a.prec());
        mpfr_exp(r.r_, a.r_, MPFR_RNDN);
        return r;
    }
    friend Real abs(const Real& a) {
        Real r(a.prec());
        mpfr_abs(r.r_, a.r_, MPFR_RNDN);
        return r;
    }
    friend std::pair<Real, Real> sin_cos(const Real& a) {
        Real s(a.prec()), c(a.prec());
        mpfr_sin_cos(s.r_, c.r_, a.r_, MPFR_RNDN);
        return {std::move(s), std::move(c)};
    }
    friend bool operator<(const Real& a, const Real& b) { return mpfr_cmp(a.r_, b.r_) < 0; }
    friend bool operator>(const Real& a, const Real& b) { return mpfr_cmp(a.r_, b.r_) > 0; }

private:
    mpfr_t r_;
};

struct Complex {
    Real re, im;

    Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
    explicit Complex(mpfr_prec_t bits) : re(bits), im(bits) {}

    static Complex one(mpfr_prec_t bits) { return Complex(Real::of(1L, bits), Real(bits)); }

    friend Complex operator+(const Complex& a, const Complex& b) {
        return Complex(a.re + b.re, a.im + b.im);
    }
    friend Complex operator-(const Complex& a, const Complex& b) {
        return Complex(a.re - b.re, a.im - b.im);
    }
    friend Complex operator*(const Complex& a, const Complex& b) {
        return Complex(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
    }
    friend Complex operator*(const Real& a, const Complex& b) { return Complex(a * b.re, a * b.im); }
    friend Complex operator/(const Complex& a, const Complex& b) {
        Real n = b.re * b.re + b.im * b.im;
        return Complex((a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n);
    }
    Complex operator-() const { return Complex(-re, -im); }

    friend Real abs(const Complex& a) { return sqrt(a.re * a.re + a.im * a.im); }

    double abs_double() const {
        return std::hypot(re.to_double(), im.to_double());
    }
};

/// exp(z) for complex z
inline Complex cexp(const Complex& z) {
    Real mag = exp(z.re);
    auto [s, c] = sin_cos(z.im);
    return Complex(mag * c, mag * s);
}

namespace numeric_detail {

inline mpfr_prec_t bits_for(unsigned digits) {
    return static_cast<mpfr_prec_t>(digits * 3.33) + 48;
}

}  // namespace numeric_detail

/// e(x) = exp(2 pi i x) for rational x, reduced mod 1 first.
inline Complex e_of(const Rat& x, mpfr_prec_t bits) {
    Real ang = Real::of(frac_part(x), bits) * Real::pi(bits) * Real::of(2L, bits);
    auto [s, c] = sin_cos(ang);
    return Complex(std::move(c), std::move(s));
}

/// q^x = exp(2 pi i tau x), principal branch.
inline Complex q_pow(const Complex& tau, const Rat& x, mpfr_prec_t bits) {
    Real xr = Real::of(x, bits);
    Real two_pi = Real::pi(bits) * Real::of(2L, bits);
    return cexp(Complex(-two_pi * tau.im * xr, two_pi * tau.re * xr));
}

struct EvalResult {
    Complex value;
    unsigned long terms_used;
    double tail_bound;
};

/// What to evaluate: a member of the s-family, the extended r-family, or
/// the classical continued fraction (level 5).
struct UnitDescriptor {
    enum class Kind { S, R, RRFraction } kind;
    unsigned ell = 5;
    long m = 1;

    static UnitDescriptor s(unsigned ell, long m) { return {Kind::S, ell, m}; }
    static UnitDescriptor r(unsigned ell, long m) { return {Kind::R, ell, m}; }
    static UnitDescriptor rr() { return {Kind::RRFraction, 5, 1}; }
};

namespace numeric_detail {

/// numeric g_{(p/ell, 0)}(ell tau) from the infinite product, with the
/// number of factors chosen so the dropped log-tail is below eps.
inline Complex g_scaled_numeric(unsigned ell, long p, const Complex& tau, mpfr_prec_t bits,
                                double eps, unsigned long& terms, double& tail) {
    long L = static_cast<long>(ell);
    double abs_q = std::exp(-2 * 3.141592653589793 * tau.im.to_double());
    double abs_Q = std::pow(abs_q, static_cast<double>(L));
    Complex acc = -q_pow(tau, Rat(L) * bernoulli_b2_frac(rat(p, L)) / 2, bits);
    unsigned long n = 1;
    while (true) {
        // exponents in q: ell(n-1)+p and ell n - p
        Rat e1(L * (static_cast<long>(n) - 1) + p);
        Rat e2(L * static_cast<long>(n) - p);
        acc = acc * (Complex::one(bits) - q_pow(tau, e1, bits));
        acc = acc * (Complex::one(bits) - q_pow(tau, e2, bits));
        terms += 2;
        double mag = std::pow(abs_q, e1.get_d());
        if (mag < eps && n > 2) {
            tail += 4 * mag / (1 - abs_Q);
            break;
        }
        ++n;
    }
    return acc;
}

}  // namespace numeric_detail

/// Numeric value of a unit at tau in the upper half-plane, computed from
/// the infinite product (never from a truncated series). The tail bound is
/// the geometric domination of the dropped log-factors.
inline EvalResult eval_unit(const UnitDescriptor& d, const Complex& tau, unsigned prec_digits) {
    if (!(tau.im.to_double() > 0)) throw std::domain_error("eval_unit: Im tau must be positive");
    mpfr_prec_t bits = numeric_detail::bits_for(prec_digits + 4);
    double eps = std::pow(10.0, -static_cast<double>(prec_digits) - 5);
    unsigned long terms = 0;
    double tail = 0;
    Complex acc = Complex::one(bits);
    switch (d.kind) {
        case UnitDescriptor::Kind::S: {
            unsigned ell = d.ell;
            for (long j = 1; j <= d.m; ++j) {
                acc = acc * numeric_detail::g_scaled_numeric(ell, 2 * j, tau, bits, eps, terms, tail);
                acc = acc / numeric_detail::g_scaled_numeric(ell, j, tau, bits, eps, terms, tail);
            }
            break;
        }
        case UnitDescriptor::Kind::R: {
            long mm = mod_norm(d.m, d.ell);
            if (mm == 0) throw std::invalid_argument("eval_unit: m divisible by ell");
            acc = numeric_detail::g_scaled_numeric(d.ell, mm, tau, bits, eps, terms, tail) /
                  numeric_detail::g_scaled_numeric(d.ell, 1, tau, bits, eps, terms, tail);
            if ((d.m - 1) % 2 != 0) acc = -acc;
            break;
        }
        case UnitDescriptor::Kind::RRFraction: {
            // q^{1/5} prod (1-q^{5n+1})(1-q^{5n+4}) / ((1-q^{5n+2})(1-q^{5n+3}))
            double abs_q = std::exp(-2 * 3.141592653589793 * tau.im.to_double());
            acc = q_pow(tau, rat(1, 5), bits);
            unsigned long n = 0;
            while (true) {
                Complex num = (Complex::one(bits) - q_pow(tau, Rat(5L * (long)n + 1), bits)) *
                              (Complex::one(bits) - q_pow(tau, Rat(5L * (long)n + 4), bits));
                Complex den = (Complex::one(bits) - q_pow(tau, Rat(5L * (long)n + 2), bits)) *
                              (Complex::one(bits) - q_pow(tau, Rat(5L * (long)n + 3), bits));
                acc = acc * (num / den);
                terms += 4;
                double mag = std::pow(abs_q, 5.0 * n + 1);
                if (mag < eps && n > 2) {
                    tail += 8 * mag / (1 - abs_q);
                    break;
                }
                ++n;
            }
            break;
        }
    }
    double scale = std::max(1.0, acc.abs_double());
    return EvalResult{std::move(acc), terms, 3 * tail * scale};
}

/// Klein form k_a(tau) = g_a(tau)/eta(tau)^2 for a real index pair with
/// a1 in [0,1) and a2 literal (not reduced).
inline Complex klein_numeric(const Rat& a1, const Rat& a2, const Complex& tau, mpfr_prec_t bits,
                             double eps) {
    if (a1 < 0 || a1 >= 1) throw std::domain_error("klein_numeric: a1 must lie in [0,1)");
    double abs_q = std::exp(-2 * 3.141592653589793 * tau.im.to_double());
    Complex g = -(q_pow(tau, bernoulli_b2_frac(a1) / 2, bits) *
                  e_of(a2 * (a1 - 1) / 2, bits));
    Complex eta = q_pow(tau, rat(1, 24), bits);
    Complex ea = e_of(a2, bits);
    Complex ea_inv = e_of(-a2, bits);
    unsigned long n = 1;
    while (true) {
        g = g * (Complex::one(bits) - q_pow(tau, Rat(static_cast<long>(n) - 1) + a1, bits) * ea);
        g = g * (Complex::one(bits) - q_pow(tau, Rat(static_cast<long>(n)) - a1, bits) * ea_inv);
        eta = eta * (Complex::one(bits) - q_pow(tau, Rat(static_cast<long>(n)), bits));
        double mag = std::pow(abs_q, static_cast<double>(n) - 1 + a1.get_d());
        if (mag < eps && n > 2) break;
        ++n;
    }
    return g / (eta * eta);
}

/// Transformation check k_a(gamma tau) = (c tau + d)^{-1} k_{a gamma}(tau)
/// for gamma in SL_2(Z), with a gamma evaluated literally (the caller picks
/// data for which (a gamma)_1 already lies in [0,1)).
inline bool klein_transform_check(const Rat& a1, const Rat& a2, long ga, long gb, long gc, long gd,
                                  const Complex& tau, unsigned prec_digits) {
    if (ga * gd - gb * gc != 1)
        throw std::invalid_argument("klein_transform_check: matrix must have determinant 1");
    Rat b1 = a1 * ga + a2 * gc;
    Rat b2 = a1 * gb + a2 * gd;
    if (b1 < 0 || b1 >= 1)
        throw std::domain_error("klein_transform_check: (a gamma)_1 not in [0,1)");
    mpfr_prec_t bits = numeric_detail::bits_for(prec_digits + 6);
    double eps = std::pow(10.0, -static_cast<double>(prec_digits) - 8);

    Real A = Real::of(ga, bits), B = Real::of(gb, bits);
    Real C = Real::of(gc, bits), D = Real::of(gd, bits);
    Complex num(A * tau.re + B, A * tau.im);
    Complex den(C * tau.re + D, C * tau.im);
    Complex gtau = num / den;

    Complex lhs = klein_numeric(a1, a2, gtau, bits, eps);
    Complex rhs = klein_numeric(b1, b2, tau, bits, eps) / den;
    double diff = (lhs - rhs).abs_double();
    double scale = std::max(1.0, std::max(lhs.abs_double(), rhs.abs_double()));
    return diff < std::pow(10.0, -static_cast<double>(prec_digits) + 2) * scale;
}

/// Thrown when a truncation tail is too large to decide a numeric
/// comparison; distinct from failure.
struct inconclusive_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Numeric embedding of an exact cyclotomic number at zeta_M = e(1/M),
/// with roughly prec_digits correct decimal digits.
inline Complex cyc_embed(const CycNum& u, unsigned prec_digits) {
    if (prec_digits < 1) throw std::invalid_argument("cyc_embed: prec must be >= 1");
    mpfr_prec_t bits = numeric_detail::bits_for(prec_digits + 6);
    Complex acc(bits);
    for (size_t j = 0; j < u.coeffs().size(); ++j) {
        if (u.coeffs()[j] == 0) continue;
        acc = acc + Real::of(u.coeffs()[j], bits) * e_of(rat(static_cast<long>(j), u.level()), bits);
    }
    return acc;
}

/// Evaluate an exact truncated series at q = e(tau) with high precision.
inline Complex eval_qseries(const QSeries& s, const Complex& tau, mpfr_prec_t bits) {
    Complex acc(bits);
    for (const auto& [e, c] : s.terms()) {
        Complex coef(bits);
        if (c.is_rational()) {
            coef = Complex(Real::of(c.rational_value(), bits), Real(bits));
        } else {
            for (size_t j = 0; j < c.coeffs().size(); ++j) {
                if (c.coeffs()[j] == 0) continue;
                coef = coef + Real::of(c.coeffs()[j], bits) *
                                  e_of(rat(static_cast<long>(j), c.level()), bits);
            }
        }
        acc = acc + coef * q_pow(tau, e, bits);
    }
    return acc;
}

/// The truncated series evaluated at q agrees with the infinite-product
/// evaluation, within the combined truncation/tail budget. Throws
/// inconclusive_error when the series tail alone exceeds the tolerance.
inline bool series_vs_product_check(const QSeries& series, const UnitDescriptor& d,
                                    const Complex& tau, unsigned prec_digits) {
    double abs_q = std::exp(-2 * 3.141592653589793 * tau.im.to_double());
    double tail = 4 * std::pow(abs_q, series.order().get_d()) / (1 - abs_q);
    double tol = std::pow(10.0, -static_cast<double>(prec_digits));
    if (tail >= tol)
        throw inconclusive_error("series_vs_product_check: truncation tail exceeds tolerance");
    mpfr_prec_t bits = numeric_detail::bits_for(prec_digits + 6);
    EvalResult prod = eval_unit(d, tau, prec_digits + 4);
    Complex sval = eval_qseries(series, tau, bits);
    double scale = std::max(1.0, prod.value.abs_double());
    return (sval - prod.value).abs_double() < (tol + tail + prod.tail_bound) * scale;
}

inline bool series_vs_product_check(const UnitDescriptor& d, const Complex& tau, const Rat& order,
                                    unsigned prec_digits) {
    QSeries s(Rat(0));
    switch (d.kind) {
        case UnitDescriptor::Kind::S:
            s = s_unit_product_form(d.ell, static_cast<unsigned>(d.m), order);
            break;
        case UnitDescriptor::Kind::R:
            s = r_unit(d.ell, d.m, order);
            break;
        case UnitDescriptor::Kind::RRFraction:
            s = rr_continued_fraction_series(order);
            break;
    }
    return series_vs_product_check(s, d, tau, prec_digits);
}

/// tau = i and tau = rho (the primitive cube root of unity in the upper
/// half-plane), at a given precision.
inline Complex tau_i(mpfr_prec_t bits) { return Complex(Real(bits), Real::of(1L, bits)); }

inline Complex tau_rho(mpfr_prec_t bits) {
    Real half = Real::of(rat(-1, 2), bits);
    Real s3 = sqrt(Real::of(3L, bits)) / Real::of(2L, bits);
    return Complex(std::move(half), std::move(s3));
}

/// Ramanujan's closed form r(i) = sqrt((5+sqrt5)/2) - (sqrt5+1)/2.
inline Real rr_at_i_closed_form(mpfr_prec_t bits) {
    Real five = Real::of(5L, bits), two = Real::of(2L, bits), one = Real::of(1L, bits);
    Real s5 = sqrt(five);
    return sqrt((five + s5) / two) - (s5 + one) / two;
}

/// s_{5,1}(rho) = 4 zeta_10 / (sqrt(30+6 sqrt5) - 3 - sqrt5), zeta_10 = e(1/10).
inline Complex s51_at_rho_closed_form(mpfr_prec_t bits) {
    Real s5 = sqrt(Real::of(5L, bits));
    Real w = sqrt(Real::of(30L, bits) + Real::of(6L, bits) * s5);
    Real den = w - Real::of(3L, bits) - s5;
    Complex zeta10 = e_of(rat(1, 10), bits);
    return (Real::of(4L, bits) * zeta10) / Complex(den, Real(bits));
}

/// Product of the four closed-form conjugates of s_{5,1}(rho): the signs of
/// both square roots range over both choices and the zeta_10 powers over
/// (Z/10)^x. A unit norm statement: the product is a rational integer of
/// absolute value 1 (in fact 1).
inline Complex s51_conjugate_product(mpfr_prec_t bits) {
    Real s5 = sqrt(Real::of(5L, bits));
    Real three = Real::of(3L, bits), four = Real::of(4L, bits);
    Real wp = sqrt(Real::of(30L, bits) + Real::of(6L, bits) * s5);
    Real wm = sqrt(Real::of(30L, bits) - Real::of(6L, bits) * s5);
    long cs[4] = {1, 9, 3, 7};
    Complex acc = Complex::one(bits);
    int idx = 0;
    for (Real den : {wp - three - s5, -wp - three - s5, wm - three + s5, -wm - three + s5}) {
        Complex v = (four * e_of(rat(cs[idx++], 10), bits)) / Complex(den, Real(bits));
        acc = acc * v;
    }
    return acc;
}

}  // namespace rrunits
