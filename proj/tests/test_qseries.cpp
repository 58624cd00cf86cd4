#include <doctest.h>

#include <random>
#include <vector>

#include "rrunits/qseries.hpp"

using namespace rrunits;

namespace {

QSeries from_pairs(std::vector<std::pair<Rat, long>> ps, const Rat& order) {
    QSeries s(order);
    for (auto& [e, c] : ps)
        if (c != 0 && e < order) s.raw_terms()[e] = CycNum(c);
    return s;
}

QSeries random_sparse(std::mt19937& rng, const Rat& order) {
    std::uniform_int_distribution<int> nterms(1, 6), coef(-5, 5), num(-4, 20), den(1, 5);
    QSeries s(order);
    for (int i = 0, n = nterms(rng); i < n; ++i) {
        long c = coef(rng);
        if (c == 0) c = 1;
        Rat e = rat(num(rng), den(rng));
        if (e < order) s.raw_terms()[e] = CycNum(c);
    }
    s.prune();
    return s;
}

// independent partition-count oracle: p(n) by bounded-part DP
std::vector<long> partition_counts(unsigned nmax) {
    std::vector<long> p(nmax + 1, 0);
    p[0] = 1;
    for (unsigned part = 1; part <= nmax; ++part)
        for (unsigned n = part; n <= nmax; ++n) p[n] += p[n - part];
    return p;
}

}  // namespace

TEST_CASE("basic arithmetic") {
    Rat O(10);
    QSeries one_plus_q = from_pairs({{Rat(0), 1}, {Rat(1), 1}}, O);
    QSeries one_minus_q = from_pairs({{Rat(0), 1}, {Rat(1), -1}}, O);
    QSeries p = one_plus_q * one_minus_q;
    CHECK(equal_through(p, from_pairs({{Rat(0), 1}, {Rat(2), -1}}, O), Rat(3)));

    QSeries shifted = QSeries::one(Rat(5)).shifted(rat(-1, 5));
    CHECK(shifted.leading_exponent() == rat(-1, 5));
    CHECK(shifted.leading_coefficient().is_one());

    // telescoping: (sum_{n<10} q^n)(1 - q) = 1 - q^10, truncated
    QSeries geo(Rat(10));
    for (long n = 0; n < 10; ++n) geo.raw_terms()[Rat(n)] = CycNum(1L);
    QSeries tele = geo * one_minus_q;
    CHECK(tele.term_count() == 1);
    CHECK(tele.coeff(Rat(0)).is_one());
}

TEST_CASE("inversion") {
    QSeries g = from_pairs({{Rat(0), 1}, {Rat(1), -1}}, Rat(12));  // 1 - q
    QSeries inv = g.inverted();
    for (long n = 0; n < 12; ++n) CHECK(inv.coeff(Rat(n)).is_one());

    QSeries m = QSeries::monomial(CycNum(-1L), rat(1, 2), Rat(6));
    QSeries minv = m.inverted();
    CHECK(minv.leading_exponent() == rat(-1, 2));
    CHECK(minv.leading_coefficient() == CycNum(-1L));

    CHECK_THROWS_AS(QSeries::zero(Rat(5)).inverted(), std::domain_error);

    std::mt19937 rng(91);
    for (int i = 0; i < 12; ++i) {
        QSeries a = random_sparse(rng, Rat(14));
        if (a.is_zero()) continue;
        QSeries round = a.inverted().inverted();
        Rat window = std::min(a.order(), round.order());
        CHECK(equal_through(a.truncated(window), round.truncated(window), window));
        QSeries prod = a * a.inverted();
        CHECK(equal_through(prod, QSeries::one(prod.order()), prod.order()));
    }
}

TEST_CASE("ring laws on random sparse series") {
    std::mt19937 rng(17);
    for (int i = 0; i < 10; ++i) {
        QSeries a = random_sparse(rng, Rat(9));
        QSeries b = random_sparse(rng, Rat(9));
        QSeries c = random_sparse(rng, Rat(9));
        QSeries lhs = (a + b) * c;
        QSeries rhs = a * c + b * c;
        Rat w = std::min(lhs.order(), rhs.order());
        CHECK(equal_through(lhs.truncated(w), rhs.truncated(w), w));
        QSeries ab = a * b, ba = b * a;
        CHECK(ab == ba);
    }
}

TEST_CASE("truncation monotonicity") {
    for (Rat O : {Rat(8), Rat(16)}) {
        QSeries big = pochhammer_inf(Rat(1), Rat(1), Rat(24));
        QSeries small = pochhammer_inf(Rat(1), Rat(1), O);
        CHECK(big.truncated(O) == small);
    }
    QSeries e20 = eta_series(Rat(20)), e8 = eta_series(Rat(8));
    CHECK(e20.truncated(Rat(8)) == e8);
}

TEST_CASE("pochhammer products") {
    QSeries euler = pochhammer_inf(Rat(1), Rat(1), Rat(8));
    CHECK(equal_through(
        euler, from_pairs({{Rat(0), 1}, {Rat(1), -1}, {Rat(2), -1}, {Rat(5), 1}, {Rat(7), 1}}, Rat(8)),
        Rat(8)));

    QSeries p25 = pochhammer_inf(Rat(2), Rat(5), Rat(3));
    CHECK(equal_through(p25, from_pairs({{Rat(0), 1}, {Rat(2), -1}}, Rat(3)), Rat(3)));

    QSeries ph = pochhammer_inf(rat(1, 2), Rat(1), Rat(2));
    CHECK(ph.coeff(Rat(0)).is_one());
    CHECK(ph.coeff(rat(1, 2)) == CycNum(-1L));
    CHECK(ph.coeff(rat(3, 2)) == CycNum(-1L));

    CHECK_THROWS_AS(pochhammer_inf(Rat(0), Rat(1), Rat(5)), std::domain_error);

    // (e, step) pochhammer times its own inverse is 1
    QSeries p = pochhammer_inf(Rat(2), Rat(3), Rat(10));
    QSeries prod = p * p.inverted();
    CHECK(equal_through(prod, QSeries::one(prod.order()), prod.order()));
}

TEST_CASE("euler identity: partition generating function") {
    Rat O(31);
    QSeries invq = pochhammer_inf(Rat(1), Rat(1), O).inverted();
    auto p = partition_counts(30);
    for (unsigned n = 0; n <= 30; ++n) {
        CycNum c = invq.coeff(Rat(static_cast<long>(n)));
        CHECK(c.is_rational());
        CHECK(c.rational_value() == p[n]);
    }
}

TEST_CASE("theta") {
    QSeries t = theta_series(Rat(1), Rat(5), Rat(5));
    CHECK(t.coeff(Rat(0)).is_one());
    CHECK(t.coeff(Rat(1)) == CycNum(-1L));
    CHECK(t.coeff(Rat(2)).is_zero());
    CHECK(t.coeff(Rat(3)).is_zero());
    CHECK(t.coeff(Rat(4)) == CycNum(-1L));

    // symmetry theta(q^e; q^L) = theta(q^{L-e}; q^L)
    CHECK(theta_series(Rat(2), Rat(9), Rat(12)) == theta_series(Rat(7), Rat(9), Rat(12)));

    CHECK_THROWS_AS(theta_series(Rat(0), Rat(5), Rat(5)), std::domain_error);
    CHECK_THROWS_AS(theta_series(Rat(5), Rat(5), Rat(5)), std::domain_error);
}

TEST_CASE("eta") {
    QSeries e = eta_series(Rat(3));
    CHECK(e.leading_exponent() == rat(1, 24));
    CHECK(e.leading_coefficient().is_one());
    CHECK(e.coeff(rat(25, 24)) == CycNum(-1L));
    CHECK(e.coeff(rat(49, 24)) == CycNum(-1L));
    CHECK(e.denom() % 24 == 0);
    CHECK_THROWS_AS(eta_series(rat(1, 24)), std::invalid_argument);
}

TEST_CASE("classical check rejects degenerate orders") {
    CHECK_THROWS_AS(rr_classical_check(Rat(0)), std::invalid_argument);
}

TEST_CASE("selberg function") {
    BiSeries s = selberg_S(6, Rat(30));
    CHECK(equal_through(s.z[0], QSeries::one(Rat(30)), Rat(30)));
    // z^1 coefficient is q/(1-q) = q + q^2 + ...
    for (long n = 1; n < 30; ++n) CHECK(s.z[1].coeff(Rat(n)).is_one());
    CHECK(s.z[1].coeff(Rat(0)).is_zero());
    // z^2 coefficient starts at q^4
    CHECK(s.z[2].leading_exponent() == Rat(4));

    CHECK(selberg_recurrence_check(6, Rat(30)));
    CHECK_THROWS_AS(selberg_recurrence_check(1, Rat(10)), std::invalid_argument);
}

TEST_CASE("classical Rogers-Ramanujan identities") {
    QSeries s1 = rr_sum_side(1, Rat(5));
    CHECK(equal_through(
        s1, from_pairs({{Rat(0), 1}, {Rat(1), 1}, {Rat(2), 1}, {Rat(3), 1}, {Rat(4), 2}}, Rat(5)),
        Rat(5)));
    QSeries p2 = rr_product_side(2, Rat(4));
    CHECK(equal_through(p2, from_pairs({{Rat(0), 1}, {Rat(2), 1}, {Rat(3), 1}}, Rat(4)), Rat(4)));
    CHECK(rr_classical_check(Rat(50)));
}

TEST_CASE("cyclotomic coefficients and dilation") {
    // (1 - zeta_5 q)(1 - zeta_5^4 q) = 1 - (zeta + zeta^4) q + q^2
    std::vector<BinomialFactor> fs = {{Rat(1), 1, Rat(1), 1}, {Rat(1), 4, Rat(1), 1}};
    QSeries s = product_of_binomials(CycNum::one(), Rat(0), fs, Rat(4), 5);
    CHECK(s.coeff(Rat(1)) == -(CycNum::root(5, 1) + CycNum::root(5, 4)));
    CHECK(s.coeff(Rat(2)).is_one());
    CHECK(s.coeff_level() == 5);
    CHECK_FALSE(s.all_coeffs_rational());

    QSeries d = s.dilated(Rat(3));
    CHECK(d.coeff(Rat(3)) == s.coeff(Rat(1)));
    CHECK(d.order() == Rat(12));

    // dividing by the same binomials recovers 1
    std::vector<BinomialFactor> inv = {{Rat(1), 1, Rat(1), -1}, {Rat(1), 4, Rat(1), -1}};
    QSeries back = product_of_binomials(CycNum::one(), Rat(0), inv, Rat(4), 5);
    QSeries prod = s * back;
    CHECK(equal_through(prod, QSeries::one(prod.order()), prod.order()));
}
