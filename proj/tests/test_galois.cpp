#include <doctest.h>

#include <random>

#include "rrunits/galois.hpp"

using namespace rrunits;

TEST_CASE("class enumeration") {
    auto c5 = gl2_classes(5);
    CHECK(c5.size() == 240);  // (25-1)(25-5)/2
    auto c7 = gl2_classes(7);
    CHECK(c7.size() == 1008);  // (49-1)(49-7)/2

    // identity present with det 1
    bool has_id = false;
    for (const auto& g : c5)
        if (g.m == std::array<long, 4>{1, 0, 0, 1}) has_id = g.det() == 1;
    CHECK(has_id);

    // canonicalization is idempotent and classes are distinct
    for (size_t i = 0; i + 1 < c5.size(); ++i) CHECK(c5[i] < c5[i + 1]);
    GL2Class g(5, 3, 1, 0, 2);
    GL2Class gneg(5, -3, -1, 0, -2);
    CHECK(g == gneg);

    CHECK_THROWS_AS(GL2Class(5, 1, 2, 2, 4), std::invalid_argument);  // singular
    CHECK_THROWS_AS(gl2_classes(9), std::domain_error);
}

TEST_CASE("ord filter") {
    // identity reproduces ord_infinity_s
    GL2Class id(5, 1, 0, 0, 1);
    CHECK(ord_inf_under(id, 5, 1) == ord_infinity_s(5, 1));

    // any class with c != 0 gives order 0
    std::mt19937 rng(3);
    std::uniform_int_distribution<long> u(0, 4);
    int tried = 0;
    while (tried < 20) {
        long a = u(rng), b = u(rng), c = 1 + u(rng) % 4, d = u(rng);
        if (mod_norm(a * d - b * c, 5) == 0) continue;
        ++tried;
        CHECK(ord_inf_under(GL2Class(5, a, b, c, d), 5, 1) == 0);
    }

    // diag(2, d) at (7,1): closed form m(m+1)(a^2(2m+1) - ell a)/4 = -1
    GL2Class diag2(7, 2, 0, 0, 1);
    CHECK(ord_inf_under(diag2, 7, 1) == Rat(-1));

    // exhaustive: c != 0 implies vanishing order, for all classes
    for (const auto& g : gl2_classes(5))
        if (g.m[2] != 0) CHECK(ord_inf_under(g, 5, 1) == 0);
}

TEST_CASE("translation phase") {
    CHECK(translation_phase(0, 5, 1).is_one());
    CHECK(translation_phase(1, 5, 1) == cyc_e(rat(-1, 5), 50));
    CHECK_FALSE(translation_phase(1, 5, 1).is_one());
    for (unsigned m = 1; m <= 2; ++m) CHECK(translation_phase(7, 7, m).is_one());
    CHECK(translation_phase(9, 9, 2).is_one());
}

TEST_CASE("translation phase matches the series") {
    CHECK(translation_series_check(5, 1, Rat(20)));
    CHECK(translation_series_check(7, 2, Rat(20)));
    CHECK(translation_series_check(9, 2, Rat(20)));
    // the level-9 phase is e(-2/3), forced by the leading exponent
    CHECK(translation_phase(1, 9, 2) == cyc_e(rat(-2, 3), 162));
}

TEST_CASE("stabilizer is the gamma_d subgroup") {
    auto s51 = stabilizer(5, 1);
    CHECK(s51.size() == 4);
    CHECK(is_gamma_d_set(s51, 5));
    CHECK(is_subgroup(s51));
    bool has_identity = false;
    for (const auto& g : s51)
        if (g.m == std::array<long, 4>{1, 0, 0, 1}) has_identity = true;
    CHECK(has_identity);

    for (unsigned m : {1u, 2u}) {
        auto s7 = stabilizer(7, m);
        CHECK(s7.size() == 6);
        CHECK(is_gamma_d_set(s7, 7));
    }

    // numeric spot check behind the filters: rejected upper-triangular
    // classes genuinely scale the function by a nontrivial phase
    for (long b = 1; b < 5; ++b) {
        CycNum phase = translation_phase(b, 5, 1);
        CHECK_FALSE(phase.is_one());
        QSeries s = s_unit_product_form(5, 1, Rat(8));
        QSeries lhs(s.order());
        for (const auto& [e, c] : s.terms())
            lhs.raw_terms()[e] = c * cyc_e(Rat(b) * e, 50).lifted(50);
        CHECK(equal_through(lhs, s.scaled(phase), Rat(8)));
        CHECK_FALSE(equal_through(lhs, s.truncated(Rat(8)), Rat(8)));
    }

    CHECK_THROWS_AS(stabilizer(9, 2), std::domain_error);
    CHECK_THROWS_AS(stabilizer(7, 3), std::invalid_argument);  // m = k
}
