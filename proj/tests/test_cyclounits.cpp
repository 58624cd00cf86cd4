#include <doctest.h>

#include "rrunits/cyclounits.hpp"

using namespace rrunits;

TEST_CASE("golden ratio at ell = 5") {
    CycNum phi = cusp_limit(5, 1);
    // x^2 = x + 1 exactly
    CHECK(phi * phi == phi + CycNum::one());
    auto v = phi.embed_double();
    CHECK(std::abs(v.imag()) < 1e-12);
    CHECK(std::abs(v.real() - 1.6180339887498949) < 1e-9);
    // and it is xi_2 itself
    CHECK(phi == xi_generator(5, 2));
}

TEST_CASE("empty product and reality") {
    CHECK(cusp_limit(7, 0) == CycNum::one());
    for (unsigned m = 0; m <= 2; ++m) {
        CycNum u = cusp_limit(7, m);
        CHECK(u.conj() == u);
    }
    CycNum u71 = cusp_limit(7, 1);
    // 2 cos(pi/7) = zeta_14 + zeta_14^{-1}
    CHECK(u71 == CycNum::root(14, 1) + CycNum::root(14, 13));
    CHECK(std::abs(u71.embed_double().real() - 1.8019377358048383) < 1e-9);
}

TEST_CASE("xi generator index symmetry") {
    for (unsigned ell : {5u, 7u, 11u}) {
        for (long a = 2; a <= static_cast<long>((ell - 1) / 2); ++a) {
            CHECK(xi_generator(ell, a) == xi_generator(ell, static_cast<long>(ell) - a));
        }
        CHECK(xi_generator(ell, 1) == CycNum::one());
    }
}

TEST_CASE("limits through the r-family formula") {
    CHECK(limit_via_r_check(5, 1));
    CHECK(limit_via_r_check(7, 2));
    CHECK(limit_via_r_check(11, 3));
    for (unsigned ell : {5u, 7u, 11u, 13u}) {
        unsigned k = (ell - 1) / 2;
        for (unsigned m = 1; m + 1 <= k; ++m) CHECK(limit_via_r_check(ell, m));
    }
    // r_{ell,k} = 1 corresponds to v = 1
    CHECK(r_unit_cusp_limit(7, 1) == CycNum::one());
}

TEST_CASE("exponent vectors") {
    CycUnitVector v51 = exponent_vector(5, 1);
    CHECK(v51.exps == std::vector<long>{1});
    CHECK(v51.torsion.pow(10) == CycNum::one());

    // m = 0: the empty product has the zero vector and trivial torsion
    CycUnitVector v0 = exponent_vector(11, 0);
    CHECK(v0.exps == std::vector<long>(4, 0));
    CHECK(v0.torsion.is_one());

    CycUnitVector v70 = exponent_vector(7, 2);
    // (2->2) + (4->3) - (1->drop) - (2->2) = e_3
    CHECK(v70.exps == std::vector<long>{0, 1});

    CycUnitVector v71 = exponent_vector(7, 1);
    CHECK(v71.exps == std::vector<long>{1, 0});
}

TEST_CASE("cusp limits are units (norm has absolute value 1)") {
    for (unsigned ell : {5u, 7u, 11u}) {
        unsigned k = (ell - 1) / 2;
        for (unsigned m = 1; m + 1 <= k; ++m) {
            CycNum u = cusp_limit(ell, m);
            double norm = 1.0;
            for (unsigned a = 1; a <= k; ++a) {
                long rep_a = a % 2 == 1 ? a : static_cast<long>(ell) - a;
                norm *= std::abs(u.galois(rep_a).embed_double());
            }
            CHECK(std::abs(std::abs(norm) - 1.0) < 1e-8);
        }
    }
}

TEST_CASE("cyclotomic rank formula") {
    CHECK(cyclotomic_rank(5) == 1);
    CHECK(cyclotomic_rank(7) == 2);
    CHECK(cyclotomic_rank(17) == 6);

    for (unsigned ell : {5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u}) {
        CycloRankReport rep = cyclotomic_rank_report(ell);
        CHECK(rep.agree);
        CHECK(rep.numeric_agree);
        CHECK(rep.exact_rank == rep.k - rep.k / rep.d);
    }
    CHECK_THROWS_AS(cyclotomic_rank(9), std::domain_error);
    CHECK_THROWS_AS(cusp_limit(9, 1), std::domain_error);
    CHECK_THROWS_AS(cusp_limit(7, 3), std::invalid_argument);  // m = k
    CHECK_THROWS_AS(r_unit_cusp_limit(7, 14), std::invalid_argument);
}
