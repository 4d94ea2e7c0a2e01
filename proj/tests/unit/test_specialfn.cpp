#include <catch2/catch_amalgamated.hpp>

#include "qspkit/specialfn.hpp"

using namespace qspkit;

TEST_CASE("bessel table: frozen high-precision values") {
    BesselTable t = bessel_j_table(10.0, 45);
    // 30-digit series oracle values
    CHECK(std::abs(t.j(0) - (-0.2459357644513483352)) < 1e-13);
    CHECK(std::abs(t.j(1) - 0.04347274616886143667) < 1e-14);
    CHECK(std::abs(t.j(5) - (-0.23406152818679364044)) < 1e-13);
    CHECK(std::abs(t.j(20) - 1.1513369247813397783e-5) < 1e-17);
    CHECK(std::abs(t.j(40) - 6.0308953123469066317e-21) / 6.03e-21 < 1e-11);
}

TEST_CASE("bessel table: small-argument limit") {
    BesselTable t = bessel_j_table(1e-8, 6);
    CHECK(std::abs(t.j(0) - 1.0) < 1e-12);
    for (int k = 1; k <= 6; ++k) CHECK(std::abs(t.j(k)) < 1e-7);
}

TEST_CASE("bessel table: three-term recurrence holds") {
    const double tau = 10.0;
    BesselTable t = bessel_j_table(tau, 40);
    for (int k = 1; k < 39; ++k) {
        const double lhs = t.j(k - 1) + t.j(k + 1);
        const double rhs = (2.0 * k / tau) * t.j(k);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
    }
}

TEST_CASE("bessel table: normalization invariants") {
    BesselTable t = bessel_j_table(10.0, 60);
    double s = t.j(0) * t.j(0);
    for (int k = 1; k <= 60; ++k) s += 2.0 * t.j(k) * t.j(k);
    CHECK(s <= 1.0 + 1e-12);
    CHECK(s >= 1.0 - 1e-12);

    // super-exponential decay past the turning point
    for (int k = 12; k < 59; ++k) CHECK(std::abs(t.j(k + 1)) < std::abs(t.j(k)));
}

TEST_CASE("tail bound and auto order") {
    CHECK(std::abs(bessel_tail_bound(10.0, 20) - 7.6134316413484934e-6) < 1e-16);
    const int d = bessel_auto_order(10.0, 1e-16);
    CHECK(d % 2 == 0);
    CHECK(bessel_tail_bound(10.0, d) < 1e-16);
    CHECK(bessel_tail_bound(10.0, d - 2) >= 1e-16);
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(bessel_j_table(0.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(bessel_j_table(-1.0, 4), std::invalid_argument);
}
