#include <catch2/catch_amalgamated.hpp>

#include "qspkit/specialfn.hpp"
#include "qspkit/target.hpp"

using namespace qspkit;

TEST_CASE("truncate_hamsim: endpoint value against the exact exponential") {
    LaurentPoly f = truncate_hamsim_w(10.0, 40);
    const cplx exact = std::polar(1.0, -10.0);
    const double bound = std::max(bessel_tail_bound(10.0, 39), 1e-13);  // tail ~1.4e-20, double noise wins
    CHECK(std::abs(f.eval(cplx(1, 0)) - exact) <= bound);
}

TEST_CASE("truncate_hamsim: saturated order reproduces the target on a grid") {
    const int d = bessel_auto_order(10.0, 1e-16);
    LaurentPoly f = truncate_hamsim_w(10.0, d);
    double worst = 0.0;
    for (int j = 0; j < 512; ++j) {
        const double th = 2 * kPi * j / 512;
        worst = std::max(worst,
                         std::abs(f.eval(std::polar(1.0, th)) - std::polar(1.0, -10.0 * std::cos(th))));
    }
    CHECK(worst <= 1e-14);
}

TEST_CASE("truncate_hamsim: even coefficients are (-1)^{k/2} J_k(tau)") {
    BesselTable t = bessel_j_table(10.0, 40);
    LaurentPoly f = truncate_hamsim_w(10.0, 40);
    for (int k = 2; k <= 40; k += 2) {
        const double expect = ((k / 2) % 2 == 0 ? 1.0 : -1.0) * t.j(k);
        CHECK(std::abs(f.coeff(k) - cplx(expect, 0)) < 1e-16);
        CHECK(std::abs(f.coeff(-k) - cplx(expect, 0)) < 1e-16);
    }
    CHECK(std::abs(f.coeff(0) - cplx(t.j(0), 0)) < 1e-16);
    // odd coefficients are purely imaginary with |value| = J_k
    for (int k = 1; k <= 39; k += 2) {
        CHECK(std::abs(f.coeff(k).real()) < 1e-18);
        CHECK(std::abs(std::abs(f.coeff(k).imag()) - std::abs(t.j(k))) < 1e-16);
    }
}

TEST_CASE("truncate_hamsim: odd order rejected") {
    CHECK_THROWS_AS(truncate_hamsim_w(10.0, 3), std::invalid_argument);
    CHECK_THROWS_AS(truncate_hamsim_w(10.0, 0), std::invalid_argument);
}

TEST_CASE("partition: ordinary parts have definite parity and exact recombination") {
    const double tau = 10.0;
    const int d = 20;
    LaurentPoly f = truncate_hamsim_w(tau, d);
    PartitionedTarget pt = partition(f, Convention::WzSx, tau, d);
    REQUIRE(pt.part_count() == 2);
    CHECK(pt.w_parts[0].parity() == Parity::Even);
    CHECK(pt.w_parts[1].parity() == Parity::Odd);
    CHECK(pt.w_parts[0].is_real(1e-15));
    CHECK(pt.w_parts[1].is_real(1e-15));
    CHECK(pt.alpha == 2.0);

    LaurentPoly rec = pt.recombined_w();
    for (int k = -d; k <= d; ++k) CHECK(std::abs(rec.coeff(k) - f.coeff(k)) <= 1e-14);
}

TEST_CASE("partition: gqsp single part with d+ = d- = d") {
    LaurentPoly f = truncate_hamsim_w(10.0, 16);
    PartitionedTarget pt = partition(f, Convention::Gqsp, 10.0, 16);
    REQUIRE(pt.part_count() == 1);
    CHECK(pt.d_plus == 16);
    CHECK(pt.d_minus == 16);
    for (int k = -16; k <= 16; ++k)
        CHECK(std::abs(2.0 * pt.w_parts[0].coeff(k) - f.coeff(k)) < 1e-16);
}

TEST_CASE("partition: parts stay strictly below 1 on the sampling grid") {
    for (int d : {8, 20, 40}) {
        PartitionedTarget pt = partition_hamsim(10.0, d, Convention::WzSx);
        for (const auto& p : pt.w_parts) {
            double sup = 0.0;
            for (int j = 0; j < 64 * (d + 1); ++j) {
                const double th = 2 * kPi * j / (64 * (d + 1));
                sup = std::max(sup, std::abs(p.eval(std::polar(1.0, th))));
            }
            CHECK(sup < 1.0);
        }
    }
}

TEST_CASE("partition: recombination tracks the exact target within the tail bound") {
    const double tau = 10.0;
    for (int d : {12, 16, 24}) {
        PartitionedTarget pt = partition_hamsim(tau, d, Convention::WzSx);
        const double bound = bessel_tail_bound(tau, d) + 1e-13;
        LaurentPoly rec = pt.recombined_w();
        for (int j = 0; j < 256; ++j) {
            const double th = 2 * kPi * j / 256;
            const cplx diff = rec.eval(std::polar(1.0, th)) - std::polar(1.0, -tau * std::cos(th));
            CHECK(std::abs(diff) <= bound);
        }
    }
}

TEST_CASE("partition: wx parts mirror the w parts through the Chebyshev map") {
    PartitionedTarget pt = partition_hamsim(10.0, 12, Convention::WxSz);
    REQUIRE(pt.x_parts.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
        for (int j = 0; j < 64; ++j) {
            const double th = 2 * kPi * j / 64;
            CHECK(std::abs(pt.x_parts[i].eval(cplx(std::cos(th), 0)) -
                           pt.w_parts[i].eval(std::polar(1.0, th))) < 1e-13);
        }
    }
}

TEST_CASE("partition: sup-norm margin mode") {
    LaurentPoly f = truncate_hamsim_w(10.0, 20);
    PartitionedTarget pt = partition(f, Convention::Gqsp, 10.0, 20, NormMode::SupNormMargin);
    CHECK(pt.alpha < 2.0);  // sup of the truncation is ~1
    CHECK(pt.alpha > 0.9);
    double sup = 0.0;
    for (int j = 0; j < 1024; ++j)
        sup = std::max(sup, std::abs(pt.w_parts[0].eval(std::polar(1.0, 2 * kPi * j / 1024))));
    CHECK(sup < 1.0);
}
