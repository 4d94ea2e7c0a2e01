#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "qspkit/laurent.hpp"
#include "qspkit/target.hpp"

using namespace qspkit;

namespace {
cplx unit(double th) { return {std::cos(th), std::sin(th)}; }
}  // namespace

TEST_CASE("eval: symmetric and monomial cases") {
    LaurentPoly p(-1, {cplx(1, 0), cplx(0, 0), cplx(1, 0)});  // w^{-1} + w
    CHECK(std::abs(p.eval(cplx(1, 0)) - cplx(2, 0)) < 1e-15);
    LaurentPoly m = LaurentPoly::monomial(1, 1.0);
    CHECK(std::abs(m.eval(cplx(0, 1)) - cplx(0, 1)) < 1e-15);
    CHECK_THROWS_AS(p.eval(cplx(0, 0)), std::invalid_argument);
}

TEST_CASE("eval: truncated exponential series matches the target within the tail") {
    // tau = 10, d = 40; tail bound 2 sum_{k>40} |J_k(10)| ~ 1.7e-21 is below
    // double noise, so the numerical floor dominates.
    LaurentPoly f = truncate_hamsim_w(10.0, 40);
    const cplx w = unit(kPi / 7.0);
    const cplx expected(-0.91508031934675097974, -0.40327163196070244357);  // e^{-i 10 cos(pi/7)}
    CHECK(std::abs(f.eval(w) - expected) < 1e-13);
}

TEST_CASE("mul: inverse monomials and modulus identity") {
    LaurentPoly a = LaurentPoly::monomial(1, 1.0), b = LaurentPoly::monomial(-1, 1.0);
    LaurentPoly one = mul(a, b);
    CHECK(one.lo() == 0);
    CHECK(std::abs(one.eval(unit(0.3)) - cplx(1, 0)) < 1e-15);

    const cplx xi(0.4, -0.3);
    LaurentPoly u(0, {-xi, cplx(1, 0)});                      // w - xi
    LaurentPoly v(-1, {cplx(1, 0), -std::conj(xi)});          // w^{-1} - conj(xi)
    LaurentPoly prod = mul(u, v);
    for (int j = 0; j < 64; ++j) {
        const cplx w = unit(2 * kPi * j / 64);
        CHECK(std::abs(prod.eval(w) - std::norm(w - xi)) < 1e-14);
    }
}

TEST_CASE("mul: FFT path agrees with direct convolution") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uni(-1, 1);
    auto rand_poly = [&](int lo, int n) {
        std::vector<cplx> c(static_cast<std::size_t>(n));
        for (auto& v : c) v = cplx(uni(rng), uni(rng));
        return LaurentPoly(lo, std::move(c));
    };
    LaurentPoly a = rand_poly(-25, 51), b = rand_poly(-40, 90);  // result length 140 > crossover
    LaurentPoly fast = mul(a, b);
    // direct convolution reference
    std::vector<cplx> ref(a.size() + b.size() - 1, cplx(0, 0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) ref[i + j] += a.coeffs()[i] * b.coeffs()[j];
    REQUIRE(fast.size() == ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) CHECK(std::abs(fast.coeffs()[i] - ref[i]) < 1e-13);
}

TEST_CASE("star_inverse: conjugate on the circle, involution") {
    LaurentPoly p = LaurentPoly::monomial(1, cplx(0, 1));  // i w
    LaurentPoly q = p.star_inverse();
    CHECK(q.lo() == -1);
    CHECK(std::abs(q.coeff(-1) - cplx(0, -1)) < 1e-15);

    LaurentPoly even(-2, {cplx(0.5, 0), cplx(0, 0), cplx(0.25, 0), cplx(0, 0), cplx(0.5, 0)});
    LaurentPoly evens = even.star_inverse();
    for (int k = -2; k <= 2; ++k) CHECK(std::abs(evens.coeff(k) - even.coeff(k)) < 1e-15);

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> uni(-1, 1);
    std::vector<cplx> c(9);
    for (auto& v : c) v = cplx(uni(rng), uni(rng));
    LaurentPoly r(-4, c);
    LaurentPoly rs = r.star_inverse();
    for (int j = 0; j < 32; ++j) {
        const cplx w = unit(2 * kPi * j / 32 + 0.1);
        CHECK(std::abs(rs.eval(w) - std::conj(r.eval(w))) < 1e-14);
    }
    LaurentPoly rss = rs.star_inverse();
    for (int k = r.lo(); k <= r.hi(); ++k) CHECK(std::abs(rss.coeff(k) - r.coeff(k)) < 1e-15);
}

TEST_CASE("cheb_to_laurent: basis images and the w-form expansion") {
    LaurentPoly t1 = cheb_to_laurent(ChebPoly::basis(1));
    CHECK(std::abs(t1.coeff(1) - cplx(0.5, 0)) < 1e-16);
    CHECK(std::abs(t1.coeff(-1) - cplx(0.5, 0)) < 1e-16);
    LaurentPoly t0 = cheb_to_laurent(ChebPoly::constant(1.0));
    CHECK(t0.lo() == 0);
    CHECK(std::abs(t0.coeff(0) - cplx(1, 0)) < 1e-16);

    // the x-basis truncation maps coefficient-exactly onto the w-basis form
    ChebPoly fx = truncate_hamsim_x(10.0, 20);
    LaurentPoly fw = truncate_hamsim_w(10.0, 20);
    LaurentPoly mapped = cheb_to_laurent(fx);
    for (int k = -20; k <= 20; ++k) CHECK(std::abs(mapped.coeff(k) - fw.coeff(k)) < 1e-16);

    // sampling identity: eval(result, e^{i t}) = p(cos t)
    ChebPoly p({cplx(0.3, 0.1), cplx(-0.2, 0), cplx(0.05, -0.4), cplx(0.7, 0)});
    LaurentPoly pw = cheb_to_laurent(p);
    for (int j = 0; j < 17; ++j) {
        const double th = 2 * kPi * j / 17;
        CHECK(std::abs(pw.eval(unit(th)) - p.eval(cplx(std::cos(th), 0))) < 1e-14);
    }
}

TEST_CASE("properties: product homomorphism, parity addition") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> uni(-1, 1);
    for (int trial = 0; trial < 8; ++trial) {
        std::vector<cplx> ca(7), cb(9);
        for (auto& v : ca) v = cplx(uni(rng), uni(rng));
        for (auto& v : cb) v = cplx(uni(rng), uni(rng));
        LaurentPoly a(-3, ca), b(-2, cb);
        LaurentPoly ab = mul(a, b);
        for (int j = 0; j < 16; ++j) {
            const cplx w = unit(2 * kPi * (j + 0.5) / 16);
            const cplx lhs = ab.eval(w), rhs = a.eval(w) * b.eval(w);
            CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
        }
    }

    LaurentPoly e(-2, {cplx(1, 0), cplx(0, 0), cplx(2, 0), cplx(0, 0), cplx(1, 0)});
    LaurentPoly o(-1, {cplx(1, 0), cplx(0, 0), cplx(-1, 0)});
    CHECK(e.parity() == Parity::Even);
    CHECK(o.parity() == Parity::Odd);
    CHECK(mul(e, o).parity() == Parity::Odd);
    CHECK(mul(o, o).parity() == Parity::Even);
}

TEST_CASE("zero polynomial: sentinel window, safe operations") {
    LaurentPoly z;
    CHECK(z.is_zero());
    CHECK(z.detected_lo() == std::numeric_limits<int>::max());
    CHECK(z.degree() == -1);
    CHECK(mul(z, LaurentPoly::monomial(3, 2.0)).is_zero());
    CHECK(std::abs(z.eval(cplx(1, 0))) == 0.0);
    CHECK((z + LaurentPoly::constant(1.0)).coeff(0) == cplx(1, 0));
}
