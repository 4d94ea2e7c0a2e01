#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "qspkit/completion.hpp"
#include "qspkit/target.hpp"

using namespace qspkit;

namespace {

// random real-coefficient Laurent target with definite parity, sup <= cap
LaurentPoly random_wz_target(std::mt19937_64& rng, int d, double cap) {
    std::uniform_real_distribution<double> uni(-1, 1);
    LaurentPoly f;
    for (int k = -d; k <= d; ++k)
        if ((k % 2 + 2) % 2 == d % 2) f.set_coeff(k, cplx(uni(rng), 0));
    const double sup = sup_on_circle(f, 64 * (d + 1));
    if (sup > 0) f = f.scaled(cap / sup);
    return f;
}

LaurentPoly random_gqsp_target(std::mt19937_64& rng, int dp, int dm, double cap) {
    std::uniform_real_distribution<double> uni(-1, 1);
    LaurentPoly f;
    for (int k = -dm; k <= dp; ++k) f.set_coeff(k, cplx(uni(rng), uni(rng)));
    const double sup = sup_on_circle(f, 64 * (dp + dm + 1));
    if (sup > 0) f = f.scaled(cap / sup);
    return f;
}

ChebPoly random_wx_target(std::mt19937_64& rng, int d, double cap) {
    std::uniform_real_distribution<double> uni(-1, 1);
    ChebPoly f;
    for (int k = d % 2; k <= d; k += 2) f.set_coeff(k, cplx(uni(rng), 0));
    double sup = 0;
    for (int j = 0; j < 64 * (d + 1); ++j)
        sup = std::max(sup, std::abs(f.eval(cplx(std::cos(kPi * (j + 0.5) / (64 * (d + 1))), 0))));
    if (sup > 0) f = f.scaled(cplx(cap / sup, 0));
    return f;
}

}  // namespace

TEST_CASE("complete_wx_rootfind: f(x) = x gives P = x, |Q| = 1") {
    ChebPoly f = ChebPoly::basis(1);
    CompletionPair pair = complete_wx_rootfind(f, 1);
    CHECK(pair.certificate < 1e-12);
    CHECK(std::abs(pair.P.eval(cplx(0.3, 0)) - cplx(0.3, 0)) < 1e-12);
    CHECK(std::abs(std::abs(pair.Q.eval(cplx(0.3, 0))) - 1.0) < 1e-12);
    CHECK(pair.Q.degree() == 0);
}

TEST_CASE("complete_wx_rootfind: f == 0 forces a unimodular constant P") {
    CompletionPair pair = complete_wx_rootfind(ChebPoly(), 0);
    CHECK(pair.certificate < 1e-14);
    CHECK(std::abs(pair.P.eval(cplx(0.7, 0)) - cplx(0, 1)) < 1e-14);
    CHECK(pair.Q.is_zero(1e-14));
}

TEST_CASE("complete_wx_rootfind: benchmark part certifies") {
    PartitionedTarget pt = partition_hamsim(10.0, 20, Convention::WxSz);
    CompletionPair pair = complete_wx_rootfind(pt.x_parts[0], 20);
    CHECK(pair.certificate <= 1e-8);  // root-finding accuracy floor
    // Re P equals the part, Re Q vanishes
    for (int j = 0; j < 32; ++j) {
        const double x = std::cos(kPi * (j + 0.5) / 32);
        CHECK(std::abs(pair.P.eval(cplx(x, 0)).real() - pt.x_parts[0].eval(cplx(x, 0)).real()) < 1e-10);
        CHECK(std::abs(pair.Q.eval(cplx(x, 0)).real()) < 1e-10);
    }
}

TEST_CASE("complete_wx_rootfind: preconditions") {
    ChebPoly big = ChebPoly::basis(2, cplx(2.0, 0));
    CHECK_THROWS_AS(complete_wx_rootfind(big, 2), precondition_error);
    ChebPoly wrong_parity = ChebPoly::basis(1);
    CHECK_THROWS_AS(complete_wx_rootfind(wrong_parity, 2), precondition_error);
    ChebPoly complex_coeffs = ChebPoly::basis(1, cplx(0, 0.5));
    CHECK_THROWS_AS(complete_wx_rootfind(complex_coeffs, 1), precondition_error);
}

TEST_CASE("complete_wz_rootfind: hand-factored cosine target") {
    // f = (w + w^{-1})/2: 1 - f f(1/w) = -(w - w^{-1})^2 / 4, G = +-(w - w^{-1})/2
    LaurentPoly f(-1, {cplx(0.5, 0), cplx(0, 0), cplx(0.5, 0)});
    CompletionPair pair = complete_wz_rootfind(f, 1);
    CHECK(pair.certificate < 1e-12);
    const cplx g1 = pair.G.coeff(1), gm1 = pair.G.coeff(-1);
    CHECK(std::abs(std::abs(g1) - 0.5) < 1e-9);
    CHECK(std::abs(g1 + gm1) < 1e-9);  // antisymmetric pair
}

TEST_CASE("complete_wz_rootfind: f == 0 and unimodular-monomial targets") {
    CompletionPair z = complete_wz_rootfind(LaurentPoly(), 4);
    CHECK(z.certificate < 1e-13);
    CHECK(std::abs(std::abs(z.G.eval(std::polar(1.0, 0.3))) - 1.0) < 1e-13);

    LaurentPoly mono = LaurentPoly::monomial(3, 1.0);
    CompletionPair m = complete_wz_rootfind(mono, 3);
    CHECK(m.certificate < 1e-12);
}

TEST_CASE("complete_wz_prony vs rootfind: cross-validation") {
    LaurentPoly f(-1, {cplx(0.25, 0), cplx(0, 0), cplx(0.25, 0)});  // 0.5 cos(theta)
    CompletionPair a = complete_wz_rootfind(f, 1);
    CompletionPair b = complete_wz_prony(f, 1);
    CHECK(a.certificate < 1e-12);
    CHECK(b.certificate < 1e-12);
    for (int j = 0; j < 64; ++j) {
        const cplx w = std::polar(1.0, 2 * kPi * j / 64);
        CHECK(std::abs(std::abs(a.G.eval(w)) - std::abs(b.G.eval(w))) < 1e-11);
    }
}

TEST_CASE("complete_wz_prony: benchmark part certificates and the rank-deficiency onset") {
    // At moderate order every in-disc mode of 1 - |f|^2 is resolvable and the
    // certificate is deep.
    PartitionedTarget pt20 = partition_hamsim(10.0, 20, Convention::WzSx);
    CompletionPair even20 = complete_wz_prony(pt20.w_parts[0], 20);
    CHECK(even20.certificate <= 1e-12);
    CHECK(even20.cond_ratio < 0.5);
    CompletionPair odd20 = complete_wz_prony(pt20.w_parts[1], 19);
    CHECK(odd20.certificate <= 1e-12);

    // At larger order the target's Bessel tail pushes part of the root set
    // into rings whose Prony modes fade below double precision: the
    // conditioning diagnostic must fire (this is the rank deficiency the
    // GQSP stability split and capitalization exist to repair).
    PartitionedTarget pt40 = partition_hamsim(10.0, 40, Convention::WzSx);
    CompletionPair even40 = complete_wz_prony(pt40.w_parts[0], 40);
    CHECK(even40.cond_ratio > 0.5);
}

TEST_CASE("complete_wz_prony: singularity guard") {
    LaurentPoly f(-1, {cplx(0.5, 0), cplx(0, 0), cplx(0.5, 0)});  // |f(1)| = 1
    CHECK_THROWS_AS(complete_wz_prony(f, 1), singularity_error);
}

TEST_CASE("complete_gqsp_rootfind: constant-gap target") {
    // f = w/2: 1 - |f|^2 = 3/4, no roots; |G| = sqrt(3)/2
    LaurentPoly f = LaurentPoly::monomial(1, 0.5);
    CompletionPair pair = complete_gqsp_rootfind(f, 1, 0);
    CHECK(pair.certificate < 1e-13);
    CHECK(std::abs(std::abs(pair.G.eval(std::polar(1.0, 0.9))) - std::sqrt(3.0) / 2.0) < 1e-13);

    CompletionPair z = complete_gqsp_rootfind(LaurentPoly(), 2, 2);
    CHECK(z.certificate < 1e-13);
}

TEST_CASE("complete_gqsp_rootfind: boundary guard and |f| == 1 closure") {
    // |f| touches 1 at w = +-1: the gap polynomial has unit-circle roots
    LaurentPoly f(-1, {cplx(0.5, 0), cplx(0, 0), cplx(0.5, 0)});
    CHECK_THROWS_AS(complete_gqsp_rootfind(f, 1, 1), boundary_error);

    // |f| == 1 identically: the pair closes with G == 0
    CompletionPair pair = complete_gqsp_rootfind(LaurentPoly::monomial(2, 1.0), 2, 0);
    CHECK(pair.G.is_zero());
    CHECK(pair.certificate < 1e-13);
}

TEST_CASE("complete_gqsp prony vs rootfind on random degree-8 targets") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 5; ++trial) {
        LaurentPoly f = random_gqsp_target(rng, 4, 4, 0.8);
        CompletionPair a = complete_gqsp_rootfind(f, 4, 4);
        CompletionPair b = complete_gqsp_prony(f, 4, 4);
        CHECK(a.certificate < 1e-10);
        CHECK(b.certificate < 1e-10);
        for (int j = 0; j < 64; ++j) {
            const cplx w = std::polar(1.0, 2 * kPi * j / 64);
            CHECK(std::abs(std::abs(a.G.eval(w)) - std::abs(b.G.eval(w))) < 1e-10);
        }
    }
}

TEST_CASE("gqsp_stability_split: exact recombination and bounded parts") {
    PartitionedTarget pt = partition_hamsim(10.0, 34, Convention::Gqsp);
    StabilitySplit split = gqsp_stability_split(pt.w_parts[0], 34, 34);
    CHECK(split.beta == 2.0);
    CHECK(split.gamma == 0.25);
    // recombination is exact in coefficients
    LaurentPoly rec = (split.f1 + split.f2).scaled(split.beta);
    for (int k = -34; k <= 34; ++k)
        CHECK(std::abs(rec.coeff(k) - pt.w_parts[0].coeff(k)) < 1e-16);
    // sup |f1| = 2 gamma = 1/2 exactly at w = 1
    CHECK(std::abs(sup_on_circle(split.f1, 4096) - 0.5) < 1e-12);
    CHECK(sup_on_circle(split.f2, 4096) < 1.0);

    // the split repairs the Hankel conditioning of the raw target
    CompletionPair raw = complete_gqsp_prony(pt.w_parts[0], 34, 34);
    CompletionPair s1 = complete_gqsp_prony(split.f1, 34, 34);
    CompletionPair s2 = complete_gqsp_prony(split.f2, 34, 34);
    CHECK(s1.cond_ratio < 0.5);
    CHECK(s2.cond_ratio < 0.5);
    CHECK(s1.certificate < 1e-12);
    CHECK(s2.certificate < 1e-12);
    (void)raw;
}

TEST_CASE("random admissible targets certify across conventions") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 6; ++trial) {
        const int d = 6 + 2 * (trial % 3);
        LaurentPoly fz = random_wz_target(rng, d, 0.85);
        CHECK(complete_wz_rootfind(fz, d).certificate < 1e-10);
        CHECK(complete_wz_prony(fz, d).certificate < 1e-10);
        ChebPoly fx = random_wx_target(rng, d, 0.85);
        CHECK(complete_wx_rootfind(fx, d).certificate < 1e-10);
        LaurentPoly fg = random_gqsp_target(rng, d, d - 2, 0.85);
        CHECK(complete_gqsp_rootfind(fg, d, d - 2).certificate < 1e-10);
        CHECK(complete_gqsp_prony(fg, d, d - 2).certificate < 1e-10);
    }
}

TEST_CASE("randomized root choice stays certified and differs across seeds") {
    std::mt19937_64 rng(15);
    LaurentPoly f = random_wz_target(rng, 8, 0.8);
    CompletionPair rf0 = complete_wz_rootfind(f, 8, true, 0);
    CompletionPair rf1 = complete_wz_rootfind(f, 8, true, 12345);
    CHECK(rf0.certificate < 1e-10);
    CHECK(rf1.certificate < 1e-10);
    double diff = 0.0;
    for (int k = -8; k <= 8; ++k) diff = std::max(diff, std::abs(rf0.G.coeff(k) - rf1.G.coeff(k)));
    CHECK(diff > 1e-8);  // different orbit flips give different (valid) partners
    for (int j = 0; j < 32; ++j) {
        const cplx w = std::polar(1.0, 2 * kPi * j / 32);
        CHECK(std::abs(std::abs(rf0.G.eval(w)) - std::abs(rf1.G.eval(w))) < 1e-10);
    }
}
