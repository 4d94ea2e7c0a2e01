#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "qspkit/fft.hpp"
#include "qspkit/qspmodel.hpp"
#include "qspkit/sequence_io.hpp"

using namespace qspkit;

namespace {
std::vector<double> random_angles(std::mt19937_64& rng, int n, double amp = kPi) {
    std::uniform_real_distribution<double> uni(-amp, amp);
    std::vector<double> a(static_cast<std::size_t>(n));
    for (auto& v : a) v = uni(rng);
    return a;
}
}  // namespace

TEST_CASE("eval_sequence: zero phases reduce to the signal operator") {
    AngleSequence s = make_ordinary_sequence(Convention::WxSz, {0.0, 0.0});
    for (double x : {-0.9, -0.2, 0.5, 1.0}) {
        Mat2 u = eval_sequence(s, cplx(x, 0));
        CHECK(std::abs(u.a - cplx(x, 0)) < 1e-15);
        CHECK(u.max_abs_diff(wx_signal(x)) < 1e-15);
    }
    CHECK_THROWS_AS(eval_sequence(s, cplx(1.5, 0)), std::invalid_argument);
}

TEST_CASE("eval_sequence: (pi/2, -pi/2) pair is the identity insertion") {
    std::mt19937_64 rng(21);
    auto phis = random_angles(rng, 5);
    AngleSequence base = make_ordinary_sequence(Convention::WzSx, phis);
    auto padded_phis = phis;
    padded_phis.push_back(kPi / 2);
    padded_phis.push_back(-kPi / 2);
    AngleSequence padded = make_ordinary_sequence(Convention::WzSx, padded_phis);
    for (int j = 0; j < 12; ++j) {
        const cplx w = std::polar(1.0, 2 * kPi * (j + 0.37) / 12);
        CHECK(eval_sequence(base, w).max_abs_diff(eval_sequence(padded, w)) < 1e-14);
    }
}

TEST_CASE("eval_sequence: trivial GQSP sequence implements w") {
    AngleSequence s = make_gqsp_sequence({0.0, 0.0}, {0.0, 0.0}, 0.0, 1, 0);
    for (int j = 0; j < 8; ++j) {
        const cplx w = std::polar(1.0, 2 * kPi * j / 8 + 0.1);
        Mat2 u = eval_sequence(s, w);
        CHECK(std::abs(u.a - w) < 1e-15);
        CHECK(std::abs(u.b) < 1e-15);
    }
    CHECK_THROWS_AS(eval_sequence(s, cplx(0.5, 0)), std::invalid_argument);
}

TEST_CASE("hadamard_conjugate: diagonal to symmetric, involution, cross-convention") {
    const cplx w = std::polar(1.0, 0.77);
    Mat2 diag = wz_signal(w);
    Mat2 hx = hadamard_conjugate(diag);
    CHECK(std::abs(hx.a - 0.5 * (w + 1.0 / w)) < 1e-15);
    CHECK(hadamard_conjugate(hx).max_abs_diff(diag) < 1e-15);

    std::mt19937_64 rng(2);
    auto phis = random_angles(rng, 7);
    AngleSequence swz = make_ordinary_sequence(Convention::WzSx, phis);
    AngleSequence swx = make_ordinary_sequence(Convention::WxSz, phis);
    for (int j = 0; j < 9; ++j) {
        const double th = kPi * (j + 0.21) / 9;  // upper semicircle: sin(theta) >= 0 matches W_x

        Mat2 conj = hadamard_conjugate(eval_sequence(swz, std::polar(1.0, th)));
        Mat2 direct = eval_sequence(swx, cplx(std::cos(th), 0));
        CHECK(conj.max_abs_diff(direct) < 1e-13);
    }
}

TEST_CASE("implemented_function: single-angle base case and unitarity") {
    AngleSequence s = make_ordinary_sequence(Convention::WzSx, {0.3});
    for (int j = 0; j < 5; ++j) {
        const cplx w = std::polar(1.0, 1.1 * j + 0.2);
        CHECK(std::abs(implemented_function(s, w) - cplx(std::cos(0.3), 0)) < 1e-15);
    }

    std::mt19937_64 rng(33);
    for (Convention conv : {Convention::WxSz, Convention::WzSx}) {
        AngleSequence r = make_ordinary_sequence(conv, random_angles(rng, 31));
        for (int j = 0; j < 8; ++j) {
            const double th = 2 * kPi * (j + 0.4) / 8;
            const cplx pt = conv == Convention::WxSz ? cplx(std::cos(th), 0) : std::polar(1.0, th);
            CHECK(eval_sequence(r, pt).unitarity_residual() <= 30 * 1e-15);
        }
    }
    AngleSequence g = make_gqsp_sequence(random_angles(rng, 9), random_angles(rng, 9),
                                         0.4, 4, 4);
    for (int j = 0; j < 8; ++j)
        CHECK(eval_sequence(g, std::polar(1.0, 0.7 * j)).unitarity_residual() <= 1e-13);
}

TEST_CASE("degree property: Fourier content confined to [-d, d]") {
    std::mt19937_64 rng(8);
    const int d = 9;
    AngleSequence s = make_ordinary_sequence(Convention::WzSx, random_angles(rng, d + 1));
    const std::size_t n = 32;  // > 2d + 2 and a power of two
    std::vector<cplx> samples(n);
    for (std::size_t j = 0; j < n; ++j)
        samples[j] = implemented_function(s, std::polar(1.0, 2 * kPi * static_cast<double>(j) / n));
    detail::fft_radix2(samples, -1);
    for (std::size_t k = 0; k < n; ++k) {
        const int freq = k <= n / 2 ? static_cast<int>(k) : static_cast<int>(k) - static_cast<int>(n);
        if (std::abs(freq) > d) CHECK(std::abs(samples[k]) / static_cast<double>(n) < 1e-12);
    }
}

TEST_CASE("symbolic expansion matches pointwise evaluation") {
    std::mt19937_64 rng(14);
    SECTION("wz") {
        AngleSequence s = make_ordinary_sequence(Convention::WzSx, random_angles(rng, 13));
        auto [f, g] = sequence_to_laurent_pair(s);
        CHECK(f.degree(0.0) <= 12);
        CHECK(g.degree(0.0) <= 12);
        for (int j = 0; j < 16; ++j) {
            const cplx w = std::polar(1.0, 2 * kPi * (j + 0.3) / 16);
            Mat2 u = eval_sequence(s, w);
            CHECK(std::abs(u.a - f.eval(w)) < 1e-13);
            CHECK(std::abs(u.b - cplx(0, 1) * g.eval(w)) < 1e-13);
            CHECK(std::abs(std::norm(f.eval(w)) + std::norm(g.eval(w)) - 1.0) < 1e-13);
        }
    }
    SECTION("gqsp") {
        AngleSequence s = make_gqsp_sequence(random_angles(rng, 7), random_angles(rng, 7), 0.9, 3, 3);
        auto [f, g] = gqsp_sequence_to_pair(s);
        CHECK(f.detected_hi(0.0) <= 3);
        CHECK(f.detected_lo(0.0) >= -3);
        for (int j = 0; j < 16; ++j) {
            const cplx w = std::polar(1.0, 2 * kPi * (j + 0.3) / 16);
            Mat2 u = eval_sequence(s, w);
            CHECK(std::abs(u.a - f.eval(w)) < 1e-13);
            CHECK(std::abs(u.b - cplx(0, 1) * g.eval(w)) < 1e-13);
        }
    }
    SECTION("wx") {
        AngleSequence s = make_ordinary_sequence(Convention::WxSz, random_angles(rng, 11));
        auto [p, q] = sequence_to_cheb_pair(s);
        for (int j = 0; j < 16; ++j) {
            const double x = std::cos(kPi * (j + 0.5) / 16);
            Mat2 u = eval_sequence(s, cplx(x, 0));
            CHECK(std::abs(u.a - p.eval(cplx(x, 0))) < 1e-13);
            const double sq = std::sqrt(1 - x * x);
            CHECK(std::abs(u.b - cplx(0, 1) * q.eval(cplx(x, 0)) * sq) < 1e-13);
        }
    }
}

TEST_CASE("sequence JSON round trip") {
    AngleSequence s = make_gqsp_sequence({0.1, -0.2, 0.3}, {1.0, -1.1, 0.5}, 0.25, 1, 1);
    s.alpha = 2.0;
    s.weight = cplx(0, 2);
    s.method = "g.p.c";
    s.meta = {10.0, 34, 7};
    s.cert_residual = 1e-13;
    AngleSequence t = sequence_from_json(sequence_to_json(s));
    CHECK(t.convention == Convention::Gqsp);
    CHECK(t.theta == s.theta);
    CHECK(t.phi == s.phi);
    CHECK(t.lambda == s.lambda);
    CHECK(t.weight == s.weight);
    CHECK(t.meta.tau == 10.0);
    CHECK(t.meta.d == 34);
    CHECK(t.meta.seed == 7);
    CHECK(t.method == "g.p.c");

    nlohmann::json bad = sequence_to_json(s);
    bad["theta"] = std::vector<double>{0.1};
    CHECK_THROWS_AS(sequence_from_json(bad), std::invalid_argument);
}
