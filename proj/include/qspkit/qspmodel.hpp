#ifndef QSPKIT_QSPMODEL_HPP
#define QSPKIT_QSPMODEL_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "qspkit/convention.hpp"
#include "qspkit/laurent.hpp"

namespace qspkit {

struct Mat2 {
    cplx a{1, 0}, b{0, 0}, c{0, 0}, d{1, 0};  // [[a, b], [c, d]]

    static Mat2 identity() { return {}; }

    friend Mat2 operator*(const Mat2& x, const Mat2& y) {
        return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
                x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
    }

    Mat2 dagger() const { return {std::conj(a), std::conj(c), std::conj(b), std::conj(d)}; }

    /// max-entry norm of M^dag M - I.
    double unitarity_residual() const {
        Mat2 m = dagger() * (*this);
        m.a -= 1.0;
        m.d -= 1.0;
        return std::max(std::max(std::abs(m.a), std::abs(m.b)), std::max(std::abs(m.c), std::abs(m.d)));
    }

    double max_abs_diff(const Mat2& o) const {
        return std::max(std::max(std::abs(a - o.a), std::abs(b - o.b)),
                        std::max(std::abs(c - o.c), std::abs(d - o.d)));
    }
};

inline Mat2 wx_signal(double x) {
    const double s = std::sqrt(std::max(0.0, 1.0 - x * x));
    return {cplx(x, 0), cplx(0, s), cplx(0, s), cplx(x, 0)};
}

inline Mat2 sz_rotation(double phi) {
    return {std::polar(1.0, phi), cplx(0, 0), cplx(0, 0), std::polar(1.0, -phi)};
}

inline Mat2 wz_signal(cplx w) { return {w, cplx(0, 0), cplx(0, 0), cplx(1.0, 0.0) / w}; }

inline Mat2 sx_rotation(double phi) {
    return {cplx(std::cos(phi), 0), cplx(0, std::sin(phi)), cplx(0, std::sin(phi)), cplx(std::cos(phi), 0)};
}

// GQSP signal operators: w0 = diag(w, 1), w1 = diag(1, 1/w).
inline Mat2 gqsp_w0(cplx w) { return {w, cplx(0, 0), cplx(0, 0), cplx(1, 0)}; }
inline Mat2 gqsp_w1(cplx w) { return {cplx(1, 0), cplx(0, 0), cplx(0, 0), cplx(1.0, 0.0) / w}; }

/// SU(2) signal-processing rotation used by GQSP.
inline Mat2 gqsp_rotation(double theta, double phi, double lambda) {
    const double ct = std::cos(theta), st = std::sin(theta);
    return {std::polar(1.0, lambda + phi) * ct, std::polar(1.0, lambda) * st,
            std::polar(1.0, phi) * st, cplx(-ct, 0)};
}

/// Phase factors for one QSP sequence, plus the bookkeeping needed to
/// recombine several weighted sequences into one target.
struct AngleSequence {
    Convention convention = Convention::WzSx;
    std::vector<double> phi;    // length d+1 (ordinary) or d_+ + d_- + 1 (GQSP)
    std::vector<double> theta;  // GQSP only
    double lambda = 0.0;        // GQSP only
    int d_plus = 0;
    int d_minus = 0;
    double alpha = 2.0;
    cplx weight{1.0, 0.0};
    std::string method;
    struct Meta {
        double tau = 0.0;
        int d = 0;
        std::uint64_t seed = 0;
    } meta;
    double cert_residual = 0.0;   // completion certificate carried along
    double recon_residual = 0.0;  // decomposition reconstruction residual

    int degree() const { return static_cast<int>(phi.size()) - 1; }

    void canonicalize() {
        for (auto& a : phi) a = normalize_angle(a);
        for (auto& a : theta) a = normalize_angle(a);
        lambda = normalize_angle(lambda);
    }
};

inline AngleSequence make_ordinary_sequence(Convention conv, std::vector<double> phi) {
    if (conv == Convention::Gqsp) throw std::invalid_argument("make_ordinary_sequence: gqsp");
    AngleSequence s;
    s.convention = conv;
    s.phi = std::move(phi);
    s.d_plus = s.degree();
    s.d_minus = 0;
    s.canonicalize();
    return s;
}

inline AngleSequence make_gqsp_sequence(std::vector<double> theta, std::vector<double> phi, double lambda,
                                        int d_plus, int d_minus) {
    if (theta.size() != phi.size() || static_cast<int>(theta.size()) != d_plus + d_minus + 1)
        throw std::invalid_argument("make_gqsp_sequence: arity mismatch");
    AngleSequence s;
    s.convention = Convention::Gqsp;
    s.theta = std::move(theta);
    s.phi = std::move(phi);
    s.lambda = lambda;
    s.d_plus = d_plus;
    s.d_minus = d_minus;
    s.canonicalize();
    return s;
}

/// U at a single point: x in [-1,1] for WxSz, w on U(1) otherwise. Matrix
/// products accumulate left to right in the printed operator order.
inline Mat2 eval_sequence(const AngleSequence& s, cplx point) {
    if (s.convention == Convention::WxSz) {
        if (std::abs(point.imag()) > 1e-12 || std::abs(point.real()) > 1.0 + 1e-12)
            throw std::invalid_argument("eval_sequence: x outside [-1, 1]");
        const double x = std::min(1.0, std::max(-1.0, point.real()));
        if (s.phi.empty()) throw std::invalid_argument("eval_sequence: empty sequence");
        Mat2 u = sz_rotation(s.phi[0]);
        const Mat2 w = wx_signal(x);
        for (std::size_t k = 1; k < s.phi.size(); ++k) u = u * w * sz_rotation(s.phi[k]);
        return u;
    }
    if (std::abs(std::abs(point) - 1.0) > 1e-12)
        throw std::invalid_argument("eval_sequence: w must lie on the unit circle");
    if (s.convention == Convention::WzSx) {
        if (s.phi.empty()) throw std::invalid_argument("eval_sequence: empty sequence");
        Mat2 u = sx_rotation(s.phi[0]);
        const Mat2 w = wz_signal(point);
        for (std::size_t k = 1; k < s.phi.size(); ++k) u = u * w * sx_rotation(s.phi[k]);
        return u;
    }
    // GQSP: R(theta_{-d_-}, phi_{-d_-}, lambda) * prod W_1 R * prod W_0 R
    const int n = s.d_plus + s.d_minus;
    if (static_cast<int>(s.theta.size()) != n + 1)
        throw std::invalid_argument("eval_sequence: gqsp arity mismatch");
    Mat2 u = gqsp_rotation(s.theta[0], s.phi[0], s.lambda);
    const Mat2 w0 = gqsp_w0(point), w1 = gqsp_w1(point);
    for (int k = 1; k <= n; ++k) {
        u = u * (k <= s.d_minus ? w1 : w0) * gqsp_rotation(s.theta[static_cast<std::size_t>(k)],
                                                           s.phi[static_cast<std::size_t>(k)], 0.0);
    }
    return u;
}

inline Mat2 hadamard_conjugate(const Mat2& m) {
    // H M H with H the 2x2 Hadamard
    const cplx a = m.a, b = m.b, c = m.c, d = m.d;
    return {0.5 * (a + b + c + d), 0.5 * (a - b + c - d),
            0.5 * (a + b - c - d), 0.5 * (a - b - c + d)};
}

/// The matrix element the sequence realizes: Re<0|U|0> for ordinary QSP
/// (modeling the (U + U^dag)/2 combination), <0|U|0> for GQSP.
inline cplx implemented_function(const AngleSequence& s, cplx point) {
    const Mat2 u = eval_sequence(s, point);
    if (s.convention == Convention::Gqsp) return u.a;
    return cplx(u.a.real(), 0.0);
}

// --- symbolic expansion -----------------------------------------------------
// Expanding the operator product with Laurent-valued entries recovers the
// exact (F, G) pair a sequence implements; used for reconstruction residuals
// and round-trip tests.

struct LaurentMat {
    LaurentPoly a, b, c, d;

    friend LaurentMat operator*(const LaurentMat& x, const LaurentMat& y) {
        return {mul(x.a, y.a) + mul(x.b, y.c), mul(x.a, y.b) + mul(x.b, y.d),
                mul(x.c, y.a) + mul(x.d, y.c), mul(x.c, y.b) + mul(x.d, y.d)};
    }
};

inline LaurentMat laurent_mat_scalar(const Mat2& m) {
    return {LaurentPoly::constant(m.a), LaurentPoly::constant(m.b),
            LaurentPoly::constant(m.c), LaurentPoly::constant(m.d)};
}

/// (F, G) with U = [[F, iG], [iG(1/w), F(1/w)]] for a WzSx sequence.
inline std::pair<LaurentPoly, LaurentPoly> sequence_to_laurent_pair(const AngleSequence& s) {
    if (s.convention != Convention::WzSx) throw std::invalid_argument("sequence_to_laurent_pair: wz only");
    LaurentMat u = laurent_mat_scalar(sx_rotation(s.phi[0]));
    LaurentMat w{LaurentPoly::monomial(1, 1.0), LaurentPoly(), LaurentPoly(), LaurentPoly::monomial(-1, 1.0)};
    for (std::size_t k = 1; k < s.phi.size(); ++k)
        u = u * w * laurent_mat_scalar(sx_rotation(s.phi[k]));
    return {u.a, u.b.scaled(cplx(0, -1))};
}

/// (F, G) with top row (F, iG) for a GQSP sequence, after clearing the
/// w^{-d_-} prefactor contributed by the W_1 steps.
inline std::pair<LaurentPoly, LaurentPoly> gqsp_sequence_to_pair(const AngleSequence& s) {
    if (s.convention != Convention::Gqsp) throw std::invalid_argument("gqsp_sequence_to_pair: gqsp only");
    const int n = s.d_plus + s.d_minus;
    LaurentMat u = laurent_mat_scalar(gqsp_rotation(s.theta[0], s.phi[0], s.lambda));
    LaurentMat w0{LaurentPoly::monomial(1, 1.0), LaurentPoly(), LaurentPoly(), LaurentPoly::constant(1.0)};
    LaurentMat w1{LaurentPoly::constant(1.0), LaurentPoly(), LaurentPoly(), LaurentPoly::monomial(-1, 1.0)};
    for (int k = 1; k <= n; ++k) {
        const LaurentMat& w = (k <= s.d_minus) ? w1 : w0;
        u = u * w * laurent_mat_scalar(gqsp_rotation(s.theta[static_cast<std::size_t>(k)],
                                                     s.phi[static_cast<std::size_t>(k)], 0.0));
    }
    return {u.a, u.b.scaled(cplx(0, -1))};
}

// Entries of a WxSz product have the form p(x) + q(x) sqrt(1-x^2); the pair
// algebra keeps both Chebyshev-basis components.
struct ChebSqrtPair {
    ChebPoly p, q;  // value = p(x) + q(x) * sqrt(1 - x^2)

    friend ChebSqrtPair operator*(const ChebSqrtPair& u, const ChebSqrtPair& v) {
        // (p1 + q1 s)(p2 + q2 s) with s^2 = 1 - x^2
        ChebPoly pp = mul(u.p, v.p) + mul_by_one_minus_x2(mul(u.q, v.q));
        ChebPoly qq = mul(u.p, v.q) + mul(u.q, v.p);
        return {pp, qq};
    }
};

struct ChebSqrtMat {
    ChebSqrtPair a, b, c, d;

    friend ChebSqrtMat operator*(const ChebSqrtMat& x, const ChebSqrtMat& y) {
        auto add = [](const ChebSqrtPair& u, const ChebSqrtPair& v) {
            return ChebSqrtPair{u.p + v.p, u.q + v.q};
        };
        return {add(x.a * y.a, x.b * y.c), add(x.a * y.b, x.b * y.d),
                add(x.c * y.a, x.d * y.c), add(x.c * y.b, x.d * y.d)};
    }
};

/// (P, Q) with U = [[P, iQ sqrt(1-x^2)], ...] for a WxSz sequence.
inline std::pair<ChebPoly, ChebPoly> sequence_to_cheb_pair(const AngleSequence& s) {
    if (s.convention != Convention::WxSz) throw std::invalid_argument("sequence_to_cheb_pair: wx only");
    auto sz_mat = [](double phi) {
        return ChebSqrtMat{{ChebPoly::constant(std::polar(1.0, phi)), ChebPoly()},
                           {ChebPoly(), ChebPoly()},
                           {ChebPoly(), ChebPoly()},
                           {ChebPoly::constant(std::polar(1.0, -phi)), ChebPoly()}};
    };
    ChebSqrtMat w{{ChebPoly::basis(1), ChebPoly()},
                  {ChebPoly(), ChebPoly::constant(cplx(0, 1))},
                  {ChebPoly(), ChebPoly::constant(cplx(0, 1))},
                  {ChebPoly::basis(1), ChebPoly()}};
    ChebSqrtMat u = sz_mat(s.phi[0]);
    for (std::size_t k = 1; k < s.phi.size(); ++k) u = u * w * sz_mat(s.phi[k]);
    // top-left = P (its sqrt component vanishes); top-right = i Q sqrt(1-x^2)
    return {u.a.p, u.b.q.scaled(cplx(0, -1))};
}

}  // namespace qspkit

#endif
