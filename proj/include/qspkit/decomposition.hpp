#ifndef QSPKIT_DECOMPOSITION_HPP
#define QSPKIT_DECOMPOSITION_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "qspkit/completion.hpp"
#include "qspkit/laurent.hpp"
#include "qspkit/numlin.hpp"
#include "qspkit/qspmodel.hpp"

namespace qspkit {

struct decomposition_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct degeneracy_error : decomposition_error {
    using decomposition_error::decomposition_error;
};
struct halving_error : decomposition_error {
    using decomposition_error::decomposition_error;
};

inline constexpr double kCarveTol = 1e-13;  // leading-coefficient floor

/// Adds eps_cap to the extreme detected coefficients of the target; the
/// halving linear systems pivot on those entries.
inline LaurentPoly capitalize(const LaurentPoly& f, double eps_cap) {
    LaurentPoly out = f;
    const int lo = f.detected_lo(), hi = f.detected_hi();
    if (lo > hi) return out;
    out.set_coeff(hi, out.coeff(hi) + eps_cap);
    if (lo != hi) out.set_coeff(lo, out.coeff(lo) + eps_cap);
    return out;
}

namespace detail {

inline ChebPoly truncate_to_degree(const ChebPoly& p, int deg, double& dropped) {
    std::vector<cplx> c(p.coeffs());
    for (std::size_t i = static_cast<std::size_t>(std::max(deg + 1, 0)); i < c.size(); ++i) {
        dropped = std::max(dropped, std::abs(c[i]));
        c[i] = cplx(0, 0);
    }
    if (static_cast<int>(c.size()) > deg + 1) c.resize(static_cast<std::size_t>(std::max(deg + 1, 0)));
    return ChebPoly(std::move(c));
}

inline LaurentPoly truncate_to_window(const LaurentPoly& p, int lo, int hi, double& dropped) {
    for (int k = p.lo(); k < lo; ++k) dropped = std::max(dropped, std::abs(p.coeff(k)));
    for (int k = hi + 1; k <= p.hi(); ++k) dropped = std::max(dropped, std::abs(p.coeff(k)));
    const int a = std::max(p.lo(), lo), b = std::min(p.hi(), hi);
    LaurentPoly out;
    for (int k = a; k <= b; ++k) out.set_coeff(k, p.coeff(k));
    return out;
}

inline Mat2 pair_unitary_wx(const ChebPoly& p, const ChebPoly& q, double x) {
    const double s = std::sqrt(std::max(0.0, 1.0 - x * x));
    const cplx pv = p.eval(cplx(x, 0)), qv = q.eval(cplx(x, 0));
    return {pv, cplx(0, 1) * qv * s, cplx(0, 1) * std::conj(qv) * s, std::conj(pv)};
}

inline Mat2 pair_unitary_wz(const LaurentPoly& f, const LaurentPoly& g, cplx w) {
    const cplx iw = cplx(1, 0) / w;
    return {f.eval(w), cplx(0, 1) * g.eval(w), cplx(0, 1) * g.eval(iw), f.eval(iw)};
}

inline double recon_residual_wx(const AngleSequence& s, const ChebPoly& p, const ChebPoly& q) {
    const int n = std::max(33, 2 * s.degree() + 3);
    double worst = 0.0;
    for (int j = 0; j < n; ++j) {
        const double x = std::cos(kPi * (j + 0.5) / n);
        worst = std::max(worst, eval_sequence(s, cplx(x, 0)).max_abs_diff(pair_unitary_wx(p, q, x)));
    }
    return worst;
}

inline double recon_residual_wz(const AngleSequence& s, const LaurentPoly& f, const LaurentPoly& g) {
    const int n = std::max(64, 2 * s.degree() + 3);
    double worst = 0.0;
    for (int j = 0; j < n; ++j) {
        const double th = 2.0 * kPi * (j + 0.25) / n;
        const cplx w = std::polar(1.0, th);
        worst = std::max(worst, eval_sequence(s, w).max_abs_diff(pair_unitary_wz(f, g, w)));
    }
    return worst;
}

inline double recon_residual_gqsp(const AngleSequence& s, const LaurentPoly& f, const LaurentPoly& g) {
    const int n = std::max(64, 2 * (s.d_plus + s.d_minus) + 3);
    double worst = 0.0;
    for (int j = 0; j < n; ++j) {
        const cplx w = std::polar(1.0, 2.0 * kPi * (j + 0.25) / n);
        const Mat2 u = eval_sequence(s, w);
        worst = std::max(worst, std::abs(u.a - f.eval(w)));
        worst = std::max(worst, std::abs(u.b - cplx(0, 1) * g.eval(w)));
    }
    return worst;
}

}  // namespace detail

// --- WxSz carving ------------------------------------------------------------

/// Peels the last angle from the leading coefficients, d steps exactly; a
/// constant P closes with the (pi/2, -pi/2) identity padding.
inline AngleSequence decompose_wx_carving(const CompletionPair& pair) {
    if (pair.convention != Convention::WxSz)
        throw std::invalid_argument("decompose_wx_carving: WxSz pair required");
    const int d = pair.target_degree();
    std::vector<double> phis(static_cast<std::size_t>(d + 1), 0.0);
    ChebPoly p = pair.P, q = pair.Q;
    double dropped = 0.0;

    int nu = d;
    for (; nu >= 1; --nu) {
        const int l = p.degree(kCarveTol);
        if (l <= 0) break;
        const cplx pl = p.coeff(l);
        const cplx ql = q.coeff(l - 1);
        if (std::abs(pl) < kCarveTol || std::abs(ql) < kCarveTol)
            throw degeneracy_error("decompose_wx_carving: leading coefficient below 1e-13");
        const cplx ratio = (l >= 2 ? 2.0 * pl / ql : pl / ql);
        const double phi = 0.5 * std::arg(ratio);
        phis[static_cast<std::size_t>(nu)] = phi;
        const cplx back = std::polar(1.0, -phi);
        ChebPoly pn = (mul_by_x(p) + mul_by_one_minus_x2(q).scaled(ratio)).scaled(back);
        ChebPoly qn = (p.scaled(cplx(-1, 0)) + mul_by_x(q).scaled(ratio)).scaled(back);
        p = detail::truncate_to_degree(pn, l - 1, dropped);
        q = detail::truncate_to_degree(qn, l - 2, dropped);
    }
    // base: P constant unimodular, Q ~ 0
    const cplx p0 = p.coeff(0);
    if (std::abs(p0) < 0.5)
        throw degeneracy_error("decompose_wx_carving: base-case P is not unimodular");
    phis[0] = std::arg(p0);
    if (nu % 2 != 0) throw degeneracy_error("decompose_wx_carving: parity mismatch at base case");
    for (int k = 1; k <= nu; k += 2) {
        phis[static_cast<std::size_t>(k)] = kPi / 2.0;
        phis[static_cast<std::size_t>(k + 1)] = -kPi / 2.0;
    }

    AngleSequence seq = make_ordinary_sequence(Convention::WxSz, std::move(phis));
    seq.cert_residual = pair.certificate;
    seq.recon_residual = detail::recon_residual_wx(seq, pair.P, pair.Q);
    return seq;
}

// --- WxSz halving ------------------------------------------------------------

namespace detail {

// Chebyshev product coefficient: (A * T_k)_K = (A_{|K-k|} + A_{K+k}) / 2.
inline cplx cheb_conv_entry(const ChebPoly& a, int bigk, int k) {
    return 0.5 * (a.coeff(std::abs(bigk - k)) + a.coeff(bigk + k));
}

inline std::vector<double> wx_halving_solve(const ChebPoly& p, const ChebPoly& q, int nu) {
    const int degp = p.degree(kCarveTol);
    if (degp < 0) throw halving_error("decompose_wx_halving: P vanished");
    if (degp < nu) {
        if ((nu - degp) % 2 != 0) throw halving_error("decompose_wx_halving: parity mismatch in padding");
        std::vector<double> sub = wx_halving_solve(p, q, degp);
        for (int k = 0; k < (nu - degp) / 2; ++k) {
            sub.push_back(kPi / 2.0);
            sub.push_back(-kPi / 2.0);
        }
        return sub;
    }
    if (nu == 0) return {std::arg(p.coeff(0))};
    if (nu == 1) {
        const double a1 = std::arg(p.coeff(1)), a0 = std::arg(q.coeff(0));
        return {0.5 * (a1 + a0), 0.5 * (a1 - a0)};
    }
    const int l = nu / 2;
    const int m = l % 2, n = (l - 1) % 2;
    std::vector<int> kx, ky;
    for (int k = m; k <= l; k += 2) kx.push_back(k);
    for (int k = n; k <= l - 1; k += 2) ky.push_back(k);
    const int ncols = static_cast<int>(kx.size() + ky.size());
    const int nrows = 2 * l + 1;
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(nrows, ncols);
    Eigen::VectorXcd b = Eigen::VectorXcd::Zero(nrows);

    const ChebPoly w = mul_by_one_minus_x2(q.conj_coeffs());
    const ChebPoly pc = p.conj_coeffs();
    int row = 0;
    for (int bigk = nu - l + 2; bigk <= nu + l; bigk += 2, ++row) {
        for (std::size_t i = 0; i < kx.size(); ++i) a(row, static_cast<int>(i)) = cheb_conv_entry(p, bigk, kx[i]);
        for (std::size_t i = 0; i < ky.size(); ++i)
            a(row, static_cast<int>(kx.size() + i)) = cheb_conv_entry(w, bigk, ky[i]);
    }
    for (int bigk = nu - l + 1; bigk <= nu + l - 1; bigk += 2, ++row) {
        for (std::size_t i = 0; i < kx.size(); ++i) a(row, static_cast<int>(i)) = cheb_conv_entry(q, bigk, kx[i]);
        for (std::size_t i = 0; i < ky.size(); ++i)
            a(row, static_cast<int>(kx.size() + i)) = -cheb_conv_entry(pc, bigk, ky[i]);
    }
    for (std::size_t i = 0; i < kx.size(); ++i) a(row, static_cast<int>(i)) = cplx(1, 0);
    b(row) = cplx(1, 0);

    LinearSolution sol;
    try {
        sol = solve_linear(a, b);
    } catch (const rank_error& e) {
        throw halving_error(std::string("decompose_wx_halving: ") + e.what());
    }

    ChebPoly p1, q1;
    for (std::size_t i = 0; i < kx.size(); ++i) p1.set_coeff(kx[i], std::conj(sol.x(static_cast<int>(i))));
    for (std::size_t i = 0; i < ky.size(); ++i) q1.set_coeff(ky[i], sol.x(static_cast<int>(kx.size() + i)));

    double dropped = 0.0;
    ChebPoly p2 = detail::truncate_to_degree(
        mul(p1.conj_coeffs(), p) + mul_by_one_minus_x2(mul(q1, q.conj_coeffs())), nu - l, dropped);
    ChebPoly q2 = detail::truncate_to_degree(
        mul(p1.conj_coeffs(), q) - mul(q1, p.conj_coeffs()), nu - l - 1, dropped);

    std::vector<double> left = wx_halving_solve(p1, q1, l);
    std::vector<double> right = wx_halving_solve(p2, q2, nu - l);
    std::vector<double> out(left.begin(), left.end() - 1);
    out.push_back(left.back() + right.front());
    out.insert(out.end(), right.begin() + 1, right.end());
    return out;
}

}  // namespace detail

/// Recursive halving via the block linear system; base cases d = 0, 1.
inline AngleSequence decompose_wx_halving(const CompletionPair& pair) {
    if (pair.convention != Convention::WxSz)
        throw std::invalid_argument("decompose_wx_halving: WxSz pair required");
    const int d = pair.target_degree();
    std::vector<double> phis = detail::wx_halving_solve(pair.P, pair.Q, d);
    AngleSequence seq = make_ordinary_sequence(Convention::WxSz, std::move(phis));
    seq.cert_residual = pair.certificate;
    seq.recon_residual = detail::recon_residual_wx(seq, pair.P, pair.Q);
    return seq;
}

// --- WzSx halving ------------------------------------------------------------

namespace detail {

inline int wz_degree(const LaurentPoly& f, double tol) {
    const int dl = f.detected_lo(tol);
    if (dl == std::numeric_limits<int>::max()) return -1;
    return std::max(std::abs(dl), std::abs(f.detected_hi(tol)));
}

inline std::vector<double> wz_halving_solve(const LaurentPoly& f, const LaurentPoly& g, int nu) {
    const int deg = std::max(wz_degree(f, kCarveTol), wz_degree(g, kCarveTol));
    if (deg < 0) throw halving_error("decompose_wz_halving: pair vanished");
    if (deg < nu) {
        if ((nu - deg) % 2 != 0) throw halving_error("decompose_wz_halving: parity mismatch in padding");
        std::vector<double> sub = wz_halving_solve(f, g, deg);
        for (int k = 0; k < (nu - deg) / 2; ++k) {
            sub.push_back(kPi / 2.0);
            sub.push_back(-kPi / 2.0);
        }
        return sub;
    }
    if (nu == 0) return {std::atan2(g.coeff(0).real(), f.coeff(0).real())};
    if (nu == 1) {
        const cplx f1 = f.eval(cplx(1, 0)), g1 = g.eval(cplx(1, 0));
        const cplx fi = f.eval(cplx(0, 1)), gi = g.eval(cplx(0, 1));
        const double tsum = std::arg(f1 + cplx(0, 1) * g1);
        const double tdiff = std::arg(fi - cplx(0, 1) * gi) - kPi / 2.0;
        return {0.5 * (tsum + tdiff), 0.5 * (tsum - tdiff)};
    }
    const int l = nu / 2;
    std::vector<int> ks;
    for (int k = -l; k <= l; k += 2) ks.push_back(k);
    const int nk = static_cast<int>(ks.size());
    std::vector<int> bad;  // coefficient slots F2/G2 must vanish on
    for (int bigk = -(nu + l); bigk <= -(nu - l + 2); bigk += 2) bad.push_back(bigk);
    for (int bigk = nu - l + 2; bigk <= nu + l; bigk += 2) bad.push_back(bigk);

    const int nrows = 2 * static_cast<int>(bad.size()) + 2;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(nrows, 2 * nk);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(nrows);
    int row = 0;
    for (int bigk : bad) {  // F2 coefficient at bigk
        for (int i = 0; i < nk; ++i) {
            a(row, i) = f.coeff(bigk + ks[static_cast<std::size_t>(i)]).real();
            a(row, nk + i) = g.coeff(ks[static_cast<std::size_t>(i)] - bigk).real();
        }
        ++row;
    }
    for (int bigk : bad) {  // G2 coefficient at bigk
        for (int i = 0; i < nk; ++i) {
            a(row, i) = g.coeff(bigk + ks[static_cast<std::size_t>(i)]).real();
            a(row, nk + i) = -f.coeff(ks[static_cast<std::size_t>(i)] - bigk).real();
        }
        ++row;
    }
    for (int i = 0; i < nk; ++i) a(row, i) = 1.0;  // F1(1) = 1
    b(row) = 1.0;
    ++row;
    for (int i = 0; i < nk; ++i) a(row, nk + i) = 1.0;  // G1(1) = 0

    LinearSolution sol;
    try {
        sol = solve_linear(a, b);
    } catch (const rank_error& e) {
        throw halving_error(std::string("decompose_wz_halving: ") + e.what() +
                            "; retry with capitalization (eps_cap = 1e-8)");
    }

    LaurentPoly f1, g1;
    for (int i = 0; i < nk; ++i) {
        f1.set_coeff(ks[static_cast<std::size_t>(i)], cplx(sol.x(i).real(), 0));
        g1.set_coeff(ks[static_cast<std::size_t>(i)], cplx(sol.x(nk + i).real(), 0));
    }
    double dropped = 0.0;
    LaurentPoly f2 = detail::truncate_to_window(
        mul(f1.reversed(), f) + mul(g1, g.reversed()), -(nu - l), nu - l, dropped);
    LaurentPoly g2 = detail::truncate_to_window(
        mul(f1.reversed(), g) - mul(g1, f.reversed()), -(nu - l), nu - l, dropped);

    std::vector<double> left = wz_halving_solve(f1, g1, l);
    std::vector<double> right = wz_halving_solve(f2, g2, nu - l);
    std::vector<double> out(left.begin(), left.end() - 1);
    out.push_back(left.back() + right.front());
    out.insert(out.end(), right.begin() + 1, right.end());
    return out;
}

}  // namespace detail

/// Halving for the (Wz, Sx) convention. eps_cap records the capitalization
/// already applied to the target before completion (the pair's F carries it).
inline AngleSequence decompose_wz_halving(const CompletionPair& pair,
                                          std::optional<double> eps_cap = std::nullopt) {
    if (pair.convention != Convention::WzSx)
        throw std::invalid_argument("decompose_wz_halving: WzSx pair required");
    const int d = pair.target_degree();
    std::vector<double> phis = detail::wz_halving_solve(pair.F, pair.G, d);
    AngleSequence seq = make_ordinary_sequence(Convention::WzSx, std::move(phis));
    seq.cert_residual = pair.certificate;
    seq.recon_residual = detail::recon_residual_wz(seq, pair.F, pair.G);
    (void)eps_cap;
    return seq;
}

// --- GQSP carving ------------------------------------------------------------

/// Carving with the w^{d_-} shift: the W_1 factors are re-absorbed so the
/// recursion runs on windows [0, b]. Each step solves the two degree-reduction
/// constraints from whichever extreme coefficients dominate.
inline AngleSequence decompose_gqsp_carving(const CompletionPair& pair) {
    if (pair.convention != Convention::Gqsp)
        throw std::invalid_argument("decompose_gqsp_carving: GQSP pair required");
    const int dp = pair.d_plus, dm = pair.d_minus, n = dp + dm;

    // shift to nonnegative powers
    std::vector<cplx> fsh(static_cast<std::size_t>(n + 1), cplx(0, 0));
    std::vector<cplx> gsh(static_cast<std::size_t>(n + 1), cplx(0, 0));
    for (int k = 0; k <= n; ++k) {
        fsh[static_cast<std::size_t>(k)] = pair.F.coeff(k - dm);
        gsh[static_cast<std::size_t>(k)] = pair.G.coeff(k - dm);
    }

    std::vector<double> thetas(static_cast<std::size_t>(n + 1), 0.0);
    std::vector<double> phis(static_cast<std::size_t>(n + 1), 0.0);
    double lambda = 0.0;

    auto deg_of = [](const std::vector<cplx>& c) {
        for (std::size_t i = c.size(); i-- > 0;)
            if (std::abs(c[i]) > kCarveTol) return static_cast<int>(i);
        return -1;
    };

    int b = n;
    bool done = false;
    while (b >= 1) {
        if (deg_of(fsh) <= 0 && deg_of(gsh) <= 0) {
            // both constant with steps remaining: explicit padded base case
            const cplx cf = fsh[0], cg = gsh[0];
            double theta0, phi0, lam;
            const double acf = std::abs(cf), acg = std::abs(cg);
            if (acg <= kCarveTol) {
                theta0 = 0.0;
                lam = 0.0;
                phi0 = std::arg(cf);
            } else if (acf <= kCarveTol) {
                theta0 = kPi / 2.0;
                lam = std::arg(cplx(0, 1) * cg);
                phi0 = 0.0;
            } else {
                theta0 = std::atan2(acg, acf);
                lam = std::arg(cplx(0, 1) * cg);
                phi0 = std::arg(cf) - lam;
            }
            thetas[0] = -kPi / 2.0;
            phis[0] = 0.0;
            lambda = lam;
            for (int k = 1; k < b; ++k) {
                thetas[static_cast<std::size_t>(k)] = kPi;
                phis[static_cast<std::size_t>(k)] = kPi;
            }
            thetas[static_cast<std::size_t>(b)] = theta0 - kPi / 2.0;
            phis[static_cast<std::size_t>(b)] = phi0;
            done = true;
            break;
        }

        const cplx ftop = fsh[static_cast<std::size_t>(b)], gtop = gsh[static_cast<std::size_t>(b)];
        const cplx fbot = fsh[0], gbot = gsh[0];
        double theta, phi;
        if (std::max(std::abs(ftop), std::abs(gtop)) > kCarveTol) {
            if (std::abs(ftop) >= std::abs(gtop)) {
                const cplx z = cplx(0, 1) * gtop / ftop;  // e^{-i phi} tan(theta)
                theta = std::atan(std::abs(z));
                phi = std::abs(z) > 0 ? -std::arg(z) : 0.0;
            } else {
                const cplx z = cplx(0, -1) * ftop / gtop;  // e^{+i phi} cot(theta)
                theta = std::atan2(1.0, std::abs(z));
                phi = std::abs(z) > 0 ? std::arg(z) : 0.0;
            }
        } else {
            // top slots empty: drive the step from the constant slots
            if (std::abs(gbot) >= std::abs(fbot)) {
                const cplx z = std::conj(fbot) / (cplx(0, 1) * std::conj(gbot));  // e^{-i phi} tan
                theta = std::atan(std::abs(z));
                phi = std::abs(z) > 0 ? -std::arg(z) : 0.0;
            } else {
                const cplx z = cplx(0, 1) * std::conj(gbot) / std::conj(fbot);  // e^{+i phi} cot
                theta = std::atan2(1.0, std::abs(z));
                phi = std::abs(z) > 0 ? std::arg(z) : 0.0;
            }
        }
        thetas[static_cast<std::size_t>(b)] = theta;
        phis[static_cast<std::size_t>(b)] = phi;

        const cplx eback = std::polar(1.0, -phi);
        const double ct = std::cos(theta), st = std::sin(theta);
        std::vector<cplx> fn(static_cast<std::size_t>(b), cplx(0, 0));
        std::vector<cplx> gn(static_cast<std::size_t>(b), cplx(0, 0));
        // F~ = (e^{-i phi} cos t) w^{-1} F + (i sin t) w^{-1} G  (slot -1 cancels)
        for (int k = 1; k <= b; ++k)
            fn[static_cast<std::size_t>(k - 1)] =
                eback * ct * fsh[static_cast<std::size_t>(k)] + cplx(0, 1) * st * gsh[static_cast<std::size_t>(k)];
        // G~ = (-i e^{-i phi} sin t) F + (- cos t) G  (slot b cancels)
        for (int k = 0; k < b; ++k)
            gn[static_cast<std::size_t>(k)] = cplx(0, -1) * eback * st * fsh[static_cast<std::size_t>(k)] -
                                              ct * gsh[static_cast<std::size_t>(k)];
        fsh = std::move(fn);
        gsh = std::move(gn);
        --b;
    }
    if (!done) {
        // b == 0 constants
        const cplx cf = fsh[0], cg = gsh[0];
        const double acf = std::abs(cf), acg = std::abs(cg);
        if (acg <= kCarveTol) {
            thetas[0] = 0.0;
            lambda = 0.0;
            phis[0] = std::arg(cf);
        } else if (acf <= kCarveTol) {
            thetas[0] = kPi / 2.0;
            lambda = std::arg(cplx(0, 1) * cg);
            phis[0] = 0.0;
        } else {
            thetas[0] = std::atan2(acg, acf);
            lambda = std::arg(cplx(0, 1) * cg);
            phis[0] = std::arg(cf) - lambda;
        }
    }

    AngleSequence seq = make_gqsp_sequence(std::move(thetas), std::move(phis), lambda, dp, dm);
    seq.cert_residual = pair.certificate;
    seq.recon_residual = detail::recon_residual_gqsp(seq, pair.F, pair.G);
    return seq;
}

}  // namespace qspkit

#endif
