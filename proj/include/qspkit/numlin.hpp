#ifndef QSPKIT_NUMLIN_HPP
#define QSPKIT_NUMLIN_HPP

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "qspkit/fft.hpp"
#include "qspkit/laurent.hpp"

namespace qspkit {

struct root_error : std::runtime_error {
    double residual;
    explicit root_error(const std::string& msg, double r) : std::runtime_error(msg), residual(r) {}
};

struct singularity_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct rank_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// All roots of a polynomial, multiplicities as repeated entries.
struct RootSet {
    std::vector<cplx> roots;
    double residual = 0.0;        // max |p(root)| / |leading coefficient|
    double backward_error = 0.0;  // max |p(root)| / sum |a_k| |root|^k
    int iterations = 0;
};

namespace detail {

// --- double-double helpers (compensated Horner polish) ----------------------

struct dd {
    double hi = 0.0, lo = 0.0;
};

inline dd dd_two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

inline dd dd_two_prod(double a, double b) {
    double p = a * b;
    double err = std::fma(a, b, -p);
    return {p, err};
}

inline dd dd_add(dd a, dd b) {
    dd s = dd_two_sum(a.hi, b.hi);
    double lo = s.lo + a.lo + b.lo;
    dd r = dd_two_sum(s.hi, lo);
    return r;
}

inline dd dd_mul(dd a, dd b) {
    dd p = dd_two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return dd_two_sum(p.hi, p.lo);
}

inline dd dd_from(double x) { return {x, 0.0}; }

struct ddc {
    dd re, im;
};

inline ddc ddc_from(cplx z) { return {dd_from(z.real()), dd_from(z.imag())}; }

inline ddc ddc_add(ddc a, ddc b) { return {dd_add(a.re, b.re), dd_add(a.im, b.im)}; }

inline ddc ddc_mul(ddc a, ddc b) {
    dd rr = dd_add(dd_mul(a.re, b.re), dd_mul(dd_mul(a.im, b.im), dd_from(-1.0)));
    dd ii = dd_add(dd_mul(a.re, b.im), dd_mul(a.im, b.re));
    return {rr, ii};
}

inline cplx ddc_to_cplx(ddc a) { return {a.re.hi + a.re.lo, a.im.hi + a.im.lo}; }

// Horner in double-double; returns p(z) and p'(z).
inline void dd_horner(const std::vector<cplx>& a, cplx z, cplx& p_out, cplx& dp_out) {
    ddc z2 = ddc_from(z);
    ddc p = ddc_from(a.back());
    ddc dp = {dd_from(0.0), dd_from(0.0)};
    for (std::size_t i = a.size() - 1; i-- > 0;) {
        dp = ddc_add(ddc_mul(dp, z2), p);
        p = ddc_add(ddc_mul(p, z2), ddc_from(a[i]));
    }
    p_out = ddc_to_cplx(p);
    dp_out = ddc_to_cplx(dp);
}

inline void horner(const std::vector<cplx>& a, cplx z, cplx& p, cplx& dp) {
    p = a.back();
    dp = cplx(0, 0);
    for (std::size_t i = a.size() - 1; i-- > 0;) {
        dp = dp * z + p;
        p = p * z + a[i];
    }
}

inline double abs_scale(const std::vector<cplx>& a, double az) {
    double s = std::abs(a.back());
    for (std::size_t i = a.size() - 1; i-- > 0;) s = s * az + std::abs(a[i]);
    return s;
}

// Bini-style initial guesses from the upper convex hull of (k, log|a_k|).
inline std::vector<cplx> initial_guesses(const std::vector<cplx>& a) {
    const int n = static_cast<int>(a.size()) - 1;
    std::vector<double> lg(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double m = std::abs(a[i]);
        lg[i] = m > 0.0 ? std::log(m) : -1e300;
    }
    std::vector<int> hull;  // indices of upper hull vertices
    for (int i = 0; i <= n; ++i) {
        if (lg[static_cast<std::size_t>(i)] <= -1e290) continue;
        while (hull.size() >= 2) {
            int j = hull[hull.size() - 1], k = hull[hull.size() - 2];
            // keep hull upper-convex
            if ((lg[j] - lg[k]) * (i - j) <= (lg[i] - lg[j]) * (j - k)) hull.pop_back();
            else break;
        }
        hull.push_back(i);
    }
    std::vector<cplx> z;
    z.reserve(static_cast<std::size_t>(n));
    int seg = 0;
    for (std::size_t h = 0; h + 1 < hull.size(); ++h, ++seg) {
        int k1 = hull[h], k2 = hull[h + 1];
        double r = std::exp((lg[k1] - lg[k2]) / (k2 - k1));
        r = std::min(std::max(r, 1e-150), 1e150);
        const int m = k2 - k1;
        for (int j = 0; j < m; ++j) {
            const double ang = 2.0 * kPi * (j + 0.5) / m + 0.4242 * (seg + 1);
            z.push_back(std::polar(r, ang));
        }
    }
    while (static_cast<int>(z.size()) < n) z.push_back(std::polar(1.0, 0.1 * static_cast<double>(z.size())));
    z.resize(static_cast<std::size_t>(n));
    return z;
}

// Newton step valid for |z| > 1 via the reversed polynomial at 1/z.
inline cplx newton_step(const std::vector<cplx>& a, const std::vector<cplx>& arev, cplx z, double& bw) {
    const int n = static_cast<int>(a.size()) - 1;
    const double az = std::abs(z);
    if (az <= 1.0) {
        cplx p, dp;
        horner(a, z, p, dp);
        const double s = abs_scale(a, az);
        bw = s > 0 ? std::abs(p) / s : 0.0;
        if (p == cplx(0, 0)) return cplx(0, 0);
        if (dp == cplx(0, 0)) return cplx(1e-3, 1e-3);
        return p / dp;
    }
    const cplx u = cplx(1, 0) / z;
    cplx pr, dpr;
    horner(arev, u, pr, dpr);
    const double s = abs_scale(arev, std::abs(u));
    bw = s > 0 ? std::abs(pr) / s : 0.0;
    if (pr == cplx(0, 0)) return cplx(0, 0);
    const cplx denom = cplx(static_cast<double>(n), 0) - u * dpr / pr;
    if (denom == cplx(0, 0)) return cplx(1e-3, 1e-3);
    return z / denom;
}

}  // namespace detail

/// Aberth-Ehrlich simultaneous iteration from convex-hull initial radii.
/// Exact leading/trailing zeros are deflated first; a compensated
/// (double-double) Newton polish runs when plain double does not reach the
/// backward-error target.
inline RootSet all_roots(std::vector<cplx> coeffs, int max_iter = 500) {
    RootSet out;
    const double maxc = [&] {
        double m = 0.0;
        for (const auto& v : coeffs) m = std::max(m, std::abs(v));
        return m;
    }();
    if (maxc == 0.0) throw std::invalid_argument("all_roots: zero polynomial");

    // hard-underflow guard on the leading end
    while (!coeffs.empty() && std::abs(coeffs.back()) < 1e-280 * maxc) coeffs.pop_back();
    // exact zero roots from the trailing end
    std::size_t zero_roots = 0;
    while (zero_roots < coeffs.size() - 1 && coeffs[zero_roots] == cplx(0, 0)) ++zero_roots;
    if (zero_roots > 0) coeffs.erase(coeffs.begin(), coeffs.begin() + static_cast<std::ptrdiff_t>(zero_roots));
    for (std::size_t i = 0; i < zero_roots; ++i) out.roots.push_back(cplx(0, 0));

    const int n = static_cast<int>(coeffs.size()) - 1;
    if (n < 1) {
        if (out.roots.empty()) throw std::invalid_argument("all_roots: degree < 1 after trim");
        return out;
    }

    std::vector<cplx> arev(coeffs.rbegin(), coeffs.rend());
    std::vector<cplx> z = detail::initial_guesses(coeffs);
    std::vector<double> bw(static_cast<std::size_t>(n), 1.0);
    std::vector<char> done(static_cast<std::size_t>(n), 0);
    const double eps = std::numeric_limits<double>::epsilon();
    const double conv_tol = eps * (4.0 * n + 4.0);

    int it = 0;
    for (; it < max_iter; ++it) {
        bool all_done = true;
        for (int i = 0; i < n; ++i) {
            if (done[static_cast<std::size_t>(i)]) continue;
            cplx ni = detail::newton_step(coeffs, arev, z[static_cast<std::size_t>(i)], bw[static_cast<std::size_t>(i)]);
            if (bw[static_cast<std::size_t>(i)] <= conv_tol) {
                done[static_cast<std::size_t>(i)] = 1;
                continue;
            }
            all_done = false;
            cplx s(0, 0);
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                cplx diff = z[static_cast<std::size_t>(i)] - z[static_cast<std::size_t>(j)];
                if (diff == cplx(0, 0)) diff = cplx(1e-150, 0);
                s += cplx(1, 0) / diff;
            }
            cplx denom = cplx(1, 0) - ni * s;
            if (denom == cplx(0, 0)) denom = cplx(eps, eps);
            z[static_cast<std::size_t>(i)] -= ni / denom;
        }
        if (all_done) break;
    }
    out.iterations = it;

    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        detail::newton_step(coeffs, arev, z[static_cast<std::size_t>(i)], bw[static_cast<std::size_t>(i)]);
        worst = std::max(worst, bw[static_cast<std::size_t>(i)]);
    }
    if (worst > 1e-12) {
        // compensated polish
        for (int i = 0; i < n; ++i) {
            cplx zi = z[static_cast<std::size_t>(i)];
            if (std::abs(zi) <= 1e3) {
                for (int k = 0; k < 4; ++k) {
                    cplx p, dp;
                    detail::dd_horner(coeffs, zi, p, dp);
                    if (dp == cplx(0, 0)) break;
                    zi -= p / dp;
                }
                z[static_cast<std::size_t>(i)] = zi;
            }
        }
        worst = 0.0;
        for (int i = 0; i < n; ++i) {
            detail::newton_step(coeffs, arev, z[static_cast<std::size_t>(i)], bw[static_cast<std::size_t>(i)]);
            worst = std::max(worst, bw[static_cast<std::size_t>(i)]);
        }
    }

    // multiple-root clusters: the centroid of a split cluster is accurate to
    // O(eps) while the members are only O(eps^{1/m}); adopt it when it keeps
    // the backward error at convergence level
    {
        std::vector<char> used(static_cast<std::size_t>(n), 0);
        for (int i = 0; i < n; ++i) {
            if (used[static_cast<std::size_t>(i)]) continue;
            std::vector<int> cluster{i};
            const double rad = 1e-6 * std::max(1.0, std::abs(z[static_cast<std::size_t>(i)]));
            for (int j = i + 1; j < n; ++j)
                if (!used[static_cast<std::size_t>(j)] &&
                    std::abs(z[static_cast<std::size_t>(j)] - z[static_cast<std::size_t>(i)]) <= rad)
                    cluster.push_back(j);
            if (cluster.size() < 2) continue;
            cplx centroid(0, 0);
            for (int j : cluster) centroid += z[static_cast<std::size_t>(j)];
            centroid /= static_cast<double>(cluster.size());
            // multiplicity-aware Newton: z -= m p / p' converges quadratically
            // at an m-fold root where plain Newton stalls
            const double mult = static_cast<double>(cluster.size());
            for (int step = 0; step < 3; ++step) {
                cplx p, dp;
                detail::dd_horner(coeffs, centroid, p, dp);
                if (dp == cplx(0, 0)) break;
                const cplx corr = mult * p / dp;
                centroid -= corr;
                if (std::abs(corr) < 1e-15 * std::max(1.0, std::abs(centroid))) break;
            }
            double bw_c = 0.0;
            detail::newton_step(coeffs, arev, centroid, bw_c);
            if (bw_c <= conv_tol * 4.0 * static_cast<double>(cluster.size())) {
                for (int j : cluster) {
                    z[static_cast<std::size_t>(j)] = centroid;
                    used[static_cast<std::size_t>(j)] = 1;
                }
            }
        }
    }

    double resid = 0.0;
    const double lead = std::abs(coeffs.back());
    for (int i = 0; i < n; ++i) {
        cplx p, dp;
        const cplx zi = z[static_cast<std::size_t>(i)];
        if (std::abs(zi) <= 1.0) {
            detail::horner(coeffs, zi, p, dp);
            resid = std::max(resid, std::abs(p) / lead);
        } else {
            // |p(z)| = |z|^n |p_rev(1/z)|; compare on the reversed side
            detail::horner(arev, cplx(1, 0) / zi, p, dp);
            double logp = std::log(std::abs(p) + 1e-300) + n * std::log(std::abs(zi));
            resid = std::max(resid, std::exp(std::min(logp - std::log(lead), 690.0)));
        }
        out.roots.push_back(zi);
    }
    out.residual = resid;
    out.backward_error = worst;
    if (worst > 1e-12 && it >= max_iter)
        throw root_error("all_roots: no convergence after max_iter", resid);
    return out;
}

/// Normalized DFT of unit-circle samples h(t_n), t_n = exp(i 2 pi n / N):
/// returns c with c[k] ~ hat h_k for 0 <= k < N (negative indices wrap).
inline std::vector<cplx> fourier_coeffs(std::vector<cplx> samples) {
    if (!detail::is_pow2(samples.size()))
        throw std::invalid_argument("fourier_coeffs: sample count must be a power of two");
    for (const auto& v : samples)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw singularity_error("fourier_coeffs: non-finite sample");
    detail::fft_radix2(samples, -1);
    const double inv = 1.0 / static_cast<double>(samples.size());
    for (auto& v : samples) v *= inv;
    return samples;
}

/// hat h_{-1} .. hat h_{-count} of h evaluated on the unit circle, doubling
/// the grid until the used coefficients stabilize below 1e-14.
inline std::vector<cplx> adaptive_fourier_neg(const std::function<cplx(cplx)>& h, int count, int ns_init) {
    std::size_t ns = detail::next_pow2(static_cast<std::size_t>(std::max(ns_init, 2 * count + 2)));
    std::vector<cplx> prev;
    for (;;) {
        std::vector<cplx> samples(ns);
        for (std::size_t nidx = 0; nidx < ns; ++nidx) {
            const double t = 2.0 * kPi * static_cast<double>(nidx) / static_cast<double>(ns);
            samples[nidx] = h(cplx(std::cos(t), std::sin(t)));
        }
        std::vector<cplx> c = fourier_coeffs(std::move(samples));
        std::vector<cplx> neg(static_cast<std::size_t>(count));
        for (int k = 1; k <= count; ++k) neg[static_cast<std::size_t>(k - 1)] = c[ns - static_cast<std::size_t>(k)];
        if (!prev.empty()) {
            double diff = 0.0;
            for (int k = 0; k < count; ++k) diff = std::max(diff, std::abs(neg[static_cast<std::size_t>(k)] - prev[static_cast<std::size_t>(k)]));
            if (diff < 1e-14) return neg;
        }
        prev = std::move(neg);
        ns <<= 1;
        if (ns > (1u << 22)) return prev;
    }
}

struct HankelNull {
    std::vector<cplx> vec;     // unit-norm null vector
    double sigma_ratio = 0.0;  // smallest / second-smallest singular value
    double residual = 0.0;     // ||H v|| / ||H||_F
};

/// Smallest-singular-vector of the Hankel matrix H(i,j) = hat h_{-(1+i+j)}.
/// hneg[k] holds hat h_{-(k+1)}; rows defaults to cols + 1.
inline HankelNull hankel_null_vector(const std::vector<cplx>& hneg, int cols, int rows = -1) {
    if (cols < 1) throw std::invalid_argument("hankel_null_vector: cols < 1");
    if (rows < 0) rows = cols + 1;
    if (rows < cols) throw std::invalid_argument("hankel_null_vector: rows < cols");
    if (static_cast<int>(hneg.size()) < rows + cols - 1)
        throw std::invalid_argument("hankel_null_vector: not enough coefficients");

    HankelNull out;
    if (cols == 1) {
        out.vec = {cplx(1, 0)};
        double frob = 0.0;
        for (int i = 0; i < rows; ++i) frob += std::norm(hneg[static_cast<std::size_t>(i)]);
        out.residual = frob > 0.0 ? 1.0 : 0.0;
        out.sigma_ratio = 0.0;
        return out;
    }

    Eigen::MatrixXcd h(rows, cols);
    double frob = 0.0;
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            h(i, j) = hneg[static_cast<std::size_t>(i + j)];
            frob += std::norm(h(i, j));
        }
    frob = std::sqrt(frob);
    if (frob == 0.0) throw rank_error("hankel_null_vector: zero matrix (degenerate input)");

    Eigen::BDCSVD<Eigen::MatrixXcd> svd(h, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const int m = static_cast<int>(sv.size());
    if (m >= 2) out.sigma_ratio = sv(m - 2) > 0 ? sv(m - 1) / sv(m - 2) : 1.0;
    Eigen::VectorXcd v = svd.matrixV().col(cols - 1);
    out.vec.assign(v.data(), v.data() + cols);
    out.residual = (h * v).norm() / frob;
    return out;
}

struct LinearSolution {
    Eigen::VectorXcd x;
    double residual = 0.0;
};

/// Least squares via column-pivoted Householder QR; throws on rank
/// deficiency past 1e-10 * ||A||.
inline LinearSolution solve_linear(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& b) {
    if (a.rows() < a.cols()) throw std::invalid_argument("solve_linear: rows < cols");
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(a);
    qr.setThreshold(1e-10);
    if (qr.rank() < a.cols())
        throw rank_error("solve_linear: rank-deficient system (rank " + std::to_string(qr.rank()) + " of " +
                         std::to_string(a.cols()) + ")");
    LinearSolution out;
    out.x = qr.solve(b);
    out.residual = (a * out.x - b).norm();
    return out;
}

inline LinearSolution solve_linear(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
    return solve_linear(Eigen::MatrixXcd(a.cast<cplx>()), Eigen::VectorXcd(b.cast<cplx>()));
}

}  // namespace qspkit

#endif
