#ifndef QSPKIT_OPTIMIZE_HPP
#define QSPKIT_OPTIMIZE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

#include "qspkit/convention.hpp"
#include "qspkit/laurent.hpp"
#include "qspkit/qspmodel.hpp"

namespace qspkit {

/// Sampled least-squares loss for angle optimization. Ordinary QSP fits
/// Re<0|U(x_j)|0> against a real target on d~ = ceil((d+1)/2) Chebyshev-like
/// nodes; GQSP fits the complex <0|U(w_j)|0> on d nodes.
struct LossSpec {
    Convention convention = Convention::WxSz;
    int d = 0;
    std::vector<double> nodes_x;
    std::vector<cplx> target;
    bool symmetric = true;
    int d_plus = 0, d_minus = 0;  // GQSP
};

inline LossSpec make_ordinary_loss(const ChebPoly& part, int d, bool symmetric = true,
                                   Convention conv = Convention::WxSz) {
    if (conv == Convention::Gqsp) throw std::invalid_argument("make_ordinary_loss: ordinary only");
    LossSpec spec;
    spec.convention = conv;
    spec.d = d;
    spec.symmetric = symmetric;
    const int dt = (d + 2) / 2;  // ceil((d+1)/2)
    for (int j = 1; j <= dt; ++j) {
        const double x = std::cos((2.0 * j - 1.0) * kPi / (4.0 * dt));
        spec.nodes_x.push_back(x);
        spec.target.push_back(cplx(part.eval(cplx(x, 0)).real(), 0.0));
    }
    return spec;
}

inline LossSpec make_gqsp_loss(const LaurentPoly& part, int d) {
    LossSpec spec;
    spec.convention = Convention::Gqsp;
    spec.d = d;
    spec.d_plus = d;
    spec.d_minus = d;
    spec.symmetric = false;
    const int dt = (d + 2) / 2;
    for (int j = 1; j <= d; ++j) {
        const double x = std::cos((2.0 * j - 1.0) * kPi / (4.0 * dt));
        spec.nodes_x.push_back(x);
        const double th = std::acos(std::min(1.0, std::max(-1.0, x)));
        spec.target.push_back(part.eval(std::polar(1.0, th)));
    }
    return spec;
}

namespace detail {

using vec2 = std::array<cplx, 2>;

inline vec2 mat_vec(const Mat2& m, const vec2& v) {
    return {m.a * v[0] + m.b * v[1], m.c * v[0] + m.d * v[1]};
}

inline vec2 vec_mat(const vec2& v, const Mat2& m) {
    return {v[0] * m.a + v[1] * m.c, v[0] * m.b + v[1] * m.d};
}

// d R / d theta, d R / d phi, d R / d lambda for the GQSP rotation
inline Mat2 gqsp_rot_dtheta(double t, double p, double l) {
    return {-std::polar(1.0, l + p) * std::sin(t), std::polar(1.0, l) * std::cos(t),
            std::polar(1.0, p) * std::cos(t), cplx(std::sin(t), 0)};
}
inline Mat2 gqsp_rot_dphi(double t, double p, double l) {
    return {cplx(0, 1) * std::polar(1.0, l + p) * std::cos(t), cplx(0, 0),
            cplx(0, 1) * std::polar(1.0, p) * std::sin(t), cplx(0, 0)};
}
inline Mat2 gqsp_rot_dlambda(double t, double p, double l) {
    return {cplx(0, 1) * std::polar(1.0, l + p) * std::cos(t), cplx(0, 1) * std::polar(1.0, l) * std::sin(t),
            cplx(0, 0), cplx(0, 0)};
}

}  // namespace detail

/// Loss and analytic gradient with respect to the flat parameter vector:
/// phi (ordinary) or [theta..., phi..., lambda] (GQSP).
inline std::pair<double, std::vector<double>> loss_and_gradient(const LossSpec& spec,
                                                                const std::vector<double>& params) {
    const std::size_t nn = spec.nodes_x.size();
    std::vector<double> grad(params.size(), 0.0);
    double loss = 0.0;

    if (spec.convention != Convention::Gqsp) {
        const int d = spec.d;
        if (static_cast<int>(params.size()) != d + 1)
            throw std::invalid_argument("loss_and_gradient: phi arity mismatch");
        std::vector<detail::vec2> v(params.size());
        std::vector<detail::vec2> u(params.size());
        for (std::size_t j = 0; j < nn; ++j) {
            const double x = spec.nodes_x[j];
            const Mat2 w = wx_signal(x);
            v[params.size() - 1] = detail::mat_vec(sz_rotation(params.back()), {cplx(1, 0), cplx(0, 0)});
            for (std::size_t k = params.size() - 1; k-- > 0;)
                v[k] = detail::mat_vec(sz_rotation(params[k]), detail::mat_vec(w, v[k + 1]));
            u[0] = {cplx(1, 0), cplx(0, 0)};
            for (std::size_t k = 1; k < params.size(); ++k)
                u[k] = detail::vec_mat(detail::vec_mat(u[k - 1], sz_rotation(params[k - 1])), w);
            const cplx val = u[0][0] * v[0][0] + u[0][1] * v[0][1];
            const double e = val.real() - spec.target[j].real();
            loss += e * e;
            for (std::size_t k = 0; k < params.size(); ++k) {
                const cplx dval = u[k][0] * cplx(0, 1) * v[k][0] + u[k][1] * cplx(0, -1) * v[k][1];
                grad[k] += 2.0 * e * dval.real();
            }
        }
    } else {
        const int n = spec.d_plus + spec.d_minus;
        if (static_cast<int>(params.size()) != 2 * (n + 1) + 1)
            throw std::invalid_argument("loss_and_gradient: gqsp arity mismatch");
        const double* th = params.data();
        const double* ph = params.data() + (n + 1);
        const double lam = params.back();
        std::vector<detail::vec2> s(static_cast<std::size_t>(n + 1));
        std::vector<detail::vec2> u(static_cast<std::size_t>(n + 1));
        for (std::size_t j = 0; j < nn; ++j) {
            const double ang = std::acos(std::min(1.0, std::max(-1.0, spec.nodes_x[j])));
            const cplx wpt = std::polar(1.0, ang);
            auto wmat = [&](int k) { return k <= spec.d_minus ? gqsp_w1(wpt) : gqsp_w0(wpt); };
            // s_k = W_{k+1} R_{k+1} ... |0>, with s_n = |0>
            s[static_cast<std::size_t>(n)] = {cplx(1, 0), cplx(0, 0)};
            for (int k = n - 1; k >= 0; --k) {
                detail::vec2 t = detail::mat_vec(gqsp_rotation(th[k + 1], ph[k + 1], 0.0),
                                                 s[static_cast<std::size_t>(k + 1)]);
                s[static_cast<std::size_t>(k)] = detail::mat_vec(wmat(k + 1), t);
            }
            u[0] = {cplx(1, 0), cplx(0, 0)};
            for (int k = 1; k <= n; ++k) {
                detail::vec2 t = detail::vec_mat(u[static_cast<std::size_t>(k - 1)],
                                                 gqsp_rotation(th[k - 1], ph[k - 1], k == 1 ? lam : 0.0));
                u[static_cast<std::size_t>(k)] = detail::vec_mat(t, wmat(k));
            }
            auto row_dot = [](const detail::vec2& a, const Mat2& m, const detail::vec2& b) {
                const detail::vec2 mb = detail::mat_vec(m, b);
                return a[0] * mb[0] + a[1] * mb[1];
            };
            const cplx val = row_dot(u[0], gqsp_rotation(th[0], ph[0], lam), s[0]);
            const cplx e = val - spec.target[j];
            loss += std::norm(e);
            for (int k = 0; k <= n; ++k) {
                const double l0 = k == 0 ? lam : 0.0;
                const cplx dth = row_dot(u[static_cast<std::size_t>(k)],
                                         detail::gqsp_rot_dtheta(th[k], ph[k], l0), s[static_cast<std::size_t>(k)]);
                const cplx dph = row_dot(u[static_cast<std::size_t>(k)],
                                         detail::gqsp_rot_dphi(th[k], ph[k], l0), s[static_cast<std::size_t>(k)]);
                grad[static_cast<std::size_t>(k)] += 2.0 * (std::conj(e) * dth).real();
                grad[static_cast<std::size_t>(n + 1 + k)] += 2.0 * (std::conj(e) * dph).real();
            }
            const cplx dlam = row_dot(u[0], detail::gqsp_rot_dlambda(th[0], ph[0], lam), s[0]);
            grad.back() += 2.0 * (std::conj(e) * dlam).real();
        }
    }

    const double inv = 1.0 / static_cast<double>(nn);
    loss *= inv;
    for (auto& g : grad) g *= inv;
    return {loss, std::move(grad)};
}

// --- L-BFGS ------------------------------------------------------------------

namespace detail {

struct LbfgsResult {
    std::vector<double> x;
    double f = 0.0;
    bool converged = false;
    int iterations = 0;
};

using Objective = std::function<double(const std::vector<double>&, std::vector<double>&)>;

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double inf_norm(const std::vector<double>& a) {
    double s = 0.0;
    for (double v : a) s = std::max(s, std::abs(v));
    return s;
}

/// Strong-Wolfe line search (c1 = 1e-4, c2 = 0.9), bracket + zoom.
inline bool wolfe_search(const Objective& fn, const std::vector<double>& x0, double f0,
                         const std::vector<double>& g0, const std::vector<double>& dir,
                         std::vector<double>& x_out, double& f_out, std::vector<double>& g_out) {
    constexpr double c1 = 1e-4, c2 = 0.9;
    const double dg0 = dot(g0, dir);
    if (dg0 >= 0.0) return false;
    const std::size_t n = x0.size();
    auto eval_at = [&](double a, double& f, std::vector<double>& g) {
        std::vector<double> x(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = x0[i] + a * dir[i];
        f = fn(x, g);
        x_out = std::move(x);
    };

    double a_prev = 0.0, f_prev = f0, dg_prev = dg0;
    double a = 1.0;
    double a_lo = 0.0, a_hi = 0.0, f_lo = f0, dg_lo = dg0;
    bool bracketed = false;
    std::vector<double> g(n);
    double f = f0;

    for (int it = 0; it < 30 && !bracketed; ++it) {
        eval_at(a, f, g);
        const double dg = dot(g, dir);
        if (f > f0 + c1 * a * dg0 || (it > 0 && f >= f_prev)) {
            a_lo = a_prev;
            f_lo = f_prev;
            dg_lo = dg_prev;
            a_hi = a;
            bracketed = true;
            break;
        }
        if (std::abs(dg) <= -c2 * dg0) {
            f_out = f;
            g_out = std::move(g);
            return true;
        }
        if (dg >= 0.0) {
            a_lo = a;
            f_lo = f;
            dg_lo = dg;
            a_hi = a_prev;
            bracketed = true;
            break;
        }
        a_prev = a;
        f_prev = f;
        dg_prev = dg;
        a *= 2.0;
    }
    if (!bracketed) {
        f_out = f;
        g_out = std::move(g);
        return f < f0;
    }

    for (int it = 0; it < 50; ++it) {
        const double at = 0.5 * (a_lo + a_hi);
        eval_at(at, f, g);
        const double dg = dot(g, dir);
        if (f > f0 + c1 * at * dg0 || f >= f_lo) {
            a_hi = at;
        } else {
            if (std::abs(dg) <= -c2 * dg0) {
                f_out = f;
                g_out = std::move(g);
                return true;
            }
            if (dg * (a_hi - a_lo) >= 0.0) a_hi = a_lo;
            a_lo = at;
            f_lo = f;
            dg_lo = dg;
        }
        if (std::abs(a_hi - a_lo) < 1e-16 * std::max(1.0, std::abs(a_lo))) break;
    }
    if (f < f0) {
        f_out = f;
        g_out = std::move(g);
        return true;
    }
    return false;
}

inline LbfgsResult lbfgs_minimize(const Objective& fn, std::vector<double> x, int max_iter = 5000,
                                  double gtol = 1e-13, int memory = 10) {
    LbfgsResult res;
    const std::size_t n = x.size();
    std::vector<double> g(n);
    double f = fn(x, g);
    std::deque<std::vector<double>> s_hist, y_hist;
    std::deque<double> rho_hist;

    std::vector<double> best_x = x;
    double best_f = f;

    int it = 0;
    for (; it < max_iter; ++it) {
        if (inf_norm(g) <= gtol) {
            res.converged = true;
            break;
        }
        // two-loop recursion
        std::vector<double> q = g;
        std::vector<double> alpha(s_hist.size());
        for (std::size_t i = s_hist.size(); i-- > 0;) {
            alpha[i] = rho_hist[i] * dot(s_hist[i], q);
            for (std::size_t k = 0; k < n; ++k) q[k] -= alpha[i] * y_hist[i][k];
        }
        double gamma = 1.0;
        if (!s_hist.empty()) {
            const double yy = dot(y_hist.back(), y_hist.back());
            if (yy > 0) gamma = dot(s_hist.back(), y_hist.back()) / yy;
        }
        for (auto& v : q) v *= gamma;
        for (std::size_t i = 0; i < s_hist.size(); ++i) {
            const double beta = rho_hist[i] * dot(y_hist[i], q);
            for (std::size_t k = 0; k < n; ++k) q[k] += s_hist[i][k] * (alpha[i] - beta);
        }
        std::vector<double> dir(n);
        for (std::size_t k = 0; k < n; ++k) dir[k] = -q[k];

        std::vector<double> x_new;
        std::vector<double> g_new(n);
        double f_new = 0.0;
        if (!wolfe_search(fn, x, f, g, dir, x_new, f_new, g_new)) {
            // steepest-descent rescue; give up if that fails too
            for (std::size_t k = 0; k < n; ++k) dir[k] = -g[k];
            if (!wolfe_search(fn, x, f, g, dir, x_new, f_new, g_new)) break;
            s_hist.clear();
            y_hist.clear();
            rho_hist.clear();
        }

        std::vector<double> s_vec(n), y_vec(n);
        for (std::size_t k = 0; k < n; ++k) {
            s_vec[k] = x_new[k] - x[k];
            y_vec[k] = g_new[k] - g[k];
        }
        const double sy = dot(s_vec, y_vec);
        if (sy > 1e-300) {
            s_hist.push_back(std::move(s_vec));
            y_hist.push_back(std::move(y_vec));
            rho_hist.push_back(1.0 / sy);
            if (static_cast<int>(s_hist.size()) > memory) {
                s_hist.pop_front();
                y_hist.pop_front();
                rho_hist.pop_front();
            }
        }
        x = std::move(x_new);
        f = f_new;
        g = std::move(g_new);
        if (f < best_f) {
            best_f = f;
            best_x = x;
        }
    }
    if (f > best_f) {
        f = best_f;
        x = best_x;
        fn(x, g);
    }
    if (inf_norm(g) <= gtol) res.converged = true;
    res.x = std::move(x);
    res.f = f;
    res.iterations = it;
    return res;
}

}  // namespace detail

enum class OptInit { Symmetric, Random };

struct OptimizeResult {
    AngleSequence sequence;
    double final_loss = 0.0;
    bool converged = false;
    int iterations = 0;
};

/// L-BFGS (memory 10, strong Wolfe) on the sampled loss. Symmetric mode
/// optimizes only the independent half of phi with the (pi/4, 0, ..., 0, pi/4)
/// start; random mode draws all parameters uniformly from (-pi, pi).
inline OptimizeResult optimize_angles(const LossSpec& spec, OptInit init, std::uint64_t seed = 0,
                                      int max_iter = 5000) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(-kPi, kPi);

    OptimizeResult out;
    if (spec.convention != Convention::Gqsp) {
        const int d = spec.d;
        const int half = (d + 2) / 2;
        if (init == OptInit::Symmetric && !spec.symmetric)
            throw std::invalid_argument("optimize_angles: symmetric init requires the symmetric flag");

        if (spec.symmetric) {
            auto expand = [&](const std::vector<double>& h) {
                std::vector<double> full(static_cast<std::size_t>(d + 1));
                for (int i = 0; i <= d; ++i) full[static_cast<std::size_t>(i)] = h[static_cast<std::size_t>(std::min(i, d - i))];
                return full;
            };
            auto fn = [&](const std::vector<double>& h, std::vector<double>& gh) {
                auto [loss, gfull] = loss_and_gradient(spec, expand(h));
                gh.assign(static_cast<std::size_t>(half), 0.0);
                for (int i = 0; i <= d; ++i) gh[static_cast<std::size_t>(std::min(i, d - i))] += gfull[static_cast<std::size_t>(i)];
                return loss;
            };
            std::vector<double> h0(static_cast<std::size_t>(half), 0.0);
            if (init == OptInit::Symmetric) h0[0] = kPi / 4.0;
            else for (auto& v : h0) v = uni(rng);
            detail::LbfgsResult r = detail::lbfgs_minimize(fn, std::move(h0), max_iter);
            out.sequence = make_ordinary_sequence(spec.convention, expand(r.x));
            out.final_loss = r.f;
            out.converged = r.converged;
            out.iterations = r.iterations;
        } else {
            auto fn = [&](const std::vector<double>& p, std::vector<double>& g) {
                auto [loss, grad] = loss_and_gradient(spec, p);
                g = std::move(grad);
                return loss;
            };
            std::vector<double> p0(static_cast<std::size_t>(d + 1));
            for (auto& v : p0) v = uni(rng);
            detail::LbfgsResult r = detail::lbfgs_minimize(fn, std::move(p0), max_iter);
            out.sequence = make_ordinary_sequence(spec.convention, r.x);
            out.final_loss = r.f;
            out.converged = r.converged;
            out.iterations = r.iterations;
        }
        return out;
    }

    const int n = spec.d_plus + spec.d_minus;
    auto fn = [&](const std::vector<double>& p, std::vector<double>& g) {
        auto [loss, grad] = loss_and_gradient(spec, p);
        g = std::move(grad);
        return loss;
    };
    std::vector<double> p0(static_cast<std::size_t>(2 * (n + 1) + 1), 0.0);
    for (auto& v : p0) v = uni(rng);
    detail::LbfgsResult r = detail::lbfgs_minimize(fn, std::move(p0), max_iter);
    std::vector<double> th(r.x.begin(), r.x.begin() + (n + 1));
    std::vector<double> ph(r.x.begin() + (n + 1), r.x.begin() + 2 * (n + 1));
    out.sequence = make_gqsp_sequence(std::move(th), std::move(ph), r.x.back(), spec.d_plus, spec.d_minus);
    out.final_loss = r.f;
    out.converged = r.converged;
    out.iterations = r.iterations;
    return out;
}

}  // namespace qspkit

#endif
