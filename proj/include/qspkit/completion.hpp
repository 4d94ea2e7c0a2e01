#ifndef QSPKIT_COMPLETION_HPP
#define QSPKIT_COMPLETION_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "qspkit/convention.hpp"
#include "qspkit/laurent.hpp"
#include "qspkit/numlin.hpp"
#include "qspkit/qspmodel.hpp"

namespace qspkit {

struct completion_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct precondition_error : completion_error {
    using completion_error::completion_error;
};
struct classification_error : completion_error {
    using completion_error::completion_error;
};
struct boundary_error : completion_error {
    using completion_error::completion_error;
};

/// A certified (P, Q) or (F, G) pair. The certificate is the max residual of
/// the relevant unitarity condition, recomputed from the polynomials alone.
struct CompletionPair {
    Convention convention = Convention::WzSx;
    ChebPoly P, Q;      // WxSz
    LaurentPoly F, G;   // WzSx / Gqsp
    int d_plus = 0;     // target degree window (d, d) for ordinary QSP
    int d_minus = 0;
    double certificate = 0.0;
    double cond_ratio = 0.0;  // Prony conditioning diagnostic, 0 when n/a

    int target_degree() const { return std::max(d_plus, d_minus); }
};

inline double certify_wx(const ChebPoly& p, const ChebPoly& q, int d) {
    const int n = 64 * (std::max(d, 1) + 1);
    double worst = 0.0;
    for (int j = 0; j < n; ++j) {
        const double x = std::cos(kPi * (j + 0.5) / n);
        const cplx pv = p.eval(cplx(x, 0)), qv = q.eval(cplx(x, 0));
        worst = std::max(worst, std::abs(std::norm(pv) + (1.0 - x * x) * std::norm(qv) - 1.0));
    }
    return worst;
}

inline double certify_circle(const LaurentPoly& f, const LaurentPoly& g, int d) {
    const int n = 64 * (std::max(d, 1) + 1);
    double worst = 0.0;
    for (int j = 0; j < n; ++j) {
        const double th = 2.0 * kPi * j / n;
        const cplx w(std::cos(th), std::sin(th));
        worst = std::max(worst, std::abs(std::norm(f.eval(w)) + std::norm(g.eval(w)) - 1.0));
    }
    return worst;
}

inline double sup_on_circle(const LaurentPoly& f, int samples) {
    double m = 0.0;
    for (int j = 0; j < samples; ++j) {
        const double th = 2.0 * kPi * j / samples;
        m = std::max(m, std::abs(f.eval(cplx(std::cos(th), std::sin(th)))));
    }
    return m;
}

namespace detail {

inline constexpr double kClassifyTol = 1e-10;  // on-circle / boundary membership
inline constexpr double kClusterTol = 1e-8;    // multiple-root cluster radius

/// prod (w - s) over the given roots, ascending powers; deterministic order.
inline LaurentPoly expand_monic(std::vector<cplx> roots) {
    std::sort(roots.begin(), roots.end(), [](cplx a, cplx b) {
        if (std::abs(a) != std::abs(b)) return std::abs(a) < std::abs(b);
        return std::arg(a) < std::arg(b);
    });
    std::vector<cplx> c{cplx(1, 0)};
    for (const cplx& s : roots) {
        std::vector<cplx> next(c.size() + 1, cplx(0, 0));
        for (std::size_t i = 0; i < c.size(); ++i) {
            next[i + 1] += c[i];
            next[i] -= s * c[i];
        }
        c = std::move(next);
    }
    return LaurentPoly(0, std::move(c));
}

struct Cluster {
    cplx centroid;
    int mult;
};

inline std::vector<Cluster> cluster_points(std::vector<cplx> pts, double tol) {
    std::vector<Cluster> out;
    std::vector<char> used(pts.size(), 0);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (used[i]) continue;
        cplx sum = pts[i];
        int m = 1;
        used[i] = 1;
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            if (!used[j] && std::abs(pts[j] - pts[i]) <= tol) {
                sum += pts[j];
                ++m;
                used[j] = 1;
            }
        }
        out.push_back({sum / static_cast<double>(m), m});
    }
    return out;
}

/// In-disc root selection with optional randomized reflection choice.
/// Reflections are taken per symmetry orbit so the selected multiset keeps
/// the closure the convention needs (conj+negation for real even A).
inline std::vector<cplx> select_roots(const std::vector<cplx>& in_disc, bool randomized, bool orbit_closure,
                                      std::mt19937_64& rng, const std::function<cplx(cplx)>& reflect) {
    std::vector<cplx> chosen = in_disc;
    if (!randomized) return chosen;
    std::vector<char> visited(in_disc.size(), 0);
    std::bernoulli_distribution coin(0.5);
    for (std::size_t i = 0; i < in_disc.size(); ++i) {
        if (visited[i]) continue;
        std::vector<std::size_t> orbit{i};
        visited[i] = 1;
        if (orbit_closure) {
            const cplx s = in_disc[i];
            const cplx images[3] = {std::conj(s), -s, -std::conj(s)};
            for (const cplx& im : images) {
                for (std::size_t j = 0; j < in_disc.size(); ++j) {
                    if (visited[j]) continue;
                    if (std::abs(in_disc[j] - im) <= 1e-9 * std::max(1.0, std::abs(im))) {
                        orbit.push_back(j);
                        visited[j] = 1;
                        break;
                    }
                }
            }
        }
        if (coin(rng)) {
            for (std::size_t idx : orbit) chosen[idx] = reflect(in_disc[idx]);
        }
    }
    return chosen;
}

/// Scale constant from a point ratio, with a leading-coefficient fallback.
inline double positive_scale_ratio(const std::function<cplx(cplx)>& numer, const std::function<cplx(cplx)>& denom,
                                   double fallback, const char* what) {
    static const double angles[] = {0.4242, 1.1376, 2.7183, 0.1415, 1.9999, 2.4495};
    for (double a : angles) {
        const cplx w = std::polar(1.0, a);
        const cplx nv = numer(w), dv = denom(w);
        if (std::abs(nv) >= 1e-8 && std::abs(dv) >= 1e-250) {
            const double r = (nv / dv).real();
            if (r > 0.0) return r;
        }
    }
    if (fallback > 0.0) return fallback;
    throw classification_error(std::string(what) + ": could not fix the positive scale constant");
}

}  // namespace detail

// --- WxSz completion ---------------------------------------------------------

/// Appendix-style completion in y = x^2: root classes of 1 - f^2 map onto
/// quadratic-surd factors whose product squares back to 1 - f^2. Root finding
/// runs in v with u = 2y - 1 = (v + 1/v)/2, which keeps the polynomial in a
/// well-conditioned basis at any degree.
inline CompletionPair complete_wx_rootfind(const ChebPoly& f, int d) {
    if (!f.is_real(1e-11 * std::max(1.0, f.max_abs_coeff())))
        throw precondition_error("complete_wx_rootfind: f must have real coefficients");
    const ChebPoly ft = f.trimmed();
    if (ft.degree() > d) throw precondition_error("complete_wx_rootfind: deg f > d");
    if (ft.degree() >= 0) {
        const Parity want = d % 2 == 0 ? Parity::Even : Parity::Odd;
        if (ft.parity() != want) throw precondition_error("complete_wx_rootfind: parity(f) != d mod 2");
    }
    {
        const int ns = 64 * (d + 1);
        for (int j = 0; j < ns; ++j) {
            const double x = std::cos(kPi * (j + 0.5) / ns);
            if (std::abs(f.eval(cplx(x, 0))) > 1.0 + 1e-9)
                throw precondition_error("complete_wx_rootfind: sup |f| > 1");
        }
    }

    CompletionPair out;
    out.convention = Convention::WxSz;
    out.d_plus = out.d_minus = d;

    if (ft.degree() < 0) {  // f == 0: |P| must be 1
        out.P = ChebPoly::constant(cplx(0, 1));
        out.Q = ChebPoly();
        out.certificate = certify_wx(out.P, out.Q, d);
        return out;
    }

    // A(x) = 1 - f(x)^2, even; re-index T_{2j}(x) = T_j(u) to get A~ in u.
    ChebPoly a2 = ChebPoly::constant(1.0) - mul(f, f).real_part();
    std::vector<cplx> au;
    for (int j = 0; 2 * j < static_cast<int>(a2.size()); ++j) au.push_back(a2.coeff(2 * j));
    ChebPoly atilde_u{std::vector<cplx>(au)};
    const int m = atilde_u.degree(0.0);

    ChebSqrtPair b{ChebPoly::constant(1.0), ChebPoly()};

    int built_degree = 0;

    if (m >= 1) {
        // Laurent in v: sum au_k (v^k + v^{-k})/2, shifted to a monic-ready poly
        std::vector<cplx> vpoly(static_cast<std::size_t>(2 * m + 1), cplx(0, 0));
        vpoly[static_cast<std::size_t>(m)] = au[0];
        for (int k = 1; k <= m; ++k) {
            vpoly[static_cast<std::size_t>(m + k)] += 0.5 * au[static_cast<std::size_t>(k)];
            vpoly[static_cast<std::size_t>(m - k)] += 0.5 * au[static_cast<std::size_t>(k)];
        }
        RootSet rs = all_roots(vpoly);

        std::vector<cplx> on_circle, in_disc;
        for (const cplx& v : rs.roots) {
            const double av = std::abs(v);
            if (std::abs(av - 1.0) <= detail::kClusterTol) on_circle.push_back(v);
            else if (av < 1.0) in_disc.push_back(v);
        }

        auto y_of_v = [](cplx v) { return (v + cplx(1, 0) / v + 2.0) / 4.0; };

        // factor list in y-space
        std::vector<double> r1_sites;       // real s outside (0,1): R1 factors
        std::vector<double> interior_sites; // s in (0,1): (x^2 - s) factors
        std::vector<cplx> r2_sites;         // Im s > 0: R2 factors

        // circle clusters: v = e^{i a} pairs carry y in [0,1]
        for (auto& cl : detail::cluster_points(on_circle, detail::kClusterTol)) {
            const cplx c = cl.centroid / std::abs(cl.centroid);
            if (std::abs(c.imag()) <= detail::kClusterTol) {
                // v = +-1: y boundary 1 or 0, v-multiplicity is 2 * y-multiplicity
                if (cl.mult % 2 != 0)
                    throw classification_error("complete_wx_rootfind: odd multiplicity at v = +-1");
                const double s = c.real() > 0 ? 1.0 : 0.0;
                for (int k = 0; k < cl.mult / 2; ++k) r1_sites.push_back(s);
            } else if (c.imag() > 0) {
                const double y = y_of_v(c).real();
                if (cl.mult % 2 != 0)
                    throw classification_error("complete_wx_rootfind: odd interior [0,1] multiplicity");
                for (int k = 0; k < cl.mult / 2; ++k) interior_sites.push_back(y);
            }
            // lower-half circle clusters are the conjugate partners; skip
        }

        // in-disc roots: real v -> y outside [0,1]; complex v -> conjugate pairs
        std::vector<cplx> complex_y;
        for (const cplx& v : in_disc) {
            if (std::abs(v.imag()) <= detail::kClusterTol * std::max(1.0, std::abs(v))) {
                const double y = y_of_v(cplx(v.real(), 0)).real();
                if (y > 0.0 && y < 1.0)
                    throw classification_error("complete_wx_rootfind: real in-disc v mapped inside (0,1)");
                r1_sites.push_back(y);
            } else {
                complex_y.push_back(y_of_v(v));
            }
        }
        // pair complex y with conjugates
        std::vector<char> used(complex_y.size(), 0);
        for (std::size_t i = 0; i < complex_y.size(); ++i) {
            if (used[i]) continue;
            used[i] = 1;
            bool found = false;
            for (std::size_t j = i + 1; j < complex_y.size(); ++j) {
                if (used[j]) continue;
                if (std::abs(complex_y[j] - std::conj(complex_y[i])) <=
                    1e-6 * std::max(1.0, std::abs(complex_y[i]))) {
                    used[j] = 1;
                    found = true;
                    break;
                }
            }
            if (!found) throw classification_error("complete_wx_rootfind: unpaired complex root");
            r2_sites.push_back(complex_y[i].imag() > 0 ? complex_y[i] : std::conj(complex_y[i]));
        }

        std::sort(r1_sites.begin(), r1_sites.end());
        std::sort(interior_sites.begin(), interior_sites.end());
        std::sort(r2_sites.begin(), r2_sites.end(), [](cplx x, cplx y) {
            return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
        });

        // Every factor has the shape (real) + i (real) sqrt(1-x^2); the i is
        // stored inside q so the shared pair algebra gets the signs right.
        // Each factor is normalized to unit max coefficient before the
        // product (distant roots make raw factors huge and the intermediate
        // growth costs digits); the final scale is refit against A~ anyway.
        auto absorb = [&](ChebSqrtPair fac) {
            const double m = std::max(fac.p.max_abs_coeff(), fac.q.max_abs_coeff());
            if (m > 0) {
                fac.p = fac.p.scaled(cplx(1.0 / m, 0));
                fac.q = fac.q.scaled(cplx(1.0 / m, 0));
            }
            b = b * fac;
            const double bm = std::max(b.p.max_abs_coeff(), b.q.max_abs_coeff());
            if (bm > 0) {
                b.p = b.p.scaled(cplx(1.0 / bm, 0));
                b.q = b.q.scaled(cplx(1.0 / bm, 0));
            }
        };
        for (double s : r1_sites) {
            absorb({ChebPoly::basis(1, cplx(std::sqrt(std::abs(s - 1.0)), 0)),
                    ChebPoly::constant(cplx(0, std::sqrt(std::abs(s))))});
            built_degree += 1;
        }
        for (double s : interior_sites) {
            absorb({ChebPoly({cplx(0.5 - s, 0), cplx(0, 0), cplx(0.5, 0)}), ChebPoly()});
            built_degree += 2;
        }
        for (const cplx& s : r2_sites) {
            const double t = std::abs(s - 1.0) + std::abs(s);
            absorb({ChebPoly({cplx(0.5 * t - std::abs(s), 0), cplx(0, 0), cplx(0.5 * t, 0)}),
                    ChebPoly::basis(1, cplx(0, std::sqrt(std::max(0.0, t * t - 1.0))))});
            built_degree += 2;
        }

        // scale against A~ from the built pair itself, least squares over a
        // Chebyshev grid: A~(y) = C (p(x)^2 + (1-x^2) q~(x)^2)
        double num = 0.0, den = 0.0;
        const int ns = 8 * (m + 2);
        for (int j = 0; j < ns; ++j) {
            const double x0 = std::cos(kPi * (j + 0.5) / ns);
            const double y0 = x0 * x0;
            const cplx pv = b.p.eval(cplx(x0, 0)), qv = b.q.eval(cplx(x0, 0));
            const double bb = std::norm(pv) + (1.0 - y0) * std::norm(qv);
            const double av = atilde_u.eval(cplx(2.0 * y0 - 1.0, 0)).real();
            num += av * bb;
            den += bb * bb;
        }
        if (!(den > 0.0) || !(num > 0.0))
            throw classification_error("complete_wx_rootfind: scale constant not positive");
        const double sc = std::sqrt(num / den);
        b.p = b.p.scaled(cplx(sc, 0));
        b.q = b.q.scaled(cplx(sc, 0));
    } else {
        // constant A~: B = sqrt(A~)
        const double c0 = au.empty() ? 0.0 : au[0].real();
        if (c0 < -1e-12) throw classification_error("complete_wx_rootfind: negative constant A");
        b.p = ChebPoly::constant(cplx(std::sqrt(std::max(0.0, c0)), 0));
    }


    if (built_degree % 2 != d % 2) {
        // multiply by (x + i sqrt(1-x^2)): degree parity flip, |factor| = 1
        b = b * ChebSqrtPair{ChebPoly::basis(1), ChebPoly::constant(cplx(0, 1))};
    }

    // B = P' + i Q' sqrt(1 - x^2): b.p is real, b.q purely imaginary
    out.P = f + b.p.real_part().scaled(cplx(0, 1));
    out.Q = b.q;
    for (std::size_t k = 0; k < out.Q.size(); ++k)
        out.Q.set_coeff(static_cast<int>(k), cplx(0, out.Q.coeff(static_cast<int>(k)).imag()));
    out.certificate = certify_wx(out.P, out.Q, d);
    return out;
}

// --- WzSx completion ---------------------------------------------------------

namespace detail {

inline void check_wz_preconditions(const LaurentPoly& f, int d, const char* who) {
    if (!f.is_real(1e-11 * std::max(1.0, f.max_abs_coeff())))
        throw precondition_error(std::string(who) + ": f must have real coefficients");
    const LaurentPoly ft = f.trimmed();
    if (ft.degree() > d) throw precondition_error(std::string(who) + ": deg f > d");
    if (!ft.is_zero()) {
        const Parity want = d % 2 == 0 ? Parity::Even : Parity::Odd;
        if (ft.parity() != want) throw precondition_error(std::string(who) + ": parity(f) != d mod 2");
    }
}

/// Common tail: normalize the unscaled G, fix parity, certify.
inline CompletionPair finish_wz(const LaurentPoly& f, LaurentPoly g0, int d, double cond_ratio) {
    const LaurentPoly a = LaurentPoly::constant(1.0) - mul_direct(f, f.reversed());
    const double c2 = positive_scale_ratio(
        [&](cplx w) { return a.eval(w); },
        [&](cplx w) { return g0.eval(w) * g0.eval(cplx(1, 0) / w); },
        [&]() -> double {
            const int hi = a.detected_hi(), glo = g0.detected_lo(1e-300), ghi = g0.detected_hi(1e-300);
            if (hi == std::numeric_limits<int>::min() || ghi < glo) return -1.0;
            const cplx denom = g0.coeff(ghi) * g0.coeff(glo);
            if (std::abs(denom) < 1e-300) return -1.0;
            return (a.coeff(hi) / denom).real();
        }(),
        "complete_wz");
    LaurentPoly g = g0.scaled(std::sqrt(c2));

    // keep the real-coefficient structure exactly
    std::vector<cplx> rc(g.coeffs());
    for (auto& v : rc) v = cplx(v.real(), 0.0);
    g = LaurentPoly(g.lo(), std::move(rc));

    const Parity want = d % 2 == 0 ? Parity::Even : Parity::Odd;
    if (!g.trimmed().is_zero() && g.trimmed().parity() != want) g = g.shifted(1);

    CompletionPair out;
    out.convention = Convention::WzSx;
    out.F = f;
    out.G = g;
    out.d_plus = out.d_minus = d;
    out.cond_ratio = cond_ratio;
    out.certificate = certify_circle(out.F, out.G, d);
    return out;
}

}  // namespace detail

/// Root-finding completion: w^{2l} (1 - f(w) f(1/w)) is factored over its
/// root multiset; unit-circle roots are halved by clustering, the in-disc
/// half builds G. `randomized` flips reflection orbits (the dRF/RF split).
inline CompletionPair complete_wz_rootfind(const LaurentPoly& f, int d, bool randomized = false,
                                           std::uint64_t seed = 0) {
    detail::check_wz_preconditions(f, d, "complete_wz_rootfind");
    if (f.trimmed().is_zero()) {
        CompletionPair out;
        out.convention = Convention::WzSx;
        out.F = f;
        out.G = LaurentPoly::monomial(d, 1.0);
        out.d_plus = out.d_minus = d;
        out.certificate = certify_circle(out.F, out.G, d);
        return out;
    }

    LaurentPoly a = (LaurentPoly::constant(1.0) - mul_direct(f, f.reversed())).trimmed(0.0);
    if (a.is_zero() || std::abs(a.coeff(a.hi())) <= 1e-300) {
        // |f| == 1 identically: the pair closes with G == 0
        CompletionPair out;
        out.convention = Convention::WzSx;
        out.F = f;
        out.G = LaurentPoly();
        out.d_plus = out.d_minus = d;
        out.certificate = certify_circle(out.F, out.G, d);
        return out;
    }
    if (a.hi() <= 0) {
        // 1 - f f(1/w) is a positive constant: G is a scaled monomial
        return detail::finish_wz(f, LaurentPoly::monomial(d % 2, 1.0), d, 0.0);
    }

    RootSet rs = all_roots(a.coeffs());
    std::vector<cplx> on_circle, in_disc;
    for (const cplx& s : rs.roots) {
        const double as = std::abs(s);
        if (std::abs(as - 1.0) <= detail::kClusterTol) on_circle.push_back(s);
        else if (as < 1.0) in_disc.push_back(s);
    }

    std::vector<cplx> chosen;
    for (auto& cl : detail::cluster_points(on_circle, detail::kClusterTol)) {
        if (cl.mult % 2 != 0)
            throw classification_error("complete_wz_rootfind: odd unit-circle cluster");
        const cplx c = cl.centroid / std::abs(cl.centroid);
        for (int k = 0; k < cl.mult / 2; ++k) chosen.push_back(c);
    }
    std::mt19937_64 rng(seed);
    std::vector<cplx> picked = detail::select_roots(
        in_disc, randomized, /*orbit_closure=*/true, rng, [](cplx s) { return cplx(1, 0) / s; });
    chosen.insert(chosen.end(), picked.begin(), picked.end());
    if (chosen.size() % 2 != 0)
        throw classification_error("complete_wz_rootfind: odd in-disc root count");

    LaurentPoly g0 = detail::expand_monic(chosen).shifted(-static_cast<int>(chosen.size() / 2));
    return detail::finish_wz(f, g0, d, 0.0);
}

/// Prony completion: the in-disc factor is recovered from the negative
/// Fourier coefficients of 1/(1 - |f|^2) via a Hankel null vector; no roots.
inline CompletionPair complete_wz_prony(const LaurentPoly& f, int d) {
    detail::check_wz_preconditions(f, d, "complete_wz_prony");
    if (f.trimmed().is_zero()) {
        CompletionPair out;
        out.convention = Convention::WzSx;
        out.F = f;
        out.G = LaurentPoly::monomial(d, 1.0);
        out.d_plus = out.d_minus = d;
        out.certificate = certify_circle(out.F, out.G, d);
        return out;
    }
    {
        const double sup = sup_on_circle(f, 64 * (d + 1));
        if (sup >= 1.0 - 1e-8)
            throw singularity_error("complete_wz_prony: |f| reaches 1 on the grid; rescale the target");
    }

    const LaurentPoly a = (LaurentPoly::constant(1.0) - mul_direct(f, f.reversed())).trimmed(0.0);
    const int n = std::max(a.hi(), 0);  // retained halfwidth: in-disc root count
    if (n == 0) return detail::finish_wz(f, LaurentPoly::monomial(d % 2, 1.0), d, 0.0);

    auto h = [&](cplx w) { return cplx(1, 0) / (1.0 - std::norm(f.eval(w))); };
    const int cols = n + 1, rows = n + 2;
    std::vector<cplx> hneg = adaptive_fourier_neg(h, rows + cols - 1, 8 * (n + 1));
    HankelNull hn = hankel_null_vector(hneg, cols, rows);

    // rotate the null vector onto the real axis and restore even parity
    cplx s2(0, 0);
    for (const cplx& v : hn.vec) s2 += v * v;
    const cplx rot = std::polar(1.0, -0.5 * std::arg(s2));
    std::vector<cplx> mc(hn.vec.size());
    for (std::size_t i = 0; i < hn.vec.size(); ++i) {
        cplx v = hn.vec[i] * rot;
        if (i % 2 == 1) v = cplx(0, 0);  // in-disc roots come in +- pairs
        mc[i] = cplx(v.real(), 0.0);
    }
    LaurentPoly g0(0, std::move(mc));
    g0 = g0.shifted(-n / 2);
    return detail::finish_wz(f, g0, d, hn.sigma_ratio);
}

// --- GQSP completion ---------------------------------------------------------

namespace detail {

inline void check_gqsp_preconditions(const LaurentPoly& f, int d_plus, int d_minus, const char* who) {
    if (d_plus < 0 || d_minus < 0) throw precondition_error(std::string(who) + ": negative degree bound");
    const LaurentPoly ft = f.trimmed();
    if (!ft.is_zero() && (ft.detected_lo() < -d_minus || ft.detected_hi() > d_plus))
        throw precondition_error(std::string(who) + ": window of f exceeds [-d_-, d_+]");
}

inline CompletionPair finish_gqsp(const LaurentPoly& f, LaurentPoly g0, int d_plus, int d_minus,
                                  double cond_ratio) {
    const LaurentPoly g = LaurentPoly::constant(1.0) - mul_direct(f, f.star_inverse());
    const double c2 = positive_scale_ratio(
        [&](cplx w) { return g.eval(w); },
        [&](cplx w) { return cplx(std::norm(g0.eval(w)), 0); },
        -1.0, "complete_gqsp");
    CompletionPair out;
    out.convention = Convention::Gqsp;
    out.F = f;
    out.G = g0.scaled(std::sqrt(c2));
    out.d_plus = d_plus;
    out.d_minus = d_minus;
    out.cond_ratio = cond_ratio;
    out.certificate = certify_circle(out.F, out.G, std::max(d_plus + d_minus, 1));
    return out;
}

}  // namespace detail

inline CompletionPair complete_gqsp_rootfind(const LaurentPoly& f, int d_plus, int d_minus,
                                             bool randomized = false, std::uint64_t seed = 0) {
    detail::check_gqsp_preconditions(f, d_plus, d_minus, "complete_gqsp_rootfind");
    if (f.trimmed().is_zero()) {
        CompletionPair out;
        out.convention = Convention::Gqsp;
        out.F = f;
        out.G = LaurentPoly::constant(1.0);
        out.d_plus = d_plus;
        out.d_minus = d_minus;
        out.certificate = certify_circle(out.F, out.G, std::max(d_plus + d_minus, 1));
        return out;
    }

    LaurentPoly g = (LaurentPoly::constant(1.0) - mul_direct(f, f.star_inverse())).trimmed(0.0);
    if (g.is_zero()) {
        CompletionPair out;
        out.convention = Convention::Gqsp;
        out.F = f;
        out.G = LaurentPoly();
        out.d_plus = d_plus;
        out.d_minus = d_minus;
        out.certificate = certify_circle(out.F, out.G, std::max(d_plus + d_minus, 1));
        return out;
    }
    if (g.hi() <= 0) return detail::finish_gqsp(f, LaurentPoly::constant(1.0), d_plus, d_minus, 0.0);

    RootSet rs = all_roots(g.coeffs());
    std::vector<cplx> in_disc;
    for (const cplx& s : rs.roots) {
        const double as = std::abs(s);
        if (std::abs(as - 1.0) < detail::kClusterTol)
            throw boundary_error("complete_gqsp_rootfind: root within 1e-8 of the unit circle");
        if (as < 1.0) in_disc.push_back(s);
    }
    std::mt19937_64 rng(seed);
    std::vector<cplx> picked = detail::select_roots(
        in_disc, randomized, /*orbit_closure=*/false, rng,
        [](cplx s) { return cplx(1, 0) / std::conj(s); });

    LaurentPoly g0 = detail::expand_monic(picked).shifted(-d_minus);
    return detail::finish_gqsp(f, g0, d_plus, d_minus, 0.0);
}

inline CompletionPair complete_gqsp_prony(const LaurentPoly& f, int d_plus, int d_minus) {
    detail::check_gqsp_preconditions(f, d_plus, d_minus, "complete_gqsp_prony");
    if (f.trimmed().is_zero()) {
        CompletionPair out;
        out.convention = Convention::Gqsp;
        out.F = f;
        out.G = LaurentPoly::constant(1.0);
        out.d_plus = d_plus;
        out.d_minus = d_minus;
        out.certificate = certify_circle(out.F, out.G, std::max(d_plus + d_minus, 1));
        return out;
    }
    {
        const double sup = sup_on_circle(f, 64 * (d_plus + d_minus + 1));
        if (sup >= 1.0 - 1e-8)
            throw singularity_error("complete_gqsp_prony: |f| reaches 1 on the grid; rescale the target");
    }
    const LaurentPoly g = (LaurentPoly::constant(1.0) - mul_direct(f, f.star_inverse())).trimmed(0.0);
    if (g.is_zero()) {
        CompletionPair out;
        out.convention = Convention::Gqsp;
        out.F = f;
        out.G = LaurentPoly();
        out.d_plus = d_plus;
        out.d_minus = d_minus;
        out.certificate = certify_circle(out.F, out.G, std::max(d_plus + d_minus, 1));
        return out;
    }
    const int n = std::max(g.hi(), 0);
    if (n == 0) return detail::finish_gqsp(f, LaurentPoly::constant(1.0), d_plus, d_minus, 0.0);

    auto h = [&](cplx w) { return cplx(1, 0) / (1.0 - std::norm(f.eval(w))); };
    const int cols = n + 1, rows = n + 2;
    std::vector<cplx> hneg = adaptive_fourier_neg(h, rows + cols - 1, 8 * (n + 1));
    HankelNull hn = hankel_null_vector(hneg, cols, rows);
    LaurentPoly g0(0, hn.vec);
    g0 = g0.shifted(-d_minus);
    return detail::finish_gqsp(f, g0, d_plus, d_minus, hn.sigma_ratio);
}

/// Rank-deficiency guard for Prony: f = beta (f1 + f2) with pinned extreme
/// coefficients on both parts; gamma = 1/4, beta = 2.
struct StabilitySplit {
    LaurentPoly f1, f2;
    double beta = 2.0;
    double gamma = 0.25;
};

inline StabilitySplit gqsp_stability_split(const LaurentPoly& f, int d_plus, int d_minus) {
    StabilitySplit out;
    LaurentPoly f1;
    f1.set_coeff(d_plus, cplx(out.gamma, 0));
    f1.set_coeff(-d_minus, f1.coeff(-d_minus) + cplx(out.gamma, 0));
    out.f1 = f1;
    out.f2 = f.scaled(1.0 / out.beta) - f1;
    return out;
}

}  // namespace qspkit

#endif
