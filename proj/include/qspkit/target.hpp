#ifndef QSPKIT_TARGET_HPP
#define QSPKIT_TARGET_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

#include "qspkit/convention.hpp"
#include "qspkit/laurent.hpp"
#include "qspkit/specialfn.hpp"

namespace qspkit {

// Truncated Jacobi-Anger expansion of e^{-i tau x} at even order d:
//   J_0 + sum_{k even, k<=d} (-1)^{k/2} J_k (w^k + w^{-k})
//       - i sum_{k odd, k<=d-1} (-1)^{(k-1)/2} J_k (w^k + w^{-k}),
// with T_k(x) = (w^k + w^{-k})/2 giving the x-basis form.

inline LaurentPoly truncate_hamsim_w(double tau, int d) {
    if (d < 2 || d % 2 != 0) throw std::invalid_argument("truncate_hamsim: d must be even and >= 2");
    BesselTable t = bessel_j_table(tau, d);
    LaurentPoly f(-d, std::vector<cplx>(static_cast<std::size_t>(2 * d + 1), cplx(0, 0)));
    f.set_coeff(0, cplx(t.j(0), 0.0));
    for (int k = 2; k <= d; k += 2) {
        const double s = (k / 2) % 2 == 0 ? 1.0 : -1.0;
        const cplx c(s * t.j(k), 0.0);
        f.set_coeff(k, c);
        f.set_coeff(-k, c);
    }
    for (int k = 1; k <= d - 1; k += 2) {
        const double s = ((k - 1) / 2) % 2 == 0 ? 1.0 : -1.0;
        const cplx c(0.0, -s * t.j(k));
        f.set_coeff(k, c);
        f.set_coeff(-k, c);
    }
    return f;
}

inline ChebPoly truncate_hamsim_x(double tau, int d) {
    LaurentPoly f = truncate_hamsim_w(tau, d);
    ChebPoly out = laurent_to_cheb(f);
    std::vector<cplx> c = out.coeffs();
    c.resize(static_cast<std::size_t>(d + 1), cplx(0, 0));
    return ChebPoly(std::move(c));
}

enum class NormMode { BenchmarkHalf, SupNormMargin };

struct normalization_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The truncated target split into individually admissible parts:
/// sum_j alpha * weight_j * part_j == f_trunc coefficient-wise.
struct PartitionedTarget {
    Convention convention = Convention::Gqsp;
    std::vector<LaurentPoly> w_parts;  // WzSx / Gqsp parts
    std::vector<ChebPoly> x_parts;     // WxSz parts (same functions, T_k basis)
    std::vector<cplx> weights;
    double alpha = 2.0;
    int d_plus = 0;
    int d_minus = 0;
    double tau = 0.0;
    int d = 0;

    std::size_t part_count() const { return weights.size(); }

    LaurentPoly recombined_w() const {
        LaurentPoly acc;
        for (std::size_t i = 0; i < w_parts.size(); ++i) acc = acc + w_parts[i].scaled(alpha * weights[i]);
        return acc;
    }
};

namespace detail {

inline void check_part_bounded(const LaurentPoly& p, int d) {
    const int n = 64 * (d + 1);
    for (int j = 0; j < n; ++j) {
        const double th = 2.0 * kPi * j / n;
        if (std::abs(p.eval(cplx(std::cos(th), std::sin(th)))) >= 1.0)
            throw normalization_error("partition: part has sup-norm >= 1 after scaling");
    }
}

inline double sup_on_grid(const LaurentPoly& p, int d) {
    const int n = 64 * (d + 1);
    double m = 0.0;
    for (int j = 0; j < n; ++j) {
        const double th = 2.0 * kPi * j / n;
        m = std::max(m, std::abs(p.eval(cplx(std::cos(th), std::sin(th)))));
    }
    return m;
}

}  // namespace detail

/// Splits the truncated target per convention. Ordinary QSP gets the even
/// real part and the odd real part (the latter combined with weight i);
/// GQSP keeps a single complex part.
inline PartitionedTarget partition(const LaurentPoly& f_trunc, Convention conv, double tau, int d,
                                   NormMode mode = NormMode::BenchmarkHalf) {
    PartitionedTarget out;
    out.convention = conv;
    out.tau = tau;
    out.d = d;
    out.d_plus = d;
    out.d_minus = d;

    if (conv == Convention::Gqsp) {
        double alpha = 2.0;
        if (mode == NormMode::SupNormMargin) alpha = (1.0 + 1e-3) * detail::sup_on_grid(f_trunc, d);
        out.alpha = alpha;
        out.w_parts = {f_trunc.scaled(1.0 / alpha)};
        out.weights = {cplx(1.0, 0.0)};
        detail::check_part_bounded(out.w_parts[0], d);
        return out;
    }

    // Even/odd split. Odd coefficients of the truncation are purely
    // imaginary, so the odd part is exactly i * odd_imag with odd_imag real.
    LaurentPoly even_part, odd_imag;
    for (int k = f_trunc.lo(); k <= f_trunc.hi(); ++k) {
        const cplx c = f_trunc.coeff(k);
        if (k % 2 == 0) even_part.set_coeff(k, cplx(c.real(), 0.0));
        else odd_imag.set_coeff(k, cplx(c.imag(), 0.0));
    }

    double alpha = 2.0;
    if (mode == NormMode::SupNormMargin) {
        const double m = std::max(detail::sup_on_grid(even_part, d), detail::sup_on_grid(odd_imag, d));
        alpha = (1.0 + 1e-3) * m;
    }
    out.alpha = alpha;
    out.w_parts = {even_part.scaled(1.0 / alpha), odd_imag.scaled(1.0 / alpha)};
    out.weights = {cplx(1.0, 0.0), cplx(0.0, 1.0)};
    for (const auto& p : out.w_parts) detail::check_part_bounded(p, d);
    if (conv == Convention::WxSz)
        out.x_parts = {laurent_to_cheb(out.w_parts[0]), laurent_to_cheb(out.w_parts[1])};
    return out;
}

inline PartitionedTarget partition_hamsim(double tau, int d, Convention conv,
                                          NormMode mode = NormMode::BenchmarkHalf) {
    return partition(truncate_hamsim_w(tau, d), conv, tau, d, mode);
}

}  // namespace qspkit

#endif
