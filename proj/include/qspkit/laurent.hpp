#ifndef QSPKIT_LAURENT_HPP
#define QSPKIT_LAURENT_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "qspkit/fft.hpp"

namespace qspkit {

using cplx = std::complex<double>;

inline constexpr double kTrimEps = 1e-14;   // degree-detection threshold
inline constexpr double kPi = 3.141592653589793238462643383279502884;

enum class Parity { Even, Odd, None };

/// Complex-coefficient Laurent polynomial, dense over an exponent window
/// [lo, hi]. Edge coefficients below the trim threshold may be retained on
/// purpose (degree-window requests keep them); detected_lo/hi report the
/// numerically significant window. The zero polynomial has an empty window.
class LaurentPoly {
  public:
    LaurentPoly() = default;

    LaurentPoly(int lo, std::vector<cplx> coeffs) : lo_(lo), c_(std::move(coeffs)) {
        if (c_.empty()) lo_ = 0;
    }

    static LaurentPoly zero() { return LaurentPoly(); }

    static LaurentPoly monomial(int k, cplx a) {
        if (std::abs(a) == 0.0) return LaurentPoly();
        return LaurentPoly(k, {a});
    }

    static LaurentPoly constant(cplx a) { return monomial(0, a); }

    bool is_zero() const { return c_.empty(); }
    int lo() const { return lo_; }
    int hi() const { return lo_ + static_cast<int>(c_.size()) - 1; }
    std::size_t size() const { return c_.size(); }
    const std::vector<cplx>& coeffs() const { return c_; }

    cplx coeff(int k) const {
        if (c_.empty() || k < lo_ || k > hi()) return cplx(0.0, 0.0);
        return c_[static_cast<std::size_t>(k - lo_)];
    }

    void set_coeff(int k, cplx v) {
        if (c_.empty()) {
            lo_ = k;
            c_.assign(1, v);
            return;
        }
        if (k < lo_) {
            c_.insert(c_.begin(), static_cast<std::size_t>(lo_ - k), cplx(0, 0));
            lo_ = k;
        } else if (k > hi()) {
            c_.resize(static_cast<std::size_t>(k - lo_ + 1), cplx(0, 0));
        }
        c_[static_cast<std::size_t>(k - lo_)] = v;
    }

    double max_abs_coeff() const {
        double m = 0.0;
        for (const auto& v : c_) m = std::max(m, std::abs(v));
        return m;
    }

    /// Lowest exponent with |coefficient| > eps; INT_MAX sentinel for zero.
    int detected_lo(double eps = kTrimEps) const {
        for (std::size_t i = 0; i < c_.size(); ++i)
            if (std::abs(c_[i]) > eps) return lo_ + static_cast<int>(i);
        return std::numeric_limits<int>::max();
    }

    int detected_hi(double eps = kTrimEps) const {
        for (std::size_t i = c_.size(); i-- > 0;)
            if (std::abs(c_[i]) > eps) return lo_ + static_cast<int>(i);
        return std::numeric_limits<int>::min();
    }

    /// max(|detected_lo|, detected_hi); -1 for (numerically) zero.
    int degree(double eps = kTrimEps) const {
        int dl = detected_lo(eps);
        if (dl == std::numeric_limits<int>::max()) return -1;
        return std::max(std::abs(dl), std::abs(detected_hi(eps)));
    }

    LaurentPoly trimmed(double eps = kTrimEps) const {
        int dl = detected_lo(eps);
        if (dl == std::numeric_limits<int>::max()) return LaurentPoly();
        int dh = detected_hi(eps);
        std::vector<cplx> out(c_.begin() + (dl - lo_), c_.begin() + (dh - lo_ + 1));
        return LaurentPoly(dl, std::move(out));
    }

    Parity parity(double eps = kTrimEps) const {
        bool even_ok = true, odd_ok = true;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (std::abs(c_[i]) <= eps) continue;
            int k = lo_ + static_cast<int>(i);
            if (k % 2 == 0) odd_ok = false;
            else even_ok = false;
        }
        if (even_ok && !c_.empty()) return Parity::Even;
        if (odd_ok) return Parity::Odd;
        return Parity::None;
    }

    bool is_real(double eps = 1e-12) const {
        for (const auto& v : c_)
            if (std::abs(v.imag()) > eps) return false;
        return true;
    }

    /// Horner evaluation, split at exponent 0 (negative part in 1/w).
    cplx eval(cplx w) const {
        if (w == cplx(0.0, 0.0)) throw std::invalid_argument("LaurentPoly::eval: w = 0");
        if (c_.empty()) return cplx(0.0, 0.0);
        auto ipow = [](cplx base, int e) {
            cplx r(1.0, 0.0);
            while (e > 0) {
                if (e & 1) r *= base;
                base *= base;
                e >>= 1;
            }
            return r;
        };
        const int h = hi();
        cplx acc_pos(0.0, 0.0);
        if (h >= 0) {
            const int kmin = std::max(lo_, 0);
            for (int k = h; k >= kmin; --k) acc_pos = acc_pos * w + coeff(k);
            acc_pos *= ipow(w, kmin);
        }
        cplx acc_neg(0.0, 0.0);
        if (lo_ < 0) {
            const cplx iw = cplx(1.0, 0.0) / w;
            const int kend = std::min(h, -1);
            for (int k = lo_; k <= kend; ++k) acc_neg = acc_neg * iw + coeff(k);
            acc_neg *= ipow(iw, -kend);
        }
        return acc_pos + acc_neg;
    }

    /// exponent k -> -k with conjugated coefficients; equals conj(p(w)) on U(1).
    LaurentPoly star_inverse() const {
        if (c_.empty()) return LaurentPoly();
        std::vector<cplx> out(c_.size());
        for (std::size_t i = 0; i < c_.size(); ++i) out[c_.size() - 1 - i] = std::conj(c_[i]);
        return LaurentPoly(-hi(), std::move(out));
    }

    /// exponent k -> -k, coefficients unchanged (p(1/w)).
    LaurentPoly reversed() const {
        if (c_.empty()) return LaurentPoly();
        std::vector<cplx> out(c_.rbegin(), c_.rend());
        return LaurentPoly(-hi(), std::move(out));
    }

    LaurentPoly conj_coeffs() const {
        std::vector<cplx> out(c_);
        for (auto& v : out) v = std::conj(v);
        return LaurentPoly(lo_, std::move(out));
    }

    LaurentPoly shifted(int s) const {
        if (c_.empty()) return LaurentPoly();
        return LaurentPoly(lo_ + s, c_);
    }

    LaurentPoly scaled(cplx a) const {
        std::vector<cplx> out(c_);
        for (auto& v : out) v *= a;
        return LaurentPoly(lo_, std::move(out));
    }

    friend LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        int lo = std::min(a.lo_, b.lo_);
        int hi = std::max(a.hi(), b.hi());
        std::vector<cplx> out(static_cast<std::size_t>(hi - lo + 1), cplx(0, 0));
        for (int k = a.lo_; k <= a.hi(); ++k) out[k - lo] += a.coeff(k);
        for (int k = b.lo_; k <= b.hi(); ++k) out[k - lo] += b.coeff(k);
        return LaurentPoly(lo, std::move(out));
    }

    friend LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b) {
        return a + b.scaled(cplx(-1.0, 0.0));
    }

  private:
    int lo_ = 0;
    std::vector<cplx> c_;
};

inline constexpr std::size_t kFftMulCrossover = 128;  // result length

/// Direct convolution: each output coefficient is relatively accurate even
/// when magnitudes span hundreds of decades (the FFT path has an absolute
/// noise floor near eps * ||a|| ||b||, which buries small tail products).
inline LaurentPoly mul_direct(const LaurentPoly& a, const LaurentPoly& b) {
    if (a.is_zero() || b.is_zero()) return LaurentPoly();
    const std::size_t na = a.size(), nb = b.size();
    std::vector<cplx> out(na + nb - 1, cplx(0, 0));
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t j = 0; j < nb; ++j) out[i + j] += a.coeffs()[i] * b.coeffs()[j];
    return LaurentPoly(a.lo() + b.lo(), std::move(out));
}

/// Product with exponent window [a.lo+b.lo, a.hi+b.hi]; direct convolution
/// below the crossover, FFT convolution above it.
inline LaurentPoly mul(const LaurentPoly& a, const LaurentPoly& b) {
    if (a.is_zero() || b.is_zero()) return LaurentPoly();
    const std::size_t na = a.size(), nb = b.size(), nr = na + nb - 1;
    const int lo = a.lo() + b.lo();
    std::vector<cplx> out(nr, cplx(0, 0));
    if (nr < kFftMulCrossover) {
        for (std::size_t i = 0; i < na; ++i)
            for (std::size_t j = 0; j < nb; ++j) out[i + j] += a.coeffs()[i] * b.coeffs()[j];
    } else {
        const std::size_t n = detail::next_pow2(nr);
        std::vector<cplx> fa(n, cplx(0, 0)), fb(n, cplx(0, 0));
        std::copy(a.coeffs().begin(), a.coeffs().end(), fa.begin());
        std::copy(b.coeffs().begin(), b.coeffs().end(), fb.begin());
        detail::fft_radix2(fa, -1);
        detail::fft_radix2(fb, -1);
        for (std::size_t i = 0; i < n; ++i) fa[i] *= fb[i];
        detail::fft_radix2(fa, +1);
        std::copy(fa.begin(), fa.begin() + static_cast<std::ptrdiff_t>(nr), out.begin());
    }
    return LaurentPoly(lo, std::move(out));
}

/// Polynomial in x on [-1,1], stored in the Chebyshev basis (coefficient k
/// multiplies T_k). Degree, parity and coefficient conjugation behave exactly
/// as they would for monomial coefficients; the basis choice only matters for
/// conditioning at high degree.
class ChebPoly {
  public:
    ChebPoly() = default;
    explicit ChebPoly(std::vector<cplx> coeffs) : c_(std::move(coeffs)) {}

    static ChebPoly constant(cplx a) { return ChebPoly({a}); }

    static ChebPoly basis(int k, cplx a = cplx(1.0, 0.0)) {
        std::vector<cplx> c(static_cast<std::size_t>(k + 1), cplx(0, 0));
        c.back() = a;
        return ChebPoly(std::move(c));
    }

    bool is_zero(double eps = 0.0) const {
        for (const auto& v : c_)
            if (std::abs(v) > eps) return false;
        return true;
    }

    const std::vector<cplx>& coeffs() const { return c_; }
    std::size_t size() const { return c_.size(); }

    cplx coeff(int k) const {
        if (k < 0 || k >= static_cast<int>(c_.size())) return cplx(0, 0);
        return c_[static_cast<std::size_t>(k)];
    }

    void set_coeff(int k, cplx v) {
        if (k >= static_cast<int>(c_.size())) c_.resize(static_cast<std::size_t>(k + 1), cplx(0, 0));
        c_[static_cast<std::size_t>(k)] = v;
    }

    int degree(double eps = kTrimEps) const {
        for (std::size_t i = c_.size(); i-- > 0;)
            if (std::abs(c_[i]) > eps) return static_cast<int>(i);
        return -1;
    }

    ChebPoly trimmed(double eps = kTrimEps) const {
        int d = degree(eps);
        if (d < 0) return ChebPoly();
        return ChebPoly(std::vector<cplx>(c_.begin(), c_.begin() + d + 1));
    }

    Parity parity(double eps = kTrimEps) const {
        bool even_ok = true, odd_ok = true;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (std::abs(c_[i]) <= eps) continue;
            if (i % 2 == 0) odd_ok = false;
            else even_ok = false;
        }
        if (even_ok && !c_.empty()) return Parity::Even;
        if (odd_ok) return Parity::Odd;
        return Parity::None;
    }

    bool is_real(double eps = 1e-12) const {
        for (const auto& v : c_)
            if (std::abs(v.imag()) > eps) return false;
        return true;
    }

    double max_abs_coeff() const {
        double m = 0.0;
        for (const auto& v : c_) m = std::max(m, std::abs(v));
        return m;
    }

    ChebPoly conj_coeffs() const {
        std::vector<cplx> out(c_);
        for (auto& v : out) v = std::conj(v);
        return ChebPoly(std::move(out));
    }

    ChebPoly real_part() const {
        std::vector<cplx> out(c_);
        for (auto& v : out) v = cplx(v.real(), 0.0);
        return ChebPoly(std::move(out));
    }

    ChebPoly scaled(cplx a) const {
        std::vector<cplx> out(c_);
        for (auto& v : out) v *= a;
        return ChebPoly(std::move(out));
    }

    /// Clenshaw recurrence; valid for complex x as well.
    cplx eval(cplx x) const {
        if (c_.empty()) return cplx(0, 0);
        cplx b1(0, 0), b2(0, 0);
        for (std::size_t i = c_.size(); i-- > 1;) {
            cplx b0 = 2.0 * x * b1 - b2 + c_[i];
            b2 = b1;
            b1 = b0;
        }
        return x * b1 - b2 + c_[0];
    }

    friend ChebPoly operator+(const ChebPoly& a, const ChebPoly& b) {
        std::vector<cplx> out(std::max(a.c_.size(), b.c_.size()), cplx(0, 0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) out[i] += a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) out[i] += b.c_[i];
        return ChebPoly(std::move(out));
    }

    friend ChebPoly operator-(const ChebPoly& a, const ChebPoly& b) {
        return a + b.scaled(cplx(-1.0, 0.0));
    }

  private:
    std::vector<cplx> c_;
};

/// T_i T_j = (T_{i+j} + T_{|i-j|}) / 2.
inline ChebPoly mul(const ChebPoly& a, const ChebPoly& b) {
    if (a.size() == 0 || b.size() == 0) return ChebPoly();
    std::vector<cplx> out(a.size() + b.size() - 1, cplx(0, 0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        const cplx ai = a.coeffs()[i];
        if (ai == cplx(0, 0)) continue;
        for (std::size_t j = 0; j < b.size(); ++j) {
            const cplx h = 0.5 * ai * b.coeffs()[j];
            out[i + j] += h;
            out[static_cast<std::size_t>(std::abs(static_cast<int>(i) - static_cast<int>(j)))] += h;
        }
    }
    return ChebPoly(std::move(out));
}

/// x * p, in the Chebyshev basis.
inline ChebPoly mul_by_x(const ChebPoly& p) { return mul(ChebPoly::basis(1), p); }

/// (1 - x^2) * p = (T_0/2 - T_2/2) * p.
inline ChebPoly mul_by_one_minus_x2(const ChebPoly& p) {
    ChebPoly m({cplx(0.5, 0), cplx(0, 0), cplx(-0.5, 0)});
    return mul(m, p);
}

/// T_k(x) -> (w^k + w^{-k}) / 2; satisfies eval(result, e^{i t}) = p(cos t).
inline LaurentPoly cheb_to_laurent(const ChebPoly& p) {
    if (p.size() == 0) return LaurentPoly();
    const int n = static_cast<int>(p.size()) - 1;
    std::vector<cplx> out(static_cast<std::size_t>(2 * n + 1), cplx(0, 0));
    out[static_cast<std::size_t>(n)] = p.coeff(0);
    for (int k = 1; k <= n; ++k) {
        const cplx h = 0.5 * p.coeff(k);
        out[static_cast<std::size_t>(n + k)] += h;
        out[static_cast<std::size_t>(n - k)] += h;
    }
    return LaurentPoly(-n, std::move(out));
}

/// Inverse of cheb_to_laurent for symmetric windows (p(w) with p_k == p_{-k}).
inline ChebPoly laurent_to_cheb(const LaurentPoly& p) {
    if (p.is_zero()) return ChebPoly();
    const int n = std::max(std::abs(p.lo()), std::abs(p.hi()));
    std::vector<cplx> out(static_cast<std::size_t>(n + 1), cplx(0, 0));
    out[0] = p.coeff(0);
    for (int k = 1; k <= n; ++k) out[static_cast<std::size_t>(k)] = p.coeff(k) + p.coeff(-k);
    return ChebPoly(std::move(out));
}

inline double normalize_angle(double a) {
    a = std::fmod(a, 2.0 * kPi);
    if (a <= -kPi) a += 2.0 * kPi;
    if (a > kPi) a -= 2.0 * kPi;
    return a;
}

}  // namespace qspkit

#endif
