#ifndef QSPKIT_SPECIALFN_HPP
#define QSPKIT_SPECIALFN_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace qspkit {

/// First-kind Bessel values J_0(tau) .. J_kmax(tau) at fixed argument.
struct BesselTable {
    double tau = 0.0;
    std::vector<double> values;

    double j(int k) const {
        if (k < 0) throw std::invalid_argument("BesselTable: negative order");
        if (k >= static_cast<int>(values.size())) return 0.0;
        return values[static_cast<std::size_t>(k)];
    }
    int kmax() const { return static_cast<int>(values.size()) - 1; }
};

/// Miller backward recurrence with downward rescaling; normalized with
/// J_0 + 2 sum_{k>=1} J_{2k} = 1. Relative error ~1e-13 for non-underflowed
/// entries.
inline BesselTable bessel_j_table(double tau, int kmax) {
    if (!(tau > 0.0)) throw std::invalid_argument("bessel_j_table: tau must be > 0");
    if (kmax < 0) throw std::invalid_argument("bessel_j_table: kmax must be >= 0");

    const int start = kmax + 16 + static_cast<int>(std::ceil(std::sqrt(40.0 * std::max(kmax, 1))));
    std::vector<double> raw(static_cast<std::size_t>(start + 2), 0.0);
    raw[static_cast<std::size_t>(start + 1)] = 0.0;
    raw[static_cast<std::size_t>(start)] = 1e-280;
    const double big = 1e260;
    for (int k = start; k >= 1; --k) {
        double v = (2.0 * k / tau) * raw[static_cast<std::size_t>(k)] - raw[static_cast<std::size_t>(k + 1)];
        raw[static_cast<std::size_t>(k - 1)] = v;
        if (std::abs(v) > big) {
            for (int j = k - 1; j <= start + 1; ++j) raw[static_cast<std::size_t>(j)] *= 1e-260;
        }
    }
    double norm = raw[0];
    for (int k = 2; k <= start; k += 2) norm += 2.0 * raw[static_cast<std::size_t>(k)];
    BesselTable t;
    t.tau = tau;
    t.values.resize(static_cast<std::size_t>(kmax + 1));
    for (int k = 0; k <= kmax; ++k) t.values[static_cast<std::size_t>(k)] = raw[static_cast<std::size_t>(k)] / norm;
    return t;
}

/// 2 sum_{k>d} |J_k(tau)|, the truncation tail bound. Extends the table until
/// the remainder is negligible.
inline double bessel_tail_bound(double tau, int d) {
    int kmax = std::max(d + 8, static_cast<int>(std::ceil(tau)) + 8);
    for (;;) {
        BesselTable t = bessel_j_table(tau, kmax);
        double s = 0.0;
        for (int k = d + 1; k <= kmax; ++k) s += std::abs(t.j(k));
        const double last = std::abs(t.j(kmax));
        if (last < 1e-30 || last < 1e-18 * s) return 2.0 * s;
        kmax *= 2;
        if (kmax > 1 << 22) return 2.0 * s;
    }
}

/// Smallest even d with tail bound below eps.
inline int bessel_auto_order(double tau, double eps = 1e-16) {
    int d = static_cast<int>(std::ceil(tau)) + 2;
    if (d % 2 != 0) ++d;
    while (bessel_tail_bound(tau, d) >= eps) {
        d += 2;
        if (d > 1 << 20) break;
    }
    return d;
}

}  // namespace qspkit

#endif
