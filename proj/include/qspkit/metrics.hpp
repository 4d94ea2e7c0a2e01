#ifndef QSPKIT_METRICS_HPP
#define QSPKIT_METRICS_HPP

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "qspkit/qspmodel.hpp"

namespace qspkit {

/// Implementation error against e^{-i tau x}: the weighted sequences realize
/// the half-scaled target, so the combined value is rescaled by 2 before the
/// sup-norm against the full target is taken. The grid refines 4x until the
/// maximum is stable to 1%.
inline double sup_error(const std::vector<AngleSequence>& sequences, double tau) {
    auto combined_at = [&](double theta) {
        const double x = std::cos(theta);
        cplx acc(0, 0);
        for (const auto& s : sequences) {
            const cplx point = s.convention == Convention::WxSz ? cplx(x, 0) : std::polar(1.0, theta);
            acc += s.weight * implemented_function(s, point);
        }
        return acc;
    };
    int n = 4096;
    double prev = -1.0;
    for (;;) {
        double worst = 0.0;
        for (int j = 0; j < n; ++j) {
            const double theta = 2.0 * kPi * j / n;
            const cplx target = std::polar(1.0, -tau * std::cos(theta));
            worst = std::max(worst, std::abs(2.0 * combined_at(theta) - target));
        }
        if (prev >= 0.0 && std::abs(worst - prev) <= 0.01 * std::max(worst, 1e-300)) return worst;
        prev = worst;
        if (n >= (1 << 16)) return worst;
        n *= 4;
    }
}

enum class QueryFamily {
    OrdinaryRootFinding,  // 4d - 2
    OrdinaryProny,        // 8d - 4
    OrdinaryOptimize,     // 8d - 4
    GqspRootFinding,      // 2d
    GqspProny,            // 4d
    GqspOptimize,         // 2d
};

/// Calls to controlled signal operators at truncation order d.
inline long query_count(QueryFamily family, int d) {
    if (d < 2 || d % 2 != 0) throw std::invalid_argument("query_count: d must be even and >= 2");
    switch (family) {
        case QueryFamily::OrdinaryRootFinding: return 4L * d - 2;
        case QueryFamily::OrdinaryProny:
        case QueryFamily::OrdinaryOptimize: return 8L * d - 4;
        case QueryFamily::GqspRootFinding:
        case QueryFamily::GqspOptimize: return 2L * d;
        case QueryFamily::GqspProny: return 4L * d;
    }
    throw std::invalid_argument("query_count: unknown method family");
}

}  // namespace qspkit

#endif
