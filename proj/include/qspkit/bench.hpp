#ifndef QSPKIT_BENCH_HPP
#define QSPKIT_BENCH_HPP

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "qspkit/methods.hpp"

namespace qspkit {

/// One benchmark trial. CSV columns follow this field order exactly.
struct BenchRecord {
    std::string method;
    std::string convention;
    double tau = 0.0;
    int d_plus = 0;
    int d_minus = 0;
    double epsilon = std::numeric_limits<double>::infinity();
    long queries = 0;
    double wall_time_ms = 0.0;
    std::uint64_t seed = 0;
    bool converged = false;
    double cert_residual = 0.0;
    double recon_residual = 0.0;
};

inline constexpr double kBenchTimeoutSec = 300.0;

inline std::string bench_csv_header() {
    return "method,convention,tau,d_plus,d_minus,epsilon,queries,wall_time_ms,seed,converged,"
           "cert_residual,recon_residual";
}

inline std::string to_csv_row(const BenchRecord& r) {
    char buf[512];
    std::snprintf(buf, sizeof(buf), "%s,%s,%.17g,%d,%d,%.17g,%ld,%.6g,%llu,%d,%.6g,%.6g",
                  r.method.c_str(), r.convention.c_str(), r.tau, r.d_plus, r.d_minus, r.epsilon,
                  r.queries, r.wall_time_ms, static_cast<unsigned long long>(r.seed),
                  r.converged ? 1 : 0, r.cert_residual, r.recon_residual);
    return buf;
}

inline nlohmann::json to_jsonl(const BenchRecord& r) {
    return {{"method", r.method},       {"convention", r.convention},
            {"tau", r.tau},             {"d_plus", r.d_plus},
            {"d_minus", r.d_minus},     {"epsilon", r.epsilon},
            {"queries", r.queries},     {"wall_time_ms", r.wall_time_ms},
            {"seed", r.seed},           {"converged", r.converged},
            {"cert_residual", r.cert_residual}, {"recon_residual", r.recon_residual}};
}

inline void write_csv(const std::string& path, const std::vector<BenchRecord>& records) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << bench_csv_header() << "\n";
    for (const auto& r : records) out << to_csv_row(r) << "\n";
}

inline void write_jsonl(const std::string& path, const std::vector<BenchRecord>& records) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    for (const auto& r : records) out << to_jsonl(r).dump() << "\n";
}

/// Runs one (method, tau, d, seed) trial; failures are data (converged =
/// false, epsilon = inf), not exceptions.
inline BenchRecord run_one(const MethodId& m, double tau, int d, std::uint64_t seed,
                           double timeout_sec = kBenchTimeoutSec, int opt_max_iter = 5000) {
    BenchRecord rec;
    rec.method = m.id;
    rec.convention = to_string(m.convention);
    rec.tau = tau;
    rec.d_plus = d;
    rec.d_minus = m.convention == Convention::Gqsp ? d : 0;
    rec.seed = seed;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        MethodResult r = find_angles(m, tau, d, seed, std::nullopt, opt_max_iter);
        rec.queries = r.queries;
        rec.cert_residual = r.cert_residual;
        rec.recon_residual = r.recon_residual;
        rec.epsilon = sup_error(r.sequences, tau);
        rec.converged = r.converged;
    } catch (const std::exception&) {
        rec.converged = false;
    }
    rec.wall_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    if (rec.wall_time_ms > 1000.0 * timeout_sec) rec.converged = false;  // over the allotted time
    try {
        rec.queries = query_count(query_family(m), d);
    } catch (const std::exception&) {
    }
    return rec;
}

namespace detail {

struct BenchTask {
    MethodId method;
    double tau;
    int d;
    std::uint64_t seed;
};

inline std::vector<BenchRecord> run_tasks(const std::vector<BenchTask>& tasks, int jobs,
                                          double timeout_sec, int opt_max_iter) {
    std::vector<BenchRecord> out(tasks.size());
    if (jobs <= 1) {
        for (std::size_t i = 0; i < tasks.size(); ++i)
            out[i] = run_one(tasks[i].method, tasks[i].tau, tasks[i].d, tasks[i].seed, timeout_sec,
                             opt_max_iter);
        return out;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            out[i] = run_one(tasks[i].method, tasks[i].tau, tasks[i].d, tasks[i].seed, timeout_sec,
                             opt_max_iter);
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return out;
}

}  // namespace detail

/// Error-vs-degree protocol: `trials` seeded runs per (method, d); records
/// merge in deterministic (method, d, seed) order regardless of scheduling.
inline std::vector<BenchRecord> run_sweep(double tau, const std::vector<int>& d_values,
                                          const std::vector<std::string>& methods, int trials,
                                          int jobs = 1, int opt_max_iter = 5000) {
    std::vector<detail::BenchTask> tasks;
    for (const auto& ms : methods) {
        const MethodId m = parse_method(ms);
        for (int d : d_values)
            for (int s = 0; s < trials; ++s)
                tasks.push_back({m, tau, d, static_cast<std::uint64_t>(s)});
    }
    return detail::run_tasks(tasks, jobs, kBenchTimeoutSec, opt_max_iter);
}

/// Error distribution at fixed d, seeds 0..trials-1.
inline std::vector<BenchRecord> run_cdf(double tau, int d, const std::string& method, int trials,
                                        int jobs = 1, int opt_max_iter = 5000) {
    const MethodId m = parse_method(method);
    std::vector<detail::BenchTask> tasks;
    for (int s = 0; s < trials; ++s) tasks.push_back({m, tau, d, static_cast<std::uint64_t>(s)});
    return detail::run_tasks(tasks, jobs, kBenchTimeoutSec, opt_max_iter);
}

/// Direct methods whose work is tied to the requested degree; the default
/// set for runtime-scaling measurements.
inline std::vector<std::string> default_timing_methods() {
    return {"wx.rf.c", "wx.rf.h", "wz.rf.ch", "wz.p.ch", "g.rf.c", "g.p.c"};
}

/// Wall time per (method, d), single-threaded for clean timings.
inline std::vector<BenchRecord> run_timing(double tau, const std::vector<int>& d_values,
                                           std::vector<std::string> methods = {}) {
    if (methods.empty()) methods = default_timing_methods();
    std::vector<detail::BenchTask> tasks;
    for (const auto& ms : methods) {
        const MethodId m = parse_method(ms);
        for (int d : d_values) tasks.push_back({m, tau, d, 0});
    }
    return detail::run_tasks(tasks, 1, kBenchTimeoutSec, 5000);
}

/// Least-squares slope of log(wall time) against log(d) for one method.
inline double fitted_loglog_slope(const std::vector<BenchRecord>& records, const std::string& method) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (const auto& r : records) {
        if (r.method != method || r.wall_time_ms <= 0.0) continue;
        const double x = std::log(static_cast<double>(r.d_plus));
        const double y = std::log(r.wall_time_ms);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 2) return std::numeric_limits<double>::quiet_NaN();
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Best record per (method, d): key epsilon, ties broken by wall time.
inline std::vector<BenchRecord> best_of(const std::vector<BenchRecord>& records) {
    std::map<std::pair<std::string, int>, BenchRecord> best;
    for (const auto& r : records) {
        const auto key = std::make_pair(r.method, r.d_plus);
        auto it = best.find(key);
        if (it == best.end() || r.epsilon < it->second.epsilon ||
            (r.epsilon == it->second.epsilon && r.wall_time_ms < it->second.wall_time_ms))
            best[key] = r;
    }
    std::vector<BenchRecord> out;
    for (auto& [k, v] : best) out.push_back(v);
    return out;
}

}  // namespace qspkit

#endif
