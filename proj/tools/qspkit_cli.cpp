// Command-line front end: find-angles, verify, and the bench protocols.

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "qspkit/qspkit.hpp"
#include "qspkit/sequence_io.hpp"

namespace {

using namespace qspkit;

int default_jobs() {
    if (const char* env = std::getenv("QSPKIT_JOBS")) {
        const int j = std::atoi(env);
        if (j >= 1) return j;
    }
    return 1;
}

std::string method_id_from_flags(const std::string& conv, const std::string& method,
                                 const std::string& decomp) {
    std::string basis = conv == "gqsp" ? "g" : conv;
    std::string comp;
    if (method == "rf") comp = "rf";
    else if (method == "drf") comp = "drf";
    else if (method == "prony") comp = "p";
    else if (method == "opt") comp = "o";
    else throw std::invalid_argument("unknown --method: " + method);
    if (comp == "o") {
        if (!decomp.empty()) throw std::invalid_argument("--decomp does not apply to --method opt");
        return basis + ".o";
    }
    std::string dec;
    if (decomp == "carve") dec = "c";
    else if (decomp == "halve") dec = "h";
    else if (decomp == "halve-cap") dec = "ch";
    else if (decomp.empty()) throw std::invalid_argument("--decomp is required for direct methods");
    else throw std::invalid_argument("unknown --decomp: " + decomp);
    return basis + "." + comp + "." + dec;
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) if (!item.empty()) out.push_back(std::stoi(item));
    return out;
}

std::vector<std::string> parse_str_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) if (!item.empty()) out.push_back(item);
    return out;
}

void emit_records(const std::vector<BenchRecord>& records, const std::string& out_csv,
                  const std::string& out_jsonl) {
    if (out_csv.empty()) {
        std::cout << bench_csv_header() << "\n";
        for (const auto& r : records) std::cout << to_csv_row(r) << "\n";
    } else {
        write_csv(out_csv, records);
        std::cout << "wrote " << records.size() << " records to " << out_csv << "\n";
    }
    if (!out_jsonl.empty()) write_jsonl(out_jsonl, records);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"QSP / GQSP phase-angle finding toolkit"};
    app.require_subcommand(1);

    // --- find-angles ---
    std::string fa_conv, fa_method, fa_decomp, fa_out;
    double fa_tau = 10.0;
    int fa_degree = 0;
    double fa_eps_cap = kDefaultEpsCap;
    std::uint64_t fa_seed = 0;
    auto* fa = app.add_subcommand("find-angles", "compute an angle-sequence file for e^{-i tau x}");
    fa->add_option("--convention", fa_conv, "wx | wz | gqsp")->required();
    fa->add_option("--method", fa_method, "rf | drf | prony | opt")->required();
    fa->add_option("--decomp", fa_decomp, "carve | halve | halve-cap");
    fa->add_option("--tau", fa_tau, "evolution time")->required();
    fa->add_option("--degree", fa_degree, "truncation order d (even)")->required();
    fa->add_option("--out", fa_out, "output angle-sequence JSON path")->required();
    fa->add_option("--eps-cap", fa_eps_cap, "capitalization constant for halve-cap");
    fa->add_option("--seed", fa_seed, "seed for randomized completion / optimizer init");

    // --- verify ---
    std::string v_in;
    double v_tau = 10.0, v_tol = 1e-8;
    auto* vf = app.add_subcommand("verify", "recompute epsilon and unitarity residuals from a file");
    vf->add_option("--in", v_in, "angle-sequence JSON path")->required();
    vf->add_option("--tau", v_tau, "evolution time")->required();
    vf->add_option("--tol", v_tol, "acceptance tolerance on epsilon");

    // --- bench ---
    auto* bench = app.add_subcommand("bench", "benchmark protocols (sweep / cdf / timing)");
    bench->require_subcommand(1);
    int jobs = default_jobs();
    bench->add_option("--jobs", jobs, "worker pool size (default QSPKIT_JOBS or 1)");

    double bs_tau = 10.0;
    std::string bs_methods = "g.p.c";
    int bs_dmin = 4, bs_dmax = 64, bs_dstep = 2, bs_trials = 1, bs_optiter = 5000;
    std::string bs_out, bs_jsonl;
    auto* bsweep = bench->add_subcommand("sweep", "error vs degree, trials per point");
    bsweep->add_option("--tau", bs_tau)->required();
    bsweep->add_option("--methods", bs_methods, "comma-separated method ids");
    bsweep->add_option("--dmin", bs_dmin);
    bsweep->add_option("--dmax", bs_dmax);
    bsweep->add_option("--dstep", bs_dstep);
    bsweep->add_option("--trials", bs_trials);
    bsweep->add_option("--opt-max-iter", bs_optiter, "iteration cap for optimization methods");
    bsweep->add_option("--out", bs_out, "CSV path (stdout when omitted)");
    bsweep->add_option("--jsonl", bs_jsonl, "JSON-lines mirror path");

    double bc_tau = 10.0;
    int bc_d = 34, bc_trials = 100, bc_optiter = 5000;
    std::string bc_method = "g.o", bc_out, bc_jsonl;
    auto* bcdf = bench->add_subcommand("cdf", "error distribution at fixed degree");
    bcdf->add_option("--tau", bc_tau)->required();
    bcdf->add_option("--d", bc_d)->required();
    bcdf->add_option("--method", bc_method)->required();
    bcdf->add_option("--trials", bc_trials);
    bcdf->add_option("--opt-max-iter", bc_optiter);
    bcdf->add_option("--out", bc_out, "CSV path (stdout when omitted)");
    bcdf->add_option("--jsonl", bc_jsonl);

    double bt_tau = 10.0;
    std::string bt_methods, bt_dvalues = "16,32,64,128,256", bt_out, bt_jsonl;
    auto* btime = bench->add_subcommand("timing", "runtime scaling per method");
    btime->add_option("--tau", bt_tau)->required();
    btime->add_option("--methods", bt_methods, "comma-separated method ids (default direct set)");
    btime->add_option("--dvalues", bt_dvalues, "comma-separated degrees");
    btime->add_option("--out", bt_out, "CSV path (stdout when omitted)");
    btime->add_option("--jsonl", bt_jsonl);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*fa) {
            if (fa_degree < 2 || fa_degree % 2 != 0) {
                std::cerr << "error: --degree must be even and >= 2\n";
                return 1;
            }
            MethodId m;
            try {
                m = parse_method(method_id_from_flags(fa_conv, fa_method, fa_decomp));
            } catch (const std::invalid_argument& e) {
                std::cerr << "error: " << e.what() << "\n";
                return 1;
            }
            MethodResult r;
            try {
                r = find_angles(m, fa_tau, fa_degree, fa_seed, fa_eps_cap);
            } catch (const method_error& e) {
                std::cerr << "method failure: " << e.what() << "\n";
                return 2;
            }
            const double eps = sup_error(r.sequences, fa_tau);
            save_sequences(fa_out, r.sequences);
            std::cout << "method=" << m.id << "\n";
            std::cout << "epsilon=" << eps << "\n";
            std::cout << "queries=" << r.queries << "\n";
            std::cout << "cert_residual=" << r.cert_residual << "\n";
            std::cout << "recon_residual=" << r.recon_residual << "\n";
            std::cout << "converged=" << (r.converged ? 1 : 0) << "\n";
            return 0;
        }

        if (*vf) {
            std::vector<AngleSequence> seqs;
            try {
                seqs = load_sequences(v_in);
            } catch (const std::exception& e) {
                std::cerr << "error: " << e.what() << "\n";
                return 1;
            }
            const double eps = sup_error(seqs, v_tau);
            double uni = 0.0;
            for (const auto& s : seqs) {
                for (int j = 0; j < 64; ++j) {
                    const double th = 2.0 * kPi * (j + 0.3) / 64;
                    const cplx pt = s.convention == Convention::WxSz ? cplx(std::cos(th), 0)
                                                                     : std::polar(1.0, th);
                    uni = std::max(uni, eval_sequence(s, pt).unitarity_residual());
                }
            }
            std::cout << "epsilon=" << eps << "\n";
            std::cout << "unitarity_residual=" << uni << "\n";
            return eps <= v_tol ? 0 : 3;
        }

        if (*bsweep) {
            std::vector<int> ds;
            for (int d = bs_dmin; d <= bs_dmax; d += bs_dstep)
                if (d % 2 == 0) ds.push_back(d);
            auto records = run_sweep(bs_tau, ds, parse_str_list(bs_methods), bs_trials, jobs, bs_optiter);
            emit_records(records, bs_out, bs_jsonl);
            return 0;
        }
        if (*bcdf) {
            auto records = run_cdf(bc_tau, bc_d, bc_method, bc_trials, jobs, bc_optiter);
            emit_records(records, bc_out, bc_jsonl);
            return 0;
        }
        if (*btime) {
            auto methods = bt_methods.empty() ? default_timing_methods() : parse_str_list(bt_methods);
            auto records = run_timing(bt_tau, parse_int_list(bt_dvalues), methods);
            emit_records(records, bt_out, bt_jsonl);
            for (const auto& ms : methods)
                std::cout << "# slope " << ms << " = " << fitted_loglog_slope(records, ms) << "\n";
            return 0;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
