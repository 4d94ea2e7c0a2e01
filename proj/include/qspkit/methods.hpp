#ifndef QSPKIT_METHODS_HPP
#define QSPKIT_METHODS_HPP

#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qspkit/completion.hpp"
#include "qspkit/decomposition.hpp"
#include "qspkit/metrics.hpp"
#include "qspkit/optimize.hpp"
#include "qspkit/target.hpp"

namespace qspkit {

struct method_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class CompletionRoute { RootFindRandom, RootFindDet, Prony, Optimize };
enum class DecompRoute { Carve, Halve, HalveCap, None };

/// Parsed `<basis>.<completion>.<decomp>` method id (legend notation:
/// wx/wz/g x rf/drf/p x c/h/ch, plus the optimization id `<basis>.o`).
struct MethodId {
    Convention convention = Convention::Gqsp;
    CompletionRoute completion = CompletionRoute::Prony;
    DecompRoute decomp = DecompRoute::Carve;
    std::string id;

    bool is_optimize() const { return completion == CompletionRoute::Optimize; }
};

inline MethodId parse_method(const std::string& id) {
    std::vector<std::string> tok;
    std::stringstream ss(id);
    std::string piece;
    while (std::getline(ss, piece, '.')) tok.push_back(piece);
    if (tok.size() < 2) throw std::invalid_argument("method id must look like wz.p.h or g.o: " + id);

    MethodId m;
    m.id = id;
    if (tok[0] == "wx") m.convention = Convention::WxSz;
    else if (tok[0] == "wz") m.convention = Convention::WzSx;
    else if (tok[0] == "g" || tok[0] == "gqsp") m.convention = Convention::Gqsp;
    else throw std::invalid_argument("unknown basis in method id: " + id);

    if (tok[1] == "o") {
        if (tok.size() != 2) throw std::invalid_argument("optimization id takes no decomposition: " + id);
        m.completion = CompletionRoute::Optimize;
        m.decomp = DecompRoute::None;
        return m;
    }
    if (tok.size() != 3) throw std::invalid_argument("direct method id needs a decomposition: " + id);
    if (tok[1] == "rf") m.completion = CompletionRoute::RootFindRandom;
    else if (tok[1] == "drf") m.completion = CompletionRoute::RootFindDet;
    else if (tok[1] == "p") m.completion = CompletionRoute::Prony;
    else throw std::invalid_argument("unknown completion in method id: " + id);

    if (tok[2] == "c") m.decomp = DecompRoute::Carve;
    else if (tok[2] == "h") m.decomp = DecompRoute::Halve;
    else if (tok[2] == "ch") m.decomp = DecompRoute::HalveCap;
    else throw std::invalid_argument("unknown decomposition in method id: " + id);

    // combination rules
    if (m.convention == Convention::WxSz) {
        if (m.completion == CompletionRoute::Prony)
            throw std::invalid_argument("wx has no Prony completion: " + id);
        if (m.completion == CompletionRoute::RootFindDet)
            throw std::invalid_argument("wx root finding has no randomized/deterministic split; use wx.rf: " + id);
        if (m.decomp == DecompRoute::HalveCap)
            throw std::invalid_argument("capitalized halving is a wz decomposition: " + id);
    } else if (m.convention == Convention::WzSx) {
        if (m.decomp == DecompRoute::Carve)
            throw std::invalid_argument("wz decomposes via halving: " + id);
    } else {
        if (m.decomp != DecompRoute::Carve)
            throw std::invalid_argument("gqsp decomposes via carving: " + id);
    }
    return m;
}

inline QueryFamily query_family(const MethodId& m) {
    if (m.convention == Convention::Gqsp) {
        if (m.is_optimize()) return QueryFamily::GqspOptimize;
        if (m.completion == CompletionRoute::Prony) return QueryFamily::GqspProny;
        return QueryFamily::GqspRootFinding;
    }
    if (m.is_optimize()) return QueryFamily::OrdinaryOptimize;
    if (m.completion == CompletionRoute::Prony) return QueryFamily::OrdinaryProny;
    return QueryFamily::OrdinaryRootFinding;
}

struct MethodResult {
    std::vector<AngleSequence> sequences;
    double cert_residual = 0.0;
    double recon_residual = 0.0;
    bool converged = true;
    long queries = 0;
};

inline constexpr double kDefaultEpsCap = 1e-8;

/// End-to-end Hamiltonian-simulation angle finding for one method id:
/// truncate, partition, (capitalize,) complete, decompose / optimize.
inline MethodResult find_angles(const MethodId& m, double tau, int d, std::uint64_t seed = 0,
                                std::optional<double> eps_cap_opt = std::nullopt,
                                int opt_max_iter = 5000) {
    if (d < 2 || d % 2 != 0) throw std::invalid_argument("find_angles: d must be even and >= 2");
    const double eps_cap = eps_cap_opt.value_or(kDefaultEpsCap);
    PartitionedTarget pt = partition_hamsim(tau, d, m.convention);
    MethodResult out;
    out.queries = query_count(query_family(m), d);

    auto finish_seq = [&](AngleSequence s, std::size_t part_idx, cplx weight) {
        s.alpha = pt.alpha;
        s.weight = weight;
        s.method = m.id;
        s.meta.tau = tau;
        s.meta.d = d;
        s.meta.seed = seed;
        out.cert_residual = std::max(out.cert_residual, s.cert_residual);
        out.recon_residual = std::max(out.recon_residual, s.recon_residual);
        (void)part_idx;
        out.sequences.push_back(std::move(s));
    };

    try {
        if (m.convention == Convention::Gqsp) {
            const LaurentPoly& part = pt.w_parts[0];
            if (m.is_optimize()) {
                OptimizeResult r = optimize_angles(make_gqsp_loss(part, d), OptInit::Random, seed, opt_max_iter);
                out.converged = r.converged;
                AngleSequence s = r.sequence;
                s.recon_residual = r.final_loss;
                finish_seq(std::move(s), 0, pt.weights[0]);
                return out;
            }
            if (m.completion == CompletionRoute::Prony) {
                StabilitySplit split = gqsp_stability_split(part, d, d);
                const LaurentPoly* fs[2] = {&split.f1, &split.f2};
                for (int i = 0; i < 2; ++i) {
                    CompletionPair pair = complete_gqsp_prony(*fs[i], d, d);
                    finish_seq(decompose_gqsp_carving(pair), static_cast<std::size_t>(i),
                               pt.weights[0] * split.beta);
                }
                return out;
            }
            const bool randomized = m.completion == CompletionRoute::RootFindRandom;
            CompletionPair pair = complete_gqsp_rootfind(part, d, d, randomized, seed);
            finish_seq(decompose_gqsp_carving(pair), 0, pt.weights[0]);
            return out;
        }

        // ordinary QSP: even part (degree d) and odd part (degree d-1)
        const int part_degree[2] = {d, d - 1};
        for (std::size_t i = 0; i < pt.part_count(); ++i) {
            const int dp = part_degree[i];
            if (m.is_optimize()) {
                const ChebPoly part_x = laurent_to_cheb(pt.w_parts[i]);
                OptimizeResult r =
                    optimize_angles(make_ordinary_loss(part_x, dp, true, m.convention), OptInit::Symmetric,
                                    seed, opt_max_iter);
                out.converged = out.converged && r.converged;
                AngleSequence s = r.sequence;
                s.recon_residual = r.final_loss;
                finish_seq(std::move(s), i, pt.weights[i]);
                continue;
            }
            LaurentPoly part_w = pt.w_parts[i];
            if (m.decomp == DecompRoute::HalveCap) part_w = capitalize(part_w, eps_cap);
            if (m.convention == Convention::WxSz) {
                CompletionPair pair = complete_wx_rootfind(laurent_to_cheb(part_w), dp);
                finish_seq(m.decomp == DecompRoute::Carve ? decompose_wx_carving(pair)
                                                          : decompose_wx_halving(pair),
                           i, pt.weights[i]);
            } else {
                CompletionPair pair;
                if (m.completion == CompletionRoute::Prony) pair = complete_wz_prony(part_w, dp);
                else
                    pair = complete_wz_rootfind(part_w, dp,
                                                m.completion == CompletionRoute::RootFindRandom, seed);
                finish_seq(decompose_wz_halving(pair, m.decomp == DecompRoute::HalveCap
                                                          ? std::optional<double>(eps_cap)
                                                          : std::nullopt),
                           i, pt.weights[i]);
            }
        }
        return out;
    } catch (const completion_error& e) {
        throw method_error(std::string(e.what()));
    } catch (const decomposition_error& e) {
        throw method_error(std::string(e.what()));
    } catch (const singularity_error& e) {
        throw method_error(std::string(e.what()));
    } catch (const root_error& e) {
        throw method_error(std::string(e.what()));
    } catch (const rank_error& e) {
        throw method_error(std::string(e.what()));
    }
}

}  // namespace qspkit

#endif
