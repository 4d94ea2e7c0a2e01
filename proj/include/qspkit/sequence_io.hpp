#ifndef QSPKIT_SEQUENCE_IO_HPP
#define QSPKIT_SEQUENCE_IO_HPP

#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qspkit/qspmodel.hpp"

namespace qspkit {

inline nlohmann::json sequence_to_json(const AngleSequence& s) {
    nlohmann::json j;
    j["convention"] = to_string(s.convention);
    j["d_plus"] = s.d_plus;
    j["d_minus"] = s.d_minus;
    j["theta"] = s.theta;
    j["phi"] = s.phi;
    j["lambda"] = s.lambda;
    j["alpha"] = s.alpha;
    j["weight_re"] = s.weight.real();
    j["weight_im"] = s.weight.imag();
    j["method"] = s.method;
    j["meta"] = {{"tau", s.meta.tau}, {"d", s.meta.d}, {"seed", s.meta.seed}};
    return j;
}

inline AngleSequence sequence_from_json(const nlohmann::json& j) {
    AngleSequence s;
    s.convention = convention_from_string(j.at("convention").get<std::string>());
    s.d_plus = j.at("d_plus").get<int>();
    s.d_minus = j.at("d_minus").get<int>();
    s.theta = j.at("theta").get<std::vector<double>>();
    s.phi = j.at("phi").get<std::vector<double>>();
    s.lambda = j.at("lambda").get<double>();
    s.alpha = j.at("alpha").get<double>();
    s.weight = cplx(j.at("weight_re").get<double>(), j.at("weight_im").get<double>());
    s.method = j.value("method", "");
    if (j.contains("meta")) {
        s.meta.tau = j["meta"].value("tau", 0.0);
        s.meta.d = j["meta"].value("d", 0);
        s.meta.seed = j["meta"].value("seed", std::uint64_t(0));
    }
    if (s.convention == Convention::Gqsp) {
        if (static_cast<int>(s.theta.size()) != s.d_plus + s.d_minus + 1 || s.theta.size() != s.phi.size())
            throw std::invalid_argument("sequence_from_json: gqsp arity mismatch");
    } else if (s.phi.empty()) {
        throw std::invalid_argument("sequence_from_json: empty phi");
    }
    return s;
}

/// A file holds a JSON array of sequence objects (a bare object reads as a
/// singleton): multi-part methods need several weighted sequences.
inline void save_sequences(const std::string& path, const std::vector<AngleSequence>& seqs) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& s : seqs) arr.push_back(sequence_to_json(s));
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << arr.dump(2) << "\n";
}

inline std::vector<AngleSequence> load_sequences(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    nlohmann::json j;
    in >> j;
    std::vector<AngleSequence> out;
    if (j.is_array())
        for (const auto& e : j) out.push_back(sequence_from_json(e));
    else
        out.push_back(sequence_from_json(j));
    return out;
}

}  // namespace qspkit

#endif
