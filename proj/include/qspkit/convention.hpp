#ifndef QSPKIT_CONVENTION_HPP
#define QSPKIT_CONVENTION_HPP

#include <stdexcept>
#include <string>

namespace qspkit {

enum class Convention { WxSz, WzSx, Gqsp };

inline std::string to_string(Convention c) {
    switch (c) {
        case Convention::WxSz: return "wx";
        case Convention::WzSx: return "wz";
        case Convention::Gqsp: return "gqsp";
    }
    return "?";
}

inline Convention convention_from_string(const std::string& s) {
    if (s == "wx") return Convention::WxSz;
    if (s == "wz") return Convention::WzSx;
    if (s == "gqsp" || s == "g") return Convention::Gqsp;
    throw std::invalid_argument("unknown convention: " + s);
}

}  // namespace qspkit

#endif
