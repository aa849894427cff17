#pragma once

// Exact rational arithmetic used throughout the structural layer.
// All rank / deficiency / traffic-equation computations are exact; floating
// point appears only downstream (NLTE exponentials, CTMC solves).

#include <gmpxx.h>

#include <cctype>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace petriform {

using Rat = mpq_class;
using Int = mpz_class;

inline Rat make_rat(long num, long den = 1) {
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline double to_double(const Rat& r) { return r.get_d(); }

// Accepts "3", "-3", "a/b" and decimal notation "1.25".  Returns nullopt on
// malformed input so callers can attach their own source location.
inline std::optional<Rat> parse_rational(std::string_view text) {
    std::string s(text);
    if (s.empty()) return std::nullopt;
    auto is_int = [](const std::string& t) {
        if (t.empty()) return false;
        std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
        if (i == t.size()) return false;
        for (; i < t.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
        return true;
    };
    if (auto slash = s.find('/'); slash != std::string::npos) {
        std::string num = s.substr(0, slash), den = s.substr(slash + 1);
        if (!is_int(num) || !is_int(den)) return std::nullopt;
        Int d(den);
        if (d == 0) return std::nullopt;
        Rat r{Int(num), d};
        r.canonicalize();
        return r;
    }
    if (auto dot = s.find('.'); dot != std::string::npos) {
        std::string whole = s.substr(0, dot), frac = s.substr(dot + 1);
        if (frac.empty()) return std::nullopt;
        bool neg = !whole.empty() && whole[0] == '-';
        if (!whole.empty() && (whole[0] == '-' || whole[0] == '+')) whole.erase(0, 1);
        if (whole.empty()) whole = "0";
        if (!is_int(whole) || !is_int(frac)) return std::nullopt;
        Int scale = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
        Rat r{Int(whole) * scale + Int(frac), scale};
        r.canonicalize();
        if (neg) r = -r;
        return r;
    }
    if (!is_int(s)) return std::nullopt;
    return Rat{Int(s)};
}

inline std::string to_string(const Rat& r) {
    if (r.get_den() == 1) return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

}  // namespace petriform
