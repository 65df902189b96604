#pragma once

// Exact arbitrary-precision rational arithmetic used throughout the library.
// Thin layer over Boost.Multiprecision plus parsing/printing helpers.

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace schurlat {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline double to_double(const Rat& r) { return static_cast<double>(r); }

inline Rat rat_pow(const Rat& base, long long e) {
    if (e < 0) {
        if (base == 0) throw std::domain_error("rat_pow: 0 to negative power");
        return 1 / rat_pow(base, -e);
    }
    Rat acc = 1, b = base;
    while (e > 0) {
        if (e & 1) acc *= b;
        b *= b;
        e >>= 1;
    }
    return acc;
}

// Renders p/q, or just p when q == 1.
inline std::string rat_str(const Rat& r) {
    std::string s = numerator(r).str();
    if (denominator(r) != 1) s += "/" + denominator(r).str();
    return s;
}

// Accepts "p", "p/q", and decimal literals like "-1.25".
inline Rat parse_rat(const std::string& text) {
    std::size_t i = 0, n = text.size();
    auto fail = [&]() -> Rat {
        throw std::invalid_argument("parse_rat: bad rational '" + text + "'");
    };
    if (n == 0) return fail();
    bool neg = false;
    if (text[i] == '+' || text[i] == '-') neg = (text[i] == '-'), ++i;
    auto digits = [&](Int& out) {
        std::size_t start = i;
        out = 0;
        while (i < n && std::isdigit(static_cast<unsigned char>(text[i])))
            out = out * 10 + (text[i++] - '0');
        return i > start;
    };
    Int whole;
    if (!digits(whole)) return fail();
    Rat value;
    if (i < n && text[i] == '/') {
        ++i;
        Int den;
        if (!digits(den) || i != n || den == 0) return fail();
        value = Rat(whole, den);
    } else if (i < n && text[i] == '.') {
        ++i;
        std::size_t start = i;
        Int frac;
        if (!digits(frac) || i != n) return fail();
        Int scale = 1;
        for (std::size_t k = start; k < i; ++k) scale *= 10;
        value = Rat(whole) + Rat(frac, scale);
    } else {
        if (i != n) return fail();
        value = Rat(whole);
    }
    return neg ? -value : value;
}

}  // namespace schurlat
