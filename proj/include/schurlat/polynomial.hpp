#pragma once

// Dense univariate polynomials over a field (exact rationals or complex
// doubles), coefficients stored in ascending degree order.

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "rational.hpp"

namespace schurlat {

template <class T>
struct Poly {
    std::vector<T> c;  // c[k] multiplies t^k; empty vector is the zero polynomial

    Poly() = default;
    explicit Poly(std::vector<T> coeffs) : c(std::move(coeffs)) { trim(); }
    static Poly constant(const T& v) { return Poly(std::vector<T>{v}); }

    void trim() {
        while (!c.empty() && c.back() == T(0)) c.pop_back();
    }

    int degree() const { return static_cast<int>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }

    const T& lead() const {
        if (c.empty()) throw std::domain_error("Poly: zero polynomial has no leading coefficient");
        return c.back();
    }

    template <class U>
    U eval(const U& t) const {
        U acc = U(0);
        for (std::size_t k = c.size(); k-- > 0;) acc = acc * t + U(c[k]);
        return acc;
    }

    Poly derivative() const {
        if (c.size() <= 1) return Poly();
        std::vector<T> d(c.size() - 1);
        for (std::size_t k = 1; k < c.size(); ++k) d[k - 1] = c[k] * T(static_cast<int>(k));
        return Poly(std::move(d));
    }

    Poly& operator+=(const Poly& o) {
        if (o.c.size() > c.size()) c.resize(o.c.size(), T(0));
        for (std::size_t k = 0; k < o.c.size(); ++k) c[k] += o.c[k];
        trim();
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        if (o.c.size() > c.size()) c.resize(o.c.size(), T(0));
        for (std::size_t k = 0; k < o.c.size(); ++k) c[k] -= o.c[k];
        trim();
        return *this;
    }
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return Poly();
        std::vector<T> p(a.c.size() + b.c.size() - 1, T(0));
        for (std::size_t i = 0; i < a.c.size(); ++i)
            for (std::size_t j = 0; j < b.c.size(); ++j) p[i + j] += a.c[i] * b.c[j];
        return Poly(std::move(p));
    }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }

    Poly scaled(const T& s) const {
        Poly r = *this;
        for (auto& v : r.c) v *= s;
        r.trim();
        return r;
    }

    bool operator==(const Poly& o) const { return c == o.c; }
};

template <class T>
inline Poly<T> poly_from_roots(const std::vector<T>& roots) {
    Poly<T> p = Poly<T>::constant(T(1));
    for (const T& r : roots) p *= Poly<T>(std::vector<T>{-r, T(1)});
    return p;
}

// Quotient and remainder; requires a field type for T.
template <class T>
inline std::pair<Poly<T>, Poly<T>> poly_divmod(const Poly<T>& a, const Poly<T>& b) {
    if (b.is_zero()) throw std::domain_error("poly_divmod: division by zero polynomial");
    Poly<T> r = a;
    if (a.degree() < b.degree()) return {Poly<T>(), r};
    std::vector<T> q(a.degree() - b.degree() + 1, T(0));
    while (!r.is_zero() && r.degree() >= b.degree()) {
        int shift = r.degree() - b.degree();
        T f = r.lead() / b.lead();
        q[shift] = f;
        for (std::size_t k = 0; k < b.c.size(); ++k) r.c[k + shift] -= f * b.c[k];
        r.trim();
    }
    return {Poly<T>(std::move(q)), r};
}

template <class T>
inline Poly<T> poly_monic(const Poly<T>& p) {
    if (p.is_zero()) return p;
    Poly<T> r = p;
    T inv = T(1) / p.lead();
    for (auto& v : r.c) v *= inv;
    return r;
}

template <class T>
inline Poly<T> poly_gcd(Poly<T> a, Poly<T> b) {
    while (!b.is_zero()) {
        a = poly_monic(a);
        b = poly_monic(b);
        auto [q, r] = poly_divmod(a, b);
        (void)q;
        a = std::move(b);
        b = std::move(r);
    }
    return a.is_zero() ? a : poly_monic(a);
}

using RatPoly = Poly<Rat>;
using CPoly = Poly<std::complex<double>>;

inline std::vector<std::complex<double>> to_complex_coeffs(const RatPoly& p) {
    std::vector<std::complex<double>> out(p.c.size());
    for (std::size_t k = 0; k < p.c.size(); ++k) out[k] = to_double(p.c[k]);
    return out;
}

inline std::vector<double> to_double_coeffs(const RatPoly& p) {
    std::vector<double> out(p.c.size());
    for (std::size_t k = 0; k < p.c.size(); ++k) out[k] = to_double(p.c[k]);
    return out;
}

}  // namespace schurlat
