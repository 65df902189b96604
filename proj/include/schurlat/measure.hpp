#pragma once

// Limit counting measures of the boundary classes: density-one unions of
// intervals with exact rational endpoints, plus their Stieltjes transform,
// moment generating series, inverse branch through the origin, and the
// derivative of the log-potential.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "polynomial.hpp"
#include "rational.hpp"
#include "roots.hpp"

namespace schurlat {

using Cplx = std::complex<double>;

// Probability measure with density 1 on a disjoint union of intervals
// [beta_k, gamma_k], beta_0 < gamma_0 < beta_1 < ... in increasing order.
struct IntervalMeasure {
    std::vector<std::pair<Rat, Rat>> intervals;
    bool merged_abutting = false;  // consecutive construction intervals shared an endpoint

    std::size_t pieces() const { return intervals.size(); }

    Rat mass() const {
        Rat m = 0;
        for (const auto& [b, g] : intervals) m += g - b;
        return m;
    }

    void validate() const {
        if (intervals.empty()) throw std::invalid_argument("IntervalMeasure: no intervals");
        for (std::size_t k = 0; k < intervals.size(); ++k) {
            if (intervals[k].first >= intervals[k].second)
                throw std::invalid_argument("IntervalMeasure: interval endpoints out of order");
            if (k + 1 < intervals.size() && intervals[k].second >= intervals[k + 1].first)
                throw std::invalid_argument("IntervalMeasure: intervals must be disjoint");
        }
        if (mass() != 1) throw std::invalid_argument("IntervalMeasure: total mass must be 1");
    }

    std::vector<Rat> betas() const {
        std::vector<Rat> v;
        for (const auto& p : intervals) v.push_back(p.first);
        return v;
    }
    std::vector<Rat> gammas() const {
        std::vector<Rat> v;
        for (const auto& p : intervals) v.push_back(p.second);
        return v;
    }

    bool contains_real(double x, double pad = 0.0) const {
        for (const auto& [b, g] : intervals)
            if (x >= to_double(b) - pad && x <= to_double(g) + pad) return true;
        return false;
    }
};

// Scaled boundary runs (a_1,b_1),...,(a_s,b_s): a_1 <= b_1 <= a_2 <= ... with
// positive widths summing to 1. Run j carries the (s-j+1)-th largest part
// value, so the value fraction of part value t is recovered by telescoping.
inline void validate_blocks(const std::vector<std::pair<Rat, Rat>>& blocks) {
    if (blocks.empty()) throw std::invalid_argument("blocks: empty");
    Rat width = 0;
    for (std::size_t j = 0; j < blocks.size(); ++j) {
        const auto& [a, b] = blocks[j];
        if (a < 0) throw std::invalid_argument("blocks: negative position");
        if (b <= a) throw std::invalid_argument("blocks: runs need positive width");
        if (j + 1 < blocks.size() && blocks[j + 1].first < b)
            throw std::invalid_argument("blocks: runs must be ordered");
        width += b - a;
    }
    if (width != 1) throw std::invalid_argument("blocks: widths must sum to 1");
}

// Limit fraction of the t-th largest part value, t = 1..s.
inline std::vector<Rat> value_fractions(const std::vector<std::pair<Rat, Rat>>& blocks) {
    validate_blocks(blocks);
    std::size_t s = blocks.size();
    std::vector<Rat> r(s);
    for (std::size_t t = 1; t <= s; ++t) {
        Rat v = blocks[0].first;
        for (std::size_t l = 2; l <= s - t + 1; ++l) v += blocks[l - 1].first - blocks[l - 2].second;
        r[t - 1] = v;
    }
    return r;
}

// Starting value indices d_1 = 1 < d_2 < ... < d_n <= s (d_{n+1} = s+1) from
// the class index sets; each set must be a consecutive run and together they
// must partition [s] in order.
inline std::vector<int> class_starts(int n, std::size_t s,
                                     const std::vector<std::vector<int>>& j_sets) {
    if (n < 1 || j_sets.size() != static_cast<std::size_t>(n))
        throw std::invalid_argument("class_starts: need one index set per class");
    std::vector<int> d(n + 1);
    int expect = 1;
    for (int i = 0; i < n; ++i) {
        const auto& js = j_sets[i];
        if (js.empty()) throw std::invalid_argument("class_starts: empty index set");
        d[i] = js.front();
        for (std::size_t k = 0; k < js.size(); ++k)
            if (js[k] != d[i] + static_cast<int>(k))
                throw std::invalid_argument("class_starts: index sets must be consecutive runs");
        if (d[i] != expect)
            throw std::invalid_argument("class_starts: index sets must partition 1..s in order");
        expect = d[i] + static_cast<int>(js.size());
    }
    if (expect != static_cast<int>(s) + 1)
        throw std::invalid_argument("class_starts: index sets must cover 1..s");
    d[n] = static_cast<int>(s) + 1;
    return d;
}

// Limit counting measure of class i (1-based): intervals with exact rational
// endpoints assembled from the scaled boundary runs. Abutting intervals
// (shared endpoint) are merged and flagged.
inline IntervalMeasure limit_measure(int i, const std::vector<std::pair<Rat, Rat>>& blocks,
                                     int n, const std::vector<std::vector<int>>& j_sets) {
    validate_blocks(blocks);
    const std::size_t s = blocks.size();
    std::vector<int> d = class_starts(n, s, j_sets);
    if (i < 1 || i > n) throw std::invalid_argument("limit_measure: class index out of range");

    // Each class must absorb exactly 1/n of the total run width.
    for (int c = 0; c < n; ++c) {
        Rat w = 0;
        for (int t = d[c]; t < d[c + 1]; ++t) {
            const auto& [a, b] = blocks[s - t];  // run s-t+1, 0-based
            w += b - a;
        }
        if (w != Rat(1, n))
            throw std::invalid_argument("limit_measure: class widths incompatible with period");
    }

    std::vector<Rat> r = value_fractions(blocks);
    auto width = [&](std::size_t l) {  // l is 1-based run index
        return blocks[l - 1].second - blocks[l - 1].first;
    };

    const int di = d[i - 1];
    const int Dcount = d[i] - d[i - 1];  // D_i + 1 intervals
    std::vector<std::pair<Rat, Rat>> raw;
    for (int k = 0; k < Dcount; ++k) {
        const int t = di + k;
        Rat tail = 0;  // sum of run widths from l = s-t+1 through s-di+1
        for (int l = static_cast<int>(s) - t + 1; l <= static_cast<int>(s) - di + 1; ++l)
            tail += width(l);
        Rat beta = Rat(n) * r[t - 1] + Rat(n - i + 1) - Rat(n) * tail;
        Rat gamma = beta + Rat(n) * width(s - t + 1);
        raw.emplace_back(beta, gamma);
    }

    std::sort(raw.begin(), raw.end());
    IntervalMeasure m;
    for (auto& iv : raw) {
        if (!m.intervals.empty() && m.intervals.back().second == iv.first) {
            m.intervals.back().second = iv.second;
            m.merged_abutting = true;
        } else {
            m.intervals.push_back(iv);
        }
    }
    // The class carries n runs of width summing to 1/n each scaled by n.
    if (m.mass() != 1) throw std::invalid_argument("limit_measure: internal mass mismatch");
    m.validate();
    return m;
}

// k-th moment, exact: integrate x^k over the density-one intervals.
inline Rat moment_exact(const IntervalMeasure& m, int k) {
    if (k < 0) throw std::invalid_argument("moment_exact: negative order");
    Rat acc = 0;
    for (const auto& [b, g] : m.intervals)
        acc += (rat_pow(g, k + 1) - rat_pow(b, k + 1)) / Rat(k + 1);
    return acc;
}

// St(t) = sum_k log((t - beta_k)/(t - gamma_k)). Each factor maps its own
// interval to the negative reals, so the per-factor principal branch is the
// analytic branch off the support.
inline Cplx stieltjes(const IntervalMeasure& m, Cplx t) {
    if (t.imag() == 0.0 && m.contains_real(t.real()))
        throw std::domain_error("stieltjes: point lies in the support");
    Cplx acc = 0.0;
    for (const auto& [b, g] : m.intervals)
        acc += std::log((t - Cplx(to_double(b))) / (t - Cplx(to_double(g))));
    return acc;
}

// S(z) = St(1/z) continued through S(0) = 0.
inline Cplx s_transform(const IntervalMeasure& m, Cplx z) {
    Cplx acc = 0.0;
    for (const auto& [b, g] : m.intervals)
        acc += std::log((1.0 - to_double(b) * z) / (1.0 - to_double(g) * z));
    return acc;
}

inline Cplx s_transform_derivative(const IntervalMeasure& m, Cplx z) {
    Cplx acc = 0.0;
    for (const auto& [b, g] : m.intervals) {
        double bd = to_double(b), gd = to_double(g);
        acc += gd / (1.0 - gd * z) - bd / (1.0 - bd * z);
    }
    return acc;
}

namespace detail {

struct MeasurePolys {
    std::vector<Cplx> pbeta;   // prod (1 - beta z)
    std::vector<Cplx> pgamma;  // prod (1 - gamma z)
};

inline MeasurePolys measure_polys(const IntervalMeasure& m) {
    RatPoly pb = RatPoly::constant(1), pg = RatPoly::constant(1);
    for (const auto& [b, g] : m.intervals) {
        pb *= RatPoly(std::vector<Rat>{1, -b});
        pg *= RatPoly(std::vector<Rat>{1, -g});
    }
    return {to_complex_coeffs(pb), to_complex_coeffs(pg)};
}

// A couple of Newton steps on e^w prod(1-gz) - prod(1-bz) evaluated in
// product form. The expanded coefficients lose ~5 digits for wide supports;
// the factored form keeps the residual at machine scale. Movement is capped:
// the polish may only shave the last digits off an already-located root,
// never migrate to a neighbouring one (which Newton would happily do next to
// a branch point where two roots nearly collide).
inline Cplx product_newton(const IntervalMeasure& m, Cplx w, Cplx z) {
    const Cplx z0 = z;
    const double cap = 1e-7 * (1.0 + std::abs(z0));
    Cplx ew = std::exp(w);
    for (int it = 0; it < 4; ++it) {
        Cplx pb = 1.0, pg = 1.0, db = 0.0, dg = 0.0;
        for (const auto& [b, g] : m.intervals) {
            double bd = to_double(b), gd = to_double(g);
            pb *= 1.0 - bd * z;
            pg *= 1.0 - gd * z;
            db += -bd / (1.0 - bd * z);
            dg += -gd / (1.0 - gd * z);
        }
        Cplx f = ew * pg - pb;
        Cplx fp = ew * pg * dg - pb * db;
        if (std::abs(fp) == 0.0) break;
        Cplx step = f / fp;
        if (std::abs(step) > cap || std::abs(z - step - z0) > cap) return z0;
        z -= step;
        if (std::abs(step) < 1e-15 * (1.0 + std::abs(z))) break;
    }
    return z;
}

// Root of e^w * pgamma - pbeta nearest to a prediction, with an ambiguity
// guard: accept only if the runner-up is at least 10x farther away. On
// success, separation is the distance from the chosen root to its nearest
// rival (infinity when the polynomial has a single root); callers bound their
// step by it so a continuation never hops between neighbouring roots.
inline bool nearest_root(const MeasurePolys& mp, Cplx w, Cplx predicted, Cplx& out,
                         double& separation) {
    std::vector<Cplx> coeffs(std::max(mp.pbeta.size(), mp.pgamma.size()), 0.0);
    Cplx ew = std::exp(w);
    for (std::size_t k = 0; k < mp.pgamma.size(); ++k) coeffs[k] += ew * mp.pgamma[k];
    for (std::size_t k = 0; k < mp.pbeta.size(); ++k) coeffs[k] -= mp.pbeta[k];
    auto roots = poly_roots(coeffs);
    if (roots.empty()) return false;
    std::sort(roots.begin(), roots.end(), [&](Cplx a, Cplx b) {
        return std::abs(a - predicted) < std::abs(b - predicted);
    });
    if (roots.size() >= 2 &&
        std::abs(roots[1] - predicted) < 10.0 * std::abs(roots[0] - predicted))
        return false;
    out = roots[0];
    separation = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < roots.size(); ++k)
        separation = std::min(separation, std::abs(roots[k] - roots[0]));
    return true;
}

}  // namespace detail

// Inverse of S on the branch through S(0) = 0, by path continuation from
// w = 0 along the straight segment to w, with adaptive step halving. A step
// is accepted only when the root moved by less than a third of its distance
// to the nearest rival root: a first-order prediction across a long step can
// land closer to a neighbouring root than to the continued one, and the
// ambiguity ratio alone does not catch that.
inline Cplx s_transform_inverse(const IntervalMeasure& m, Cplx w) {
    if (w == 0.0) return 0.0;
    detail::MeasurePolys mp = detail::measure_polys(m);
    double tau = 0.0, step = 1.0;
    Cplx z = 0.0;
    while (tau < 1.0) {
        double tau2 = std::min(1.0, tau + step);
        Cplx dw = (tau2 - tau) * w;
        Cplx sp = s_transform_derivative(m, z);
        Cplx predicted = (std::abs(sp) > 0) ? z + dw / sp : z;
        Cplx next;
        double sep;
        if (detail::nearest_root(mp, tau2 * w, predicted, next, sep) &&
            std::abs(next - z) <= 0.35 * sep) {
            z = detail::product_newton(m, tau2 * w, next);
            tau = tau2;
            step = std::min(step * 2.0, 1.0);
        } else {
            step *= 0.5;
            if (step < 1e-9)
                throw std::runtime_error("s_transform_inverse: branch tracking failed");
        }
    }
    return z;
}

namespace detail {

// Truncated power series on complex coefficients, index = degree.
using Series = std::vector<Cplx>;

inline Series series_mul(const Series& a, const Series& b, std::size_t K) {
    Series out(K, 0.0);
    for (std::size_t i = 0; i < a.size() && i < K; ++i)
        for (std::size_t j = 0; j < b.size() && i + j < K; ++j) out[i + j] += a[i] * b[j];
    return out;
}

// Composition p(q(v)) with q(0) = 0, truncated to K terms (Horner on series).
inline Series series_compose(const Series& p, const Series& q, std::size_t K) {
    Series out(K, 0.0);
    for (std::size_t k = p.size(); k-- > 0;) {
        out = series_mul(out, q, K);
        out[0] += p[k];
    }
    return out;
}

// z(w) with S(z(w)) = w as a series, from S(z) = sum_j s_j z^j, s_1 = 1.
// Fixed point z <- z + (w - S(z)) gains one correct order per pass.
inline Series invert_s_series(const IntervalMeasure& m, std::size_t K) {
    Series s(K, 0.0);  // S coefficients; s[0] = 0
    for (std::size_t j = 1; j < K; ++j) {
        Rat c = 0;
        for (const auto& [b, g] : m.intervals) c += (rat_pow(g, (long long)j) - rat_pow(b, (long long)j)) / Rat((long long)j);
        s[j] = to_double(c);
    }
    Series id(K, 0.0);
    if (K > 1) id[1] = 1.0;
    Series z = id;
    for (std::size_t it = 0; it < K; ++it) {
        Series sz = series_compose(s, z, K);
        for (std::size_t k = 0; k < K; ++k) z[k] += id[k] - sz[k];
    }
    return z;
}

}  // namespace detail

// H'(u) = 1/(u * S^{-1}(log u)) - 1/(u - 1). The singularity at u = 1 is
// removable; near it the two poles cancel catastrophically, so a series in
// v = u-1 takes over inside |u-1| <= 5e-3 (with a tail check that falls back
// to the raw formula when the series has not converged at that radius).
inline Cplx h_prime(const IntervalMeasure& m, Cplx u) {
    if (u == 0.0) throw std::domain_error("h_prime: u = 0");
    Cplx v = u - 1.0;
    auto raw = [&]() {
        Cplx z = s_transform_inverse(m, std::log(u));
        return 1.0 / (u * z) - 1.0 / v;
    };
    if (std::abs(v) > 5e-3) return raw();
    constexpr std::size_t K = 24;
    detail::Series zw = detail::invert_s_series(m, K);
    detail::Series logs(K, 0.0);  // log(1+v)
    for (std::size_t j = 1; j < K; ++j) logs[j] = (j % 2 ? 1.0 : -1.0) / double(j);
    detail::Series zv = detail::series_compose(zw, logs, K);
    // zeta = z(v)/v, zeta(0) = 1; H' = ((1 - (1+v) zeta)/v) / ((1+v) zeta).
    detail::Series zeta(K, 0.0);
    for (std::size_t k = 0; k + 1 < K; ++k) zeta[k] = zv[k + 1];
    detail::Series num(K, 0.0);
    num[0] = 1.0 - zeta[0];  // exactly 0
    for (std::size_t k = 1; k < K; ++k) num[k] = -zeta[k] - zeta[k - 1];
    detail::Series numshift(K, 0.0);
    for (std::size_t k = 0; k + 1 < K; ++k) numshift[k] = num[k + 1];
    auto eval = [&](const detail::Series& s) {
        Cplx acc = 0.0;
        for (std::size_t k = s.size(); k-- > 0;) acc = acc * v + s[k];
        return acc;
    };
    Cplx val = eval(numshift) / ((1.0 + v) * eval(zeta));
    double av = std::abs(v), tail = 0.0;
    for (std::size_t k = K - 3; k < K; ++k)
        tail += std::abs(numshift[k]) * std::pow(av, double(k));
    if (tail > 1e-12 * (1.0 + std::abs(val)) && av >= 1e-3) return raw();
    return val;
}

}  // namespace schurlat
