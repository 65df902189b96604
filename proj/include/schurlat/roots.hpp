#pragma once

// Polynomial root extraction: companion-matrix eigenvalues refined by Newton
// iteration. Root finding is the only floating-point stage of the curve and
// classification pipelines; everything upstream stays rational.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace schurlat {

namespace detail {

inline std::complex<double> horner(const std::vector<std::complex<double>>& c,
                                   std::complex<double> z) {
    std::complex<double> acc = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) acc = acc * z + c[k];
    return acc;
}

}  // namespace detail

// All complex roots of sum_k c[k] z^k. Leading coefficients that are
// negligible against the largest coefficient are dropped (degree deflation
// near thresholds is the caller's concern; see classify()).
inline std::vector<std::complex<double>> poly_roots(std::vector<std::complex<double>> c) {
    double scale = 0.0;
    for (const auto& v : c) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) throw std::domain_error("poly_roots: zero polynomial");
    while (c.size() > 1 && std::abs(c.back()) < 1e-14 * scale) c.pop_back();
    const int deg = static_cast<int>(c.size()) - 1;
    std::vector<std::complex<double>> roots;
    if (deg <= 0) return roots;
    if (deg == 1) {
        roots.push_back(-c[0] / c[1]);
        return roots;
    }
    if (deg == 2) {
        // Stable quadratic: q = -(b + sgn) .. avoids cancellation in one root.
        std::complex<double> a = c[2], b = c[1], c0 = c[0];
        std::complex<double> disc = std::sqrt(b * b - 4.0 * a * c0);
        if (std::real(std::conj(b) * disc) < 0.0) disc = -disc;
        std::complex<double> q = -0.5 * (b + disc);
        roots.push_back(q / a);
        roots.push_back(std::abs(q) > 0 ? c0 / q : -b / a - roots[0]);
        return roots;
    }

    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(deg, deg);
    for (int k = 0; k < deg; ++k) comp(k, deg - 1) = -c[k] / c[deg];
    for (int k = 1; k < deg; ++k) comp(k, k - 1) = 1.0;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
    if (es.info() != Eigen::Success) throw std::runtime_error("poly_roots: eigensolver failed");

    std::vector<std::complex<double>> dc(c.size() - 1);
    for (std::size_t k = 1; k < c.size(); ++k) dc[k - 1] = c[k] * double(k);
    for (int k = 0; k < deg; ++k) {
        std::complex<double> z = es.eigenvalues()(k);
        double best = std::abs(detail::horner(c, z));
        for (int it = 0; it < 40; ++it) {
            std::complex<double> p = detail::horner(c, z);
            std::complex<double> d = detail::horner(dc, z);
            if (std::abs(d) == 0.0) break;
            std::complex<double> z2 = z - p / d;
            double v = std::abs(detail::horner(c, z2));
            if (v < best) {
                best = v;
                z = z2;
                if (best < 1e-13 * scale) break;
            } else {
                break;
            }
        }
        roots.push_back(z);
    }
    return roots;
}

inline std::vector<std::complex<double>> poly_roots(const std::vector<double>& c) {
    return poly_roots(std::vector<std::complex<double>>(c.begin(), c.end()));
}

// Real-axis tolerance is relative to the spread of the root set.
inline double root_spread(const std::vector<std::complex<double>>& roots) {
    double m = 0.0;
    for (const auto& r : roots) m = std::max(m, std::abs(r));
    return std::max(m, 1.0);
}

inline int count_conjugate_pairs(const std::vector<std::complex<double>>& roots, double tol) {
    int above = 0;
    for (const auto& r : roots)
        if (r.imag() > tol) ++above;
    return above;
}

inline std::vector<double> real_roots(const std::vector<std::complex<double>>& roots, double tol) {
    std::vector<double> out;
    for (const auto& r : roots)
        if (std::abs(r.imag()) <= tol) out.push_back(r.real());
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace schurlat
