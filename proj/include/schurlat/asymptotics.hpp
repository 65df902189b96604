#pragma once

// Level-kappa limit objects of the periodically weighted model: contour
// moment formula, density profile from the per-class root systems, and the
// limit height function.

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "measure.hpp"
#include "polynomial.hpp"
#include "rational.hpp"
#include "roots.hpp"

namespace schurlat {

// Limit data of an n-periodic model at level kappa: one limit measure per
// residue class, plus the y_l x_1 products of the square-structured rows
// within one period (empty for purely hexagonal periods).
struct ModelAsymptotics {
    int n = 1;
    std::vector<IntervalMeasure> measures;
    std::vector<Rat> yx;  // y_l * x_1, one entry per square row in the period
    double kappa = 0.5;

    void validate() const {
        if (n < 1) throw std::invalid_argument("ModelAsymptotics: n must be positive");
        if (measures.size() != static_cast<std::size_t>(n))
            throw std::invalid_argument("ModelAsymptotics: need one measure per class");
        for (const auto& m : measures) m.validate();
        if (!(kappa > 0.0 && kappa < 1.0))
            throw std::invalid_argument("ModelAsymptotics: kappa must lie in (0,1)");
        if (yx.size() > static_cast<std::size_t>(n))
            throw std::invalid_argument("ModelAsymptotics: more square rows than the period");
        for (const auto& v : yx)
            if (v <= 0) throw std::invalid_argument("ModelAsymptotics: y x products must be positive");
    }
};

// Distinct values of c = 1/(y x_1) with multiplicities, ascending.
inline std::vector<std::pair<Rat, int>> model_c_values(const ModelAsymptotics& mod) {
    std::map<Rat, int> acc;
    for (const auto& v : mod.yx) ++acc[Rat(1) / v];
    return {acc.begin(), acc.end()};
}

// Derivative of the per-class exponent: (1/((1-kappa)n)) [H'_{m_i}(z)
// - (n-i)/z + kappa sum_l yx_l/(1 + yx_l z)], the sum only for i = 1.
inline Cplx q_prime(const ModelAsymptotics& mod, int i, Cplx z) {
    if (i < 1 || i > mod.n) throw std::invalid_argument("q_prime: class index out of range");
    if (std::abs(z) < 1e-14) throw std::domain_error("q_prime: z = 0 is singular");
    Cplx acc = h_prime(mod.measures[i - 1], z) - double(mod.n - i) / z;
    if (i == 1) {
        for (const auto& v : mod.yx) {
            double c = to_double(v);
            if (std::abs(1.0 + c * z) < 1e-14) throw std::domain_error("q_prime: z = -1/(y x) is singular");
            acc += mod.kappa * c / (1.0 + c * z);
        }
    }
    return acc / ((1.0 - mod.kappa) * mod.n);
}

// Integrand of the moment formula: z Q'_{i,kappa}(z) + (n-i)/n + z/(n(z-1)).
inline Cplx f_value(const ModelAsymptotics& mod, int i, Cplx z) {
    if (std::abs(z - 1.0) < 1e-14) throw std::domain_error("f_value: z = 1 is singular");
    return z * q_prime(mod, i, z) + double(mod.n - i) / mod.n +
           z / (double(mod.n) * (z - 1.0));
}

namespace detail {

// Continue the inverse branch from (w0, z0) to w1 along a straight segment,
// with adaptive halving and the capped product-form polish.
inline Cplx continue_branch(const IntervalMeasure& m, const MeasurePolys& mp, Cplx w0, Cplx w1,
                            Cplx z0) {
    double tau = 0.0, step = 1.0;
    Cplx z = z0;
    while (tau < 1.0) {
        double tau2 = std::min(1.0, tau + step);
        Cplx wa = w0 + tau * (w1 - w0), wb = w0 + tau2 * (w1 - w0);
        Cplx sp = s_transform_derivative(m, z);
        Cplx predicted = (std::abs(sp) > 0) ? z + (wb - wa) / sp : z;
        Cplx next;
        double sep;
        if (nearest_root(mp, wb, predicted, next, sep) && std::abs(next - z) <= 0.35 * sep) {
            z = product_newton(m, wb, next);
            tau = tau2;
            step = std::min(step * 2.0, 1.0);
        } else {
            step *= 0.5;
            if (step < 1e-9) throw std::runtime_error("continue_branch: branch tracking failed");
        }
    }
    return z;
}

}  // namespace detail

// Images of the critical points of R(z) = prod(1-bz)/prod(1-gz); the inverse
// branch continued around any loop must stay clear of them.
inline std::vector<Cplx> branch_images(const IntervalMeasure& m) {
    RatPoly pb = RatPoly::constant(1), pg = RatPoly::constant(1);
    for (const auto& [b, g] : m.intervals) {
        pb *= RatPoly(std::vector<Rat>{1, -b});
        pg *= RatPoly(std::vector<Rat>{1, -g});
    }
    RatPoly num = pb.derivative() * pg - pb * pg.derivative();
    std::vector<Cplx> out;
    if (num.degree() < 1) return out;
    for (Cplx zs : poly_roots(to_complex_coeffs(num))) {
        Cplx denom = Poly<Cplx>(to_complex_coeffs(pg)).eval(zs);
        if (std::abs(denom) < 1e-12) continue;  // pole of R, not a branch image
        out.push_back(Poly<Cplx>(to_complex_coeffs(pb)).eval(zs) / denom);
    }
    return out;
}

// Radius of the integration circle about z = 1: a fixed fraction of the
// distance to the nearest singularity (origin, -c points, branch images).
inline double contour_radius(const ModelAsymptotics& mod) {
    double d = 1.0;  // distance from 1 to the origin
    for (const auto& v : mod.yx) d = std::min(d, std::abs(1.0 + 1.0 / to_double(v)));
    for (const auto& m : mod.measures)
        for (Cplx u : branch_images(m)) d = std::min(d, std::abs(u - 1.0));
    double r = std::min(0.5, 0.4 * d);
    if (r < 1e-6) {
        std::ostringstream msg;
        msg << "contour_radius: a singularity sits " << d
            << " away from z=1; the usable radius " << r
            << " is below 1e-6, so the moment formula is ill-conditioned for this model";
        throw std::invalid_argument(msg.str());
    }
    return r;
}

// Nodes of the circle about 1 and the per-class values of H' on them,
// obtained by continuing each inverse branch once around the circle. The
// walk must close up: failure to do so means the circle encloses a branch
// point and the radius rule was violated.
struct ContourData {
    double radius = 0.0;
    std::vector<Cplx> z;
    std::vector<std::vector<Cplx>> hp;  // hp[i-1][j]
};

inline ContourData build_contour(const ModelAsymptotics& mod, int nodes = 2048) {
    if (nodes < 16) throw std::invalid_argument("build_contour: too few nodes");
    ContourData cd;
    cd.radius = contour_radius(mod);
    cd.z.resize(nodes);
    std::vector<Cplx> w(nodes);
    for (int j = 0; j < nodes; ++j) {
        double th = 2.0 * M_PI * j / nodes;
        cd.z[j] = 1.0 + cd.radius * Cplx(std::cos(th), std::sin(th));
        w[j] = std::log(cd.z[j]);  // Re z >= 1/2, principal branch is fine
    }
    cd.hp.assign(mod.n, std::vector<Cplx>(nodes));
    for (int i = 0; i < mod.n; ++i) {
        const IntervalMeasure& m = mod.measures[i];
        detail::MeasurePolys mp = detail::measure_polys(m);
        Cplx zeta = s_transform_inverse(m, w[0]);
        Cplx first = zeta;
        for (int j = 0; j < nodes; ++j) {
            if (j > 0) zeta = detail::continue_branch(m, mp, w[j - 1], w[j], zeta);
            cd.hp[i][j] = 1.0 / (cd.z[j] * zeta) - 1.0 / (cd.z[j] - 1.0);
        }
        Cplx closed = detail::continue_branch(m, mp, w[nodes - 1], w[0], zeta);
        if (std::abs(closed - first) > 1e-8 * (1.0 + std::abs(first)))
            throw std::runtime_error("build_contour: branch did not close around the circle");
    }
    return cd;
}

struct MomentResult {
    double value = 0.0;
    double imag = 0.0;  // magnitude of the imaginary residue
    double radius = 0.0;
    int nodes = 0;
};

inline MomentResult moment_detail(const ModelAsymptotics& mod, const ContourData& cd, int p) {
    if (p < 0 || p > 12) throw std::invalid_argument("moment: order must be in 0..12");
    const int M = static_cast<int>(cd.z.size());
    Cplx acc = 0.0;
    for (int j = 0; j < M; ++j) {
        Cplx inner = 0.0;
        for (int i = 1; i <= mod.n; ++i) {
            Cplx z = cd.z[j];
            Cplx qp = cd.hp[i - 1][j] - double(mod.n - i) / z;
            if (i == 1)
                for (const auto& v : mod.yx) {
                    double c = to_double(v);
                    qp += mod.kappa * c / (1.0 + c * z);
                }
            qp /= (1.0 - mod.kappa) * mod.n;
            Cplx F = z * qp + double(mod.n - i) / mod.n + z / (double(mod.n) * (z - 1.0));
            Cplx pw = 1.0;
            for (int q = 0; q <= p; ++q) pw *= F;
            inner += pw;
        }
        acc += inner * (cd.z[j] - 1.0) / cd.z[j];
    }
    acc /= double(M) * double(p + 1);
    return {acc.real(), std::abs(acc.imag()), cd.radius, M};
}

inline MomentResult moment_detail(const ModelAsymptotics& mod, int p, int nodes = 2048) {
    return moment_detail(mod, build_contour(mod, nodes), p);
}

inline double moment(const ModelAsymptotics& mod, int p, int nodes = 2048) {
    MomentResult r = moment_detail(mod, p, nodes);
    if (r.imag >= 1e-9)
        throw std::runtime_error("moment: imaginary residue " + std::to_string(r.imag) +
                                 " exceeds 1e-9; contour quadrature unreliable");
    return r.value;
}

// Cleared form of the per-class fixed-point equation at coordinate x: the
// equation z = G_i(z,x) multiplied out over the common denominator. z = 1
// always solves the cleared form without solving the original equation, so
// the deflated polynomial (z-1 divided out) is what root analysis uses.
struct GiPoly {
    std::vector<double> full;      // ascending coefficients, z=1 root included
    std::vector<double> deflated;  // full with the factor (z-1) removed
    double lead = 0.0;             // leading coefficient of full
    double scale = 0.0;            // largest |coefficient| of full
};

inline GiPoly gi_polynomial(const ModelAsymptotics& mod, int i, double x) {
    if (i < 1 || i > mod.n) throw std::invalid_argument("gi_polynomial: class index out of range");
    const double kap = mod.kappa;
    const int n = mod.n;
    const IntervalMeasure& m = mod.measures[i - 1];

    // Numerator of one bracket over the common denominator P(z), as a
    // polynomial in z whose constant-in-z part depends on the endpoint y.
    // For i >= 2:  P = z-1,  bracket*P = kappa z + A(y)(z-1).
    // For i = 1:   P = (z-1) prod_j (z+c_j),  bracket*P adds the -kappa z
    //              sum_j n_j / (z+c_j) cross terms.
    std::vector<std::pair<double, int>> cs;  // distinct c values with multiplicity
    if (i == 1)
        for (const auto& [c, mult] : model_c_values(mod)) cs.emplace_back(to_double(c), mult);

    Poly<double> pc = Poly<double>::constant(1.0);  // prod over distinct (z + c_j)
    for (const auto& [c, mult] : cs) pc *= Poly<double>(std::vector<double>{c, 1.0});
    Poly<double> crossed;  // sum_j n_j prod_{j' != j} (z + c_j')
    for (std::size_t j = 0; j < cs.size(); ++j) {
        Poly<double> t = Poly<double>::constant(double(cs[j].second));
        for (std::size_t j2 = 0; j2 < cs.size(); ++j2)
            if (j2 != j) t *= Poly<double>(std::vector<double>{cs[j2].first, 1.0});
        crossed += t;
    }
    const Poly<double> zm1(std::vector<double>{-1.0, 1.0});
    const Poly<double> zp(std::vector<double>{0.0, 1.0});

    auto bracket_num = [&](double y) {
        double base = n * x * (1.0 - kap) + kap * (n - i) - y;
        if (i == 1) {
            Poly<double> out = (zp * pc).scaled(kap);
            out -= (zp * zm1 * crossed).scaled(kap);
            out += (zm1 * pc).scaled(base);
            return out;
        }
        return Poly<double>(std::vector<double>{-base, base + kap});
    };

    Poly<double> lhs = zp, rhs = Poly<double>::constant(1.0);
    for (const auto& [b, g] : m.intervals) {
        lhs *= bracket_num(to_double(g));
        rhs *= bracket_num(to_double(b));
    }
    Poly<double> full = lhs - rhs;

    GiPoly out;
    out.full = full.c;
    for (double c : out.full) out.scale = std::max(out.scale, std::abs(c));
    out.lead = out.full.empty() ? 0.0 : out.full.back();

    // Synthetic division by (z - 1).
    if (out.full.size() >= 2) {
        std::size_t d = out.full.size() - 1;
        out.deflated.assign(d, 0.0);
        double carry = out.full[d];
        for (std::size_t k = d; k-- > 0;) {
            out.deflated[k] = carry;
            carry = out.full[k] + carry;
        }
        if (std::abs(carry) > 1e-8 * std::max(out.scale, 1.0))
            throw std::runtime_error("gi_polynomial: z=1 deflation residual too large");
    }
    return out;
}

namespace detail {

// Chordal distance on the Riemann sphere: the tracked root legitimately
// passes through both zero and infinity, so the flat metric cannot follow it.
inline double chord(Cplx a, Cplx b) {
    return std::abs(a - b) /
           std::sqrt((1.0 + std::norm(a)) * (1.0 + std::norm(b)));
}

// Deflated class-i system at a complex abscissa, mirroring gi_polynomial.
// The z = 1 root it divides out is exact for every x.
inline std::vector<Cplx> gi_deflated_c(const ModelAsymptotics& mod, int i, Cplx x) {
    const double kap = mod.kappa;
    const int n = mod.n;
    const IntervalMeasure& m = mod.measures[i - 1];
    std::vector<std::pair<double, int>> cs;
    if (i == 1)
        for (const auto& [c, mult] : model_c_values(mod)) cs.emplace_back(to_double(c), mult);

    Poly<Cplx> pc = Poly<Cplx>::constant(1.0);
    for (const auto& [c, mult] : cs) pc *= Poly<Cplx>(std::vector<Cplx>{Cplx(c), Cplx(1.0)});
    Poly<Cplx> crossed;
    for (std::size_t j = 0; j < cs.size(); ++j) {
        Poly<Cplx> t = Poly<Cplx>::constant(Cplx(double(cs[j].second)));
        for (std::size_t j2 = 0; j2 < cs.size(); ++j2)
            if (j2 != j) t *= Poly<Cplx>(std::vector<Cplx>{Cplx(cs[j2].first), Cplx(1.0)});
        crossed += t;
    }
    const Poly<Cplx> zm1(std::vector<Cplx>{Cplx(-1.0), Cplx(1.0)});
    const Poly<Cplx> zp(std::vector<Cplx>{Cplx(0.0), Cplx(1.0)});

    auto bracket_num = [&](double y) {
        Cplx base = double(n) * x * (1.0 - kap) + kap * double(n - i) - y;
        if (i == 1) {
            Poly<Cplx> out = (zp * pc).scaled(Cplx(kap));
            out -= (zp * zm1 * crossed).scaled(Cplx(kap));
            out += (zm1 * pc).scaled(base);
            return out;
        }
        return Poly<Cplx>(std::vector<Cplx>{-base, base + kap});
    };

    Poly<Cplx> lhs = zp, rhs = Poly<Cplx>::constant(1.0);
    for (const auto& [b, g] : m.intervals) {
        lhs *= bracket_num(to_double(g));
        rhs *= bracket_num(to_double(b));
    }
    Poly<Cplx> full = lhs - rhs;
    if (full.c.size() < 2) return {};
    std::vector<Cplx> defl(full.c.size() - 1);
    Cplx carry = full.c.back();
    for (std::size_t k = full.c.size() - 1; k-- > 0;) {
        defl[k] = carry;
        carry = full.c[k] + carry;
    }
    return defl;
}

// Continue the branch root of the class-i system along the segment from xa
// to xb in the complex abscissa plane. A move is accepted when the root
// travelled less than a third of its chordal distance to the nearest rival
// AND the two ends are mutually nearest between the root sets: a spectator
// root can sit close to where the branch was, but it maps back to its own
// predecessor, so the symmetric check catches sheet hops across long steps.
// Away from the real axis the roots never collide, which is the whole point
// of lifting the path.
inline Cplx branch_step_c(const ModelAsymptotics& mod, int i, Cplx xa, Cplx xb, Cplx za) {
    auto prev = poly_roots(gi_deflated_c(mod, i, xa));
    if (prev.empty()) throw std::runtime_error("branch continuation: root set collapsed");
    Cplx z = prev[0];
    for (const Cplx& r : prev)
        if (chord(r, za) < chord(z, za)) z = r;
    double tau = 0.0, step = 1.0;
    for (long guard = 0; tau < 1.0; ++guard) {
        if (guard > 200000) throw std::runtime_error("branch continuation stalled");
        double tau2 = std::min(1.0, tau + step);
        Cplx xt = xa + tau2 * (xb - xa);
        auto roots = poly_roots(gi_deflated_c(mod, i, xt));
        if (roots.empty()) throw std::runtime_error("branch continuation: root set collapsed");
        Cplx r0 = roots[0];
        for (const Cplx& r : roots)
            if (chord(r, z) < chord(r0, z)) r0 = r;
        double d0 = chord(r0, z);
        double sep = 2.0;
        for (const Cplx& r : roots)
            if (r != r0) sep = std::min(sep, chord(r, r0));
        Cplx back = prev[0];
        for (const Cplx& r : prev)
            if (chord(r, r0) < chord(back, r0)) back = r;
        if ((d0 <= 0.35 * sep && back == z) || step < 1e-12) {
            z = r0;
            prev = std::move(roots);
            tau = tau2;
            step = std::min(step * 2.0, 1.0);
        } else {
            step *= 0.5;
        }
    }
    return z;
}

// Branch state of one class marched across a descending sequence of real
// abscissas: the continuation runs at height delta above the real axis
// (where no two roots ever meet) and dips down to classify each target.
class BranchTracker {
  public:
    BranchTracker(const ModelAsymptotics& mod, int i, double xtop, double delta)
        : mod_(mod), i_(i), delta_(delta) {
        // Far-field seed: every root tends to 1, but the branch approaches
        // it at rate (S - kappa)/(n (1 - kappa) x), with S the total class
        // support length, which singles it out of the cluster. The abscissa
        // must be asymptotic yet moderate: far out the whole cluster
        // degenerates below double precision.
        double span = 0.0, yscale = 1.0;
        for (const auto& [b, g] : mod.measures[i - 1].intervals) {
            span += to_double(g) - to_double(b);
            yscale = std::max(yscale, std::abs(to_double(g)));
        }
        double unit = yscale / (mod.n * (1.0 - mod.kappa));
        double xfar = std::max({1e3, 50.0 * unit, 2.0 * std::abs(xtop)});
        double c = (span - mod.kappa) / (mod.n * (1.0 - mod.kappa));
        Cplx target = 1.0 + c / xfar;
        auto roots = poly_roots(gi_deflated_c(mod_, i_, Cplx(xfar)));
        Cplx z = roots.empty() ? target : roots[0];
        for (const Cplx& r : roots)
            if (std::abs(r - target) < std::abs(z - target)) z = r;
        high_ = branch_step_c(mod_, i_, Cplx(xfar), Cplx(xfar, delta_), z);
        high_ = branch_step_c(mod_, i_, Cplx(xfar, delta_), Cplx(xtop, delta_), high_);
        x_ = xtop;
    }

    // Advance to x (which must not exceed the current abscissa) and return
    // the branch root on the real axis there.
    Cplx eval(double x) {
        high_ = branch_step_c(mod_, i_, Cplx(x_, delta_), Cplx(x, delta_), high_);
        x_ = x;
        return branch_step_c(mod_, i_, Cplx(x, delta_), Cplx(x), high_);
    }

  private:
    const ModelAsymptotics& mod_;
    int i_;
    double delta_;
    double x_ = 0.0;
    Cplx high_;
};

}  // namespace detail

// Density of the level-kappa measure along its own coordinate axis, from the
// per-class root systems. Samples where some class shows more than one
// conjugate pair are flagged and excluded from integrals.
struct DensityProfile {
    double kappa = 0.0;
    std::vector<double> x;
    std::vector<double> f;
    std::vector<char> flagged;
    int max_pairs_per_class = 0;
};

inline DensityProfile density_profile(const ModelAsymptotics& mod, std::vector<double> grid) {
    std::sort(grid.begin(), grid.end());
    const int M = static_cast<int>(grid.size());
    DensityProfile out;
    out.kappa = mod.kappa;
    out.x.assign(grid.begin(), grid.end());
    out.f.assign(M, 0.0);
    out.flagged.assign(M, 0);
    if (M == 0) return out;

    // March from the largest x down, where the branch is the root nearest
    // the large-|x| asymptote z = 1 + 1/(nx). The continuation runs slightly
    // above the real axis so it survives zero/infinity crossings and root
    // collisions at pair births.
    double delta = 1e-4 * std::max(1.0, grid[M - 1] - grid[0]);
    std::vector<detail::BranchTracker> track;
    track.reserve(mod.n);
    for (int i = 1; i <= mod.n; ++i) track.emplace_back(mod, i, grid[M - 1], delta);

    for (int idx = M; idx-- > 0;) {
        double x = grid[idx];
        double fx = 0.0;
        for (int i = 1; i <= mod.n; ++i) {
            Cplx zi = track[i - 1].eval(x);
            GiPoly gp = gi_polynomial(mod, i, x);
            auto roots = poly_roots(gp.deflated);
            double tol = 1e-6 * root_spread(roots);
            int pairs = count_conjugate_pairs(roots, tol);
            if (pairs > 1) out.flagged[idx] = 1;
            out.max_pairs_per_class = std::max(out.max_pairs_per_class, pairs);

            if (std::abs(zi.imag()) > 1e-7 * (1.0 + std::abs(zi))) {
                if (zi.imag() > 0.0) zi = std::conj(zi);  // density uses the lower member
                fx += -std::arg(zi) / M_PI;               // arg in (-pi, 0)
            } else if (zi.real() < 0.0) {
                fx += 1.0;
            }
        }
        out.f[idx] = fx;
    }
    return out;
}

// Trapezoid integral of q(x) f(x) over the profile, skipping flagged samples
// (the gap is bridged by the surrounding good samples).
template <class Q>
inline double profile_integral(const DensityProfile& p, Q q) {
    double acc = 0.0;
    bool have = false;
    double px = 0.0, pv = 0.0;
    for (std::size_t k = 0; k < p.x.size(); ++k) {
        if (p.flagged[k]) continue;
        double v = q(p.x[k]) * p.f[k];
        if (have) acc += 0.5 * (pv + v) * (p.x[k] - px);
        px = p.x[k];
        pv = v;
        have = true;
    }
    return acc;
}

inline double profile_mass(const DensityProfile& p) {
    return profile_integral(p, [](double) { return 1.0; });
}

// CDF of the profile at u, linear interpolation on the grid, clamped.
inline double profile_cdf(const DensityProfile& p, double u) {
    double acc = 0.0;
    bool have = false;
    double px = 0.0, pf = 0.0;
    for (std::size_t k = 0; k < p.x.size(); ++k) {
        if (p.flagged[k]) continue;
        double x = p.x[k], f = p.f[k];
        if (have) {
            if (u <= px) return acc;
            if (u < x) {
                double t = (u - px) / (x - px);
                double fu = pf + t * (f - pf);
                return acc + 0.5 * (pf + fu) * (u - px);
            }
            acc += 0.5 * (pf + f) * (x - px);
        } else if (u <= x) {
            return 0.0;
        }
        px = x;
        pf = f;
        have = true;
    }
    return acc;
}

// Suggested coordinate window covering the level-kappa support.
inline std::pair<double, double> suggested_x_range(const ModelAsymptotics& mod) {
    double gmax = 0.0;
    for (const auto& m : mod.measures) gmax = std::max(gmax, to_double(m.intervals.back().second));
    double hi = (gmax + mod.kappa * mod.n + 1.0) / (mod.n * (1.0 - mod.kappa)) + 0.5;
    return {-0.5, hi};
}

namespace detail {

inline bool has_pair(const ModelAsymptotics& mod, int i, double x) {
    GiPoly gp = gi_polynomial(mod, i, x);
    auto roots = poly_roots(gp.deflated);
    return count_conjugate_pairs(roots, 1e-6 * root_spread(roots)) >= 1;
}

// Edge of a conjugate-pair window inside [a, b], where the pair indicator of
// class i flips from its value at a.
inline double pair_edge(const ModelAsymptotics& mod, int i, double a, double b) {
    bool left = has_pair(mod, i, a);
    for (int it = 0; it < 80 && b - a > 1e-13 * (1.0 + std::abs(a)); ++it) {
        double mid = 0.5 * (a + b);
        (has_pair(mod, i, mid) == left ? a : b) = mid;
    }
    return 0.5 * (a + b);
}

// Conjugate-pair windows of one class over [lo, hi]: scan for indicator
// toggles, then bisect each edge.
inline std::vector<std::pair<double, double>> pair_windows(const ModelAsymptotics& mod, int i,
                                                           double lo, double hi, int scan) {
    std::vector<std::pair<double, double>> out;
    bool prevp = has_pair(mod, i, lo);
    double prevx = lo, open = lo;
    for (int k = 1; k < scan; ++k) {
        double x = lo + (hi - lo) * k / double(scan - 1);
        bool cur = has_pair(mod, i, x);
        if (cur != prevp) {
            double e = pair_edge(mod, i, prevx, x);
            if (cur)
                open = e;
            else
                out.emplace_back(open, e);
            prevp = cur;
        }
        prevx = x;
    }
    if (prevp) out.emplace_back(open, hi);
    return out;
}

}  // namespace detail

// Abscissas where a root of the class-i system crosses zero (a beta bracket
// vanishes) or infinity (the leading coefficient does). The density can jump
// between 0 and 1 only at these points or at pair-window edges.
inline std::vector<double> class_events(const ModelAsymptotics& mod, int i) {
    if (i < 1 || i > mod.n) throw std::invalid_argument("class_events: class index out of range");
    std::vector<double> out;
    const double k = mod.kappa;
    const double den = mod.n * (1.0 - k);
    const double off = k * (mod.n - i);
    const int ell = static_cast<int>(mod.yx.size());
    const double leadoff = (i == 1) ? k * (mod.n - ell) : off + k;
    for (const auto& [b, g] : mod.measures[i - 1].intervals) {
        out.push_back((to_double(b) - off) / den);
        out.push_back((to_double(g) - leadoff) / den);
    }
    return out;
}

// Grid for density sampling: a uniform backbone over the suggested range,
// points straddling every zero/infinity crossing (the density may jump
// there), and geometric clusters at the square-root edges of the
// conjugate-pair windows. Returns exactly npoints samples, so a trapezoid
// rule on the result resolves the edge structure without extra knowledge.
inline std::vector<double> refined_grid(const ModelAsymptotics& mod, int npoints) {
    auto [lo, hi] = suggested_x_range(mod);
    std::vector<double> special;
    for (int i = 1; i <= mod.n; ++i) {
        for (double e : class_events(mod, i)) {
            double d = 1e-9 * (1.0 + std::abs(e));
            special.push_back(e - d);
            special.push_back(e + d);
        }
        double hb = (hi - lo) / std::max(1.0, 0.6 * npoints);
        for (const auto& [a, b] : detail::pair_windows(mod, i, lo, hi, 2048)) {
            for (double d = 1e-9 * (1.0 + std::abs(a)); 0.4 * d < hb; d *= 1.4) {
                special.push_back(a - d);
                special.push_back(a + d);
                special.push_back(b - d);
                special.push_back(b + d);
            }
        }
    }
    std::erase_if(special, [&](double v) { return v <= lo || v >= hi; });
    int backbone = npoints - static_cast<int>(special.size());
    if (backbone < 2) throw std::invalid_argument("refined_grid: npoints too small for the model");
    std::vector<double> grid = std::move(special);
    for (int k = 0; k < backbone; ++k) grid.push_back(lo + (hi - lo) * k / double(backbone - 1));
    std::sort(grid.begin(), grid.end());
    return grid;
}

// Moments p = 0..pmax of the level measure from the density pipeline alone,
// independent of the contour route. The range splits into pieces at every
// zero/infinity crossing and every bisected pair-window edge; on a piece the
// branch status of each class is constant, so one continuation per class
// classifies and integrates everything in a single right-to-left sweep.
// Saturated stretches integrate x^p exactly; pair stretches go through
// Simpson in theta after x = a + (b-a) sin^2(theta/2), which absorbs the
// square-root edge behaviour and never evaluates the edges themselves.
inline std::vector<double> density_moments(const ModelAsymptotics& mod, int pmax,
                                           int nodes = 2001) {
    auto [lo, hi] = suggested_x_range(mod);
    if (nodes % 2 == 0) ++nodes;
    std::vector<double> edges{lo, hi};
    for (int i = 1; i <= mod.n; ++i) {
        for (const auto& w : detail::pair_windows(mod, i, lo, hi, 4096)) {
            edges.push_back(w.first);
            edges.push_back(w.second);
        }
        for (double e : class_events(mod, i))
            if (e > lo && e < hi) edges.push_back(e);
    }
    std::sort(edges.begin(), edges.end());

    double delta = 1e-4 * std::max(1.0, hi - lo);
    std::vector<detail::BranchTracker> track;
    track.reserve(mod.n);
    for (int i = 1; i <= mod.n; ++i) track.emplace_back(mod, i, hi, delta);

    const double h = M_PI / (nodes - 1);
    std::vector<double> acc(pmax + 1, 0.0);
    std::vector<std::vector<Cplx>> z(mod.n, std::vector<Cplx>(nodes));
    for (std::size_t k = edges.size() - 1; k-- > 0;) {
        double a = edges[k], b = edges[k + 1];
        if (b - a <= 1e-10) continue;
        for (int j = nodes - 2; j >= 1; --j) {
            double x = a + (b - a) * 0.5 * (1.0 - std::cos(j * h));
            for (int i = 1; i <= mod.n; ++i) z[i - 1][j] = track[i - 1].eval(x);
        }
        for (int i = 1; i <= mod.n; ++i) {
            Cplx zm = z[i - 1][(nodes - 1) / 2];
            if (std::abs(zm.imag()) > 1e-7 * (1.0 + std::abs(zm))) {
                for (int j = 1; j + 1 < nodes; ++j) {
                    double theta = j * h;
                    double x = a + (b - a) * 0.5 * (1.0 - std::cos(theta));
                    Cplx zi = z[i - 1][j];
                    if (zi.imag() > 0.0) zi = std::conj(zi);
                    double g = (-std::arg(zi) / M_PI) * (b - a) * 0.5 * std::sin(theta) *
                               (j % 2 ? 4.0 : 2.0) * h / 3.0;
                    for (int p = 0; p <= pmax; ++p) acc[p] += g * std::pow(x, p);
                }
            } else if (zm.real() < 0.0) {
                for (int p = 0; p <= pmax; ++p)
                    acc[p] += (std::pow(b, p + 1) - std::pow(a, p + 1)) / (p + 1);
            }
        }
    }
    return acc;
}

inline double density_moment(const ModelAsymptotics& mod, int p, int nodes = 2001) {
    return density_moments(mod, p, nodes).back();
}

// Limit height function: the printed form evaluates the CDF of the level
// measure at (chi - kappa r/(2n))/(1-kappa) with r = n minus the number of
// square rows per period.
inline double height_limit(const ModelAsymptotics& mod, const DensityProfile& profile,
                           double chi) {
    if (std::abs(profile.kappa - mod.kappa) > 1e-12)
        throw std::invalid_argument("height_limit: profile was built at a different level");
    int r = mod.n - static_cast<int>(mod.yx.size());
    double u = (chi - mod.kappa * r / (2.0 * mod.n)) / (1.0 - mod.kappa);
    double cdf = profile_cdf(profile, u);
    return 2.0 * (2.0 * (1.0 - mod.kappa) * cdf - 2.0 * chi + 2.0 * mod.kappa);
}

}  // namespace schurlat
