#pragma once

// Exact Schur polynomial evaluation by three routes: the branching-rule
// oracle, the bialternant determinant, and the coset expansion over
// Sigma_N / Sigma_N^X (with its deformed variant for partially substituted
// variables).

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "partition.hpp"
#include "rational.hpp"

namespace schurlat {

// Periodic variable collection: values x_1 > ... > x_n > 0 repeated to
// total length N with n | N.
struct VariableSpec {
    int n = 0;
    std::vector<Rat> x;
    long long N = 0;

    VariableSpec() = default;
    VariableSpec(std::vector<Rat> values, long long total) : x(std::move(values)), N(total) {
        n = static_cast<int>(x.size());
        if (n == 0) throw std::invalid_argument("VariableSpec: no values");
        for (int i = 0; i < n; ++i) {
            if (x[i] <= 0) throw std::invalid_argument("VariableSpec: values must be positive");
            if (i + 1 < n && x[i] <= x[i + 1])
                throw std::invalid_argument("VariableSpec: values must strictly decrease");
        }
        if (N < n || N % n != 0)
            throw std::invalid_argument("VariableSpec: period must divide total count");
    }

    // 1-based periodic expansion.
    const Rat& value(long long j) const { return x[(j - 1) % n]; }
    int class_of(long long j) const { return static_cast<int>((j - 1) % n); }
    long long block() const { return N / n; }

    std::vector<Rat> expanded() const {
        std::vector<Rat> v(N);
        for (long long j = 1; j <= N; ++j) v[j - 1] = value(j);
        return v;
    }
};

// sigma is stored one-based: sigma[j-1] = image of j.
using Perm = std::vector<int>;

struct CosetDatum {
    Perm sigma;
    std::vector<long long> eta;
    std::vector<Partition> phi;  // one partition per value class
};

namespace detail {

struct BranchingCaps {
    long long max_length = 8;
    long long max_weight = 40;
};

inline void check_branching_caps(const Partition& lambda, std::size_t nvals,
                                 const BranchingCaps& caps) {
    if (static_cast<long long>(nvals) > caps.max_length)
        throw std::invalid_argument("schur_branching: too many variables (cap " +
                                    std::to_string(caps.max_length) + ")");
    if (weight(lambda) > caps.max_weight)
        throw std::invalid_argument("schur_branching: |lambda| exceeds cap " +
                                    std::to_string(caps.max_weight));
}

}  // namespace detail

// Reference oracle: recursive branching over interlacing sub-partitions,
// s_nu(v_1..v_L) = sum over mu interlacing nu of v_L^{|nu|-|mu|} s_mu(v_1..v_{L-1}).
// Repeated values are fine. Cost is combinatorial; caps keep it honest.
inline Rat schur_branching(const Partition& lambda, const std::vector<Rat>& values,
                           detail::BranchingCaps caps = {}) {
    require_partition(lambda, "schur_branching");
    if (lambda.size() != values.size())
        throw std::invalid_argument("schur_branching: length mismatch");
    detail::check_branching_caps(lambda, values.size(), caps);

    std::vector<std::map<Partition, Rat>> memo(values.size() + 1);

    auto eval = [&](auto&& self, const Partition& nu, std::size_t level) -> Rat {
        if (level == 0) return 1;
        auto it = memo[level].find(nu);
        if (it != memo[level].end()) return it->second;
        Rat total = 0;
        long long nu_weight = weight(nu);
        // Odometer over mu with nu_{i+1} <= mu_i <= nu_i.
        std::size_t m = level - 1;
        Partition mu(m);
        for (std::size_t i = 0; i < m; ++i) mu[i] = nu[i + 1];
        while (true) {
            long long drop = nu_weight - weight(mu);
            total += rat_pow(values[level - 1], drop) * self(self, mu, level - 1);
            std::size_t i = 0;
            for (; i < m; ++i) {
                if (mu[i] < nu[i]) {
                    ++mu[i];
                    for (std::size_t j = 0; j < i; ++j) mu[j] = nu[j + 1];
                    break;
                }
            }
            if (i == m) break;
        }
        memo[level][nu] = total;
        return total;
    };
    return eval(eval, lambda, values.size());
}

// Bialternant form det(u_i^{lambda_j + N - j}) / Vandermonde(u); requires
// pairwise distinct values.
inline Rat schur_determinant(const Partition& lambda, const std::vector<Rat>& values) {
    require_partition(lambda, "schur_determinant");
    std::size_t N = values.size();
    if (lambda.size() != N) throw std::invalid_argument("schur_determinant: length mismatch");
    if (N == 0) return 1;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = i + 1; j < N; ++j)
            if (values[i] == values[j])
                throw std::invalid_argument("schur_determinant: repeated values");

    std::vector<std::vector<Rat>> a(N, std::vector<Rat>(N));
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j)
            a[i][j] = rat_pow(values[i], lambda[j] + static_cast<long long>(N - 1 - j));

    Rat det = 1;
    for (std::size_t col = 0; col < N; ++col) {
        std::size_t piv = col;
        while (piv < N && a[piv][col] == 0) ++piv;
        if (piv == N) return 0;
        if (piv != col) {
            std::swap(a[piv], a[col]);
            det = -det;
        }
        det *= a[col][col];
        for (std::size_t r = col + 1; r < N; ++r) {
            if (a[r][col] == 0) continue;
            Rat f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < N; ++c) a[r][c] -= f * a[col][c];
        }
    }
    Rat vdm = 1;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = i + 1; j < N; ++j) vdm *= values[i] - values[j];
    return det / vdm;
}

// Weyl dimension product for s_lambda(1,...,1) with N ones.
inline Rat schur_at_ones(const Partition& lambda, long long N) {
    require_partition(lambda, "schur_at_ones");
    if (static_cast<long long>(lambda.size()) > N)
        throw std::invalid_argument("schur_at_ones: partition longer than N");
    auto part = [&](long long j) {
        return j <= static_cast<long long>(lambda.size()) ? lambda[j - 1] : 0;
    };
    Rat r = 1;
    for (long long j = 1; j <= N; ++j)
        for (long long k = j + 1; k <= N; ++k)
            r *= Rat(part(j) - part(k) + k - j, k - j);
    return r;
}

// Number of right cosets of the stabilizer of X: N! / ((N/n)!)^n.
inline Int coset_count(const VariableSpec& spec) {
    auto fact = [](long long m) {
        Int f = 1;
        for (long long i = 2; i <= m; ++i) f *= i;
        return f;
    };
    Int c = fact(spec.N);
    Int d = fact(spec.block());
    for (int i = 0; i < spec.n; ++i) c /= d;
    return c;
}

namespace detail {

inline std::vector<long long> eta_of(const Perm& sigma, const VariableSpec& spec) {
    long long N = static_cast<long long>(sigma.size());
    std::vector<long long> eta(N);
    std::vector<long long> suffix_same(spec.n, 0);
    for (long long j = N; j >= 1; --j) {
        int c = spec.class_of(sigma[j - 1]);
        eta[j - 1] = (N - j) - suffix_same[c];
        ++suffix_same[c];
    }
    return eta;
}

}  // namespace detail

// One representative per right coset of Sigma_N^X, each the lexicographically
// smallest permutation of its coset; sigma_0 (weights sorted descending) is
// always among them. Throws when the coset count exceeds the cap.
inline std::vector<CosetDatum> coset_representatives(const VariableSpec& spec,
                                                     long long cap = 10000) {
    Int count = coset_count(spec);
    if (count > cap)
        throw std::length_error("coset_representatives: " + count.str() +
                                " cosets exceed cap " + std::to_string(cap));

    long long N = spec.N, block = spec.block();
    std::vector<int> classes;
    for (int c = 0; c < spec.n; ++c)
        classes.insert(classes.end(), block, c);
    // classes starts sorted ascending, which is sigma_0's class word since
    // the x values descend.
    std::vector<CosetDatum> out;
    do {
        std::vector<std::vector<int>> pool(spec.n);
        for (long long j = N; j >= 1; --j)
            if (spec.class_of(j) >= 0) pool[spec.class_of(j)].push_back(static_cast<int>(j));
        Perm sigma(N);
        for (long long j = 0; j < N; ++j) {
            auto& p = pool[classes[j]];
            sigma[j] = p.back();  // smallest unused index of that class
            p.pop_back();
        }
        CosetDatum d;
        d.sigma = std::move(sigma);
        d.eta = detail::eta_of(d.sigma, spec);
        out.push_back(std::move(d));
    } while (std::next_permutation(classes.begin(), classes.end()));
    return out;
}

// Fills eta and the per-class partitions phi for an arbitrary permutation.
inline CosetDatum phi_data(const Partition& lambda, const Perm& sigma,
                           const VariableSpec& spec) {
    require_partition(lambda, "phi_data");
    if (static_cast<long long>(lambda.size()) != spec.N ||
        static_cast<long long>(sigma.size()) != spec.N)
        throw std::invalid_argument("phi_data: length mismatch");
    CosetDatum d;
    d.sigma = sigma;
    d.eta = detail::eta_of(sigma, spec);
    d.phi.assign(spec.n, {});
    for (long long j = 1; j <= spec.N; ++j)
        d.phi[spec.class_of(sigma[j - 1])].push_back(lambda[j - 1] + d.eta[j - 1]);
    for (auto& p : d.phi) {
        std::sort(p.rbegin(), p.rend());
        if (static_cast<long long>(p.size()) != spec.block())
            throw std::logic_error("phi_data: class size mismatch");
    }
    return d;
}

namespace detail {

// Product over position pairs in distinct classes of 1/(w_{sigma(i)} - w_{sigma(j)}).
inline Rat cross_class_factor(const Perm& sigma, const VariableSpec& spec,
                              const std::vector<Rat>& w) {
    long long N = spec.N;
    Rat denom = 1;
    for (long long i = 1; i <= N; ++i)
        for (long long j = i + 1; j <= N; ++j) {
            if (spec.class_of(sigma[i - 1]) == spec.class_of(sigma[j - 1])) continue;
            Rat diff = w[sigma[i - 1] - 1] - w[sigma[j - 1] - 1];
            if (diff == 0)
                throw std::domain_error("cross-class values coincide; formula degenerates");
            denom *= diff;
        }
    return 1 / denom;
}

}  // namespace detail

// Coset expansion of s_lambda at the periodic values of spec.
inline Rat schur_coset(const Partition& lambda, const VariableSpec& spec,
                       long long cap = 10000) {
    require_partition(lambda, "schur_coset");
    if (static_cast<long long>(lambda.size()) != spec.N)
        throw std::invalid_argument("schur_coset: length mismatch");
    std::vector<Rat> w = spec.expanded();
    Rat total = 0;
    for (const auto& rep : coset_representatives(spec, cap)) {
        CosetDatum d = phi_data(lambda, rep.sigma, spec);
        Rat term = 1;
        for (int i = 0; i < spec.n; ++i) {
            term *= rat_pow(spec.x[i], weight(d.phi[i]));
            term *= schur_at_ones(d.phi[i], spec.block());
        }
        term *= detail::cross_class_factor(rep.sigma, spec, w);
        total += term;
    }
    return total;
}

// Deformed coset expansion: the first k variables are replaced by arbitrary
// values u_1..u_k (k = qn + r, r < n); the class-i Schur factor picks up the
// deformed arguments u_i/x_i, u_{n+i}/x_i, ... and ones elsewhere, and the
// cross-class product runs over the deformed value vector.
inline Rat schur_coset_general(const Partition& lambda, const std::vector<Rat>& u,
                               const VariableSpec& spec, long long cap = 10000) {
    require_partition(lambda, "schur_coset_general");
    if (static_cast<long long>(lambda.size()) != spec.N)
        throw std::invalid_argument("schur_coset_general: length mismatch");
    // The per-class factors have N/n variables and weight at most
    // |lambda| + N^2, so widen the oracle caps accordingly.
    detail::BranchingCaps caps{spec.block(), weight(lambda) + spec.N * spec.N};
    long long k = static_cast<long long>(u.size());
    if (k > spec.N) throw std::invalid_argument("schur_coset_general: too many deformed values");
    long long q = k / spec.n, r = k % spec.n;

    std::vector<Rat> w = spec.expanded();
    for (long long j = 0; j < k; ++j) w[j] = u[j];

    Rat total = 0;
    for (const auto& rep : coset_representatives(spec, cap)) {
        CosetDatum d = phi_data(lambda, rep.sigma, spec);
        Rat term = 1;
        for (int i = 1; i <= spec.n; ++i) {
            const Partition& phi = d.phi[i - 1];
            term *= rat_pow(spec.x[i - 1], weight(phi));
            long long deformed = (i <= r) ? q + 1 : q;
            std::vector<Rat> args(spec.block(), Rat(1));
            for (long long t = 0; t < deformed; ++t)
                args[t] = u[t * spec.n + i - 1] / spec.x[i - 1];
            term *= schur_branching(phi, args, caps);
        }
        term *= detail::cross_class_factor(rep.sigma, spec, w);
        total += term;
    }
    return total;
}

}  // namespace schurlat
