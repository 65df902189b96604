#pragma once

// Partitions (signatures), interlacing relations, boundary rows, and the
// counting measures attached to them. All arithmetic here is exact.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rational.hpp"

namespace schurlat {

// Dense storage with explicit trailing zeros; the length is part of the
// identity of the partition.
using Partition = std::vector<long long>;

inline bool is_partition(const Partition& p) {
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] < 0) return false;
        if (i + 1 < p.size() && p[i] < p[i + 1]) return false;
    }
    return true;
}

inline void require_partition(const Partition& p, const char* where) {
    if (!is_partition(p))
        throw std::invalid_argument(std::string(where) + ": not a partition");
}

inline long long weight(const Partition& p) {
    return std::accumulate(p.begin(), p.end(), 0LL);
}

inline std::string partition_str(const Partition& p) {
    std::string s;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(p[i]);
    }
    return s;
}

inline Partition parse_partition(const std::string& text) {
    Partition p;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) throw std::invalid_argument("parse_partition: empty entry");
        p.push_back(std::stoll(item));
    }
    require_partition(p, "parse_partition");
    return p;
}

namespace detail {
inline long long part_at(const Partition& p, std::size_t i) {
    return i < p.size() ? p[i] : 0;
}
}  // namespace detail

// lower <= upper with at most one box removed per column: upper_1 >= lower_1
// >= upper_2 >= lower_2 >= ... after padding the shorter with zeros.
inline bool interlaces(const Partition& lower, const Partition& upper) {
    std::size_t m = std::max(lower.size(), upper.size());
    for (std::size_t i = 0; i < m; ++i) {
        long long up = detail::part_at(upper, i);
        long long lo = detail::part_at(lower, i);
        if (lo > up) return false;
        if (i + 1 < m && detail::part_at(upper, i + 1) > lo) return false;
    }
    return true;
}

// lower <= upper with at most one box added per row: upper_k - lower_k in {0,1}.
inline bool cointerlaces(const Partition& lower, const Partition& upper) {
    std::size_t m = std::max(lower.size(), upper.size());
    for (std::size_t i = 0; i < m; ++i) {
        long long d = detail::part_at(upper, i) - detail::part_at(lower, i);
        if (d < 0 || d > 1) return false;
    }
    return true;
}

struct AtomicMeasure {
    // Sorted by decreasing position, coincident atoms merged.
    std::vector<std::pair<Rat, Rat>> atoms;  // (position, mass)

    Rat total_mass() const {
        Rat m = 0;
        for (const auto& a : atoms) m += a.second;
        return m;
    }

    void normalize() {
        std::sort(atoms.begin(), atoms.end(),
                  [](const auto& a, const auto& b) { return a.first > b.first; });
        std::vector<std::pair<Rat, Rat>> merged;
        for (const auto& a : atoms) {
            if (!merged.empty() && merged.back().first == a.first)
                merged.back().second += a.second;
            else
                merged.push_back(a);
        }
        atoms = std::move(merged);
    }
};

inline AtomicMeasure counting_measure(const Partition& lambda) {
    require_partition(lambda, "counting_measure");
    if (lambda.empty()) throw std::invalid_argument("counting_measure: empty partition");
    long long n = static_cast<long long>(lambda.size());
    AtomicMeasure m;
    for (long long i = 1; i <= n; ++i)
        m.atoms.emplace_back(Rat(lambda[i - 1] + n - i, n), Rat(1, n));
    m.normalize();
    return m;
}

// Positions of the white vertices on the bottom boundary row, 1-based and
// strictly increasing.
struct BoundaryRow {
    std::vector<long long> positions;

    std::size_t size() const { return positions.size(); }
};

inline void require_boundary_row(const BoundaryRow& row, const char* where) {
    const auto& v = row.positions;
    if (v.empty()) throw std::invalid_argument(std::string(where) + ": empty row");
    if (v.front() < 1)
        throw std::invalid_argument(std::string(where) + ": positions must be >= 1");
    for (std::size_t i = 0; i + 1 < v.size(); ++i)
        if (v[i] >= v[i + 1])
            throw std::invalid_argument(std::string(where) +
                                        ": positions must strictly increase");
}

inline Partition omega_from_positions(const BoundaryRow& row) {
    require_boundary_row(row, "omega_from_positions");
    std::size_t n = row.size();
    Partition omega(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t k = n - i;  // omega_i = Omega_{n+1-i} - (n+1-i)
        omega[i] = row.positions[k - 1] - static_cast<long long>(k);
    }
    return omega;
}

inline BoundaryRow positions_from_omega(const Partition& omega) {
    require_partition(omega, "positions_from_omega");
    std::size_t n = omega.size();
    BoundaryRow row;
    row.positions.resize(n);
    for (std::size_t k = 1; k <= n; ++k)
        row.positions[k - 1] = omega[n - k] + static_cast<long long>(k);
    return row;
}

// Distinct part values mu_1 > ... > mu_s with their multiplicities, in the
// order they appear in the (weakly decreasing) partition.
struct DistinctParts {
    std::vector<long long> values;
    std::vector<long long> counts;

    std::size_t s() const { return values.size(); }
};

inline DistinctParts distinct_parts(const Partition& p) {
    require_partition(p, "distinct_parts");
    DistinctParts d;
    for (long long v : p) {
        if (!d.values.empty() && d.values.back() == v)
            ++d.counts.back();
        else {
            d.values.push_back(v);
            d.counts.push_back(1);
        }
    }
    return d;
}

// Expands runs A_i..B_i (A_1 <= B_1 < A_2 <= ... <= B_s) into a BoundaryRow.
inline BoundaryRow staircase_blocks(
    const std::vector<std::pair<long long, long long>>& blocks) {
    if (blocks.empty()) throw std::invalid_argument("staircase_blocks: no blocks");
    BoundaryRow row;
    long long prev_end = 0;
    for (const auto& [a, b] : blocks) {
        if (a < 1 || b < a || a <= prev_end)
            throw std::invalid_argument("staircase_blocks: runs must be ordered and disjoint");
        for (long long p = a; p <= b; ++p) row.positions.push_back(p);
        prev_end = b;
    }
    return row;
}

// Index sets J_i from the two-row array pairing the sorted parts of omega
// with N/n copies of each of x_1..x_n: J_i collects the t whose column block
// meets the i-th weight block. 1-based t values, ascending.
inline std::vector<std::vector<int>> j_index_sets(int n, const Partition& omega) {
    require_partition(omega, "j_index_sets");
    long long N = static_cast<long long>(omega.size());
    if (n < 1 || N % n != 0)
        throw std::invalid_argument("j_index_sets: n must divide the length");
    long long block = N / n;
    DistinctParts d = distinct_parts(omega);
    std::vector<std::vector<int>> js(n);
    long long col = 0;  // columns [col+1, col+counts[t]] hold value t
    for (std::size_t t = 0; t < d.s(); ++t) {
        long long lo = col + 1, hi = col + d.counts[t];
        for (int i = 0; i < n; ++i) {
            long long xlo = static_cast<long long>(i) * block + 1;
            long long xhi = xlo + block - 1;
            if (lo <= xhi && xlo <= hi) js[i].push_back(static_cast<int>(t) + 1);
        }
        col += d.counts[t];
    }
    return js;
}

// True iff the J_i are pairwise disjoint (each value block lies inside a
// single weight block).
inline bool j_sets_disjoint(int n, const Partition& omega) {
    auto js = j_index_sets(n, omega);
    std::vector<int> seen;
    for (const auto& j : js)
        for (int t : j) seen.push_back(t);
    std::sort(seen.begin(), seen.end());
    return std::adjacent_find(seen.begin(), seen.end()) == seen.end();
}

}  // namespace schurlat
