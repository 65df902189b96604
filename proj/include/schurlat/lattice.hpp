#pragma once

// Contracting square-hexagon lattices: construction from a boundary row and
// a bit word, weighted perfect-matching enumeration, the partition-function
// product formula, row marginals, and the bijection between matchings and
// interlacing partition sequences.

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "partition.hpp"
#include "rational.hpp"
#include "schur.hpp"

namespace schurlat {

// Rows are numbered 1..2N+1 bottom to top: odd rows white, even rows black.
// x_m weights the up-right edge out of black row m (graph rows 2m -> 2m+1);
// y_m weights the up-right edge out of white row m (rows 2m-1 -> 2m) and is
// consulted only when a_m = 0. Horizontal positions are stored doubled so
// that half-integer offsets stay integral.
struct LatticeSpec {
    long long N = 0;
    std::vector<long long> omega_positions;  // strictly increasing, >= 1
    std::vector<int> a;                      // a_1..a_N
    std::vector<Rat> xs;                     // x_1..x_N
    std::vector<Rat> ys;                     // y_1..y_N

    Partition omega() const { return omega_from_positions({omega_positions}); }

    std::vector<int> I2() const {
        std::vector<int> out;
        for (long long m = 1; m <= N; ++m)
            if (a[m - 1] == 0) out.push_back(static_cast<int>(m));
        return out;
    }
};

inline void validate(const LatticeSpec& spec) {
    if (spec.N < 1) throw std::invalid_argument("LatticeSpec: N must be >= 1");
    if (spec.omega_positions.empty())
        throw std::invalid_argument("LatticeSpec: empty boundary row");
    if (static_cast<long long>(spec.omega_positions.size()) != spec.N)
        throw std::invalid_argument("LatticeSpec: boundary row must have N entries");
    require_boundary_row({spec.omega_positions}, "LatticeSpec");
    if (spec.omega_positions.front() != 1)
        throw std::invalid_argument("LatticeSpec: boundary row must start at position 1");
    if (static_cast<long long>(spec.a.size()) != spec.N ||
        static_cast<long long>(spec.xs.size()) != spec.N ||
        static_cast<long long>(spec.ys.size()) != spec.N)
        throw std::invalid_argument("LatticeSpec: a, xs, ys must each have N entries");
    for (long long m = 0; m < spec.N; ++m) {
        if (spec.a[m] != 0 && spec.a[m] != 1)
            throw std::invalid_argument("LatticeSpec: bits must be 0 or 1");
        if (spec.xs[m] <= 0 || spec.ys[m] <= 0)
            throw std::invalid_argument("LatticeSpec: weights must be positive");
    }
}

struct LatticeVertex {
    int row = 0;      // 1..2N+1
    long long X = 0;  // doubled horizontal coordinate
    bool black = false;
};

struct LatticeEdge {
    int lo = 0, hi = 0;  // vertex ids, lo in the lower row
    Rat w;
    bool vertical = false;
};

struct Lattice {
    LatticeSpec spec;
    std::vector<LatticeVertex> verts;           // sorted by (row, X)
    std::vector<LatticeEdge> edges;             // sorted by (lo, hi)
    std::vector<std::vector<int>> vert_edges;   // incident edge ids per vertex
    std::vector<std::vector<int>> row_verts;    // row index 1.. -> vertex ids, left to right

    int rows() const { return static_cast<int>(row_verts.size()) - 1; }

    int vertex_at(int row, long long X) const {
        for (int id : row_verts[row])
            if (verts[id].X == X) return id;
        return -1;
    }
};

// Builds the contracting lattice bottom-up. Black row m keeps the blacks
// adjacent to a full-plane white of the row below lying within the span of
// the previous row; the next white row keeps whites with both downward
// neighbours present.
inline Lattice build_lattice(const LatticeSpec& spec) {
    validate(spec);
    Lattice L;
    L.spec = spec;

    std::vector<long long> whites;  // current white row positions
    for (long long p : spec.omega_positions) whites.push_back(2 * p - 1);

    std::vector<std::vector<long long>> white_rows = {whites};
    std::vector<std::vector<long long>> black_rows;

    long long white_parity = 1;  // X parity of the current white row
    for (long long m = 1; m <= spec.N; ++m) {
        const auto& wr = white_rows.back();
        long long lo = wr.front(), hi = wr.back();
        std::set<long long> blacks;
        for (long long W = lo; W <= hi; ++W) {
            if (((W % 2) + 2) % 2 != white_parity) continue;
            if (spec.a[m - 1] == 1)
                blacks.insert(W);
            else {
                blacks.insert(W - 1);
                blacks.insert(W + 1);
            }
        }
        black_rows.emplace_back(blacks.begin(), blacks.end());
        std::vector<long long> next;
        for (std::size_t i = 0; i + 1 < black_rows.back().size(); ++i) {
            long long W = black_rows.back()[i] + 1;
            if (black_rows.back()[i + 1] == W + 1) next.push_back(W);
        }
        white_rows.push_back(next);
        long long black_parity = (spec.a[m - 1] == 1) ? white_parity : 1 - white_parity;
        white_parity = 1 - black_parity;
        if (next.empty() && m < spec.N)
            throw std::invalid_argument("build_lattice: lattice pinches off before the top");
    }

    int total_rows = 2 * static_cast<int>(spec.N) + (white_rows.back().empty() ? 0 : 1);
    L.row_verts.assign(total_rows + 1, {});
    for (int r = 1; r <= total_rows; ++r) {
        const auto& xs = (r % 2 == 1) ? white_rows[(r - 1) / 2] : black_rows[r / 2 - 1];
        for (long long X : xs) {
            L.row_verts[r].push_back(static_cast<int>(L.verts.size()));
            L.verts.push_back({r, X, r % 2 == 0});
        }
    }

    auto add_edge = [&](int lo, int hi, const Rat& w, bool vertical) {
        L.edges.push_back({lo, hi, w, vertical});
    };
    for (long long m = 1; m <= spec.N; ++m) {
        int wrow = 2 * static_cast<int>(m) - 1, brow = wrow + 1;
        // white row m to black row m
        for (int wid : L.row_verts[wrow]) {
            long long W = L.verts[wid].X;
            if (spec.a[m - 1] == 1) {
                int bid = L.vertex_at(brow, W);
                if (bid >= 0) add_edge(wid, bid, Rat(1), true);
            } else {
                int bl = L.vertex_at(brow, W - 1);
                int br = L.vertex_at(brow, W + 1);
                if (bl >= 0) add_edge(wid, bl, Rat(1), false);
                if (br >= 0) add_edge(wid, br, spec.ys[m - 1], false);
            }
        }
        // black row m to white row m+1
        if (brow + 1 <= total_rows)
            for (int bid : L.row_verts[brow]) {
                long long B = L.verts[bid].X;
                int wl = L.vertex_at(brow + 1, B - 1);
                int wr = L.vertex_at(brow + 1, B + 1);
                if (wl >= 0) add_edge(bid, wl, Rat(1), false);
                if (wr >= 0) add_edge(bid, wr, spec.xs[m - 1], false);
            }
    }
    std::sort(L.edges.begin(), L.edges.end(), [](const LatticeEdge& a, const LatticeEdge& b) {
        return a.lo != b.lo ? a.lo < b.lo : a.hi < b.hi;
    });
    L.vert_edges.assign(L.verts.size(), {});
    for (int e = 0; e < static_cast<int>(L.edges.size()); ++e) {
        L.vert_edges[L.edges[e].lo].push_back(e);
        L.vert_edges[L.edges[e].hi].push_back(e);
    }
    return L;
}

struct Matching {
    std::vector<int> edge_ids;  // sorted

    bool operator<(const Matching& o) const { return edge_ids < o.edge_ids; }
    bool operator==(const Matching& o) const { return edge_ids == o.edge_ids; }
};

inline Rat matching_weight(const Lattice& L, const Matching& M) {
    Rat w = 1;
    for (int e : M.edge_ids) w *= L.edges[e].w;
    return w;
}

// All perfect matchings, found by branching on the lowest-index uncovered
// vertex; emitted in lexicographic edge-set order.
inline std::vector<Matching> enumerate_matchings(const Lattice& L,
                                                 std::size_t cap_vertices = 60) {
    if (L.verts.size() > cap_vertices)
        throw std::length_error("enumerate_matchings: " + std::to_string(L.verts.size()) +
                                " vertices exceed cap " + std::to_string(cap_vertices));
    std::vector<Matching> out;
    std::vector<char> covered(L.verts.size(), 0);
    std::vector<int> chosen;

    auto rec = [&](auto&& self, int from) -> void {
        int v = -1;
        for (int i = from; i < static_cast<int>(L.verts.size()); ++i)
            if (!covered[i]) {
                v = i;
                break;
            }
        if (v < 0) {
            Matching m;
            m.edge_ids = chosen;
            std::sort(m.edge_ids.begin(), m.edge_ids.end());
            out.push_back(std::move(m));
            return;
        }
        for (int e : L.vert_edges[v]) {
            int other = L.edges[e].lo == v ? L.edges[e].hi : L.edges[e].lo;
            if (covered[other]) continue;
            covered[v] = covered[other] = 1;
            chosen.push_back(e);
            self(self, v + 1);
            chosen.pop_back();
            covered[v] = covered[other] = 0;
        }
    };
    rec(rec, 0);
    std::sort(out.begin(), out.end());
    return out;
}

// Chain mu^(N) -> nu^(N) -> mu^(N-1) -> ... -> mu^(0); mu[s] has s parts,
// nu[s] likewise (nu[0] unused). mu[N] is the boundary partition.
struct InterlacingSequence {
    std::vector<Partition> mu;  // size N+1, index s
    std::vector<Partition> nu;  // size N+1, index s >= 1 used

    long long N() const { return static_cast<long long>(mu.size()) - 1; }
};

inline void validate(const InterlacingSequence& seq, const LatticeSpec& spec) {
    long long N = spec.N;
    if (seq.N() != N || static_cast<long long>(seq.nu.size()) != N + 1)
        throw std::invalid_argument("InterlacingSequence: wrong chain length");
    for (long long s = N; s >= 1; --s) {
        if (static_cast<long long>(seq.mu[s].size()) != s ||
            static_cast<long long>(seq.nu[s].size()) != s)
            throw std::invalid_argument("InterlacingSequence: wrong partition length");
        long long m = N + 1 - s;  // white row index paired with step s
        if (spec.a[m - 1] == 1) {
            if (seq.mu[s] != seq.nu[s])
                throw std::invalid_argument("InterlacingSequence: hexagon step must not grow");
        } else if (!cointerlaces(seq.mu[s], seq.nu[s]))
            throw std::invalid_argument("InterlacingSequence: not a vertical strip");
        if (!interlaces(seq.mu[s - 1], seq.nu[s]))
            throw std::invalid_argument("InterlacingSequence: not a horizontal strip");
    }
    if (!seq.mu[0].empty())
        throw std::invalid_argument("InterlacingSequence: chain must end empty");
}

inline Rat sequence_weight(const InterlacingSequence& seq, const LatticeSpec& spec) {
    Rat w = 1;
    for (long long s = spec.N; s >= 1; --s) {
        long long m = spec.N + 1 - s;
        long long gain = weight(seq.nu[s]) - weight(seq.mu[s]);
        long long drop = weight(seq.nu[s]) - weight(seq.mu[s - 1]);
        if (spec.a[m - 1] == 0) w *= rat_pow(spec.ys[m - 1], gain);
        w *= rat_pow(spec.xs[m - 1], drop);
    }
    return w;
}

namespace detail {

// Partition read off one lattice row: mu_k = number of down-marked vertices
// strictly left of the k-th up-marked vertex counted from the right.
inline Partition row_partition(const std::vector<char>& is_v) {
    std::vector<long long> lambda_rev;
    long long lams = 0;
    for (char c : is_v)
        if (c)
            lambda_rev.push_back(lams);
        else
            ++lams;
    return Partition(lambda_rev.rbegin(), lambda_rev.rend());
}

}  // namespace detail

// Reads the interlacing chain from a perfect matching. Whites count as
// V-vertices when matched upward, blacks when matched downward; the bottom
// row carries the boundary partition by definition.
inline InterlacingSequence matching_to_sequence(const Lattice& L, const Matching& M) {
    long long N = L.spec.N;
    std::vector<int> match_of(L.verts.size(), -1);
    for (int e : M.edge_ids) {
        match_of[L.edges[e].lo] = e;
        match_of[L.edges[e].hi] = e;
    }
    InterlacingSequence seq;
    seq.mu.assign(N + 1, {});
    seq.nu.assign(N + 1, {});
    seq.mu[N] = L.spec.omega();
    for (int r = 2; r <= L.rows(); ++r) {
        std::vector<char> is_v;
        for (int id : L.row_verts[r]) {
            int e = match_of[id];
            if (e < 0) throw std::logic_error("matching_to_sequence: uncovered vertex");
            bool matched_up = L.edges[e].lo == id;
            bool v_mark = L.verts[id].black ? !matched_up : matched_up;
            is_v.push_back(v_mark ? 1 : 0);
        }
        Partition p = detail::row_partition(is_v);
        long long t = (r - 1) / 2;  // rows 2t+1 and 2t+2 carry level N-t
        if (r % 2 == 0)
            seq.nu[N - (r - 2) / 2] = p;
        else
            seq.mu[N - t] = p;
    }
    validate(seq, L.spec);
    return seq;
}

// Inverse construction: marks each row's V-vertices from the partition and
// matches V-whites to V-blacks (and down-marked pairs) left to right.
inline Matching sequence_to_matching(const Lattice& L, const InterlacingSequence& seq) {
    validate(seq, L.spec);
    long long N = L.spec.N;
    if (seq.mu[N] != L.spec.omega())
        throw std::invalid_argument("sequence_to_matching: boundary partition mismatch");

    // V-marks per row: the k-th V-vertex from the right has mu_k down-marked
    // vertices strictly to its left, so from the left it sits at row index
    // mu_k + len - k + 1.
    std::vector<std::vector<char>> marks(L.rows() + 1);
    // Boundary whites sit at sparse positions and are all matched upward.
    marks[1].assign(L.row_verts[1].size(), 1);
    for (int r = 2; r <= L.rows(); ++r) {
        const Partition& p = (r % 2 == 1) ? seq.mu[N - (r - 1) / 2] : seq.nu[N - (r - 2) / 2];
        std::size_t row_size = L.row_verts[r].size();
        std::vector<char> is_v(row_size, 0);
        long long len = static_cast<long long>(p.size());
        for (long long k = 1; k <= len; ++k) {
            long long idx = p[k - 1] + len - k;  // zero-based from the left
            if (idx < 0 || idx >= static_cast<long long>(row_size))
                throw std::invalid_argument("sequence_to_matching: partition does not fit row");
            if (is_v[idx]) throw std::invalid_argument("sequence_to_matching: mark collision");
            is_v[idx] = 1;
        }
        marks[r] = std::move(is_v);
    }

    std::vector<int> edge_ids;
    auto find_edge = [&](int a, int b) {
        for (int e : L.vert_edges[a]) {
            const auto& ed = L.edges[e];
            if ((ed.lo == a && ed.hi == b) || (ed.lo == b && ed.hi == a)) return e;
        }
        throw std::invalid_argument("sequence_to_matching: required edge missing");
    };
    for (int r = 1; r < L.rows(); ++r) {
        // Upward-matched pairs between rows r and r+1: V-whites with V-blacks
        // when r is white, down-marked blacks with down-marked whites when r
        // is black. Pair in order; planarity leaves no other choice.
        std::vector<int> lower, upper;
        bool r_white = (r % 2 == 1);
        for (std::size_t i = 0; i < L.row_verts[r].size(); ++i)
            if (marks[r][i] == (r_white ? 1 : 0)) lower.push_back(L.row_verts[r][i]);
        for (std::size_t i = 0; i < L.row_verts[r + 1].size(); ++i)
            if (marks[r + 1][i] == (r_white ? 1 : 0)) upper.push_back(L.row_verts[r + 1][i]);
        if (lower.size() != upper.size())
            throw std::invalid_argument("sequence_to_matching: row mark counts disagree");
        for (std::size_t i = 0; i < lower.size(); ++i)
            edge_ids.push_back(find_edge(lower[i], upper[i]));
    }
    Matching M;
    M.edge_ids = std::move(edge_ids);
    std::sort(M.edge_ids.begin(), M.edge_ids.end());
    if (2 * M.edge_ids.size() != L.verts.size())
        throw std::invalid_argument("sequence_to_matching: not a perfect matching");
    return M;
}

// Independent enumeration of all valid chains over the given boundary data.
inline std::vector<InterlacingSequence> enumerate_sequences(const LatticeSpec& spec,
                                                            std::size_t cap = 1u << 20) {
    validate(spec);
    long long N = spec.N;
    std::vector<InterlacingSequence> out;
    InterlacingSequence cur;
    cur.mu.assign(N + 1, {});
    cur.nu.assign(N + 1, {});
    cur.mu[N] = spec.omega();

    auto extend_mu = [&](auto&& self, long long s) -> void {
        // choose nu[s] from mu[s], then mu[s-1] from nu[s]
        long long m = N + 1 - s;
        const Partition& base = cur.mu[s];
        std::vector<Partition> nus;
        if (spec.a[m - 1] == 1)
            nus.push_back(base);
        else {
            // all vertical-strip extensions: add 0 or 1 to each part, keep sorted
            std::vector<char> add(s, 0);
            while (true) {
                Partition cand(base);
                bool ok = true;
                for (long long i = 0; i < s; ++i) cand[i] += add[i];
                for (long long i = 0; i + 1 < s; ++i)
                    if (cand[i] < cand[i + 1]) ok = false;
                if (ok) nus.push_back(cand);
                long long i = 0;
                for (; i < s; ++i) {
                    if (!add[i]) {
                        add[i] = 1;
                        for (long long j = 0; j < i; ++j) add[j] = 0;
                        break;
                    }
                }
                if (i == s) break;
            }
        }
        for (auto& nu : nus) {
            cur.nu[s] = nu;
            if (s == 1) {
                if (out.size() >= cap)
                    throw std::length_error("enumerate_sequences: cap exceeded");
                out.push_back(cur);
                continue;
            }
            // mu[s-1] interlaces below nu: mu_i in [nu_{i+1}, nu_i]
            Partition mu(s - 1);
            for (long long i = 0; i + 1 < s; ++i) mu[i] = nu[i + 1];
            while (true) {
                cur.mu[s - 1] = mu;
                self(self, s - 1);
                long long i = 0;
                for (; i + 1 < s; ++i) {
                    if (mu[i] < nu[i]) {
                        ++mu[i];
                        for (long long j = 0; j < i; ++j) mu[j] = nu[j + 1];
                        break;
                    }
                }
                if (i + 1 == s) break;
            }
        }
    };
    if (N >= 1) extend_mu(extend_mu, N);
    return out;
}

namespace detail {

inline Rat schur_any(const Partition& lambda, const std::vector<Rat>& values) {
    bool distinct = true;
    for (std::size_t i = 0; i < values.size() && distinct; ++i)
        for (std::size_t j = i + 1; j < values.size(); ++j)
            if (values[i] == values[j]) {
                distinct = false;
                break;
            }
    if (distinct) return schur_determinant(lambda, values);
    detail::BranchingCaps caps{static_cast<long long>(values.size()),
                               std::max(40LL, weight(lambda))};
    return schur_branching(lambda, values, caps);
}

}  // namespace detail

// Product formula: Z = prod_{i in I2} prod_{t=i..N} (1 + y_i x_t) * s_omega(x).
inline Rat partition_function(const LatticeSpec& spec) {
    validate(spec);
    Rat z = 1;
    for (int i : spec.I2())
        for (long long t = i; t <= spec.N; ++t) z *= 1 + spec.ys[i - 1] * spec.xs[t - 1];
    return z * detail::schur_any(spec.omega(), spec.xs);
}

// Exact Boltzmann distribution of the partition read off one row, by direct
// enumeration.
inline std::map<Partition, Rat> boltzmann_marginal(const Lattice& L, int row,
                                                   std::size_t cap_vertices = 60) {
    if (row < 1 || row > 2 * L.spec.N + 1)
        throw std::invalid_argument("boltzmann_marginal: row out of range");
    auto ms = enumerate_matchings(L, cap_vertices);
    Rat total = 0;
    std::map<Partition, Rat> dist;
    for (const auto& M : ms) {
        Rat w = matching_weight(L, M);
        total += w;
        InterlacingSequence seq = matching_to_sequence(L, M);
        long long N = L.spec.N;
        Partition p;
        if (row > L.rows())
            p = {};
        else if (row % 2 == 1)
            p = seq.mu[N - (row - 1) / 2];
        else
            p = seq.nu[N - (row - 2) / 2];
        dist[p] += w;
    }
    for (auto& [k, v] : dist) v /= total;
    return dist;
}

}  // namespace schurlat
