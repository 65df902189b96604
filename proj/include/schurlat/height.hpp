#pragma once

// Height functions on the dual of a contracting square-hexagon lattice.
// The ambient periodic graph is rebuilt locally around the lattice, its
// faces are traced combinatorially, and heights propagate across dual edges
// with increments depending on edge type, matched status, and which side the
// white endpoint lies on. Rows outside the lattice are closed with hexagon
// rows, which only adds inert boundary faces.

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

#include "lattice.hpp"
#include "rational.hpp"

namespace schurlat {

struct HeightField {
    struct FaceHeight {
        Rat cx, cy;       // face center
        long long h = 0;
        bool boundary = false;  // face touches a vertex outside the lattice
    };
    std::vector<FaceHeight> faces;  // sorted by (cx, cy)
    bool consistent = true;
};

namespace detail {

struct ShGraph {
    // Local patch of the ambient graph, vertices keyed by doubled (X, Y).
    std::vector<std::pair<long long, long long>> pos;  // id -> (X, Y)
    std::map<std::pair<long long, long long>, int> id_of;
    std::vector<std::vector<int>> nbr;  // CCW-sorted neighbours

    int add(long long X, long long Y) {
        auto key = std::make_pair(X, Y);
        auto it = id_of.find(key);
        if (it != id_of.end()) return it->second;
        int id = static_cast<int>(pos.size());
        pos.push_back(key);
        id_of[key] = id;
        nbr.emplace_back();
        return id;
    }
};

inline int angle_rank(long long dx, long long dy) {
    if (dx == 1 && dy == 1) return 0;
    if (dx == 0 && dy == 1) return 1;
    if (dx == -1 && dy == 1) return 2;
    if (dx == -1 && dy == -1) return 3;
    if (dx == 0 && dy == -1) return 4;
    if (dx == 1 && dy == -1) return 5;
    throw std::logic_error("angle_rank: unexpected direction");
}

// Builds the patch over black rows -1..N+1 with bits extended by 1 outside
// [1, N]; X range padded around the lattice span.
inline ShGraph build_sh_patch(const LatticeSpec& spec) {
    long long N = spec.N;
    auto bit = [&](long long m) -> int {
        return (m >= 1 && m <= N) ? spec.a[m - 1] : 1;
    };
    long long xmin = 2 * spec.omega_positions.front() - 1;
    long long xmax = 2 * spec.omega_positions.back() - 1;
    xmin -= 2 * N + 8;
    xmax += 2 * N + 8;

    // white row m sits at Y = 2m-1 with X parity wpar[m]; black row m at
    // Y = 2m with parity bpar[m]. Row 1 whites are odd.
    std::map<long long, int> wpar, bpar;
    wpar[1] = 1;
    for (long long m = 1; m <= N + 2; ++m) {
        bpar[m] = bit(m) == 1 ? wpar[m] : 1 - wpar[m];
        wpar[m + 1] = 1 - bpar[m];
    }
    for (long long m = 0; m >= -1; --m) {
        // invert: wpar[m+1] = 1 - bpar[m]; bpar[m] = wpar[m] xor (bit==0)
        bpar[m] = 1 - wpar[m + 1];
        wpar[m] = bit(m) == 1 ? bpar[m] : 1 - bpar[m];
    }

    ShGraph g;
    auto row_xs = [&](int parity) {
        std::vector<long long> xs;
        for (long long X = xmin; X <= xmax; ++X)
            if (((X % 2) + 2) % 2 == parity) xs.push_back(X);
        return xs;
    };
    std::vector<std::pair<int, int>> edges;
    auto link = [&](int a, int b) { edges.emplace_back(a, b); };
    for (long long m = -1; m <= N + 2; ++m) {
        if (m >= 0)
            for (long long X : row_xs(wpar[m])) g.add(X, 2 * m - 1);
        if (m <= N + 1)
            for (long long X : row_xs(bpar[m])) g.add(X, 2 * m);
    }
    for (long long m = -1; m <= N + 1; ++m) {
        // white row m up to black row m
        if (m >= 0)
            for (long long X : row_xs(wpar[m])) {
                auto w = g.id_of.find({X, 2 * m - 1});
                if (w == g.id_of.end()) continue;
                if (bit(m) == 1) {
                    auto b = g.id_of.find({X, 2 * m});
                    if (b != g.id_of.end()) link(w->second, b->second);
                } else {
                    for (long long d : {-1LL, 1LL}) {
                        auto b = g.id_of.find({X + d, 2 * m});
                        if (b != g.id_of.end()) link(w->second, b->second);
                    }
                }
            }
        // black row m up to white row m+1
        for (long long X : row_xs(bpar[m])) {
            auto b = g.id_of.find({X, 2 * m});
            if (b == g.id_of.end()) continue;
            for (long long d : {-1LL, 1LL}) {
                auto w = g.id_of.find({X + d, 2 * m + 1});
                if (w != g.id_of.end()) link(b->second, w->second);
            }
        }
    }
    for (auto [a, b] : edges) {
        g.nbr[a].push_back(b);
        g.nbr[b].push_back(a);
    }
    for (int v = 0; v < static_cast<int>(g.pos.size()); ++v) {
        auto& ns = g.nbr[v];
        std::sort(ns.begin(), ns.end(), [&](int p, int q) {
            auto [vx, vy] = g.pos[v];
            auto [px, py] = g.pos[p];
            auto [qx, qy] = g.pos[q];
            return angle_rank(px - vx, py - vy) < angle_rank(qx - vx, qy - vy);
        });
        ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
    }
    return g;
}

struct FaceSet {
    // face id per directed edge (u, v): face lying to the left of u->v
    std::map<std::pair<int, int>, int> face_of;
    std::vector<std::vector<int>> cycles;  // vertex ids, CCW for interior
    std::vector<bool> interior;
};

inline FaceSet trace_faces(const ShGraph& g) {
    FaceSet fs;
    for (int u = 0; u < static_cast<int>(g.pos.size()); ++u)
        for (int v : g.nbr[u]) {
            if (fs.face_of.count({u, v})) continue;
            int fid = static_cast<int>(fs.cycles.size());
            std::vector<int> cyc;
            int a = u, b = v;
            do {
                fs.face_of[{a, b}] = fid;
                cyc.push_back(a);
                // successor: neighbour of b with the next angle rank CCW
                // after the direction back toward a
                const auto& ns = g.nbr[b];
                auto [bx, by] = g.pos[b];
                auto [ax, ay] = g.pos[a];
                int back = angle_rank(ax - bx, ay - by);
                int best = -1, best_delta = 7;
                for (int w : ns) {
                    auto [wx, wy] = g.pos[w];
                    int r = angle_rank(wx - bx, wy - by);
                    int delta = ((r - back) % 6 + 6) % 6;
                    if (delta == 0) delta = 6;
                    if (delta < best_delta) {
                        best_delta = delta;
                        best = w;
                    }
                }
                a = b;
                b = best;
            } while (!(a == u && b == v));
            long long area2 = 0;
            for (std::size_t i = 0; i < cyc.size(); ++i) {
                auto [x1, y1] = g.pos[cyc[i]];
                auto [x2, y2] = g.pos[cyc[(i + 1) % cyc.size()]];
                area2 += x1 * y2 - x2 * y1;
            }
            fs.cycles.push_back(std::move(cyc));
            fs.interior.push_back(area2 < 0);  // interior cycles come out clockwise
        }
    return fs;
}

}  // namespace detail

// Height field of one matching. Heights live on the faces of the ambient
// graph incident to at least one lattice vertex; the increment across a dual
// step depends on the crossed edge and vanishing is checked over every
// closed loop (consistent flag).
inline HeightField height_function(const Lattice& L, const Matching& M) {
    using detail::ShGraph;
    ShGraph g = detail::build_sh_patch(L.spec);
    detail::FaceSet fs = detail::trace_faces(g);

    // lattice vertices keyed by patch coordinates (row r of the lattice sits
    // at Y = r)
    std::set<std::pair<long long, long long>> rset;
    for (const auto& v : L.verts) rset.insert({v.X, static_cast<long long>(v.row)});
    std::set<std::pair<std::pair<long long, long long>, std::pair<long long, long long>>>
        matched;
    for (int e : M.edge_ids) {
        const auto& ed = L.edges[e];
        matched.insert({{L.verts[ed.lo].X, static_cast<long long>(L.verts[ed.lo].row)},
                        {L.verts[ed.hi].X, static_cast<long long>(L.verts[ed.hi].row)}});
    }

    int nf = static_cast<int>(fs.cycles.size());
    std::vector<bool> is_dual(nf, false), touches_outside(nf, false);
    std::vector<Rat> cx(nf), cy(nf);
    for (int f = 0; f < nf; ++f) {
        if (!fs.interior[f]) continue;
        bool touch = false, outside = false;
        Rat sx = 0, sy = 0;
        for (int vid : fs.cycles[f]) {
            auto [X, Y] = g.pos[vid];
            sx += X;
            sy += Y;
            if (rset.count({X, Y}))
                touch = true;
            else
                outside = true;
        }
        if (!touch) continue;
        is_dual[f] = true;
        touches_outside[f] = outside;
        cx[f] = sx / static_cast<long long>(fs.cycles[f].size());
        cy[f] = sy / static_cast<long long>(fs.cycles[f].size());
    }

    // dual edges: one per ambient edge with a lattice endpoint
    struct DualEdge {
        int f1, f2;
        long long dh;  // h(f2) - h(f1)
    };
    std::vector<DualEdge> duals;
    for (int u = 0; u < static_cast<int>(g.pos.size()); ++u)
        for (int v : g.nbr[u]) {
            if (u > v) continue;
            auto [ux, uy] = g.pos[u];
            auto [vx, vy] = g.pos[v];
            bool u_in = rset.count({ux, uy}) > 0, v_in = rset.count({vx, vy}) > 0;
            if (!u_in && !v_in) continue;
            auto itf = fs.face_of.find({u, v});
            auto itg = fs.face_of.find({v, u});
            if (itf == fs.face_of.end() || itg == fs.face_of.end()) continue;
            int f1 = itf->second, f2 = itg->second;
            if (!is_dual[f1] || !is_dual[f2]) continue;
            bool vertical = (ux == vx);
            bool is_matched = matched.count({{ux, uy}, {vx, vy}}) > 0 ||
                              matched.count({{vx, vy}, {ux, uy}}) > 0;
            // white endpoint: odd Y
            Rat wx = (uy % 2 != 0) ? Rat(ux) : Rat(vx);
            Rat wy = (uy % 2 != 0) ? Rat(uy) : Rat(vy);
            // crossing f1 -> f2: is the white endpoint on the left?
            Rat cross = (cx[f2] - cx[f1]) * (wy - cy[f1]) - (cy[f2] - cy[f1]) * (wx - cx[f1]);
            bool white_left = cross > 0;
            long long dh;
            if (vertical)
                dh = is_matched ? (white_left ? -2 : 2) : (white_left ? 2 : -2);
            else
                dh = is_matched ? (white_left ? -3 : 3) : (white_left ? 1 : -1);
            duals.push_back({f1, f2, dh});
        }

    // BFS from the lexicographically smallest face center
    std::vector<std::vector<std::pair<int, long long>>> adj(nf);
    for (const auto& d : duals) {
        adj[d.f1].push_back({d.f2, d.dh});
        adj[d.f2].push_back({d.f1, -d.dh});
    }
    int f0 = -1;
    for (int f = 0; f < nf; ++f) {
        if (!is_dual[f]) continue;
        if (f0 < 0 || cx[f] < cx[f0] || (cx[f] == cx[f0] && cy[f] < cy[f0])) f0 = f;
    }
    HeightField out;
    if (f0 < 0) return out;
    std::vector<long long> h(nf, 0);
    std::vector<char> seen(nf, 0);
    std::vector<int> queue = {f0};
    seen[f0] = 1;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        int f = queue[qi];
        for (auto [to, dh] : adj[f]) {
            if (!seen[to]) {
                seen[to] = 1;
                h[to] = h[f] + dh;
                queue.push_back(to);
            } else if (h[to] != h[f] + dh)
                out.consistent = false;
        }
    }
    for (int f = 0; f < nf; ++f) {
        if (!is_dual[f]) continue;
        if (!seen[f]) out.consistent = false;  // dual graph must be connected
        out.faces.push_back({cx[f], cy[f], h[f], touches_outside[f]});
    }
    std::sort(out.faces.begin(), out.faces.end(), [](const auto& a, const auto& b) {
        return a.cx != b.cx ? a.cx < b.cx : a.cy < b.cy;
    });
    return out;
}

}  // namespace schurlat
