#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "schurlat/height.hpp"
#include "schurlat/lattice.hpp"

using namespace schurlat;

namespace {

std::mt19937 rng(90210);

Rat random_weight() {
    std::uniform_int_distribution<int> num(1, 6), den(1, 3);
    return Rat(num(rng), den(rng));
}

LatticeSpec random_spec(bool force_squares, std::size_t max_vertices = 60) {
    for (int attempt = 0; attempt < 200; ++attempt) {
        std::uniform_int_distribution<int> nlaw(2, 4);
        long long N = nlaw(rng);
        LatticeSpec spec;
        spec.N = N;
        std::uniform_int_distribution<int> gap(1, 3), bit(0, 1);
        long long pos = 1;
        for (long long i = 0; i < N; ++i) {
            spec.omega_positions.push_back(pos);
            pos += gap(rng);
        }
        bool has_square = false;
        for (long long i = 0; i < N; ++i) {
            int b = force_squares && i == N - 1 && !has_square ? 0 : bit(rng);
            if (!force_squares) b = 1;
            spec.a.push_back(b);
            has_square = has_square || b == 0;
            spec.xs.push_back(random_weight());
            spec.ys.push_back(random_weight());
        }
        Lattice L = build_lattice(spec);
        if (L.verts.size() <= max_vertices) return spec;
    }
    throw std::runtime_error("random_spec: no small lattice found");
}

Rat enumerated_z(const Lattice& L) {
    Rat z = 0;
    for (const auto& m : enumerate_matchings(L)) z += matching_weight(L, m);
    return z;
}

}  // namespace

TEST_CASE("two-row hexagon lattice") {
    LatticeSpec spec{2, {1, 3}, {1, 1}, {Rat(5), Rat(3)}, {Rat(1), Rat(1)}};
    Lattice L = build_lattice(spec);
    CHECK(L.verts.size() == 10);
    auto ms = enumerate_matchings(L);
    REQUIRE(ms.size() == 2);
    CHECK(enumerated_z(L) == Rat(5) + Rat(3));
    CHECK(partition_function(spec) == Rat(8));
}

TEST_CASE("two-row lattice with one square row") {
    Rat x1(5), x2(3), y1(7, 2);
    LatticeSpec spec{2, {1, 3}, {0, 1}, {x1, x2}, {y1, Rat(1)}};
    Lattice L = build_lattice(spec);
    auto ms = enumerate_matchings(L);
    CHECK(ms.size() == 8);
    Rat expected = (x1 + x2) * (1 + y1 * x1) * (1 + y1 * x2);
    CHECK(enumerated_z(L) == expected);
    CHECK(partition_function(spec) == expected);
}

TEST_CASE("three-row mixed lattice counts") {
    LatticeSpec spec{3, {1, 3, 6}, {1, 0, 1},
                     {Rat(1), Rat(1), Rat(1)},
                     {Rat(1), Rat(1), Rat(1)}};
    Lattice L = build_lattice(spec);
    auto ms = enumerate_matchings(L);
    CHECK(ms.size() == 60);
    CHECK(partition_function(spec) == Rat(60));
    CHECK(enumerated_z(L) == Rat(60));
}

TEST_CASE("spec validation") {
    LatticeSpec bad{1, {}, {1}, {Rat(1)}, {Rat(1)}};
    CHECK_THROWS_AS(build_lattice(bad), std::invalid_argument);
    LatticeSpec bad2{2, {3, 1}, {1, 1}, {Rat(1), Rat(1)}, {Rat(1), Rat(1)}};
    CHECK_THROWS_AS(build_lattice(bad2), std::invalid_argument);
    LatticeSpec bad3{2, {1, 3}, {1, 2}, {Rat(1), Rat(1)}, {Rat(1), Rat(1)}};
    CHECK_THROWS_AS(build_lattice(bad3), std::invalid_argument);
}

TEST_CASE("partition function identity on random lattices") {
    for (int trial = 0; trial < 24; ++trial) {
        LatticeSpec spec = random_spec(trial % 2 == 1);
        Lattice L = build_lattice(spec);
        INFO("N=" << spec.N << " verts=" << L.verts.size());
        CHECK(enumerated_z(L) == partition_function(spec));
    }
}

TEST_CASE("matchings and interlacing sequences biject") {
    for (int trial = 0; trial < 10; ++trial) {
        LatticeSpec spec = random_spec(trial % 2 == 0, 40);
        Lattice L = build_lattice(spec);
        auto ms = enumerate_matchings(L);
        std::set<InterlacingSequence*> dummy;
        std::set<std::vector<int>> seen;
        for (const auto& M : ms) {
            InterlacingSequence seq = matching_to_sequence(L, M);
            CHECK(sequence_weight(seq, spec) == matching_weight(L, M));
            Matching back = sequence_to_matching(L, seq);
            CHECK(back == M);
            std::vector<int> key;
            for (const auto& p : seq.mu)
                for (long long v : p) key.push_back(static_cast<int>(v)), key.push_back(-1);
            for (const auto& p : seq.nu)
                for (long long v : p) key.push_back(static_cast<int>(v)), key.push_back(-2);
            seen.insert(key);
        }
        CHECK(seen.size() == ms.size());
        auto seqs = enumerate_sequences(spec);
        CHECK(seqs.size() == ms.size());
        for (const auto& s : seqs) {
            Matching M = sequence_to_matching(L, s);
            InterlacingSequence round = matching_to_sequence(L, M);
            CHECK(round.mu == s.mu);
            CHECK(round.nu == s.nu);
        }
    }
}

TEST_CASE("bottom and top marginals are deterministic") {
    LatticeSpec spec = random_spec(true, 40);
    Lattice L = build_lattice(spec);
    auto bottom = boltzmann_marginal(L, 1);
    REQUIRE(bottom.size() == 1);
    CHECK(bottom.begin()->first == spec.omega());
    CHECK(bottom.begin()->second == 1);
    auto top = boltzmann_marginal(L, static_cast<int>(2 * spec.N + 1));
    REQUIRE(top.size() == 1);
    CHECK(top.begin()->first == Partition{});
    CHECK(top.begin()->second == 1);
}

TEST_CASE("row marginals satisfy the generating-function identity") {
    std::uniform_int_distribution<int> unum(1, 5), uden(1, 3);
    for (int trial = 0; trial < 6; ++trial) {
        LatticeSpec spec = random_spec(trial % 2 == 0, 30);
        Lattice L = build_lattice(spec);
        long long N = spec.N;
        for (int row = 2; row <= 2 * N + 1; ++row) {
            long long t = (row - 1) / 2;  // row 2t+1 or 2t+2
            if (row % 2 == 0) t = (row - 2) / 2;
            long long len = N - t;
            auto marg = boltzmann_marginal(L, row);
            Rat total = 0;
            for (const auto& [p, w] : marg) total += w;
            CHECK(total == 1);

            std::vector<Rat> u;
            for (long long j = 0; j < len; ++j) u.emplace_back(unum(rng), uden(rng));
            // left side: sum over the marginal of s_p(u)/s_p(x_{t+1..N})
            std::vector<Rat> xtail(spec.xs.begin() + t, spec.xs.end());
            Rat lhs = 0;
            for (const auto& [p, w] : marg) {
                Partition padded = p;
                padded.resize(len, 0);
                lhs += w * detail::schur_any(padded, u) / detail::schur_any(padded, xtail);
            }
            // right side: Schur ratio times the square-row ratio product
            std::vector<Rat> mixed = u;
            for (long long j = 0; j < t; ++j) mixed.push_back(spec.xs[j]);
            Partition omega = spec.omega();
            Rat rhs = detail::schur_any(omega, mixed) / detail::schur_any(omega, spec.xs);
            long long ymax = (row % 2 == 0) ? t + 1 : t;
            for (long long i = 1; i <= ymax; ++i) {
                if (spec.a[i - 1] != 0) continue;
                for (long long j = 1; j <= len; ++j)
                    rhs *= (1 + spec.ys[i - 1] * u[j - 1]) /
                           (1 + spec.ys[i - 1] * spec.xs[t + j - 1]);
            }
            INFO("row " << row << " N " << N);
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("height fields are consistent and vanish at the base point") {
    for (int trial = 0; trial < 6; ++trial) {
        LatticeSpec spec = random_spec(trial % 2 == 0, 30);
        Lattice L = build_lattice(spec);
        auto ms = enumerate_matchings(L);
        REQUIRE(!ms.empty());
        for (const auto& M : ms) {
            HeightField hf = height_function(L, M);
            REQUIRE(!hf.faces.empty());
            CHECK(hf.consistent);
            CHECK(hf.faces.front().h == 0);  // faces sorted by center, base first
        }
    }
}

TEST_CASE("boundary heights do not depend on the matching") {
    int done = 0;
    for (int trial = 0; trial < 40 && done < 5; ++trial) {
        LatticeSpec spec = random_spec(trial % 2 == 1, 26);
        Lattice L = build_lattice(spec);
        auto ms = enumerate_matchings(L);
        if (ms.size() < 2) continue;  // forced lattice, nothing to compare
        ++done;
        std::map<std::pair<Rat, Rat>, std::set<long long>> boundary_values;
        for (const auto& M : ms) {
            HeightField hf = height_function(L, M);
            for (const auto& f : hf.faces)
                if (f.boundary) boundary_values[{f.cx, f.cy}].insert(f.h);
        }
        REQUIRE(!boundary_values.empty());
        for (const auto& [c, vals] : boundary_values) CHECK(vals.size() == 1);
    }
    CHECK(done == 5);
}

TEST_CASE("left boundary height rises by 2n-r per period") {
    // Period (1,0): one hexagon row and one square row, so n=2, r=1 and the
    // expected rise over a period (delta cy = 2n doubled) is 2n-r = 3.
    LatticeSpec spec;
    spec.N = 6;
    spec.omega_positions = {1, 3, 5, 7, 9, 11};
    spec.a = {1, 0, 1, 0, 1, 0};
    for (int m = 0; m < 6; ++m) {
        spec.xs.push_back(Rat(2 + m % 2));
        spec.ys.push_back(Rat(1, 2));
    }
    Lattice L = build_lattice(spec);

    // canonical chain: nu = mu, drop the largest part at each step
    InterlacingSequence seq;
    seq.mu.assign(spec.N + 1, {});
    seq.nu.assign(spec.N + 1, {});
    seq.mu[spec.N] = spec.omega();
    for (long long s = spec.N; s >= 1; --s) {
        seq.nu[s] = seq.mu[s];
        seq.mu[s - 1] = Partition(seq.mu[s].begin() + 1, seq.mu[s].end());
    }
    Matching M = sequence_to_matching(L, seq);
    HeightField hf = height_function(L, M);
    REQUIRE(hf.consistent);

    std::map<Rat, std::pair<Rat, long long>> leftmost;  // cy -> (cx, h)
    for (const auto& f : hf.faces) {
        auto it = leftmost.find(f.cy);
        if (it == leftmost.end() || f.cx < it->second.first)
            leftmost[f.cy] = {f.cx, f.h};
    }
    int checked = 0;
    for (const auto& [cy, ch] : leftmost) {
        auto above = leftmost.find(cy + 4);
        if (above == leftmost.end()) continue;
        if (cy + 4 > Rat(2 * spec.N - 2)) continue;  // stay below the apex
        CHECK(above->second.second - ch.second == 3);
        ++checked;
    }
    CHECK(checked >= 4);
}
