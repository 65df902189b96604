#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "schurlat/schur.hpp"

using namespace schurlat;

namespace {

std::mt19937 rng(20240817);

Rat random_rat(int num_max = 20, int den_max = 10) {
    std::uniform_int_distribution<int> num(1, num_max), den(1, den_max);
    return Rat(num(rng), den(rng));
}

std::vector<Rat> random_distinct_desc(int count) {
    std::set<Rat> s;
    while (static_cast<int>(s.size()) < count) s.insert(random_rat());
    std::vector<Rat> v(s.rbegin(), s.rend());
    return v;
}

Partition random_partition(int len, int max_part) {
    std::uniform_int_distribution<int> d(0, max_part);
    Partition p(len);
    for (auto& x : p) x = d(rng);
    std::sort(p.rbegin(), p.rend());
    return p;
}

// Golden four-variable polynomial with doubled values (x1,x2,x1,x2).
Rat golden_two_class(const Rat& x1, const Rat& x2) {
    return rat_pow(x1, 4) * rat_pow(x2, 4) *
           (3 * x1 * x1 + 4 * x1 * x2 + 3 * x2 * x2);
}

Rat golden_su1(const Rat& u1, const Rat& x1, const Rat& x2) {
    Rat u12 = u1 * u1, x12 = x1 * x1, x22 = x2 * x2;
    Rat bracket = 3 * u12 * x12 * x22 + 2 * u12 * x1 * x2 * x22 + u12 * x22 * x22 +
                  2 * u1 * x12 * x2 * x22 + u1 * x1 * x22 * x22 + x12 * x22 * x22;
    return u1 * x1 * x22 * bracket;
}

Rat golden_su2(const Rat& u1, const Rat& u2, const Rat& x1, const Rat& x2) {
    Rat u12 = u1 * u1, u22 = u2 * u2, x12 = x1 * x1, x22 = x2 * x2;
    Rat bracket = u12 * u22 * x12 + u12 * u22 * x1 * x2 + u12 * u22 * x22 +
                  u12 * u2 * x12 * x2 + u12 * u2 * x1 * x22 + u12 * x12 * x22 +
                  u1 * u22 * x12 * x2 + u1 * u22 * x1 * x22 + u1 * u2 * x12 * x22 +
                  u22 * x12 * x22;
    return u1 * u2 * x1 * x2 * bracket;
}

Rat golden_su3(const Rat& u1, const Rat& u2, const Rat& u3, const Rat& x2) {
    Rat u12 = u1 * u1, u22 = u2 * u2, u32 = u3 * u3, x22 = x2 * x2;
    Rat bracket = u12 * u22 * u32 + u12 * u22 * u3 * x2 + u12 * u22 * x22 +
                  u12 * u2 * u32 * x2 + u12 * u2 * u3 * x22 + u12 * u32 * x22 +
                  u1 * u22 * u32 * x2 + u1 * u22 * u3 * x22 + u1 * u2 * u32 * x22 +
                  u22 * u32 * x22;
    return u1 * u2 * u3 * x2 * bracket;
}

}  // namespace

TEST_CASE("branching oracle basics") {
    Rat a = random_rat(), b = random_rat();
    CHECK(schur_branching({1, 0}, {a, b}) == a + b);
    CHECK(schur_branching({0, 0, 0}, {a, b, a}) == 1);
    CHECK(schur_branching({3}, {a}) == rat_pow(a, 3));
    CHECK(schur_branching({2, 1}, {a, b}) == a * b * (a + b));
}

TEST_CASE("branching matches the golden two-class polynomial") {
    for (int t = 0; t < 10; ++t) {
        Rat x1 = random_rat(), x2 = random_rat();
        CHECK(schur_branching({3, 3, 3, 1}, {x1, x2, x1, x2}) == golden_two_class(x1, x2));
    }
}

TEST_CASE("determinant form agrees and rejects repeats") {
    CHECK(schur_determinant({1, 0}, {Rat(2), Rat(1)}) == 3);
    for (int t = 0; t < 8; ++t) {
        Rat u = random_rat();
        if (u == 1) continue;
        CHECK(schur_determinant({5, 4}, {u, Rat(1)}) == rat_pow(u, 4) * (u + 1));
    }
    CHECK_THROWS_AS(schur_determinant({1, 0}, {Rat(2), Rat(2)}), std::invalid_argument);
    for (int t = 0; t < 20; ++t) {
        int N = 2 + t % 4;
        Partition lam = random_partition(N, 5);
        auto vals = random_distinct_desc(N);
        CHECK(schur_determinant(lam, vals) == schur_branching(lam, vals));
    }
}

TEST_CASE("dimension product at ones") {
    CHECK(schur_at_ones({5, 4}, 2) == 2);
    CHECK(schur_at_ones({4, 1}, 2) == 4);
    CHECK(schur_at_ones({5, 1}, 2) == 5);
    CHECK(schur_at_ones({4, 4}, 2) == 1);
    CHECK(schur_at_ones({5, 5}, 2) == 1);
    CHECK(schur_at_ones({3, 1}, 2) == 3);
    for (int t = 0; t < 20; ++t) {
        int N = 1 + t % 5;
        Partition lam = random_partition(N, 6);
        std::vector<Rat> ones(N, Rat(1));
        CHECK(schur_at_ones(lam, N) == schur_branching(lam, ones));
    }
}

TEST_CASE("coset representative counts") {
    VariableSpec two_class({Rat(3), Rat(2)}, 4);
    CHECK(coset_representatives(two_class).size() == 6);

    VariableSpec all_distinct({Rat(5), Rat(3), Rat(2)}, 3);
    CHECK(coset_representatives(all_distinct).size() == 6);  // 3!

    VariableSpec single({Rat(2)}, 5);
    CHECK(coset_representatives(single).size() == 1);

    VariableSpec big({Rat(8), Rat(7), Rat(6), Rat(5), Rat(4), Rat(3), Rat(2), Rat(1)}, 8);
    CHECK_THROWS_AS(coset_representatives(big), std::length_error);
}

TEST_CASE("representatives include the sorting permutation and distinct class words") {
    VariableSpec spec({Rat(3), Rat(2), Rat(1)}, 6);
    auto reps = coset_representatives(spec);
    CHECK(reps.size() == 90);  // 6!/(2!^3)
    std::set<std::vector<int>> words;
    bool has_sigma0 = false;
    for (const auto& rep : reps) {
        std::vector<int> word(spec.N);
        bool descending = true;
        for (long long j = 1; j <= spec.N; ++j) {
            word[j - 1] = spec.class_of(rep.sigma[j - 1]);
            if (j > 1 && spec.value(rep.sigma[j - 2]) < spec.value(rep.sigma[j - 1]))
                descending = false;
        }
        words.insert(word);
        has_sigma0 = has_sigma0 || descending;
    }
    CHECK(words.size() == reps.size());
    CHECK(has_sigma0);
}

TEST_CASE("phi data reproduces the worked two-class cosets") {
    VariableSpec spec({Rat(3), Rat(2)}, 4);
    Partition lam = {3, 3, 3, 1};

    struct Case {
        Perm sigma;
        std::vector<long long> eta;
        Partition phi1, phi2;
    };
    std::vector<Case> cases = {
        {{1, 2, 3, 4}, {2, 1, 1, 0}, {5, 4}, {4, 1}},
        {{2, 1, 3, 4}, {2, 1, 1, 0}, {4, 4}, {5, 1}},
        {{1, 2, 4, 3}, {2, 1, 1, 0}, {5, 1}, {4, 4}},
        {{1, 3, 2, 4}, {2, 2, 0, 0}, {5, 5}, {3, 1}},
        {{4, 2, 3, 1}, {2, 2, 0, 0}, {3, 1}, {5, 5}},
        {{2, 1, 4, 3}, {2, 1, 1, 0}, {4, 1}, {5, 4}},
    };
    for (const auto& c : cases) {
        CosetDatum d = phi_data(lam, c.sigma, spec);
        CHECK(d.eta == c.eta);
        CHECK(d.phi[0] == c.phi1);
        CHECK(d.phi[1] == c.phi2);
    }
}

TEST_CASE("phi of the zero partition sorts the eta values") {
    VariableSpec spec({Rat(3), Rat(2)}, 4);
    Partition zero(4, 0);
    CosetDatum d = phi_data(zero, {1, 2, 3, 4}, spec);
    CHECK(d.phi[0] == Partition{2, 1});
    CHECK(d.phi[1] == Partition{1, 0});
}

TEST_CASE("phi and the cross-class factor are coset invariants") {
    VariableSpec spec({Rat(7, 2), Rat(2)}, 6);
    std::vector<Rat> w = spec.expanded();
    Partition lam = random_partition(6, 5);
    auto reps = coset_representatives(spec);
    std::uniform_int_distribution<int> pick(0, static_cast<int>(reps.size()) - 1);
    for (int t = 0; t < 25; ++t) {
        const Perm& sigma = reps[pick(rng)].sigma;
        // Random stabilizer element: permute positions within each class.
        std::vector<std::vector<int>> members(spec.n);
        for (long long j = 1; j <= spec.N; ++j)
            members[spec.class_of(j)].push_back(static_cast<int>(j));
        Perm xi(spec.N);
        for (auto& m : members) {
            auto shuffled = m;
            std::shuffle(shuffled.begin(), shuffled.end(), rng);
            for (std::size_t i = 0; i < m.size(); ++i) xi[m[i] - 1] = shuffled[i];
        }
        Perm composed(spec.N);
        for (long long j = 0; j < spec.N; ++j) composed[j] = xi[sigma[j] - 1];

        CosetDatum a = phi_data(lam, sigma, spec);
        CosetDatum b = phi_data(lam, composed, spec);
        CHECK(a.phi == b.phi);
        CHECK(detail::cross_class_factor(sigma, spec, w) ==
              detail::cross_class_factor(composed, spec, w));
    }
}

TEST_CASE("coset evaluation reproduces the golden value at (3,2)") {
    VariableSpec spec({Rat(3), Rat(2)}, 4);
    Rat v = schur_coset({3, 3, 3, 1}, spec);
    CHECK(v == Rat(81) * 16 * 63);
    CHECK(v == golden_two_class(Rat(3), Rat(2)));
}

TEST_CASE("golden two-class identity at random rational points") {
    for (int t = 0; t < 10; ++t) {
        auto xs = random_distinct_desc(2);
        VariableSpec spec({xs[0], xs[1]}, 4);
        CHECK(schur_coset({3, 3, 3, 1}, spec) == golden_two_class(xs[0], xs[1]));
    }
}

TEST_CASE("coset evaluation equals the branching oracle") {
    for (int t = 0; t < 40; ++t) {
        int n = 1 + t % 3;
        int mult = 1 + (t / 3) % 2;
        long long N = n * mult;
        auto xs = random_distinct_desc(n);
        VariableSpec spec(xs, N);
        Partition lam = random_partition(static_cast<int>(N), 5);
        CHECK(schur_coset(lam, spec) == schur_branching(lam, spec.expanded()));
    }
    VariableSpec spec({Rat(4), Rat(3), Rat(1)}, 6);
    CHECK(schur_coset(Partition(6, 0), spec) == 1);
}

TEST_CASE("coset evaluation with distinct values equals the determinant") {
    for (int t = 0; t < 15; ++t) {
        int N = 2 + t % 3;
        auto xs = random_distinct_desc(N);
        VariableSpec spec(xs, N);
        Partition lam = random_partition(N, 5);
        CHECK(schur_coset(lam, spec) == schur_determinant(lam, xs));
    }
}

TEST_CASE("deformed coset expansion matches the appendix polynomials") {
    Partition lam = {3, 3, 3, 1};
    for (int t = 0; t < 6; ++t) {
        auto vals = random_distinct_desc(5);  // avoid cross-class coincidences
        std::shuffle(vals.begin(), vals.end(), rng);
        std::vector<Rat> xs = {std::max(vals[0], vals[1]), std::min(vals[0], vals[1])};
        VariableSpec spec({xs[0], xs[1]}, 4);
        Rat u1 = vals[2], u2 = vals[3], u3 = vals[4];
        CHECK(schur_coset_general(lam, {u1}, spec) == golden_su1(u1, xs[0], xs[1]));
        CHECK(schur_coset_general(lam, {u1, u2}, spec) == golden_su2(u1, u2, xs[0], xs[1]));
        CHECK(schur_coset_general(lam, {u1, u2, u3}, spec) ==
              golden_su3(u1, u2, u3, xs[1]));
    }
}

TEST_CASE("deformed expansion reduces to the plain one and to the oracle") {
    for (int t = 0; t < 15; ++t) {
        int n = 1 + t % 2;
        long long N = 2 * n;
        auto xs = random_distinct_desc(n);
        VariableSpec spec(xs, N);
        Partition lam = random_partition(static_cast<int>(N), 4);
        CHECK(schur_coset_general(lam, {}, spec) == schur_coset(lam, spec));

        std::uniform_int_distribution<int> klaw(1, static_cast<int>(N));
        int k = klaw(rng);
        std::vector<Rat> u;
        for (int i = 0; i < k; ++i) u.push_back(random_rat());
        std::vector<Rat> w = spec.expanded();
        for (int i = 0; i < k; ++i) w[i] = u[i];
        bool degenerate = false;
        for (std::size_t i = 0; i < w.size() && !degenerate; ++i)
            for (std::size_t j = i + 1; j < w.size(); ++j)
                if (w[i] == w[j] && spec.class_of(i + 1) != spec.class_of(j + 1)) {
                    degenerate = true;
                    break;
                }
        if (degenerate) continue;
        CHECK(schur_coset_general(lam, u, spec) == schur_branching(lam, w));
    }
}

TEST_CASE("homogeneity and symmetry of the oracle") {
    for (int t = 0; t < 10; ++t) {
        int N = 2 + t % 3;
        Partition lam = random_partition(N, 4);
        std::vector<Rat> v;
        for (int i = 0; i < N; ++i) v.push_back(random_rat());
        Rat c = random_rat();
        std::vector<Rat> scaled = v;
        for (auto& s : scaled) s *= c;
        CHECK(schur_branching(lam, scaled) == rat_pow(c, weight(lam)) * schur_branching(lam, v));
        auto shuffled = v;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        CHECK(schur_branching(lam, shuffled) == schur_branching(lam, v));
    }
}
