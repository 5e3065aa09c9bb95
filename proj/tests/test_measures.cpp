#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "golden.hpp"
#include "motpaver/geometry.hpp"
#include "motpaver/measures.hpp"
#include "motpaver/transport.hpp"

#include <random>
#include <set>

using namespace motpaver;
using R = Rational;
static const auto EX = Numerics<R>::exact();

TEST_CASE("barycenters") {
    auto d0 = make_measure<R>(2, {{R(0), R(0)}}, {R(1)}, EX);
    CHECK(d0.barycenter() == Vec<R>{R(0), R(0)});

    golden::TwoTriangles g;
    CHECK(g.mu.barycenter() == Vec<R>{R(0), R(0)});
    CHECK(g.nu.barycenter() == Vec<R>{R(0), R(0)});
}

TEST_CASE("ingestion merges duplicates and validates") {
    auto m = make_measure<R>(1, {{R(0)}, {R(1)}, {R(0)}}, {R(1) / 4, R(1) / 2, R(1) / 4}, EX);
    CHECK(m.size() == 2);
    CHECK(m.weights[0] == R(1) / 2);

    CHECK_THROWS_AS(make_measure<R>(1, {{R(0)}}, {R(1) / 2}, EX), std::invalid_argument);
    CHECK_THROWS_AS(make_measure<R>(1, {{R(0)}, {R(1)}}, {R(2), R(-1)}, EX),
                    std::invalid_argument);
}

TEST_CASE("1d order oracle on pinned instances") {
    auto d1 = [&](std::vector<R> xs, std::vector<R> ws) {
        std::vector<Vec<R>> atoms;
        for (auto& x : xs) atoms.push_back({x});
        return make_measure<R>(1, atoms, ws, EX);
    };
    auto delta0 = d1({R(0)}, {R(1)});
    auto spread = d1({R(-1), R(1)}, {R(1) / 2, R(1) / 2});
    CHECK(oracle_convex_order_1d(delta0, spread, EX));
    CHECK_FALSE(oracle_convex_order_1d(spread, delta0, EX));
    CHECK_THROWS_AS(oracle_convex_order_1d(golden::TwoTriangles().mu, spread, EX),
                    std::invalid_argument);
}

TEST_CASE("convex order checker with witnesses") {
    auto d0 = make_measure<R>(1, {{R(0)}}, {R(1)}, EX);
    auto cert = convex_order_check(d0, d0, EX);
    REQUIRE(cert.ordered);
    REQUIRE(cert.coupling.has_value());
    CHECK(cert.coupling->p[0][0] == R(1));
    CHECK(coupling_feasible(*cert.coupling, EX));

    golden::TwoTriangles g;
    auto gcert = convex_order_check(g.mu, g.nu, EX);
    CHECK(gcert.ordered);
    CHECK(coupling_feasible(*gcert.coupling, EX));

    // barycenter mismatch: separating triple must come back verifying
    auto d2 = make_measure<R>(2, {{R(0), R(0)}}, {R(1)}, EX);
    auto shifted = make_measure<R>(2, {{R(1), R(0)}}, {R(1)}, EX);
    auto bad = convex_order_check(d2, shifted, EX);
    REQUIRE_FALSE(bad.ordered);
    REQUIRE(bad.separation.has_value());
    CHECK(separation_valid(*bad.separation, d2, shifted, EX));

    CHECK_THROWS_AS(convex_order_check(d0, d2, EX), std::invalid_argument);
}

namespace {

// Random rational d=1 pair; roughly half the draws are in convex order by
// construction (mu built from conditional means of a random kernel onto nu).
struct Random1d {
    std::mt19937 rng;
    explicit Random1d(unsigned seed) : rng(seed) {}

    DiscreteMeasure<R> random_nu(int max_atoms) {
        std::uniform_int_distribution<int> n_atoms(1, max_atoms), coord(-6, 6), wt(1, 8);
        int n = n_atoms(rng);
        std::vector<Vec<R>> atoms;
        std::vector<R> w;
        R total(0);
        std::vector<R> raw;
        std::set<int> used;
        for (int j = 0; j < n; ++j) {
            int x = coord(rng);
            while (used.count(x)) x = coord(rng);
            used.insert(x);
            atoms.push_back({R(x)});
            raw.push_back(R(wt(rng)));
            total += raw.back();
        }
        for (auto& v : raw) v /= total;
        return make_measure<R>(1, atoms, raw, EX);
    }

    // mu with atoms at conditional means of a random kernel: guarantees order
    DiscreteMeasure<R> contracted(const DiscreteMeasure<R>& nu, int groups) {
        std::uniform_int_distribution<int> pick(0, groups - 1);
        std::vector<R> mass(groups, R(0));
        std::vector<R> moment(groups, R(0));
        for (int j = 0; j < nu.size(); ++j) {
            int g = pick(rng);
            mass[g] += nu.weights[j];
            moment[g] += nu.weights[j] * nu.atoms[j][0];
        }
        std::vector<Vec<R>> atoms;
        std::vector<R> w;
        for (int g = 0; g < groups; ++g)
            if (mass[g] != 0) {
                atoms.push_back({moment[g] / mass[g]});
                w.push_back(mass[g]);
            }
        return make_measure<R>(1, atoms, w, EX);
    }
};

}  // namespace

TEST_CASE("discretized kinked target passes both order checkers") {
    auto g = motpaver::kinked_target_instance(16);
    CHECK(oracle_convex_order_1d(g.mu, g.nu, EX));
    auto cert = convex_order_check(g.mu, g.nu, EX);
    CHECK(cert.ordered);
    CHECK(coupling_feasible(*cert.coupling, EX));
}

TEST_CASE("barycenters lie in the relative interior of the support hull") {
    Random1d gen(808);
    for (int t = 0; t < 20; ++t) {
        auto m = gen.random_nu(6);
        auto P = motpaver::make_polytope(m.atoms, EX);
        CHECK(motpaver::ri_contains(P, m.barycenter(), EX));
    }
}

TEST_CASE("checker agrees with the 1d oracle on random pairs") {
    Random1d gen(2024);
    int ordered = 0, unordered = 0;
    for (int t = 0; t < 100; ++t) {
        auto nu = gen.random_nu(8);
        DiscreteMeasure<R> mu;
        if (t % 2 == 0) {
            mu = gen.contracted(nu, 1 + t % 4);
        } else {
            mu = gen.random_nu(8);  // usually not in order
        }
        bool oracle = oracle_convex_order_1d(mu, nu, EX);
        auto cert = convex_order_check(mu, nu, EX);
        REQUIRE(cert.ordered == oracle);
        if (cert.ordered) {
            ++ordered;
            CHECK(coupling_feasible(*cert.coupling, EX));
        } else {
            ++unordered;
            CHECK(separation_valid(*cert.separation, mu, nu, EX));
        }
    }
    CHECK(ordered >= 30);
    CHECK(unordered >= 30);
}
