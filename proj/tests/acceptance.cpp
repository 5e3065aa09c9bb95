// End-to-end acceptance runs: golden replays of the built-in instances plus
// randomized property suites, one pass/fail line each.

#include "motpaver/decomposition.hpp"
#include "motpaver/demos.hpp"
#include "motpaver/instances.hpp"
#include "motpaver/monotonicity.hpp"
#include "motpaver/serialize.hpp"
#include "oracles.hpp"

#include <functional>
#include <iostream>
#include <set>
#include <sstream>

using namespace motpaver;
using nlohmann::json;
using R = Rational;

namespace {

const auto EX = Numerics<R>::exact();

struct Harness {
    int failures = 0;

    void run(int id, const std::string& title, const std::function<void()>& body) {
        std::string detail;
        bool ok = true;
        try {
            body();
        } catch (const std::exception& e) {
            ok = false;
            detail = e.what();
        }
        std::cout << (ok ? "PASS" : "FAIL") << "  " << id << ". " << title;
        if (!ok) {
            std::cout << " -- " << detail;
            ++failures;
        }
        std::cout << "\n" << std::flush;
    }
};

[[noreturn]] void reject(const std::string& what) { throw std::runtime_error(what); }

void expect(bool cond, const std::string& what) {
    if (!cond) reject(what);
}

json sorted_vertices(const json& verts) {
    auto v = verts.get<std::vector<std::vector<std::string>>>();
    std::sort(v.begin(), v.end());
    return json(v);
}

// ---- golden two-triangle replay (criteria 1-4) -----------------------------

json demo_two_triangles_report() {
    static json report = cmd_demo("example-4.2", 0, "", Options{}).report;
    return report;
}

void criterion_paving() {
    json r = demo_two_triangles_report();
    expect(r["mode"] == "exact", "demo must run in exact mode");
    const auto& comps = r["paving"]["components"];
    expect(comps.size() == 2, "expected exactly two components");
    const json left_verts = json::parse(R"([["-2","0"],["0","-1"],["0","1"]])");
    const json right_verts = json::parse(R"([["0","-1"],["0","1"],["2","0"]])");
    bool seen_left = false, seen_right = false;
    for (const auto& comp : comps) {
        if (comp["members"] == json::array({0})) {
            seen_left = true;
            expect(sorted_vertices(comp["vertices"]) == left_verts, "left vertex set differs");
            expect(comp["eta"]["rational"] == "1/3", "left eta differs");
        }
        if (comp["members"] == json::array({1, 2})) {
            seen_right = true;
            expect(sorted_vertices(comp["vertices"]) == right_verts, "right vertex set differs");
            expect(comp["eta"]["rational"] == "2/3", "right eta differs");
        }
    }
    expect(seen_left && seen_right, "memberships {x0} and {x1, x-1} not found");
}

void criterion_extremes() {
    json r = demo_two_triangles_report();
    for (const auto& e : r["extremes"])
        expect(e["feasible"] == true, "an extreme coupling fails the invariants");
    expect(r["support_equals_extreme_union"] == true,
           "maximal support differs from the union of the extreme supports");

    // belt and braces at library level, exactly
    auto g = two_triangles_instance();
    for (const auto* src : {&g.extreme1, &g.extreme2}) {
        Coupling<R> c{g.mu, g.nu, *src};
        expect(coupling_feasible(c, EX), "extreme coupling infeasible in exact arithmetic");
    }
}

void criterion_optimization() {
    json r = demo_two_triangles_report();
    expect(r["solve"]["value"]["rational"] == "1/12", "S differs from 1/12");
    const auto& d = r["decomposition"];
    expect(d["global"]["rational"] == "1/12" && d["equal"] == true,
           "decomposition equality fails");
    std::set<std::pair<std::string, std::string>> parts;
    for (const auto& comp : d["components"])
        parts.insert({comp["eta"]["rational"].get<std::string>(),
                      comp["value"]["rational"].get<std::string>()});
    expect(parts == std::set<std::pair<std::string, std::string>>{{"1/3", "1/4"}, {"2/3", "0"}},
           "componentwise values differ from 1/3 * 1/4 + 2/3 * 0");
    expect(r["certify"]["optimizer_support"]["verdict"] == "Certified",
           "optimizer support not certified");
    expect(r["certify"]["extreme1_support"]["verdict"] == "Violated",
           "non-optimal extreme support not refuted");
}

void criterion_sub_paving() {
    json r = demo_two_triangles_report();
    const json tri_up = json::parse(R"([["0","0"],["0","1"],["2","0"]])");
    const json tri_down = json::parse(R"([["0","-1"],["0","0"],["2","0"]])");
    bool found = false;
    for (const auto& comp : r["decomposition"]["components"]) {
        if (comp["sub_components"].size() != 2) continue;
        found = true;
        std::set<std::string> subs;
        for (const auto& s : comp["sub_components"]) subs.insert(sorted_vertices(s["vertices"]).dump());
        expect(subs == std::set<std::string>{tri_up.dump(), tri_down.dump()},
               "sub-component triangles differ");
    }
    expect(found, "no component splits into two sub-components");
    for (const auto& comp : r["paving"]["components"])
        expect(comp["nu_invariant"] == false, "nu-invariance should fail for both components");
}

// ---- discretized density demos (criteria 5-6) ------------------------------

void criterion_kinked_grids() {
    R prev_gap(-1);
    for (int n : {16, 32, 64}) {
        json r = cmd_demo("example-2.1", n, "", Options{}).report;
        const auto& comps = r["paving"]["components"];
        expect(comps.size() == 2, "expected two components at n=" + std::to_string(n));
        R worst(0);
        for (const auto& comp : comps) {
            std::vector<R> ends;
            for (const auto& v : comp["vertices"])
                ends.push_back(parse_rational(v[0].get<std::string>()));
            std::sort(ends.begin(), ends.end());
            expect(ends.size() == 2, "component interval expected");
            const bool left = ends[0] < 0;
            const R lo = left ? R(-2) : R(0), hi = left ? R(0) : R(2);
            R gap = std::max(abs(ends[0] - lo), abs(ends[1] - hi));
            worst = std::max(worst, gap);

            std::set<std::string> boundary;
            for (const auto& a : comp["j_atoms"])
                if (a["boundary"] == true) boundary.insert(a["point"][0].get<std::string>());
            const std::set<std::string> want =
                left ? std::set<std::string>{"-2", "0"} : std::set<std::string>{"0", "2"};
            expect(boundary == want, "attached boundary atoms differ at n=" + std::to_string(n));
        }
        expect(worst <= R(8) / n, "interval gap exceeds 2*(4/n)");
        if (prev_gap >= 0) expect(worst <= prev_gap, "interval gap grew with n");
        prev_gap = worst;
    }
}

struct Rect {
    R lo0, hi0, lo1, hi1;
};

R rect_dist_sq(const Vec<R>& p, const Rect& r) {
    auto clamp_gap = [](const R& v, const R& lo, const R& hi) {
        if (v < lo) return lo - v;
        if (v > hi) return v - hi;
        return R(0);
    };
    R dx = clamp_gap(p[0], r.lo0, r.hi0);
    R dy = clamp_gap(p[1], r.lo1, r.hi1);
    return dx * dx + dy * dy;
}

R rect_hausdorff_sq(const Rect& a, const Rect& b) {
    R worst(0);
    auto probe = [&](const Rect& from, const Rect& to) {
        for (const R& x : {from.lo0, from.hi0})
            for (const R& y : {from.lo1, from.hi1})
                worst = std::max(worst, rect_dist_sq({x, y}, to));
    };
    probe(a, b);
    probe(b, a);
    return worst;
}

void criterion_quadrant_grid() {
    const int n = 8;
    json r = cmd_demo("example-4.1", n, "", Options{}).report;
    expect(r["uniqueness"]["unique"] == true, "coupling is not unique at grid level");
    expect(r["uniqueness"]["max_gap"].get<double>() <= 1e-9, "per-cell mass gap too large");
    const auto& comps = r["paving"]["components"];
    expect(comps.size() == 3, "expected exactly three components");

    const Rect quads[3] = {{R(-1), R(0), R(-1), R(1)},   // around x1
                           {R(0), R(1), R(0), R(1)},     // around x2
                           {R(0), R(1), R(-1), R(0)}};   // around x3
    const R budget = R(2) / n;
    for (const auto& comp : comps) {
        expect(comp["members"].size() == 1, "each mu atom should sit in its own component");
        int member = comp["members"][0].get<int>();
        std::vector<Vec<R>> verts;
        for (const auto& v : comp["vertices"])
            verts.push_back({parse_rational(v[0].get<std::string>()),
                             parse_rational(v[1].get<std::string>())});
        expect(verts.size() == 4, "component hull should be a quadrilateral");
        Rect hull{verts[0][0], verts[0][0], verts[0][1], verts[0][1]};
        for (const auto& v : verts) {
            hull.lo0 = std::min(hull.lo0, v[0]);
            hull.hi0 = std::max(hull.hi0, v[0]);
            hull.lo1 = std::min(hull.lo1, v[1]);
            hull.hi1 = std::max(hull.hi1, v[1]);
        }
        for (const auto& v : verts)  // hull must be exactly its bounding box
            expect((v[0] == hull.lo0 || v[0] == hull.hi0) &&
                       (v[1] == hull.lo1 || v[1] == hull.hi1),
                   "component hull is not a rectangle");
        expect(rect_hausdorff_sq(hull, quads[member]) <= budget * budget,
               "component hull drifts beyond 2/n");
    }
}

// ---- randomized property suites (criteria 7-10) ----------------------------

struct SuiteInstance {
    DiscreteMeasure<R> mu, nu;
    CostMatrix<R> cost;
};

std::vector<SuiteInstance> suite_instances() {
    static std::vector<SuiteInstance> instances = [] {
        oracles::InstanceGen gen(7001);
        std::vector<SuiteInstance> out;
        for (int t = 0; t < 200; ++t) {
            int d = 1 + t % 2;
            auto [mu, nu] = gen.ordered_pair(d, 6, 8);
            auto cost = make_cost(gen.random_cost(mu.size(), nu.size()), true, EX);
            out.push_back({std::move(mu), std::move(nu), std::move(cost)});
        }
        return out;
    }();
    return instances;
}

void criterion_duality_suite() {
    oracles::InstanceGen gen(7002);
    for (const auto& inst : suite_instances()) {
        CouplingSolver<R> solver(inst.mu, inst.nu, EX);
        auto solved = solver.maximize(inst.cost);
        expect(solved.dual.value == solved.value, "duality gap is nonzero");
        expect(verify_certificate(solved.dual, inst.mu, inst.nu, inst.cost, EX).empty(),
               "dual certificate has violations");
        for (int k = 0; k < 5; ++k) {
            auto probe = make_cost(gen.random_cost(inst.mu.size(), inst.nu.size(), -4, 4), false, EX);
            auto feasible = solver.maximize(probe).coupling;
            expect(coupling_feasible(feasible, EX), "probe coupling infeasible");
            expect(feasible.expect(inst.cost) <= solved.value, "weak duality fails");
        }
    }
}

void criterion_paving_suite() {
    for (const auto& inst : suite_instances()) {
        CouplingSolver<R> solver(inst.mu, inst.nu, EX);
        auto run = run_paving(solver, EX);  // PartitionViolation would throw
        auto optimizer = solver.maximize(inst.cost).coupling;
        for (int i = 0; i < inst.mu.size(); ++i) {
            const auto& comp = run.paving.components[run.paving.atom_component[i]];
            expect(ri_contains(comp.hull, inst.mu.atoms[i], EX), "atom escapes ri I");
            for (int j = 0; j < inst.nu.size(); ++j) {
                if (run.support.witness.p[i][j] != 0 || optimizer.p[i][j] != 0)
                    expect(closure_contains(comp.hull, inst.nu.atoms[j], EX),
                           "conditional support escapes cl I");
            }
        }
        for (const auto& comp : run.paving.components) {
            std::set<int> attached;
            for (const auto& a : comp.j_atoms) attached.insert(a.j);
            for (int j = 0; j < inst.nu.size(); ++j) {
                if (ri_contains(comp.hull, inst.nu.atoms[j], EX))
                    expect(attached.count(j) == 1, "nu atom in ri I not attached");
                if (attached.count(j))
                    expect(closure_contains(comp.hull, inst.nu.atoms[j], EX),
                           "attached atom outside cl I");
            }
        }
    }
}

void criterion_order_suite() {
    oracles::InstanceGen gen(7003);
    int unordered_seen = 0;
    for (int t = 0; t < 200; ++t) {
        auto nu = gen.random_target(1, 8);
        DiscreteMeasure<R> mu =
            t % 2 == 0 ? gen.contracted(nu, 1 + t % 4) : gen.random_target(1, 8);
        bool oracle = oracle_convex_order_1d(mu, nu, EX);
        auto cert = convex_order_check(mu, nu, EX);
        expect(cert.ordered == oracle, "checker disagrees with the potential-function oracle");
        if (cert.ordered) {
            expect(coupling_feasible(*cert.coupling, EX), "witness coupling infeasible");
        } else {
            ++unordered_seen;
            expect(separation_valid(*cert.separation, mu, nu, EX),
                   "separating certificate fails substitution");
        }
    }
    expect(unordered_seen >= 40, "generator produced too few unordered pairs");
}

void criterion_monotonicity_suite() {
    oracles::InstanceGen gen(7004);
    for (int t = 0; t < 50; ++t) {
        int d = 1 + t % 2;
        auto [mu, nu] = gen.ordered_pair(d, 3, 4);
        auto cost = make_cost(gen.random_cost(mu.size(), nu.size()), true, EX);
        std::function<R(const Vec<R>&, const Vec<R>&)> cost_fn = [&](const Vec<R>& x,
                                                                     const Vec<R>& y) {
            for (int i = 0; i < mu.size(); ++i)
                for (int j = 0; j < nu.size(); ++j)
                    if (mu.atoms[i] == x && nu.atoms[j] == y) return cost.values[i][j];
            reject("plan pair is not an atom pair");
        };

        // every product sub-support with <= 3 x-atoms and <= 3 y-atoms
        std::vector<std::vector<int>> xsubs, ysubs;
        for (int mask = 1; mask < (1 << mu.size()); ++mask) {
            std::vector<int> s;
            for (int i = 0; i < mu.size(); ++i)
                if (mask & (1 << i)) s.push_back(i);
            if (static_cast<int>(s.size()) <= 3) xsubs.push_back(s);
        }
        for (int mask = 1; mask < (1 << nu.size()); ++mask) {
            std::vector<int> s;
            for (int j = 0; j < nu.size(); ++j)
                if (mask & (1 << j)) s.push_back(j);
            if (static_cast<int>(s.size()) <= 3) ysubs.push_back(s);
        }
        for (const auto& A : xsubs)
            for (const auto& B : ysubs) {
                std::vector<std::pair<int, int>> pairs;
                for (int i : A)
                    for (int j : B) pairs.push_back({i, j});
                std::vector<R> w(pairs.size(), R(1) / R(int(pairs.size())));
                auto plan = plan_from_pairs(mu, nu, pairs, w);
                auto [lp_value, competitor] = competitor_max(plan, cost_fn, EX);
                expect(is_competitor(plan, competitor, EX), "competitor constraints broken");

                // independent brute force: build the equality system from the
                // plan's marginals and moments, enumerate vertices, compare
                LinearProgram<R> sys;
                const int U = static_cast<int>(B.size());
                for (std::size_t v = 0; v < A.size() * B.size(); ++v) sys.add_var(R(0));
                std::vector<R> obj;
                for (std::size_t a = 0; a < A.size(); ++a)
                    for (int j : B) obj.push_back(cost.values[A[a]][j]);
                for (std::size_t a = 0; a < A.size(); ++a) {
                    R mass(0);
                    for (std::size_t k = 0; k < pairs.size(); ++k)
                        if (pairs[k].first == A[a]) mass += w[k];
                    int row = sys.add_row(RowSense::EQ, mass);
                    for (int u = 0; u < U; ++u) sys.set(row, int(a) * U + u, R(1));
                }
                for (int u = 0; u < U; ++u) {
                    R mass(0);
                    for (std::size_t k = 0; k < pairs.size(); ++k)
                        if (pairs[k].second == B[u]) mass += w[k];
                    int row = sys.add_row(RowSense::EQ, mass);
                    for (std::size_t a = 0; a < A.size(); ++a) sys.set(row, int(a) * U + u, R(1));
                }
                for (std::size_t a = 0; a < A.size(); ++a)
                    for (int c = 0; c < d; ++c) {
                        R moment(0);
                        for (std::size_t k = 0; k < pairs.size(); ++k)
                            if (pairs[k].first == A[a]) moment += w[k] * nu.atoms[pairs[k].second][c];
                        int row = sys.add_row(RowSense::EQ, moment);
                        for (int u = 0; u < U; ++u)
                            if (nu.atoms[B[u]][c] != 0)
                                sys.set(row, int(a) * U + u, nu.atoms[B[u]][c]);
                    }
                auto verts = oracles::enumerate_vertices(sys);
                expect(!verts.empty(), "enumeration lost the plan itself");
                expect(oracles::max_over_vertices(verts, obj) == lp_value,
                       "LP and enumeration disagree on a sub-support");
            }

        CouplingSolver<R> solver(mu, nu, EX);
        auto solved = solver.maximize(cost);
        auto cert = certify_support(mu, nu, support_pairs(solved.coupling, EX), cost, EX, 32);
        expect(cert.verdict == MonotonicityVerdict::Certified,
               "optimizer support failed certification");
    }
}

}  // namespace

int main() {
    Harness h;
    h.run(1, "two-triangle demo: paving, memberships, eta (exact)", criterion_paving);
    h.run(2, "two-triangle demo: extreme couplings and maximal support", criterion_extremes);
    h.run(3, "two-triangle demo: S = 1/12, decomposition, support certificates",
          criterion_optimization);
    h.run(4, "two-triangle demo: sub-paving triangles and nu-invariance flags",
          criterion_sub_paving);
    h.run(5, "kinked-density demo: split at 0, boundary atoms, shrinking intervals",
          criterion_kinked_grids);
    h.run(6, "quadrant-grid demo: unique coupling and three rectangular components",
          criterion_quadrant_grid);
    h.run(7, "duality suite: 200 instances, exact zero gap and weak duality",
          criterion_duality_suite);
    h.run(8, "paving suite: partition, membership, support containment, J sandwich",
          criterion_paving_suite);
    h.run(9, "convex-order suite: 200 1d instances against the potential oracle",
          criterion_order_suite);
    h.run(10, "monotonicity suite: competitor LP vs enumeration, optimizer certification",
          criterion_monotonicity_suite);
    if (h.failures == 0) std::cout << "all acceptance criteria passed\n";
    else std::cout << h.failures << " acceptance criteria failed\n";
    return h.failures;
}
