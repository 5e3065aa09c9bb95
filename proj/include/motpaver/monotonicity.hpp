#pragma once

#include "motpaver/paving.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <random>
#include <utility>
#include <vector>

namespace motpaver {

/// Finitely supported plan on point pairs; weights positive and summing to
/// one. Not required to be a martingale: competitors preserve whatever the
/// conditional barycenters are.
template <class T>
struct FinitePlan {
    std::vector<std::pair<Vec<T>, Vec<T>>> support;
    std::vector<T> weights;

    T expect(const std::function<T(const Vec<T>&, const Vec<T>&)>& cost) const {
        T s(0);
        for (std::size_t k = 0; k < support.size(); ++k)
            s += weights[k] * cost(support[k].first, support[k].second);
        return s;
    }
};

template <class T>
FinitePlan<T> plan_from_pairs(const DiscreteMeasure<T>& mu, const DiscreteMeasure<T>& nu,
                              const std::vector<std::pair<int, int>>& pairs,
                              std::vector<T> weights) {
    FinitePlan<T> plan;
    for (const auto& [i, j] : pairs) plan.support.push_back({mu.atoms[i], nu.atoms[j]});
    plan.weights = std::move(weights);
    return plan;
}

namespace detail {

template <class T>
struct PlanShape {
    std::vector<Vec<T>> xs;       // distinct x-points
    std::vector<T> mass;          // X-marginal
    std::vector<Vec<T>> moment;   // sum of w * y per x (unnormalized barycenter)
    std::vector<Vec<T>> ys;       // y-universe (distinct)
    std::vector<T> col_mass;      // Y-marginal on the universe
};

template <class T>
int find_point(const std::vector<Vec<T>>& pts, const Vec<T>& p, const Numerics<T>& num) {
    for (std::size_t k = 0; k < pts.size(); ++k)
        if (vec_eq(pts[k], p, num)) return static_cast<int>(k);
    return -1;
}

template <class T>
PlanShape<T> plan_shape(const FinitePlan<T>& plan, const std::vector<Vec<T>>& universe,
                        const Numerics<T>& num) {
    PlanShape<T> s;
    const int d = static_cast<int>(plan.support[0].first.size());
    for (const auto& y : universe)
        if (find_point(s.ys, y, num) < 0) {
            s.ys.push_back(y);
            s.col_mass.push_back(T(0));
        }
    for (std::size_t k = 0; k < plan.support.size(); ++k) {
        const auto& [x, y] = plan.support[k];
        int a = find_point(s.xs, x, num);
        if (a < 0) {
            s.xs.push_back(x);
            s.mass.push_back(T(0));
            s.moment.push_back(Vec<T>(d, T(0)));
            a = static_cast<int>(s.xs.size()) - 1;
        }
        int u = find_point(s.ys, y, num);
        if (u < 0) throw std::invalid_argument("y-universe must contain the plan's y-atoms");
        s.mass[a] += plan.weights[k];
        s.col_mass[u] += plan.weights[k];
        for (int c = 0; c < d; ++c) s.moment[a][c] += plan.weights[k] * y[c];
    }
    return s;
}

}  // namespace detail

/// Best competitor value: maximize P'[c] over plans sharing the X-marginal,
/// the Y-marginal, and the conditional barycenters of `plan`, supported on
/// (plan x-atoms) x y_universe. The default universe is the plan's own
/// y-atoms; equal Y-marginals force any wider universe to carry zero mass
/// there, so passing one is an exploration convenience only.
template <class T>
std::pair<T, FinitePlan<T>> competitor_max(
    const FinitePlan<T>& plan, const std::function<T(const Vec<T>&, const Vec<T>&)>& cost,
    const Numerics<T>& num, std::vector<Vec<T>> y_universe = {}) {
    if (plan.support.empty()) throw std::invalid_argument("empty plan");
    if (y_universe.empty())
        for (const auto& [x, y] : plan.support) y_universe.push_back(y);
    auto shape = detail::plan_shape(plan, y_universe, num);
    const int A = static_cast<int>(shape.xs.size());
    const int U = static_cast<int>(shape.ys.size());
    const int d = static_cast<int>(shape.xs[0].size());

    LinearProgram<T> lp;
    lp.sense = Sense::Maximize;
    for (int a = 0; a < A; ++a)
        for (int u = 0; u < U; ++u) lp.add_var(cost(shape.xs[a], shape.ys[u]));
    auto var = [U](int a, int u) { return a * U + u; };
    for (int a = 0; a < A; ++a) {
        int row = lp.add_row(RowSense::EQ, shape.mass[a]);
        for (int u = 0; u < U; ++u) lp.set(row, var(a, u), T(1));
    }
    for (int u = 0; u < U; ++u) {
        int row = lp.add_row(RowSense::EQ, shape.col_mass[u]);
        for (int a = 0; a < A; ++a) lp.set(row, var(a, u), T(1));
    }
    for (int a = 0; a < A; ++a)
        for (int c = 0; c < d; ++c) {
            int row = lp.add_row(RowSense::EQ, shape.moment[a][c]);
            for (int u = 0; u < U; ++u)
                if (shape.ys[u][c] != 0) lp.set(row, var(a, u), shape.ys[u][c]);
        }
    typename Simplex<T>::Options opt;
    opt.num = num;
    auto sol = solve(lp, opt);
    if (sol.status != LPStatus::Optimal)
        throw std::logic_error("competitor polytope contains the plan; solve cannot fail");

    FinitePlan<T> best;
    for (int a = 0; a < A; ++a)
        for (int u = 0; u < U; ++u)
            if (num.is_pos(sol.x[var(a, u)])) {
                best.support.push_back({shape.xs[a], shape.ys[u]});
                best.weights.push_back(sol.x[var(a, u)]);
            }
    return {sol.objective, best};
}

/// True when `other` is a competitor to `plan`: equal X-marginals, equal
/// Y-marginals, equal conditional barycenters.
template <class T>
bool is_competitor(const FinitePlan<T>& plan, const FinitePlan<T>& other, const Numerics<T>& num) {
    std::vector<Vec<T>> universe;
    for (const auto& [x, y] : plan.support) universe.push_back(y);
    for (const auto& [x, y] : other.support) universe.push_back(y);
    auto a = detail::plan_shape(plan, universe, num);
    auto b = detail::plan_shape(other, universe, num);
    if (a.xs.size() != b.xs.size()) return false;
    for (std::size_t i = 0; i < a.xs.size(); ++i) {
        int k = detail::find_point(b.xs, a.xs[i], num);
        if (k < 0 || !num.eq(a.mass[i], b.mass[k])) return false;
        if (!vec_eq(a.moment[i], b.moment[k], num)) return false;
    }
    for (std::size_t u = 0; u < a.ys.size(); ++u)
        if (!num.eq(a.col_mass[u], b.col_mass[u])) return false;
    return true;
}

enum class MonotonicityVerdict { Certified, Violated };

template <class T>
struct MonotonicityCertificate {
    MonotonicityVerdict verdict = MonotonicityVerdict::Certified;
    long trials = 0;
    int max_plan_atoms = 4;
    unsigned seed = 0;
    long budget = 0;
    struct Witness {
        FinitePlan<T> plan;
        FinitePlan<T> competitor;
        T gap{};
    };
    std::optional<Witness> witness;
};

/// Sweeps finite plans supported in Gamma: exhaustive over all x-atom pairs
/// with their full Gamma-rows (uniform weights), then budget-many random
/// plans with up to `max_atoms` x-atoms and random rational weights. A plan
/// whose best competitor strictly beats it refutes c-monotonicity of Gamma.
template <class T>
MonotonicityCertificate<T> certify_support(const DiscreteMeasure<T>& mu,
                                           const DiscreteMeasure<T>& nu,
                                           const std::vector<std::pair<int, int>>& gamma,
                                           const CostMatrix<T>& cost, const Numerics<T>& num,
                                           long budget = 64, int max_atoms = 4,
                                           unsigned seed = 0) {
    if (gamma.empty()) throw std::invalid_argument("empty candidate support");
    MonotonicityCertificate<T> cert;
    cert.max_plan_atoms = max_atoms;
    cert.seed = seed;
    cert.budget = budget;

    std::vector<std::vector<int>> rows(mu.size());
    for (const auto& [i, j] : gamma) rows[i].push_back(j);
    std::vector<int> populated;
    for (int i = 0; i < mu.size(); ++i)
        if (!rows[i].empty()) populated.push_back(i);

    std::function<T(const Vec<T>&, const Vec<T>&)> cost_fn =
        [&](const Vec<T>& x, const Vec<T>& y) {
            int i = detail::find_point(mu.atoms, x, num);
            int j = detail::find_point(nu.atoms, y, num);
            return cost.values[i][j];
        };

    auto try_plan = [&](const std::vector<std::pair<int, int>>& pairs, std::vector<T> weights) {
        auto plan = plan_from_pairs(mu, nu, pairs, std::move(weights));
        T base = plan.expect(cost_fn);
        auto [best, competitor] = competitor_max(plan, cost_fn, num);
        ++cert.trials;
        T threshold = base;
        if constexpr (!is_exact_v<T>) threshold += num.tol * (T(1) + std::abs(base));
        if (best > threshold) {
            cert.verdict = MonotonicityVerdict::Violated;
            cert.witness = typename MonotonicityCertificate<T>::Witness{
                std::move(plan), std::move(competitor), best - base};
            return false;
        }
        return true;
    };

    // exhaustive two-row sweep: every competitor construction that exchanges
    // mass between two x-atoms shows up here
    for (std::size_t a = 0; a < populated.size(); ++a)
        for (std::size_t b = a + 1; b < populated.size(); ++b) {
            std::vector<std::pair<int, int>> pairs;
            for (int j : rows[populated[a]]) pairs.push_back({populated[a], j});
            for (int j : rows[populated[b]]) pairs.push_back({populated[b], j});
            std::vector<T> w(pairs.size(), T(1) / T(static_cast<int>(pairs.size())));
            if (!try_plan(pairs, std::move(w))) return cert;
        }

    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> wdist(1, 8);
    for (long t = 0; t < budget; ++t) {
        std::uniform_int_distribution<int> kdist(
            1, std::min<int>(max_atoms, static_cast<int>(populated.size())));
        int k = kdist(rng);
        std::vector<int> chosen = populated;
        std::shuffle(chosen.begin(), chosen.end(), rng);
        chosen.resize(k);
        std::vector<std::pair<int, int>> pairs;
        for (int i : chosen) {
            const auto& row = rows[i];
            // random nonempty subset of the row
            std::vector<int> sel;
            for (int j : row)
                if (rng() % 2 == 0) sel.push_back(j);
            if (sel.empty()) sel.push_back(row[rng() % row.size()]);
            for (int j : sel) pairs.push_back({i, j});
        }
        std::vector<T> raw;
        T total(0);
        for (std::size_t p = 0; p < pairs.size(); ++p) {
            raw.push_back(T(wdist(rng)));
            total += raw.back();
        }
        for (auto& v : raw) v /= total;
        if (!try_plan(pairs, std::move(raw))) return cert;
    }
    return cert;
}

/// Support characterization of optimizers through the dual: Gamma is the
/// zero-slack set; the optimizer concentrates on it, and when the minimum of
/// P[c] over couplings supported in Gamma equals S, a coupling is optimal
/// exactly when it concentrates on Gamma.
template <class T>
struct ConcentrationReport {
    std::vector<std::pair<int, int>> gamma;
    T value{};                          // S
    T restricted_min{};                 // min of P[c] over Gamma-supported couplings
    bool optimizer_concentrated = false;
    bool iff_holds = false;             // restricted_min == S
};

template <class T>
bool concentrated_on(const Coupling<T>& coupling, const std::vector<std::pair<int, int>>& gamma,
                     const Numerics<T>& num) {
    std::vector<std::vector<bool>> in(coupling.mu.size(),
                                      std::vector<bool>(coupling.nu.size(), false));
    for (const auto& [i, j] : gamma) in[i][j] = true;
    for (int i = 0; i < coupling.mu.size(); ++i)
        for (int j = 0; j < coupling.nu.size(); ++j)
            if (num.is_pos(coupling.p[i][j]) && !in[i][j]) return false;
    return true;
}

template <class T>
ConcentrationReport<T> optimality_iff_concentrated(CouplingSolver<T>& solver,
                                                   const CostMatrix<T>& cost,
                                                   const Numerics<T>& num) {
    const auto& mu = solver.mu();
    const auto& nu = solver.nu();
    auto solved = solver.maximize(cost);
    ConcentrationReport<T> report;
    report.value = solved.value;
    for (int i = 0; i < mu.size(); ++i)
        for (int j = 0; j < nu.size(); ++j)
            if (num.is_zero(solved.dual.slack(mu, nu, cost, i, j))) report.gamma.push_back({i, j});
    report.optimizer_concentrated = concentrated_on(solved.coupling, report.gamma, num);

    // minimize P[c] over couplings with support inside Gamma
    LinearProgram<T> lp = assemble(mu, nu);
    lp.sense = Sense::Minimize;
    lp.objective = solver.flatten(cost);
    std::vector<std::vector<bool>> in(mu.size(), std::vector<bool>(nu.size(), false));
    for (const auto& [i, j] : report.gamma) in[i][j] = true;
    const auto& L = solver.layout();
    for (int i = 0; i < mu.size(); ++i)
        for (int j = 0; j < nu.size(); ++j)
            if (!in[i][j]) lp.upper[L.var(i, j)] = T(0);
    typename Simplex<T>::Options opt;
    opt.num = num;
    auto restricted = solve(lp, opt);
    if (restricted.status != LPStatus::Optimal)
        throw std::logic_error("optimizer support is inside Gamma; restriction stays feasible");
    report.restricted_min = restricted.objective;
    report.iff_holds = num.eq(report.restricted_min, report.value);
    return report;
}

/// d = 1 check of componentwise convexity: the restriction of the values to
/// each component's J-atoms, ordered by coordinate, must have nondecreasing
/// difference quotients.
template <class T>
std::vector<bool> weakly_convex_check_1d(const std::vector<T>& values,
                                         const ComponentPaving<T>& paving,
                                         const DiscreteMeasure<T>& nu, const Numerics<T>& num) {
    if (nu.dim != 1) throw std::invalid_argument("weakly_convex_check_1d requires d == 1");
    if (!paving.j_filled) throw std::logic_error("weakly_convex_check_1d needs attach_J first");
    std::vector<bool> out;
    for (const auto& comp : paving.components) {
        std::vector<std::pair<T, T>> pts;  // (coordinate, value)
        for (const auto& atom : comp.j_atoms) pts.push_back({nu.atoms[atom.j][0], values[atom.j]});
        std::sort(pts.begin(), pts.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        bool convex = true;
        for (std::size_t k = 0; k + 2 < pts.size(); ++k) {
            const T g1 = pts[k + 1].first - pts[k].first;
            const T g2 = pts[k + 2].first - pts[k + 1].first;
            const T d1 = pts[k + 1].second - pts[k].second;
            const T d2 = pts[k + 2].second - pts[k + 1].second;
            // slope(k,k+1) <= slope(k+1,k+2), cross-multiplied (gaps positive)
            if (!num.le(d1 * g2, d2 * g1)) convex = false;
        }
        out.push_back(convex);
    }
    return out;
}

}  // namespace motpaver
