#pragma once

#include "motpaver/paving.hpp"

#include <utility>
#include <vector>

namespace motpaver {

/// One componentwise martingale transport problem: mu restricted to the
/// members and renormalized, the coupling image on the targets, the cost
/// restriction, and the component weight eta kept separately.
template <class T>
struct ComponentProblem {
    int component = 0;
    std::vector<int> members;  // global mu-atom indices
    std::vector<int> targets;  // global nu-atom indices charged from this component
    DiscreteMeasure<T> mu_I, nu_I;
    CostMatrix<T> cost;
    Coupling<T> plan;  // coupling conditioned on the component
    T eta{};
};

/// Splits (coupling, cost) along the paving. The component plans are feasible
/// couplings of (mu_I, nu_I) and the eta-mixture reproduces (mu, nu).
template <class T>
std::vector<ComponentProblem<T>> disintegrate(const ComponentPaving<T>& paving,
                                              const Coupling<T>& coupling,
                                              const CostMatrix<T>& cost, const Numerics<T>& num) {
    const auto& mu = coupling.mu;
    const auto& nu = coupling.nu;
    std::vector<ComponentProblem<T>> out;
    for (const auto& comp : paving.components) {
        ComponentProblem<T> prob;
        prob.component = comp.id;
        prob.members = comp.members;
        prob.eta = comp.eta;
        std::vector<T> into(nu.size(), T(0));
        for (int i : comp.members)
            for (int j = 0; j < nu.size(); ++j) into[j] += coupling.p[i][j];
        for (int j = 0; j < nu.size(); ++j)
            if (num.is_pos(into[j])) prob.targets.push_back(j);

        std::vector<Vec<T>> matoms;
        std::vector<T> mweights;
        for (int i : comp.members) {
            matoms.push_back(mu.atoms[i]);
            mweights.push_back(mu.weights[i] / comp.eta);
        }
        prob.mu_I = make_measure(mu.dim, std::move(matoms), std::move(mweights), num);

        std::vector<Vec<T>> tatoms;
        std::vector<T> tweights;
        for (int j : prob.targets) {
            tatoms.push_back(nu.atoms[j]);
            tweights.push_back(into[j] / comp.eta);
        }
        prob.nu_I = make_measure(nu.dim, std::move(tatoms), std::move(tweights), num);

        prob.cost.nonneg = cost.nonneg;
        prob.cost.values.assign(prob.members.size(), std::vector<T>(prob.targets.size(), T(0)));
        prob.plan = Coupling<T>{prob.mu_I, prob.nu_I, {}};
        prob.plan.p.assign(prob.members.size(), std::vector<T>(prob.targets.size(), T(0)));
        for (std::size_t a = 0; a < prob.members.size(); ++a)
            for (std::size_t b = 0; b < prob.targets.size(); ++b) {
                prob.cost.values[a][b] = cost.values[prob.members[a]][prob.targets[b]];
                prob.plan.p[a][b] = coupling.p[prob.members[a]][prob.targets[b]] / comp.eta;
            }
        out.push_back(std::move(prob));
    }
    return out;
}

template <class T>
struct DecompositionReport {
    T global{};                       // S over the full instance
    std::vector<T> etas;              // component weights
    std::vector<T> component_values;  // componentwise S under the optimizer's image
    T mixture{};                      // sum_k eta_k * S_k
    bool equal = false;
    std::vector<ComponentProblem<T>> problems;
};

/// Verifies S(c) == sum_k eta_k S_{mu_k, nu_k}(c) with the disintegration
/// taken under a primal optimizer.
template <class T>
DecompositionReport<T> check_decomposition(CouplingSolver<T>& solver,
                                           const ComponentPaving<T>& paving,
                                           const CostMatrix<T>& cost, const Numerics<T>& num) {
    DecompositionReport<T> report;
    auto opt = solver.maximize(cost);
    report.global = opt.value;
    report.problems = disintegrate(paving, opt.coupling, cost, num);
    report.mixture = T(0);
    for (const auto& prob : report.problems) {
        CouplingSolver<T> sub(prob.mu_I, prob.nu_I, num);
        T value = sub.maximize(prob.cost).value;
        report.etas.push_back(prob.eta);
        report.component_values.push_back(value);
        report.mixture += prob.eta * value;
    }
    report.equal = num.eq(report.global, report.mixture);
    return report;
}

/// Componentwise superhedging certificate with pointwise scope
/// members x j_atoms. psi is defined on the whole J set of the component: LP
/// duals on the charged atoms, minimal admissible extension on the rest.
template <class T>
struct ComponentDual {
    int component = 0;
    std::vector<int> members;  // global mu indices (rows of the scope)
    std::vector<int> j_atoms;  // global nu indices (columns of the scope)
    std::vector<T> phi;        // per member
    std::vector<T> psi;        // per j_atom
    std::vector<Vec<T>> h;     // per member, the raw LP multipliers
    // h projected onto the direction space of aff I; y - x lies in that space
    // for every in-scope pair, so the projection leaves in-scope slacks alone
    std::vector<Vec<T>> h_projected;
    T value{};                 // == componentwise S

    T slack(const DiscreteMeasure<T>& mu, const DiscreteMeasure<T>& nu, const CostMatrix<T>& cost,
            std::size_t a, std::size_t b) const {
        const int i = members[a], j = j_atoms[b];
        return phi[a] + psi[b] + dot(h[a], sub(nu.atoms[j], mu.atoms[i])) -
               cost.values[i][j];
    }
};

template <class T>
std::vector<ComponentDual<T>> componentwise_dual(CouplingSolver<T>& solver,
                                                 const ComponentPaving<T>& paving,
                                                 const CostMatrix<T>& cost,
                                                 const Numerics<T>& num) {
    if (!paving.j_filled) throw std::logic_error("componentwise_dual needs attach_J first");
    const auto& mu = solver.mu();
    const auto& nu = solver.nu();
    auto opt = solver.maximize(cost);
    auto problems = disintegrate(paving, opt.coupling, cost, num);
    std::vector<ComponentDual<T>> out;
    for (std::size_t k = 0; k < problems.size(); ++k) {
        const auto& prob = problems[k];
        const auto& comp = paving.components[prob.component];
        CouplingSolver<T> sub_solver(prob.mu_I, prob.nu_I, num);
        auto solved = sub_solver.maximize(prob.cost);
        ComponentDual<T> cert;
        cert.component = prob.component;
        cert.members = prob.members;
        cert.phi = solved.dual.phi;
        cert.h = solved.dual.h;
        for (const auto& hv : cert.h) cert.h_projected.push_back(project_direction(comp.hull.hull, hv));
        cert.value = solved.value;
        for (const auto& atom : comp.j_atoms) cert.j_atoms.push_back(atom.j);
        for (int j : cert.j_atoms) {
            int charged = -1;
            for (std::size_t b = 0; b < prob.targets.size(); ++b)
                if (prob.targets[b] == j) charged = static_cast<int>(b);
            if (charged >= 0) {
                cert.psi.push_back(solved.dual.psi[charged]);
            } else {
                // smallest admissible value over the member rows
                T best{};
                bool first = true;
                for (std::size_t a = 0; a < prob.members.size(); ++a) {
                    const int i = prob.members[a];
                    T need = cost.values[i][j] - cert.phi[a] -
                             dot(cert.h[a], sub(nu.atoms[j], mu.atoms[i]));
                    if (first || need > best) {
                        best = need;
                        first = false;
                    }
                }
                cert.psi.push_back(best);
            }
        }
        out.push_back(std::move(cert));
    }
    return out;
}

/// Single global triple assembled from componentwise certificates. phi and h
/// come from each atom's own component; psi takes the largest claim at atoms
/// shared between J sets, which preserves admissibility on the union of the
/// componentwise scopes (and only there).
template <class T>
std::pair<DualCertificate<T>, std::vector<std::pair<int, int>>> glue_componentwise(
    const std::vector<ComponentDual<T>>& duals, const DiscreteMeasure<T>& mu,
    const DiscreteMeasure<T>& nu) {
    DualCertificate<T> glued;
    glued.phi.assign(mu.size(), T(0));
    glued.psi.assign(nu.size(), T(0));
    glued.h.assign(mu.size(), Vec<T>(mu.dim, T(0)));
    std::vector<bool> claimed(nu.size(), false);
    std::vector<std::pair<int, int>> scope;
    for (const auto& cert : duals) {
        for (std::size_t a = 0; a < cert.members.size(); ++a) {
            glued.phi[cert.members[a]] = cert.phi[a];
            glued.h[cert.members[a]] = cert.h[a];
        }
        for (std::size_t b = 0; b < cert.j_atoms.size(); ++b) {
            const int j = cert.j_atoms[b];
            if (!claimed[j] || cert.psi[b] > glued.psi[j]) glued.psi[j] = cert.psi[b];
            claimed[j] = true;
        }
        for (int i : cert.members)
            for (int j : cert.j_atoms) scope.push_back({i, j});
    }
    glued.value = mu.integrate(glued.phi) + nu.integrate(glued.psi);
    return {std::move(glued), std::move(scope)};
}

/// Paving of a componentwise problem; may be strictly finer than the
/// component it came from.
template <class T>
PavingRun<T> sub_paving(const ComponentProblem<T>& prob, const Numerics<T>& num) {
    CouplingSolver<T> solver(prob.mu_I, prob.nu_I, num);
    return run_paving(solver, num);
}

/// Whether the values are the restriction of some convex function on the
/// given points: feasibility of subgradients g_j with
/// v_l >= v_j + g_j . (y_l - y_j) for all pairs.
template <class T>
bool psi_convex_extendable(const std::vector<Vec<T>>& points, const std::vector<T>& values,
                           const Numerics<T>& num) {
    const int k = static_cast<int>(points.size());
    if (k <= 1) return true;
    const int d = static_cast<int>(points[0].size());
    LinearProgram<T> lp;
    for (int j = 0; j < k * d; ++j) lp.add_var(T(0), /*free=*/true);
    for (int j = 0; j < k; ++j)
        for (int l = 0; l < k; ++l) {
            if (j == l) continue;
            int row = lp.add_row(RowSense::LE, values[l] - values[j]);
            for (int c = 0; c < d; ++c) {
                T diff = points[l][c] - points[j][c];
                if (diff != 0) lp.set(row, j * d + c, diff);
            }
        }
    typename Simplex<T>::Options opt;
    opt.num = num;
    Simplex<T> s(lp, opt);
    return s.feasible();
}

}  // namespace motpaver
