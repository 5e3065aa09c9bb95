#pragma once

#include "motpaver/geometry.hpp"
#include "motpaver/transport.hpp"

#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

namespace motpaver {

/// Raised when the computed I-polytopes fail the equal-or-ri-disjoint
/// partition property. Impossible in exact mode by the theory; in float mode
/// it signals numerical failure.
struct PartitionViolation : std::runtime_error {
    explicit PartitionViolation(const std::string& what) : std::runtime_error(what) {}
};

/// Support of the maximal coupling: pair (i,j) is present iff some martingale
/// coupling charges it. The witness is the average of the per-pair maximizers,
/// so its support equals the present set.
template <class T>
struct FeasibleSupport {
    std::vector<std::vector<T>> max_mass;
    std::vector<std::vector<bool>> present;
    Coupling<T> witness;
};

template <class T>
FeasibleSupport<T> feasible_support(CouplingSolver<T>& solver, const Numerics<T>& num) {
    solver.require_order();
    const auto& L = solver.layout();
    FeasibleSupport<T> out;
    out.max_mass.assign(L.m, std::vector<T>(L.n, T(0)));
    out.present.assign(L.m, std::vector<bool>(L.n, false));
    out.witness = Coupling<T>{solver.mu(), solver.nu(), {}};
    out.witness.p.assign(L.m, std::vector<T>(L.n, T(0)));
    std::vector<T> obj(L.num_vars(), T(0));
    for (int i = 0; i < L.m; ++i)
        for (int j = 0; j < L.n; ++j) {
            obj[L.var(i, j)] = T(1);
            auto sol = solver.optimize(obj, Sense::Maximize);
            obj[L.var(i, j)] = T(0);
            out.max_mass[i][j] = sol.objective;
            out.present[i][j] = num.is_pos(sol.objective);
            for (int a = 0; a < L.m; ++a)
                for (int b = 0; b < L.n; ++b) out.witness.p[a][b] += sol.x[L.var(a, b)];
        }
    const T count = T(L.m * L.n);
    for (auto& row : out.witness.p)
        for (auto& v : row) v /= count;
    return out;
}

template <class T>
FeasibleSupport<T> feasible_support(const DiscreteMeasure<T>& mu, const DiscreteMeasure<T>& nu,
                                    const Numerics<T>& num) {
    CouplingSolver<T> solver(mu, nu, num);
    return feasible_support(solver, num);
}

/// Fan-out variant: the per-pair maximizations are independent, so `jobs`
/// worker threads each run their share on their own solver. jobs <= 1 falls
/// back to the warm single-solver path.
template <class T>
FeasibleSupport<T> feasible_support_parallel(const DiscreteMeasure<T>& mu,
                                             const DiscreteMeasure<T>& nu, const Numerics<T>& num,
                                             int jobs) {
    CouplingSolver<T> probe(mu, nu, num);
    if (jobs <= 1) return feasible_support(probe, num);
    probe.require_order();
    const auto& L = probe.layout();
    const int pairs = L.num_vars();
    jobs = std::min(jobs, pairs);

    FeasibleSupport<T> out;
    out.max_mass.assign(L.m, std::vector<T>(L.n, T(0)));
    out.present.assign(L.m, std::vector<bool>(L.n, false));
    out.witness = Coupling<T>{mu, nu, {}};
    out.witness.p.assign(L.m, std::vector<T>(L.n, T(0)));

    std::vector<std::vector<std::vector<T>>> partial(jobs);
    std::vector<std::thread> workers;
    for (int w = 0; w < jobs; ++w) {
        partial[w].assign(L.m, std::vector<T>(L.n, T(0)));
        workers.emplace_back([&, w]() {
            CouplingSolver<T> local(mu, nu, num);
            std::vector<T> obj(pairs, T(0));
            for (int v = w; v < pairs; v += jobs) {
                const int i = v / L.n, j = v % L.n;
                obj[v] = T(1);
                auto sol = local.optimize(obj, Sense::Maximize);
                obj[v] = T(0);
                out.max_mass[i][j] = sol.objective;
                for (int a = 0; a < L.m; ++a)
                    for (int b = 0; b < L.n; ++b) partial[w][a][b] += sol.x[L.var(a, b)];
            }
        });
    }
    for (auto& t : workers) t.join();
    for (int i = 0; i < L.m; ++i)
        for (int j = 0; j < L.n; ++j) {
            out.present[i][j] = num.is_pos(out.max_mass[i][j]);
            for (int w = 0; w < jobs; ++w) out.witness.p[i][j] += partial[w][i][j];
            out.witness.p[i][j] /= T(pairs);
        }
    return out;
}

/// One attached nu-atom of a component, with the range of component->atom
/// mass over all couplings. min > 0 marks atoms charged by every coupling,
/// max > 0 only by some; boundary atoms sit in cl I \ ri I.
template <class T>
struct JAtom {
    int j = 0;
    T min_mass{};
    T max_mass{};
    bool boundary = false;
};

template <class T>
struct Component {
    int id = 0;
    std::vector<int> members;    // mu-atom indices
    Polytope<T> hull;            // I with relative-interior semantics
    std::vector<JAtom<T>> j_atoms;
    T eta{};
};

template <class T>
struct ComponentPaving {
    std::vector<Component<T>> components;
    std::vector<int> atom_component;  // mu-atom -> component id
    bool j_filled = false;
};

/// Groups mu-atoms by equality of I(x_i) := ri conv of feasible targets and
/// checks the partition property at runtime.
template <class T>
ComponentPaving<T> compute_paving(const FeasibleSupport<T>& support, const DiscreteMeasure<T>& mu,
                                  const DiscreteMeasure<T>& nu, const Numerics<T>& num) {
    ComponentPaving<T> paving;
    paving.atom_component.assign(mu.size(), -1);
    for (int i = 0; i < mu.size(); ++i) {
        std::vector<Vec<T>> targets;
        for (int j = 0; j < nu.size(); ++j)
            if (support.present[i][j]) targets.push_back(nu.atoms[j]);
        Polytope<T> I = make_polytope(targets, num);
        int found = -1;
        for (auto& comp : paving.components)
            if (hull_equal(comp.hull, I, num)) {
                found = comp.id;
                break;
            }
        if (found < 0) {
            Component<T> comp;
            comp.id = static_cast<int>(paving.components.size());
            comp.hull = std::move(I);
            paving.components.push_back(std::move(comp));
            found = paving.components.back().id;
        }
        paving.components[found].members.push_back(i);
        paving.components[found].eta += mu.weights[i];
        paving.atom_component[i] = found;
    }
    for (const auto& comp : paving.components)
        for (int i : comp.members)
            if (!ri_contains(comp.hull, mu.atoms[i], num))
                throw PartitionViolation("member atom escapes the relative interior of its component");
    for (std::size_t a = 0; a < paving.components.size(); ++a)
        for (std::size_t b = a + 1; b < paving.components.size(); ++b)
            if (ri_intersects(paving.components[a].hull, paving.components[b].hull, num))
                throw PartitionViolation("distinct components have intersecting relative interiors");
    return paving;
}

namespace detail {

// Range of sum_{i in members} p_ij over the coupling polytope.
template <class T>
std::pair<T, T> component_mass_bounds(CouplingSolver<T>& solver, const std::vector<int>& members,
                                      int j) {
    const auto& L = solver.layout();
    std::vector<T> obj(L.num_vars(), T(0));
    for (int i : members) obj[L.var(i, j)] = T(1);
    T hi = solver.optimize(obj, Sense::Maximize).objective;
    T lo = solver.optimize(obj, Sense::Minimize).objective;
    return {lo, hi};
}

}  // namespace detail

/// Attaches nu-atoms to components: atom j joins component k when it lies in
/// cl I_k and some coupling moves mass from the component into it. Keeps the
/// min/max mass annotations.
template <class T>
void attach_J(ComponentPaving<T>& paving, CouplingSolver<T>& solver, const Numerics<T>& num) {
    const auto& nu = solver.nu();
    for (auto& comp : paving.components) {
        comp.j_atoms.clear();
        for (int j = 0; j < nu.size(); ++j) {
            if (!closure_contains(comp.hull, nu.atoms[j], num)) continue;
            auto [lo, hi] = detail::component_mass_bounds(solver, comp.members, j);
            if (!num.is_pos(hi)) continue;
            JAtom<T> atom;
            atom.j = j;
            atom.min_mass = lo;
            atom.max_mass = hi;
            atom.boundary = !ri_contains(comp.hull, nu.atoms[j], num);
            comp.j_atoms.push_back(std::move(atom));
        }
    }
    paving.j_filled = true;
}

/// Component-by-component test of whether nu_I^P is the same for every
/// coupling P: true iff min == max mass for each attached atom.
template <class T>
std::vector<bool> nu_invariance(const ComponentPaving<T>& paving, CouplingSolver<T>& solver,
                                const Numerics<T>& num) {
    std::vector<bool> out;
    for (const auto& comp : paving.components) {
        bool invariant = true;
        if (paving.j_filled) {
            for (const auto& atom : comp.j_atoms)
                if (!num.eq(atom.min_mass, atom.max_mass)) invariant = false;
        } else {
            for (int j = 0; j < solver.nu().size() && invariant; ++j) {
                if (!closure_contains(comp.hull, solver.nu().atoms[j], num)) continue;
                auto [lo, hi] = detail::component_mass_bounds(solver, comp.members, j);
                if (!num.eq(lo, hi)) invariant = false;
            }
        }
        out.push_back(invariant);
    }
    return out;
}

/// The whole pipeline for one instance; everything downstream (reports,
/// disintegration, demos) consumes this bundle.
template <class T>
struct PavingRun {
    FeasibleSupport<T> support;
    ComponentPaving<T> paving;
    std::vector<bool> nu_invariant;
};

template <class T>
PavingRun<T> run_paving(CouplingSolver<T>& solver, const Numerics<T>& num, int jobs = 1) {
    PavingRun<T> run;
    run.support = jobs <= 1 ? feasible_support(solver, num)
                            : feasible_support_parallel(solver.mu(), solver.nu(), num, jobs);
    run.paving = compute_paving(run.support, solver.mu(), solver.nu(), num);
    attach_J(run.paving, solver, num);
    run.nu_invariant = nu_invariance(run.paving, solver, num);
    return run;
}

/// Corner set for the irreducibility perturbation: the bounding box of both
/// supports, padded so every atom is strictly inside.
template <class T>
std::vector<Vec<T>> default_perturbation_corners(const DiscreteMeasure<T>& mu,
                                                 const DiscreteMeasure<T>& nu) {
    const int d = mu.dim;
    Vec<T> lo = mu.atoms[0], hi = mu.atoms[0];
    for (const auto* m : {&mu, &nu})
        for (const auto& a : m->atoms)
            for (int k = 0; k < d; ++k) {
                if (a[k] < lo[k]) lo[k] = a[k];
                if (a[k] > hi[k]) hi[k] = a[k];
            }
    for (int k = 0; k < d; ++k) {
        T pad = hi[k] - lo[k];
        if (pad < 1) pad = T(1);
        lo[k] -= pad;
        hi[k] += pad;
    }
    std::vector<Vec<T>> corners(std::size_t(1) << d, Vec<T>(d));
    for (std::size_t mask = 0; mask < corners.size(); ++mask)
        for (int k = 0; k < d; ++k) corners[mask][k] = (mask >> k) & 1 ? hi[k] : lo[k];
    return corners;
}

/// Mixes in an irreducible pair (delta at the corner mean, uniform on the
/// corners) with weight eps/(1+eps); the result has a single component whose
/// closed hull contains supp nu.
template <class T>
std::pair<DiscreteMeasure<T>, DiscreteMeasure<T>> irreducible_perturbation(
    const DiscreteMeasure<T>& mu, const DiscreteMeasure<T>& nu, const T& eps,
    const Numerics<T>& num, std::vector<Vec<T>> corners = {}) {
    if (!num.is_pos(eps)) throw std::invalid_argument("perturbation weight must be positive");
    {
        CouplingSolver<T> solver(mu, nu, num);
        solver.require_order();
    }
    if (corners.empty()) corners = default_perturbation_corners(mu, nu);
    const int d = mu.dim;
    Vec<T> center(d, T(0));
    std::vector<T> weights;
    for (const auto& c : corners) {
        for (int k = 0; k < d; ++k) center[k] += c[k] / T(static_cast<int>(corners.size()));
        weights.push_back(T(1) / T(static_cast<int>(corners.size())));
    }
    auto nu_prime = make_measure(d, corners, weights, num);
    auto mu_prime = dirac(center);
    return {mix(mu, T(1), mu_prime, eps, num), mix(nu, T(1), nu_prime, eps, num)};
}

}  // namespace motpaver
