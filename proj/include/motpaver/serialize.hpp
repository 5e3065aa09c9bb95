#pragma once

#include "motpaver/decomposition.hpp"
#include "motpaver/monotonicity.hpp"
#include "motpaver/problem.hpp"

#include <json.hpp>

namespace motpaver {

// JSON builders shared by the command reports and the demo replays, so the
// sections carry one schema regardless of which command produced them.

template <class T>
nlohmann::json value_json(const T& v) {
    if constexpr (is_exact_v<T>) return {{"rational", v.str()}, {"decimal", to_double(v)}};
    else return {{"decimal", v}};
}

template <class T>
nlohmann::json scalar_echo_json(const T& v) {
    if constexpr (is_exact_v<T>) return v.str();
    else return v;
}

template <class T>
nlohmann::json point_json(const Vec<T>& p) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& c : p) out.push_back(scalar_echo_json(c));
    return out;
}

template <class T>
nlohmann::json matrix_json(const std::vector<std::vector<T>>& m) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& row : m) {
        nlohmann::json r = nlohmann::json::array();
        for (const auto& v : row) r.push_back(scalar_echo_json(v));
        out.push_back(r);
    }
    return out;
}

template <class T>
nlohmann::json coupling_json(const Coupling<T>& c, const Numerics<T>& num) {
    nlohmann::json support = nlohmann::json::array();
    for (const auto& [i, j] : support_pairs(c, num)) support.push_back(nlohmann::json::array({i, j}));
    return {{"mass", matrix_json(c.p)}, {"support", support}};
}

template <class T>
nlohmann::json dual_json(const DualCertificate<T>& cert) {
    nlohmann::json h = nlohmann::json::array();
    for (const auto& v : cert.h) h.push_back(point_json(v));
    return {{"phi", point_json(cert.phi)},
            {"psi", point_json(cert.psi)},
            {"h", h},
            {"value", value_json(cert.value)}};
}

template <class T>
nlohmann::json separation_json(const SeparatingTriple<T>& sep, const DiscreteMeasure<T>& mu,
                               const DiscreteMeasure<T>& nu) {
    nlohmann::json h = nlohmann::json::array();
    for (const auto& v : sep.h) h.push_back(point_json(v));
    const T objective = mu.integrate(sep.phi) + nu.integrate(sep.psi);
    return {{"phi", point_json(sep.phi)},
            {"psi", point_json(sep.psi)},
            {"h", h},
            {"objective", value_json(objective)}};
}

template <class T>
nlohmann::json order_json(const OrderCertificate<T>& cert, const DiscreteMeasure<T>& mu,
                          const DiscreteMeasure<T>& nu, const Numerics<T>& num) {
    nlohmann::json out;
    out["ordered"] = cert.ordered;
    if (cert.coupling) out["coupling"] = coupling_json(*cert.coupling, num);
    if (cert.separation) out["separation"] = separation_json(*cert.separation, mu, nu);
    return out;
}

template <class T>
nlohmann::json paving_json(const PavingRun<T>& run, const DiscreteMeasure<T>& nu,
                           const Numerics<T>& num) {
    nlohmann::json comps = nlohmann::json::array();
    for (const auto& comp : run.paving.components) {
        nlohmann::json jc;
        jc["id"] = comp.id;
        jc["members"] = comp.members;
        jc["eta"] = value_json(comp.eta);
        jc["dim"] = comp.hull.dim;
        nlohmann::json verts = nlohmann::json::array();
        for (const auto& v : vertices(comp.hull, num)) verts.push_back(point_json(v));
        jc["vertices"] = verts;
        nlohmann::json atoms = nlohmann::json::array();
        for (const auto& a : comp.j_atoms)
            atoms.push_back({{"atom", a.j},
                             {"point", point_json(nu.atoms[a.j])},
                             {"min_mass", value_json(a.min_mass)},
                             {"max_mass", value_json(a.max_mass)},
                             {"boundary", a.boundary}});
        jc["j_atoms"] = atoms;
        jc["nu_invariant"] = static_cast<bool>(run.nu_invariant[comp.id]);
        comps.push_back(std::move(jc));
    }
    return {{"components", comps}, {"atom_component", run.paving.atom_component}};
}

template <class T>
nlohmann::json plan_json(const FinitePlan<T>& plan) {
    nlohmann::json pairs = nlohmann::json::array(), w = nlohmann::json::array();
    for (const auto& [x, y] : plan.support)
        pairs.push_back(nlohmann::json::array({point_json(x), point_json(y)}));
    for (const auto& v : plan.weights) w.push_back(scalar_echo_json(v));
    return {{"support", pairs}, {"weights", w}};
}

template <class T>
nlohmann::json certify_json(const MonotonicityCertificate<T>& cert) {
    nlohmann::json out;
    out["verdict"] = cert.verdict == MonotonicityVerdict::Certified ? "Certified" : "Violated";
    out["trials"] = cert.trials;
    out["budget"] = cert.budget;
    out["max_plan_atoms"] = cert.max_plan_atoms;
    out["seed"] = cert.seed;
    if (cert.witness)
        out["witness"] = {{"plan", plan_json(cert.witness->plan)},
                          {"competitor", plan_json(cert.witness->competitor)},
                          {"gap", value_json(cert.witness->gap)}};
    return out;
}

template <class T>
nlohmann::json solve_json(const typename CouplingSolver<T>::Solved& solved,
                          const DiscreteMeasure<T>& mu, const DiscreteMeasure<T>& nu,
                          const CostMatrix<T>& cost, const Numerics<T>& num) {
    nlohmann::json s;
    s["value"] = value_json(solved.value);
    s["optimizer"] = coupling_json(solved.coupling, num);
    s["dual"] = dual_json(solved.dual);
    s["gap"] = value_json(T(solved.dual.value - solved.value));
    s["violations"] = nlohmann::json::array();
    for (const auto& v : verify_certificate(solved.dual, mu, nu, cost, num))
        s["violations"].push_back({{"i", v.i}, {"j", v.j}, {"slack", scalar_echo_json(v.slack)}});
    return s;
}

template <class T>
nlohmann::json decomposition_json(const DecompositionReport<T>& rep,
                                  const std::vector<ComponentDual<T>>& duals,
                                  const Numerics<T>& num) {
    nlohmann::json d;
    d["global"] = value_json(rep.global);
    d["mixture"] = value_json(rep.mixture);
    d["equal"] = rep.equal;
    nlohmann::json comps = nlohmann::json::array();
    for (std::size_t k = 0; k < rep.problems.size(); ++k) {
        nlohmann::json jc;
        jc["component"] = rep.problems[k].component;
        jc["eta"] = value_json(rep.etas[k]);
        jc["value"] = value_json(rep.component_values[k]);
        for (const auto& cert : duals)
            if (cert.component == rep.problems[k].component) {
                nlohmann::json h = nlohmann::json::array(), hp = nlohmann::json::array();
                for (const auto& v : cert.h) h.push_back(point_json(v));
                for (const auto& v : cert.h_projected) hp.push_back(point_json(v));
                jc["dual"] = {{"members", cert.members}, {"j_atoms", cert.j_atoms},
                              {"phi", point_json(cert.phi)}, {"psi", point_json(cert.psi)},
                              {"h", h}, {"h_projected", hp},
                              {"value", value_json(cert.value)}};
            }
        auto sub = sub_paving(rep.problems[k], num);
        nlohmann::json subs = nlohmann::json::array();
        for (const auto& comp : sub.paving.components) {
            nlohmann::json verts = nlohmann::json::array();
            for (const auto& v : vertices(comp.hull, num)) verts.push_back(point_json(v));
            subs.push_back({{"members", comp.members}, {"vertices", verts}});
        }
        jc["sub_components"] = subs;
        comps.push_back(std::move(jc));
    }
    d["components"] = comps;
    return d;
}

}  // namespace motpaver
