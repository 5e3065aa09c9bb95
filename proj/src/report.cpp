#include "motpaver/report.hpp"

#include "motpaver/serialize.hpp"
#include "motpaver/svg.hpp"

#include <chrono>
#include <fstream>

namespace motpaver {

namespace {

using nlohmann::json;

struct Stopwatch {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    }
};

json envelope(const char* command, const AnyProblem& problem, const Options& opt) {
    json out;
    out["schema"] = kReportSchema;
    out["command"] = command;
    out["mode"] = problem.mode();
    if (!problem.exact()) out["tolerance"] = problem.tolerance;
    out["seed"] = opt.seed;
    out["problem"] = problem_json(problem);
    return out;
}

template <class T>
CommandResult check_order_impl(const Problem<T>& p, json out) {
    auto cert = convex_order_check(p.mu, p.nu, p.num);
    out["order"] = order_json(cert, p.mu, p.nu, p.num);
    return {std::move(out), cert.ordered ? 0 : 2};
}

template <class T>
CommandResult solve_impl(const Problem<T>& p, json out) {
    CouplingSolver<T> solver(p.mu, p.nu, p.num);
    if (!solver.feasible()) {
        out["order"] = order_json(solver.order_certificate(), p.mu, p.nu, p.num);
        return {std::move(out), 2};
    }
    auto solved = solver.maximize(p.cost);
    out["solve"] = solve_json<T>(solved, p.mu, p.nu, p.cost, p.num);
    return {std::move(out), 0};
}

template <class T>
CommandResult pave_impl(const Problem<T>& p, const Options& opt, json out) {
    CouplingSolver<T> solver(p.mu, p.nu, p.num);
    if (!solver.feasible()) {
        out["order"] = order_json(solver.order_certificate(), p.mu, p.nu, p.num);
        return {std::move(out), 2};
    }
    auto run = run_paving(solver, p.num, opt.jobs);
    out["paving"] = paving_json(run, p.nu, p.num);
    if (!opt.plot.empty()) {
        write_paving_svg(opt.plot, p.mu, p.nu, run, p.num);
        out["plot"] = opt.plot;
    }
    return {std::move(out), 0};
}

template <class T>
CommandResult decompose_impl(const Problem<T>& p, const Options& opt, json out) {
    CouplingSolver<T> solver(p.mu, p.nu, p.num);
    if (!solver.feasible()) {
        out["order"] = order_json(solver.order_certificate(), p.mu, p.nu, p.num);
        return {std::move(out), 2};
    }
    auto run = run_paving(solver, p.num, opt.jobs);
    out["paving"] = paving_json(run, p.nu, p.num);
    auto rep = check_decomposition(solver, run.paving, p.cost, p.num);
    auto duals = componentwise_dual(solver, run.paving, p.cost, p.num);
    out["decomposition"] = decomposition_json(rep, duals, p.num);
    return {std::move(out), 0};
}

template <class T>
CommandResult certify_impl(const Problem<T>& p, const std::string& gamma_source,
                           const Options& opt, json out) {
    CouplingSolver<T> solver(p.mu, p.nu, p.num);
    if (!solver.feasible()) {
        out["order"] = order_json(solver.order_certificate(), p.mu, p.nu, p.num);
        return {std::move(out), 2};
    }
    std::vector<std::pair<int, int>> gamma;
    if (gamma_source == "optimizer") {
        gamma = support_pairs(solver.maximize(p.cost).coupling, p.num);
    } else {
        std::ifstream in(gamma_source);
        if (!in) throw ProblemError("cannot open support file '" + gamma_source + "'");
        json jg;
        try {
            in >> jg;
        } catch (const json::parse_error& e) {
            throw ProblemError(std::string("support file: ") + e.what());
        }
        if (!jg.is_array()) throw ProblemError("support file: expected an array of [i, j] pairs");
        for (const auto& pair : jg) {
            if (!pair.is_array() || pair.size() != 2)
                throw ProblemError("support file: expected [i, j] pairs");
            int i = pair[0].get<int>(), j = pair[1].get<int>();
            if (i < 0 || i >= p.mu.size() || j < 0 || j >= p.nu.size())
                throw ProblemError("support file: atom index out of range");
            gamma.push_back({i, j});
        }
    }
    json jg = json::array();
    for (const auto& [i, j] : gamma) jg.push_back(json::array({i, j}));
    out["gamma"] = jg;
    out["gamma_source"] = gamma_source;
    auto cert = certify_support(p.mu, p.nu, gamma, p.cost, p.num, opt.budget, 4, opt.seed);
    out["certify"] = certify_json(cert);
    return {std::move(out), cert.verdict == MonotonicityVerdict::Certified ? 0 : 3};
}

}  // namespace

CommandResult cmd_check_order(const AnyProblem& problem, const Options& opt) {
    Stopwatch clock;
    auto out = std::visit(
        [&](const auto& p) { return check_order_impl(p, envelope("check-order", problem, opt)); },
        problem.v);
    out.report["timing_ms"] = clock.ms();
    return out;
}

CommandResult cmd_solve(const AnyProblem& problem, const Options& opt) {
    Stopwatch clock;
    auto out = std::visit(
        [&](const auto& p) { return solve_impl(p, envelope("solve", problem, opt)); }, problem.v);
    out.report["timing_ms"] = clock.ms();
    return out;
}

CommandResult cmd_pave(const AnyProblem& problem, const Options& opt) {
    Stopwatch clock;
    auto out = std::visit(
        [&](const auto& p) { return pave_impl(p, opt, envelope("pave", problem, opt)); },
        problem.v);
    out.report["timing_ms"] = clock.ms();
    return out;
}

CommandResult cmd_decompose(const AnyProblem& problem, const Options& opt) {
    Stopwatch clock;
    auto out = std::visit(
        [&](const auto& p) { return decompose_impl(p, opt, envelope("decompose", problem, opt)); },
        problem.v);
    out.report["timing_ms"] = clock.ms();
    return out;
}

CommandResult cmd_certify(const AnyProblem& problem, const std::string& gamma_source,
                          const Options& opt) {
    Stopwatch clock;
    auto out = std::visit(
        [&](const auto& p) {
            return certify_impl(p, gamma_source, opt, envelope("certify", problem, opt));
        },
        problem.v);
    out.report["timing_ms"] = clock.ms();
    return out;
}

// --- independent re-verification -------------------------------------------

namespace {

struct Checks {
    json list = json::array();
    bool all_ok = true;

    void add(const std::string& name, bool ok, const std::string& detail = "") {
        json c = {{"name", name}, {"ok", ok}};
        if (!detail.empty()) c["detail"] = detail;
        list.push_back(std::move(c));
        if (!ok) all_ok = false;
    }
};

template <class T>
Vec<T> parse_point(const json& j, const std::string& where) {
    Vec<T> out;
    for (const auto& c : j) out.push_back(scalar_from_json<T>(c, where));
    return out;
}

template <class T>
std::vector<std::vector<T>> parse_matrix(const json& j, const std::string& where) {
    std::vector<std::vector<T>> out;
    for (const auto& row : j) {
        std::vector<T> r;
        for (const auto& v : row) r.push_back(scalar_from_json<T>(v, where));
        out.push_back(std::move(r));
    }
    return out;
}

template <class T>
T parse_value(const json& j, const std::string& where) {
    if constexpr (is_exact_v<T>) {
        if (j.is_object() && j.contains("rational"))
            return scalar_from_json<T>(j["rational"], where);
    }
    if (j.is_object()) return scalar_from_json<T>(j["decimal"], where);
    return scalar_from_json<T>(j, where);
}

template <class T>
DualCertificate<T> parse_dual(const json& j) {
    DualCertificate<T> cert;
    for (const auto& v : j["phi"]) cert.phi.push_back(scalar_from_json<T>(v, "dual.phi"));
    for (const auto& v : j["psi"]) cert.psi.push_back(scalar_from_json<T>(v, "dual.psi"));
    for (const auto& v : j["h"]) cert.h.push_back(parse_point<T>(v, "dual.h"));
    cert.value = parse_value<T>(j["value"], "dual.value");
    return cert;
}

template <class T>
FinitePlan<T> parse_plan(const json& j) {
    FinitePlan<T> plan;
    for (const auto& pair : j["support"])
        plan.support.push_back(
            {parse_point<T>(pair[0], "plan.support"), parse_point<T>(pair[1], "plan.support")});
    for (const auto& w : j["weights"])
        plan.weights.push_back(scalar_from_json<T>(w, "plan.weights"));
    return plan;
}

template <class T>
void verify_sections(const Problem<T>& p, const json& report, Checks& checks) {
    if (report.contains("order")) {
        const json& order = report["order"];
        if (order["ordered"].get<bool>()) {
            Coupling<T> c{p.mu, p.nu, parse_matrix<T>(order["coupling"]["mass"], "coupling")};
            checks.add("order.coupling-feasible", coupling_feasible(c, p.num));
        } else {
            SeparatingTriple<T> sep;
            for (const auto& v : order["separation"]["phi"])
                sep.phi.push_back(scalar_from_json<T>(v, "separation.phi"));
            for (const auto& v : order["separation"]["psi"])
                sep.psi.push_back(scalar_from_json<T>(v, "separation.psi"));
            for (const auto& v : order["separation"]["h"])
                sep.h.push_back(parse_point<T>(v, "separation.h"));
            checks.add("order.separation-valid", separation_valid(sep, p.mu, p.nu, p.num));
        }
    }
    if (report.contains("solve")) {
        const json& s = report["solve"];
        Coupling<T> c{p.mu, p.nu, parse_matrix<T>(s["optimizer"]["mass"], "optimizer")};
        checks.add("solve.optimizer-feasible", coupling_feasible(c, p.num));
        T value = parse_value<T>(s["value"], "solve.value");
        checks.add("solve.value-matches-optimizer", p.num.eq(c.expect(p.cost), value));
        auto dual = parse_dual<T>(s["dual"]);
        checks.add("solve.dual-admissible",
                   verify_certificate(dual, p.mu, p.nu, p.cost, p.num).empty());
        T dual_value = p.mu.integrate(dual.phi) + p.nu.integrate(dual.psi);
        checks.add("solve.zero-gap", p.num.eq(dual_value, value));
    }
    if (report.contains("extremes")) {
        for (const auto& e : report["extremes"]) {
            Coupling<T> c{p.mu, p.nu, parse_matrix<T>(e["mass"], "extremes.mass")};
            checks.add("extremes.coupling-feasible",
                       coupling_feasible(c, p.num) == e["feasible"].get<bool>());
        }
    }
    if (report.contains("paving")) {
        const json& paving = report["paving"];
        bool members_ok = true, eta_ok = true, j_ok = true, disjoint_ok = true;
        T eta_total(0);
        std::vector<Polytope<T>> hulls;
        for (const auto& comp : paving["components"]) {
            std::vector<Vec<T>> verts;
            for (const auto& v : comp["vertices"]) verts.push_back(parse_point<T>(v, "vertices"));
            auto hull = make_polytope(verts, p.num);
            hulls.push_back(hull);
            T eta(0);
            for (int i : comp["members"].get<std::vector<int>>()) {
                if (!ri_contains(hull, p.mu.atoms[i], p.num)) members_ok = false;
                eta += p.mu.weights[i];
            }
            if (!p.num.eq(eta, parse_value<T>(comp["eta"], "eta"))) eta_ok = false;
            eta_total += eta;
            for (const auto& atom : comp["j_atoms"]) {
                int j = atom["atom"].get<int>();
                if (!closure_contains(hull, p.nu.atoms[j], p.num)) j_ok = false;
            }
        }
        checks.add("paving.members-in-ri", members_ok);
        checks.add("paving.eta-consistent", eta_ok && p.num.eq(eta_total, T(1)));
        checks.add("paving.j-atoms-in-closure", j_ok);
        for (std::size_t a = 0; a < hulls.size(); ++a)
            for (std::size_t b = a + 1; b < hulls.size(); ++b)
                if (ri_intersects(hulls[a], hulls[b], p.num)) disjoint_ok = false;
        checks.add("paving.ri-disjoint", disjoint_ok);
    }
    if (report.contains("decomposition")) {
        const json& d = report["decomposition"];
        T global = parse_value<T>(d["global"], "global");
        T mixture(0);
        for (const auto& comp : d["components"])
            mixture += parse_value<T>(comp["eta"], "eta") * parse_value<T>(comp["value"], "value");
        checks.add("decomposition.mixture-arithmetic",
                   p.num.eq(mixture, parse_value<T>(d["mixture"], "mixture")));
        checks.add("decomposition.equality-flag",
                   d["equal"].get<bool>() == p.num.eq(global, mixture));
        for (const auto& comp : d["components"]) {
            if (!comp.contains("dual")) continue;
            const json& dual = comp["dual"];
            auto members = dual["members"].get<std::vector<int>>();
            auto j_atoms = dual["j_atoms"].get<std::vector<int>>();
            std::vector<T> phi, psi;
            std::vector<Vec<T>> h;
            for (const auto& v : dual["phi"]) phi.push_back(scalar_from_json<T>(v, "phi"));
            for (const auto& v : dual["psi"]) psi.push_back(scalar_from_json<T>(v, "psi"));
            for (const auto& v : dual["h"]) h.push_back(parse_point<T>(v, "h"));
            bool admissible = true;
            for (std::size_t a = 0; a < members.size(); ++a)
                for (std::size_t b = 0; b < j_atoms.size(); ++b) {
                    T slack = phi[a] + psi[b] +
                              dot(h[a], sub(p.nu.atoms[j_atoms[b]], p.mu.atoms[members[a]])) -
                              p.cost.values[members[a]][j_atoms[b]];
                    if (p.num.is_neg(slack)) admissible = false;
                }
            checks.add("decomposition.component-dual-admissible", admissible);
        }
    }
    if (report.contains("certify") && report["certify"].contains("verdict")) {
        const json& c = report["certify"];
        if (c["verdict"].get<std::string>() == "Violated") {
            auto plan = parse_plan<T>(c["witness"]["plan"]);
            auto competitor = parse_plan<T>(c["witness"]["competitor"]);
            checks.add("certify.witness-is-competitor", is_competitor(plan, competitor, p.num));
            auto cost_fn = [&](const Vec<T>& x, const Vec<T>& y) {
                for (int i = 0; i < p.mu.size(); ++i)
                    for (int j = 0; j < p.nu.size(); ++j)
                        if (vec_eq(p.mu.atoms[i], x, p.num) && vec_eq(p.nu.atoms[j], y, p.num))
                            return p.cost.values[i][j];
                throw ProblemError("witness pair is not an atom pair of the problem");
            };
            T gap = competitor.expect(cost_fn) - plan.expect(cost_fn);
            checks.add("certify.witness-gap-positive", p.num.is_pos(gap));
            checks.add("certify.witness-gap-matches",
                       p.num.eq(gap, parse_value<T>(c["witness"]["gap"], "gap")));
        } else {
            checks.add("certify.sweep-attestation", true,
                       "Certified is a sweep over finite plans; re-run certify to reproduce");
        }
    }
}

}  // namespace

CommandResult cmd_verify(const json& report) {
    if (!report.is_object() || !report.contains("schema") ||
        report["schema"].get<std::string>() != kReportSchema)
        throw ProblemError("report: missing or unknown schema (expected " +
                           std::string(kReportSchema) + ")");
    if (!report.contains("problem")) throw ProblemError("report: missing embedded problem");
    AnyProblem problem = parse_problem(report["problem"]);
    Checks checks;
    std::visit([&](const auto& p) { verify_sections(p, report, checks); }, problem.v);
    json out;
    out["schema"] = kReportSchema;
    out["command"] = "verify";
    out["target_command"] = report.value("command", "");
    out["checks"] = checks.list;
    out["ok"] = checks.all_ok;
    return {std::move(out), checks.all_ok ? 0 : 1};
}

}  // namespace motpaver
