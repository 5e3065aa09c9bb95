#include "motpaver/demos.hpp"

#include "motpaver/instances.hpp"
#include "motpaver/serialize.hpp"
#include "motpaver/svg.hpp"

#include <chrono>

namespace motpaver {

namespace {

using nlohmann::json;

template <class T>
AnyProblem wrap_problem(DiscreteMeasure<T> mu, DiscreteMeasure<T> nu, CostMatrix<T> cost,
                        bool has_cost, double tolerance) {
    Problem<T> p;
    p.num = is_exact_v<T> ? Numerics<T>::exact() : Numerics<T>::with_tol(T(tolerance));
    p.mu = std::move(mu);
    p.nu = std::move(nu);
    if (has_cost) {
        p.cost = std::move(cost);
        p.has_cost = true;
    } else {
        p.cost.values.assign(p.mu.size(), std::vector<T>(p.nu.size(), T(0)));
        p.cost.nonneg = true;
    }
    AnyProblem out;
    out.tolerance = tolerance;
    out.v = std::move(p);
    return out;
}

json demo_envelope(const char* name, const AnyProblem& problem, const Options& opt) {
    json out;
    out["schema"] = kReportSchema;
    out["command"] = "demo";
    out["demo"] = name;
    out["mode"] = problem.mode();
    if (!problem.exact()) out["tolerance"] = problem.tolerance;
    out["seed"] = opt.seed;
    out["problem"] = problem_json(problem);
    return out;
}

template <class T>
CommandResult demo_two_triangles(const Options& opt, double tol) {
    auto g = two_triangles_instance();
    auto mu = convert_measure<T>(g.mu);
    auto nu = convert_measure<T>(g.nu);
    CostMatrix<T> ind = indicator_cost<T>(3, 5, g.x0, g.y1);
    AnyProblem problem = wrap_problem<T>(mu, nu, ind, true, tol);
    const auto& p = std::get<Problem<T>>(problem.v);
    json report = demo_envelope("example-4.2", problem, opt);

    CouplingSolver<T> solver(mu, nu, p.num);
    auto run = run_paving(solver, p.num, opt.jobs);
    report["paving"] = paving_json(run, nu, p.num);
    if (!opt.plot.empty()) {
        write_paving_svg(opt.plot, mu, nu, run, p.num);
        report["plot"] = opt.plot;
    }

    // the two extreme couplings, replayed verbatim
    json extremes = json::array();
    std::vector<Coupling<T>> verbatim;
    for (const auto* src : {&g.extreme1, &g.extreme2}) {
        Coupling<T> c{mu, nu, convert_matrix<T>(*src)};
        extremes.push_back(
            {{"mass", matrix_json(c.p)}, {"feasible", coupling_feasible(c, p.num)}});
        verbatim.push_back(std::move(c));
    }
    report["extremes"] = extremes;
    // the maximal support is the union of the two extreme supports
    bool support_union = true;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 5; ++j) {
            bool in_union = p.num.is_pos(verbatim[0].p[i][j]) || p.num.is_pos(verbatim[1].p[i][j]);
            if (run.support.present[i][j] != in_union) support_union = false;
        }
    report["support_equals_extreme_union"] = support_union;

    auto solved = solver.maximize(ind);
    report["solve"] = solve_json<T>(solved, mu, nu, ind, p.num);

    auto rep = check_decomposition(solver, run.paving, ind, p.num);
    auto duals = componentwise_dual(solver, run.paving, ind, p.num);
    report["decomposition"] = decomposition_json(rep, duals, p.num);

    auto cert_opt = certify_support(mu, nu, support_pairs(solved.coupling, p.num), ind, p.num,
                                    opt.budget, 4, opt.seed);
    auto cert_ext = certify_support(mu, nu, support_pairs(verbatim[0], p.num), ind, p.num,
                                    opt.budget, 4, opt.seed);
    report["certify"] = {{"optimizer_support", certify_json(cert_opt)},
                         {"extreme1_support", certify_json(cert_ext)}};
    return {std::move(report), 0};
}

template <class T>
CommandResult demo_kinked(int n, const Options& opt, double tol) {
    auto g = kinked_target_instance(n);
    auto mu = convert_measure<T>(g.mu);
    auto nu = convert_measure<T>(g.nu);
    AnyProblem problem = wrap_problem<T>(mu, nu, {}, false, tol);
    const auto& p = std::get<Problem<T>>(problem.v);
    json report = demo_envelope("example-2.1", problem, opt);
    report["grid"] = n;
    CouplingSolver<T> solver(mu, nu, p.num);
    auto run = run_paving(solver, p.num, opt.jobs);
    report["paving"] = paving_json(run, nu, p.num);
    return {std::move(report), 0};
}

template <class T>
CommandResult demo_quadrants(int n, const Options& opt, double tol) {
    auto g = quadrant_grid_instance(n);
    auto mu = convert_measure<T>(g.mu);
    auto nu = convert_measure<T>(g.nu);
    AnyProblem problem = wrap_problem<T>(mu, nu, {}, false, tol);
    const auto& p = std::get<Problem<T>>(problem.v);
    json report = demo_envelope("example-4.1", problem, opt);
    report["grid"] = n;

    CouplingSolver<T> solver(mu, nu, p.num);
    auto run = run_paving(solver, p.num, opt.jobs);
    report["paving"] = paving_json(run, nu, p.num);
    if (!opt.plot.empty()) {
        write_paving_svg(opt.plot, mu, nu, run, p.num);
        report["plot"] = opt.plot;
    }

    // per-cell uniqueness: the largest max - min coupling mass over all pairs
    const auto& L = solver.layout();
    std::vector<T> obj(L.num_vars(), T(0));
    T max_gap(0);
    for (int v = 0; v < L.num_vars(); ++v) {
        obj[v] = T(1);
        T hi = solver.optimize(obj, Sense::Maximize).objective;
        T lo = solver.optimize(obj, Sense::Minimize).objective;
        obj[v] = T(0);
        if (hi - lo > max_gap) max_gap = hi - lo;
    }
    report["uniqueness"] = {{"max_gap", to_double(max_gap)}, {"unique", !p.num.is_pos(max_gap)}};
    return {std::move(report), 0};
}

}  // namespace

std::vector<std::string> demo_names() { return {"example-2.1", "example-4.1", "example-4.2"}; }

CommandResult cmd_demo(const std::string& name, int grid, const std::string& mode,
                       const Options& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    const double tol = 1e-9;
    auto exact = [&](bool default_exact) {
        if (mode == "exact") return true;
        if (mode == "float") return false;
        if (mode.empty()) return default_exact;
        throw ProblemError("unknown mode '" + mode + "' (expected exact or float)");
    };
    CommandResult out;
    if (name == "example-4.2") {
        if (grid != 0) throw ProblemError("example-4.2 takes no --grid");
        out = exact(true) ? demo_two_triangles<Rational>(opt, 0)
                          : demo_two_triangles<double>(opt, tol);
    } else if (name == "example-2.1") {
        const int n = grid == 0 ? 16 : grid;
        out = exact(true) ? demo_kinked<Rational>(n, opt, 0) : demo_kinked<double>(n, opt, tol);
    } else if (name == "example-4.1") {
        const int n = grid == 0 ? 8 : grid;
        out = exact(true) ? demo_quadrants<Rational>(n, opt, 0)
                          : demo_quadrants<double>(n, opt, tol);
    } else {
        std::string known;
        for (const auto& d : demo_names()) known += (known.empty() ? "" : ", ") + d;
        throw ProblemError("unknown demo '" + name + "' (known: " + known + ")");
    }
    out.report["timing_ms"] =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

}  // namespace motpaver
