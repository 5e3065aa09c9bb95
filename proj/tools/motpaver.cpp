#include "motpaver/demos.hpp"
#include "motpaver/report.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

namespace {

unsigned env_seed() {
    if (const char* s = std::getenv("MOTPAVER_SEED")) {
        try {
            return static_cast<unsigned>(std::stoul(s));
        } catch (const std::exception&) {
            throw motpaver::ProblemError("MOTPAVER_SEED must be a nonnegative integer");
        }
    }
    return 0;
}

void emit(const motpaver::CommandResult& result) {
    std::cout << result.report.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "martingale transport toolkit: convex-order certificates, primal/dual "
        "solving, irreducible pavings, disintegration, and support certification "
        "on finitely supported marginals"};
    app.require_subcommand(1);

    motpaver::Options opt;
    int jobs = 1;
    long budget = 64;
    int seed_flag = -1;
    app.add_option("--jobs", jobs, "bound on parallel LP fan-out")->capture_default_str();
    app.add_option("--seed", seed_flag, "sweep seed (overrides MOTPAVER_SEED)");

    std::string problem_path, plot_path, gamma = "optimizer", demo_name, demo_mode, report_path;
    int grid = 0;

    auto* c_order = app.add_subcommand("check-order", "decide convex order with a certificate");
    c_order->add_option("problem", problem_path, "problem file (JSON)")->required();

    auto* c_solve = app.add_subcommand("solve", "primal value, optimizer, dual certificate");
    c_solve->add_option("problem", problem_path, "problem file (JSON)")->required();

    auto* c_pave = app.add_subcommand("pave", "irreducible components, J-atoms, nu-invariance");
    c_pave->add_option("problem", problem_path, "problem file (JSON)")->required();
    c_pave->add_option("--plot", plot_path, "write an SVG of the paving (d = 2)");

    auto* c_dec = app.add_subcommand("decompose", "componentwise values, duals, sub-pavings");
    c_dec->add_option("problem", problem_path, "problem file (JSON)")->required();

    auto* c_cert = app.add_subcommand("certify", "competitor sweep over a candidate support");
    c_cert->add_option("problem", problem_path, "problem file (JSON)")->required();
    c_cert->add_option("--gamma", gamma, "'optimizer' or a JSON file of [i,j] pairs")
        ->capture_default_str();
    c_cert->add_option("--budget", budget, "random plans per sweep")->capture_default_str();

    auto* c_demo = app.add_subcommand("demo", "replay a named built-in instance");
    c_demo->add_option("name", demo_name, "one of example-2.1, example-4.1, example-4.2")
        ->required();
    c_demo->add_option("--grid", grid, "discretization size for the density demos");
    c_demo->add_option("--mode", demo_mode, "exact or float (default: exact)");
    c_demo->add_option("--plot", plot_path, "write an SVG of the paving (d = 2)");

    auto* c_verify = app.add_subcommand("verify", "re-check a report's certificates");
    c_verify->add_option("report", report_path, "report file (JSON)")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        opt.jobs = jobs;
        opt.budget = budget;
        opt.plot = plot_path;
        opt.seed = seed_flag >= 0 ? static_cast<unsigned>(seed_flag) : env_seed();

        motpaver::CommandResult result;
        if (c_order->parsed()) {
            result = motpaver::cmd_check_order(motpaver::load_problem(problem_path), opt);
        } else if (c_solve->parsed()) {
            result = motpaver::cmd_solve(motpaver::load_problem(problem_path), opt);
        } else if (c_pave->parsed()) {
            result = motpaver::cmd_pave(motpaver::load_problem(problem_path), opt);
        } else if (c_dec->parsed()) {
            result = motpaver::cmd_decompose(motpaver::load_problem(problem_path), opt);
        } else if (c_cert->parsed()) {
            result = motpaver::cmd_certify(motpaver::load_problem(problem_path), gamma, opt);
        } else if (c_demo->parsed()) {
            result = motpaver::cmd_demo(demo_name, grid, demo_mode, opt);
        } else if (c_verify->parsed()) {
            std::ifstream in(report_path);
            if (!in) throw motpaver::ProblemError("cannot open report '" + report_path + "'");
            nlohmann::json report;
            try {
                in >> report;
            } catch (const nlohmann::json::parse_error& e) {
                throw motpaver::ProblemError(std::string("report: ") + e.what());
            }
            result = motpaver::cmd_verify(report);
        }
        emit(result);
        return result.exit_code;
    } catch (const motpaver::ProblemError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
