#pragma once

#include "motpaver/problem.hpp"

#include <json.hpp>

#include <string>

namespace motpaver {

inline constexpr const char* kReportSchema = "motpaver-report/1";

struct CommandResult {
    nlohmann::json report;
    int exit_code = 0;  // 0 ok/Certified, 2 not in convex order, 3 Violated
};

struct Options {
    unsigned seed = 0;   // MOTPAVER_SEED
    int jobs = 1;        // parallel LP fan-out bound
    long budget = 64;    // monotonicity sweep budget
    std::string plot;    // SVG output path, empty = none
};

CommandResult cmd_check_order(const AnyProblem& problem, const Options& opt);
CommandResult cmd_solve(const AnyProblem& problem, const Options& opt);
CommandResult cmd_pave(const AnyProblem& problem, const Options& opt);
CommandResult cmd_decompose(const AnyProblem& problem, const Options& opt);
/// gamma_source: "optimizer" or a path to a JSON array of [i, j] pairs.
CommandResult cmd_certify(const AnyProblem& problem, const std::string& gamma_source,
                          const Options& opt);
/// Independent re-check of a report's certificates by direct substitution.
CommandResult cmd_verify(const nlohmann::json& report);

}  // namespace motpaver
