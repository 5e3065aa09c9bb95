#pragma once

#include "motpaver/report.hpp"

#include <string>
#include <vector>

namespace motpaver {

std::vector<std::string> demo_names();

/// Replays a named built-in instance end to end. grid == 0 picks the demo's
/// default discretization; mode is "exact" or "float" ("" = per-demo default).
CommandResult cmd_demo(const std::string& name, int grid, const std::string& mode,
                       const Options& opt);

}  // namespace motpaver
