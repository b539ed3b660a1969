#pragma once

#include <filesystem>

#include "tvc/io.hpp"
#include "tvc/solver.hpp"

namespace tvc {

Json to_json(const TVProblem& problem);
TVProblem problem_from_json(const Json& j);

Json to_json(const SolverConfig& config);
/// Overlays the keys present in `j` onto `base`; unknown keys are rejected.
SolverConfig solver_config_from_json(const Json& j, SolverConfig base = {});

Json to_json(const SolveResult& result);
SolveResult result_from_json(const Json& j);

/// Columns: iter,tv,residual,gap
void save_history_csv(const std::filesystem::path& path, const SolveResult& result);

} // namespace tvc
