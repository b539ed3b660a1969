#include "detail.hpp"

namespace tvc {

namespace {

// When eta^2 reaches the sample variance the constant mean of g is feasible
// with zero TV, hence optimal.
bool mean_is_feasible(const TVProblem& p) {
  return p.eta * p.eta >= variance_on(p.g);
}

SolveResult constant_solution(const TVProblem& p, SolverMethod method) {
  SolveResult r;
  r.method = method;
  r.u = ScalarField(p.shape, p.g.mean());
  r.u.box = p.M;
  r.tv_value = 0.0;
  r.constraint_residual = masked_mse(r.u, p.g, p.samples) - p.eta * p.eta;
  r.converged = true;
  r.message = "constant mean is feasible";
  r.history.push_back({0, 0.0, r.constraint_residual, 0.0});
  return r;
}

} // namespace

SolveResult solve(const TVProblem& problem, const SolverConfig& config) {
  problem.validate();
  config.validate();
  if (mean_is_feasible(problem)) return constant_solution(problem, config.method);
  return config.method == SolverMethod::PrimalDual ? detail::primal_dual(problem, config)
                                                   : detail::split_bregman(problem, config);
}

SolveResult solve_equality(const TVProblem& problem, const SolverConfig& config) {
  if (problem.eta != 0.0) throw ParameterError("solve_equality: requires eta == 0");
  return solve(problem, config);
}

bool check_max_principle(const ScalarField& u, double M, double tol) {
  return u.size() == 0 || ((u.values() >= -tol).all() && (u.values() <= M + tol).all());
}

bool check_max_principle(const SolveResult& result, double M, double tol) {
  return check_max_principle(result.u, M, tol);
}

} // namespace tvc
