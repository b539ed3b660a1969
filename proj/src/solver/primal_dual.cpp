#include <cmath>

#include "detail.hpp"

namespace tvc::detail {

// Chambolle-Pock iteration with the diagonal preconditioner of Pock and
// Chambolle (alpha = 1): primal steps 1/deg(k), dual steps 1/2. The primal
// prox is the weighted projection onto the feasible set, so every primal
// iterate is exactly feasible and the dual iterate stays in [-1, 1].
SolveResult primal_dual(const TVProblem& problem, const SolverConfig& config) {
  const DifferenceOperator K(problem.shape);
  FeasibleSet C(problem);
  const Index n = K.nodes();

  const Eigen::ArrayXd tau = K.degree().max(1.0).inverse();
  const double sigma = 0.5;

  Eigen::ArrayXd u = initial_guess(problem);
  C.project(u, tau);
  Eigen::ArrayXd u_bar = u, u_old(n), p = Eigen::ArrayXd::Zero(K.edges()), Ku, KTp;

  SolveResult result;
  result.method = SolverMethod::PrimalDual;
  double change = 0.0;

  for (int it = 1; it <= config.max_outer_iters; ++it) {
    K.apply(u_bar, Ku);
    p = (p + sigma * Ku).max(-1.0).min(1.0);

    u_old = u;
    K.adjoint(p, KTp);
    u -= tau * KTp;
    C.project(u, tau);
    u_bar = 2.0 * u - u_old;

    result.iterations = it;
    if (it % config.check_every != 0 && it != config.max_outer_iters) continue;

    const double unorm = std::sqrt(u.square().sum());
    change = std::sqrt((u - u_old).square().sum()) / std::max(unorm, 1e-300);
    const double tv = K.tv(u);
    const double gap = duality_gap(K, C, u, p);
    const double res = C.residual(u);
    result.history.push_back({it, tv, res, gap});

    const bool feasible = res <= config.constraint_tolerance * problem.eta * problem.eta + 1e-10;
    if (change < config.change_tolerance && feasible && gap_small(gap, tv, problem, config)) {
      result.converged = true;
      break;
    }
  }

  result.u = ScalarField(problem.shape, u);
  result.u.box = problem.M;
  result.tv_value = K.tv(u);
  result.constraint_residual = C.residual(u);
  result.duality_gap = duality_gap(K, C, u, p);
  if (!result.converged)
    result.message = "primal-dual: no convergence after " + std::to_string(result.iterations) +
                     " iterations (relative change " + std::to_string(change) + ", gap " +
                     std::to_string(result.duality_gap) + ")";
  return result;
}

} // namespace tvc::detail
