#include <cmath>

#include "detail.hpp"

namespace tvc::detail {

namespace {

double shrink(double x, double t) {
  return x > t ? x - t : (x < -t ? x + t : 0.0);
}

} // namespace

// Split Bregman with two splittings: d = K u (shrinkage) and z = u on the
// samples, where z is projected onto the data ball-and-box. With eta = 0 the
// projection pins z = g and the scheme is the usual Bregman-enforced
// interpolation. The u-subproblem
//   (mu K^T K + lambda P_L) u = mu K^T (d - b) + lambda P_L (z - c)
// is relaxed by Gauss-Seidel sweeps.
SolveResult split_bregman(const TVProblem& problem, const SolverConfig& config) {
  const DifferenceOperator K(problem.shape);
  FeasibleSet C(problem);
  const Index n = K.nodes();
  const Index m = problem.samples.m();
  const auto& idx = problem.samples.indices;
  const auto& nbrs = K.neighbours();
  const auto& deg = K.degree();
  const double mu = config.penalty;
  const double lambda = config.fidelity;

  Eigen::ArrayXd u = initial_guess(problem);
  Eigen::ArrayXd d, b = Eigen::ArrayXd::Zero(K.edges());
  K.apply(u, d);
  Eigen::ArrayXd weight = Eigen::ArrayXd::Zero(n);
  for (Index i = 0; i < m; ++i) weight[idx[static_cast<std::size_t>(i)]] = lambda;
  // Full-length copies of z and c; only sampled entries are used.
  Eigen::ArrayXd z = u, c = Eigen::ArrayXd::Zero(n);
  C.project(z);

  SolveResult result;
  result.method = SolverMethod::SplitBregman;
  Eigen::ArrayXd rhs, Ku, u_old, feasible;
  double change = 0.0, split_residual = 0.0;
  const double split_floor = config.constraint_tolerance * std::max(problem.eta * problem.eta, problem.M * problem.M);

  for (int it = 1; it <= config.max_outer_iters; ++it) {
    K.adjoint(d - b, rhs);
    u_old = u;
    for (int sweep = 0; sweep < config.inner_sweeps; ++sweep) {
      for (Index k = 0; k < n; ++k) {
        double acc = 0.0;
        for (Index j : nbrs[static_cast<std::size_t>(k)]) acc += u[j];
        const double den = mu * deg[k] + weight[k];
        if (den > 0.0) u[k] = (mu * (acc + rhs[k]) + weight[k] * (z[k] - c[k])) / den;
      }
    }
    K.apply(u, Ku);
    for (Index e = 0; e < Ku.size(); ++e) {
      d[e] = shrink(Ku[e] + b[e], 1.0 / mu);
      b[e] += Ku[e] - d[e];
    }
    z = u + c;
    C.project(z);
    split_residual = 0.0;
    for (Index i = 0; i < m; ++i) {
      const Index k = idx[static_cast<std::size_t>(i)];
      const double r = u[k] - z[k];
      c[k] += r;
      split_residual += r * r;
    }
    split_residual /= static_cast<double>(m);

    result.iterations = it;
    if (it % config.check_every != 0 && it != config.max_outer_iters) continue;

    change = std::sqrt((u - u_old).square().sum()) / std::max(std::sqrt(u.square().sum()), 1e-300);
    feasible = u;
    C.project(feasible);
    const double tv = K.tv(feasible);
    const double gap = duality_gap(K, C, feasible, (mu * b).max(-1.0).min(1.0));
    result.history.push_back({it, tv, C.residual(u), gap});

    if (change < config.change_tolerance && split_residual <= split_floor && gap_small(gap, tv, problem, config)) {
      result.converged = true;
      break;
    }
  }

  // Final projection: exact feasibility, TV changes by O(split residual).
  C.project(u);
  result.u = ScalarField(problem.shape, u);
  result.u.box = problem.M;
  result.tv_value = K.tv(u);
  result.constraint_residual = C.residual(u);
  result.duality_gap = duality_gap(K, C, u, (mu * b).max(-1.0).min(1.0));
  if (!result.converged)
    result.message = "split-bregman: no convergence after " + std::to_string(result.iterations) +
                     " iterations (relative change " + std::to_string(change) + ", gap " +
                     std::to_string(result.duality_gap) + ")";
  return result;
}

} // namespace tvc::detail
