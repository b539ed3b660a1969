#pragma once

// Shared machinery of the two TV solvers.

#include <vector>

#include "tvc/solver.hpp"

namespace tvc::detail {

/// Edge-incidence operator K u = (u[head] - u[tail])_e and its adjoint.
class DifferenceOperator {
public:
  explicit DifferenceOperator(const Shape& shape);

  Index nodes() const { return nodes_; }
  Index edges() const { return edges_.size(); }
  const EdgeList& edge_list() const { return edges_; }
  const Eigen::ArrayXd& degree() const { return degree_; }
  const std::vector<std::vector<Index>>& neighbours() const { return neighbours_; }

  void apply(const Eigen::ArrayXd& u, Eigen::ArrayXd& out) const;
  void adjoint(const Eigen::ArrayXd& p, Eigen::ArrayXd& out) const;
  double tv(const Eigen::ArrayXd& u) const;

private:
  Index nodes_;
  EdgeList edges_;
  Eigen::ArrayXd degree_;
  std::vector<std::vector<Index>> neighbours_;
};

/// C = { u in [0,M]^Omega : sum_{k in L} |u[k]-g[k]|^2 <= |L| eta^2 }.
///
/// Adding the box does not change the optimal value: every minimizer of the
/// unboxed problem already lies in [0, M] (discrete maximum principle).
class FeasibleSet {
public:
  explicit FeasibleSet(const TVProblem& problem);

  /// argmin_{x in C} sum_i (x_i - y_i)^2 / (2 w_i), in place.
  void project(Eigen::ArrayXd& y, const Eigen::ArrayXd& weights);
  void project(Eigen::ArrayXd& y);

  /// Lower bound on min_{x in C} <x, w> from the Lagrangian dual of the ball
  /// constraint; tight up to the multiplier search tolerance.
  double support_lower_bound(const Eigen::ArrayXd& w) const;

  /// masked_mse(u) - eta^2.
  double residual(const Eigen::ArrayXd& u) const;

  const std::vector<bool>& sampled() const { return sampled_; }

private:
  const TVProblem& problem_;
  std::vector<bool> sampled_;
  double radius_sq_;   // |L| eta^2
  double multiplier_;  // warm start for the ball multiplier
};

/// Initial iterate: g on the samples, mean of g elsewhere.
Eigen::ArrayXd initial_guess(const TVProblem& problem);

/// Duality gap of a feasible u against a dual point p with |p| <= 1.
double duality_gap(const DifferenceOperator& K, const FeasibleSet& C, const Eigen::ArrayXd& u,
                   const Eigen::ArrayXd& p);

bool gap_small(double gap, double tv, const TVProblem& problem, const SolverConfig& config);

SolveResult primal_dual(const TVProblem& problem, const SolverConfig& config);
SolveResult split_bregman(const TVProblem& problem, const SolverConfig& config);

} // namespace tvc::detail
