#pragma once

// Constrained anisotropic TV minimization
//
//   min ||grad u||_1  s.t.  (1/|L|) sum_{k in L} |u[k] - g[k]|^2 <= eta^2
//
// and its equality-constrained (eta = 0) variant. Two independent schemes are
// provided: a diagonally preconditioned primal-dual iteration and split
// Bregman with Gauss-Seidel sweeps. Both certify their output with a
// duality gap evaluated on an exactly feasible iterate.

#include <string>
#include <vector>

#include "tvc/grid.hpp"

namespace tvc {

enum class SolverMethod { PrimalDual, SplitBregman };

std::string to_string(SolverMethod m);
SolverMethod solver_method_from_string(const std::string& name);

struct TVProblem {
  Shape shape;
  SampleSet samples;
  Eigen::ArrayXd g;  // observed values, in sample order
  double eta = 0.0;
  double M = 1.0;

  Index size() const { return shape_size(shape); }

  /// Rejects g outside [0, M], M < 1, eta < 0, and eta^2 > variance_on(g).
  void validate() const;

  static TVProblem make(Shape shape, SampleSet samples, Eigen::ArrayXd g, double eta, double M);
  /// Noise-free observation of `f` on `samples`.
  static TVProblem from_field(const ScalarField& f, SampleSet samples, double eta, double M);
};

struct SolverConfig {
  SolverMethod method = SolverMethod::SplitBregman;
  int max_outer_iters = 10000;
  double constraint_tolerance = 1e-6;  // relative slack on eta^2
  double change_tolerance = 1e-6;      // relative l2 change of the iterate
  double gap_tolerance = 1e-5;         // duality gap relative to max(TV, M)
  double penalty = 4.0;                // split Bregman mu (shrink threshold 1/mu)
  double fidelity = 4.0;               // split Bregman lambda (data splitting weight)
  int inner_sweeps = 2;                // Gauss-Seidel sweeps per split Bregman step
  int check_every = 10;                // diagnostics cadence

  void validate() const;
};

struct IterationRecord {
  int iteration = 0;
  double tv = 0.0;
  double residual = 0.0;  // masked_mse - eta^2 of the recorded iterate
  double gap = 0.0;
};

struct SolveResult {
  ScalarField u;
  double tv_value = 0.0;
  double constraint_residual = 0.0;  // masked_mse(u) - eta^2
  double duality_gap = 0.0;
  int iterations = 0;
  bool converged = false;
  SolverMethod method = SolverMethod::PrimalDual;
  std::string message;
  std::vector<IterationRecord> history;
};

SolveResult solve(const TVProblem& problem, const SolverConfig& config = {});

/// Noise-free interpolation: requires problem.eta == 0.
SolveResult solve_equality(const TVProblem& problem, const SolverConfig& config = {});

bool check_max_principle(const ScalarField& u, double M, double tol);
bool check_max_principle(const SolveResult& result, double M, double tol);

struct BruteForceResult {
  double min_tv = 0.0;
  ScalarField field;
};

/// Exhaustive search over fields whose free entries lie on `levels` uniform
/// points of [0, M]. With eta == 0 sampled entries are pinned to g; with
/// eta > 0 they range over the grid plus their observed value. Throws
/// ParameterError if |Omega| > 12, levels > 9 or the space exceeds 5e7 fields.
BruteForceResult brute_force_min_tv(const TVProblem& problem, int levels);

} // namespace tvc
