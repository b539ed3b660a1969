#include <cmath>

#include "tvc/solver.hpp"

namespace tvc {

std::string to_string(SolverMethod m) {
  return m == SolverMethod::PrimalDual ? "primal-dual" : "split-bregman";
}

SolverMethod solver_method_from_string(const std::string& name) {
  if (name == "primal-dual") return SolverMethod::PrimalDual;
  if (name == "split-bregman") return SolverMethod::SplitBregman;
  throw ParameterError("unknown solver method '" + name + "'");
}

void TVProblem::validate() const {
  if (shape.empty()) throw ParameterError("problem: empty shape");
  for (Index n : shape)
    if (n < 1) throw ParameterError("problem: extents must be >= 1");
  samples.validate();
  if (samples.total != size()) throw ParameterError("problem: sample set does not match the grid");
  if (g.size() != samples.m()) throw ParameterError("problem: g must have one value per sample");
  if (!(M >= 1.0) || !std::isfinite(M)) throw ParameterError("problem: M must be >= 1");
  if (!(eta >= 0.0) || !std::isfinite(eta)) throw ParameterError("problem: eta must be >= 0");
  if (!g.isFinite().all()) throw ParameterError("problem: g has non-finite values");
  if ((g < 0.0).any() || (g > M).any()) throw ParameterError("problem: g must lie in [0, M]");
  const double var = variance_on(g);
  if (eta * eta > var * (1.0 + 1e-12) + 1e-300)
    throw ParameterError("problem: eta^2 exceeds the sample variance of g");
}

TVProblem TVProblem::make(Shape shape, SampleSet samples, Eigen::ArrayXd g, double eta, double M) {
  TVProblem p{std::move(shape), std::move(samples), std::move(g), eta, M};
  p.validate();
  return p;
}

TVProblem TVProblem::from_field(const ScalarField& f, SampleSet samples, double eta, double M) {
  if (samples.total != f.size()) throw ParameterError("problem: sample set does not match the field");
  Eigen::ArrayXd g = restrict_to(f, samples);
  return make(f.shape(), std::move(samples), std::move(g), eta, M);
}

void SolverConfig::validate() const {
  if (max_outer_iters < 1) throw ParameterError("solver: max_outer_iters must be >= 1");
  if (!(constraint_tolerance > 0) || !(change_tolerance > 0) || !(gap_tolerance > 0))
    throw ParameterError("solver: tolerances must be positive");
  if (!(penalty > 0) || !(fidelity > 0)) throw ParameterError("solver: penalty and fidelity must be positive");
  if (inner_sweeps < 1) throw ParameterError("solver: inner_sweeps must be >= 1");
  if (check_every < 1) throw ParameterError("solver: check_every must be >= 1");
}

} // namespace tvc
