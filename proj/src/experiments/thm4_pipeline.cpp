#include <algorithm>
#include <cmath>
#include <mutex>
#include <thread>

#include "tvc/experiments.hpp"
#include "tvc/rng.hpp"

namespace tvc {

Eigen::ArrayXd noisy_observation(const ScalarField& f, const SampleSet& samples, double eta, double M,
                                 std::uint64_t seed) {
  if (!(eta >= 0.0)) throw ParameterError("noise: eta must be >= 0");
  Eigen::ArrayXd g = restrict_to(f, samples);
  if (eta == 0.0) return g;
  Rng rng(seed);
  Eigen::ArrayXd e(samples.m());
  for (Index i = 0; i < e.size(); ++i) e[i] = rng.uniform(-1.0, 1.0);
  const double norm = std::sqrt(e.square().sum());
  if (norm == 0.0) return g;
  e *= eta * std::sqrt(static_cast<double>(samples.m())) / norm;
  // Clipping moves each entry toward f, so the residual stays <= eta^2.
  return (g + e).max(0.0).min(M);
}

PipelineReport full_pipeline_thm4(const AnalyticFunction2D& f, const PipelineConfig& cfg) {
  if (cfg.J < 1 || cfg.J > 10) throw ParameterError("pipeline: J must lie in [1, 10]");
  if (!(cfg.rho > 0.0 && cfg.rho <= 1.0)) throw ParameterError("pipeline: rho must lie in (0, 1]");
  if (!(cfg.eta >= 0.0)) throw ParameterError("pipeline: eta must be >= 0");
  if (cfg.trials < 1) throw ParameterError("pipeline: trials must be >= 1");
  if (!(cfg.M >= 1.0)) throw ParameterError("pipeline: M must be >= 1");
  if (f.min_value() < 0.0 || f.sup_norm() > cfg.M)
    throw PreconditionError("pipeline: f must take values in [0, M]");
  cfg.solver.validate();

  PipelineReport rep;
  rep.J = cfg.J;
  rep.rho = cfg.rho;
  rep.eta = cfg.eta;
  rep.M = cfg.M;
  rep.tv_f = f.total_variation();
  rep.seed = cfg.seed;
  rep.bounds = theorem4_bounds(cfg.J, cfg.rho, cfg.eta, cfg.M, rep.tv_f, cfg.a);
  rep.thm5_bound = (16.0 + 4.0 * std::sqrt(M_PI)) * std::ldexp(1.0, -cfg.J) * rep.tv_f * f.sup_norm();
  rep.reduced_form = cfg.eta > 0.0 && cfg.J >= -2.0 * std::log2(cfg.eta);

  const ScalarField samples_f = local_average_samples(f, cfg.J);
  rep.sampling_error = l2_error(interpolate(samples_f, cfg.J), f);
  if (f.piecewise_constant()) {
    rep.support_count = static_cast<long long>(interior_cell_sets(f, cfg.J).support_count);
    rep.piecewise = sparse_piecewise_bounds(cfg.J, cfg.rho, cfg.eta, *rep.support_count, rep.bounds);
  }

  const Index total = samples_f.size();
  const Index m = std::clamp<Index>(std::llround(cfg.rho * static_cast<double>(total)), 1, total);
  rep.trials.resize(static_cast<std::size_t>(cfg.trials));
  auto run = [&](std::size_t t) {
    const SampleSet lambda = sample_uniform_subset(total, m, substream_seed(cfg.seed, {t, 0}));
    const Eigen::ArrayXd g = noisy_observation(samples_f, lambda, cfg.eta, cfg.M, substream_seed(cfg.seed, {t, 1}));
    const TVProblem problem = TVProblem::make(samples_f.shape(), lambda, g, cfg.eta, cfg.M);
    const SolveResult r = cfg.eta == 0.0 ? solve_equality(problem, cfg.solver) : solve(problem, cfg.solver);
    PipelineTrial& out = rep.trials[t];
    out.discrete_error = (r.u.values() - samples_f.values()).square().mean();
    out.continuum_error = l2_error(interpolate(r.u, cfg.J), f);
    out.converged = r.converged;
    out.iterations = r.iterations;
    out.tv_value = r.tv_value;
  };
  // Trials write disjoint slots, so scheduling does not affect the result.
  const unsigned workers = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads)
                                           : std::max(1u, std::thread::hardware_concurrency());
  if (workers <= 1) {
    for (std::size_t t = 0; t < rep.trials.size(); ++t) run(t);
  } else {
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::mutex lock;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t t = w; t < rep.trials.size(); t += workers) {
          try {
            run(t);
          } catch (...) {
            std::lock_guard<std::mutex> guard(lock);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }

  const double continuum_limit = rep.reduced_form ? rep.bounds.continuum_bound_reduced : rep.bounds.continuum_bound;
  for (const auto& t : rep.trials) {
    if (t.discrete_error > rep.bounds.discrete_bound) ++rep.discrete_violations;
    if (t.continuum_error > continuum_limit) ++rep.continuum_violations;
    if (!t.converged) ++rep.nonconverged;
  }
  return rep;
}

} // namespace tvc
