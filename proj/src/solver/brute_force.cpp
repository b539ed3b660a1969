#include <cmath>
#include <limits>

#include "tvc/solver.hpp"

namespace tvc {

BruteForceResult brute_force_min_tv(const TVProblem& problem, int levels) {
  problem.validate();
  const Index n = problem.size();
  if (n > 12) throw ParameterError("brute_force_min_tv: |Omega| must be <= 12");
  if (levels < 2 || levels > 9) throw ParameterError("brute_force_min_tv: levels must be in [2, 9]");

  std::vector<std::vector<double>> choices(static_cast<std::size_t>(n));
  const auto mask = problem.samples.mask();
  std::vector<double> grid;
  for (int l = 0; l < levels; ++l) grid.push_back(problem.M * l / (levels - 1));
  for (Index k = 0; k < n; ++k)
    if (!mask[static_cast<std::size_t>(k)]) choices[static_cast<std::size_t>(k)] = grid;
  for (Index i = 0; i < problem.samples.m(); ++i) {
    auto& c = choices[static_cast<std::size_t>(problem.samples.indices[static_cast<std::size_t>(i)])];
    if (problem.eta > 0.0) c = grid;
    c.push_back(problem.g[i]);
  }

  double space = 1.0;
  for (const auto& c : choices) space *= static_cast<double>(c.size());
  if (space > 5e7) throw ParameterError("brute_force_min_tv: search space exceeds 5e7 candidates");

  const EdgeList edges = edge_list(problem.shape);
  const double bound = problem.eta * problem.eta * (1.0 + 1e-12) + 1e-15;
  std::vector<std::size_t> digit(static_cast<std::size_t>(n), 0);
  Eigen::ArrayXd u(n), best_u;
  double best = std::numeric_limits<double>::infinity();

  for (;;) {
    for (Index k = 0; k < n; ++k) u[k] = choices[static_cast<std::size_t>(k)][digit[static_cast<std::size_t>(k)]];
    double mse = 0.0;
    for (Index i = 0; i < problem.samples.m(); ++i) {
      const double r = u[problem.samples.indices[static_cast<std::size_t>(i)]] - problem.g[i];
      mse += r * r;
    }
    mse /= static_cast<double>(problem.samples.m());
    if (mse <= bound) {
      double tv = 0.0;
      for (Index e = 0; e < edges.size(); ++e)
        tv += std::abs(u[edges.head[static_cast<std::size_t>(e)]] - u[edges.tail[static_cast<std::size_t>(e)]]);
      if (tv < best) {
        best = tv;
        best_u = u;
      }
    }
    Index pos = n - 1;
    while (pos >= 0) {
      auto& d = digit[static_cast<std::size_t>(pos)];
      if (++d < choices[static_cast<std::size_t>(pos)].size()) break;
      d = 0;
      --pos;
    }
    if (pos < 0) break;
  }

  if (!std::isfinite(best)) throw ParameterError("brute_force_min_tv: no feasible candidate on this grid");
  BruteForceResult r{best, ScalarField(problem.shape, best_u)};
  r.field.box = problem.M;
  return r;
}

} // namespace tvc
