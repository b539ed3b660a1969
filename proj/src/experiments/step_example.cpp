#include <algorithm>
#include <limits>

#include "tvc/experiments.hpp"
#include "tvc/rng.hpp"

namespace tvc {

StepExampleRecord step_signal_example(Index N, Index m, long long trials, std::uint64_t seed) {
  if (N < 2 || N % 2 != 0) throw ParameterError("step example: N must be even and >= 2");
  if (m < 1 || m > N) throw ParameterError("step example: need 1 <= m <= N");
  if (trials < 1) throw ParameterError("step example: trials must be >= 1");

  const Index half = N / 2;
  ScalarField f(Shape{N}, 0.0);
  for (Index k = half; k < N; ++k) f[k] = 1.0;

  StepExampleRecord rec;
  rec.N = N;
  rec.m = m;
  rec.trials = trials;
  rec.exact_rate = 1.0 - static_cast<double>(m) / static_cast<double>(N);
  rec.worst_solution_error = std::numeric_limits<double>::infinity();
  double worst_sum = 0.0;
  ScalarField u(Shape{N});

  auto interpolates = [&](const SampleSet& s) {
    for (Index k : s.indices)
      if (u[k] != f[k]) return false;
    return true;
  };

  for (long long t = 0; t < trials; ++t) {
    const SampleSet s = sample_uniform_subset(N, m, substream_seed(seed, {static_cast<std::uint64_t>(t)}));
    if (std::binary_search(s.indices.begin(), s.indices.end(), half)) continue;
    ++rec.misses;

    Index below = -1, above = N;
    for (Index k : s.indices) {
      if (k < half) below = std::max(below, k);
      if (k > half) above = std::min(above, k);
    }
    double worst = 0.0;
    if (below >= 0 && above < N) {
      // Every step 1_{k >= L} with below < L <= above matches the samples.
      for (Index L = below + 1; L <= above; ++L) {
        for (Index k = 0; k < N; ++k) u[k] = k >= L ? 1.0 : 0.0;
        ++rec.constructed;
        if (!interpolates(s)) ++rec.interpolation_failures;
        if (tv_aniso(u) != 1.0) ++rec.tv_failures;
        worst = std::max(worst, (u.values() - f.values()).square().sum() / static_cast<double>(N));
      }
    } else {
      // All samples share one value: the constant is the unique TV-0 interpolant.
      ++rec.one_sided;
      u.values().setConstant(below < 0 ? 1.0 : 0.0);
      if (!interpolates(s)) ++rec.interpolation_failures;
      worst = (u.values() - f.values()).square().sum() / static_cast<double>(N);
    }
    rec.worst_solution_error = std::min(rec.worst_solution_error, worst);
    worst_sum += worst;
    if (worst < 1.0 / static_cast<double>(N)) ++rec.below_threshold;
  }

  rec.empirical_miss_rate = static_cast<double>(rec.misses) / static_cast<double>(trials);
  if (rec.misses == 0) {
    rec.worst_solution_error = 0.0;
  } else {
    rec.mean_worst_solution_error = worst_sum / static_cast<double>(rec.misses);
  }
  return rec;
}

} // namespace tvc
