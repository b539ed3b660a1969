#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "tvc/experiments.hpp"
#include "tvc/rng.hpp"

using namespace tvc;

namespace {

SweepConfig small_density() {
  SweepConfig c;
  c.N = 16;
  c.rhos = {0.3, 0.6, 1.0};
  c.realizations = 3;
  c.seed = 5;
  return c;
}

} // namespace

TEST_SUITE("experiments") {

TEST_CASE("phantom matches an independent ellipse evaluation") {
  for (Index n : {8, 33, 64}) {
    const auto f = shepp_logan(n);
    const double half = (n - 1) / 2.0;
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        CHECK(f[i * n + j] == doctest::Approx(oracle::shepp_logan_value((j - half) / half, (half - i) / half)));
    CHECK(f[0] == 0.0);
    CHECK(f[n * n - 1] == 0.0);
    CHECK(f.values().minCoeff() >= 0.0);
    CHECK(f.values().maxCoeff() <= 1.0);
  }
  // Centre of n = 64 lies between pixels; (31,31) sits at x = -1/63, y = 1/63:
  // inside the outer two ellipses only.
  CHECK(shepp_logan(64)[31 * 64 + 31] == doctest::Approx(0.2));
  CHECK(shepp_logan(65)[32 * 65 + 32] == doctest::Approx(0.2));
  CHECK_THROWS_AS(shepp_logan(7), ParameterError);
  const auto c = shepp_logan(64, PhantomKind::Classic);
  CHECK(c.values().maxCoeff() <= 1.0);
  CHECK(c[31 * 64 + 31] == doctest::Approx(0.02));
}

TEST_CASE("density sweep structure, full sampling, calibration and determinism") {
  const auto cfg = small_density();
  const auto r = run_density_sweep(cfg);
  REQUIRE(r.cells.size() == 3);
  for (const auto& c : r.cells) {
    CHECK(c.errors.size() == 3);
    CHECK(c.max_error >= c.mean_error);
  }
  for (double e : r.cells[2].errors) CHECK(e <= 1e-20);  // rho = 1
  CHECK(r.cells[0].calibration);
  CHECK(r.cells[0].theory == r.cells[0].max_error);
  CHECK(r.cells[0].max_error / r.cells[0].theory == 1.0);
  CHECK(r.cells[1].theory == doctest::Approx(r.cells[0].theory * std::sqrt(0.3 / 0.6)));
  int v = 0;
  for (const auto& c : r.cells) v += c.violation;
  CHECK(v == r.violations);
  auto threaded = cfg;
  threaded.threads = 3;
  const auto again = run_density_sweep(threaded);
  CHECK(to_json(again, false).dump() == to_json(r, false).dump());
}

TEST_CASE("resolution sweep theory ratios") {
  SweepConfig cfg = SweepConfig::resolution_defaults();
  cfg.levels = {3, 4, 5};
  cfg.realizations = 2;
  const auto r = run_resolution_sweep(cfg);
  REQUIRE(r.cells.size() == 3);
  CHECK(r.cells[0].calibration);
  for (int i = 0; i < 2; ++i) {
    const double J = 3 + i;
    CHECK(r.cells[i + 1].theory / r.cells[i].theory == doctest::Approx(std::pow((J + 1) / J, 1.5) / std::sqrt(2.0)));
  }
  CHECK(r.cells[2].N == 32);
}

TEST_CASE("calibration counts violations against the scaled curve") {
  Report rep;
  for (int i = 0; i < 3; ++i) {
    CellReport c;
    c.parameter = 0.2 + 0.1 * i;
    c.shape = 1.0 / std::sqrt(c.parameter);
    rep.cells.push_back(c);
  }
  rep.cells[0].max_error = 1.0;
  rep.cells[1].max_error = 0.9;  // theory sqrt(2/3) = 0.816: violation
  rep.cells[2].max_error = 0.5;
  calibrate(rep);
  CHECK(rep.violations == 1);
  CHECK(rep.cells[1].violation);
  CHECK(rep.constant == doctest::Approx(std::sqrt(0.2)));
}

TEST_CASE("sweep configuration validation") {
  SweepConfig c;
  c.realizations = 0;
  CHECK_THROWS_AS(c.validate(), ParameterError);
  c = {};
  c.rhos = {0.0};
  CHECK_THROWS_AS(c.validate(), ParameterError);
  c = {};
  c.rhos = {1.2};
  CHECK_THROWS_AS(c.validate(), ParameterError);
  c = SweepConfig::resolution_defaults();
  c.levels = {};
  CHECK_THROWS_AS(c.validate(), ParameterError);
}

TEST_CASE("sweep with noise keeps running and records every realization") {
  auto cfg = small_density();
  cfg.rhos = {0.5};
  cfg.eta = 0.05;
  const auto r = run_density_sweep(cfg);
  CHECK(r.cells[0].errors.size() == 3);
  CHECK(r.nonconverged >= 0);
}

TEST_CASE("report outputs") {
  const auto r = run_density_sweep(small_density());
  const auto csv = summary_csv(r);
  CHECK(csv.rfind("cell,parameter,N,rho,m,max_err,mean_err,theory,calibration,violations,nonconverged\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
  const auto svg = report_svg(r);
  CHECK(svg.find("<svg") == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  const auto j = to_json(r);
  CHECK(j["cells"].size() == 3);
  CHECK(j.contains("wall_seconds"));
  CHECK_FALSE(to_json(r, false).contains("wall_seconds"));
}

TEST_CASE("step example: exact rate, miss frequency, minimizer family") {
  const auto full = step_signal_example(10, 10, 1000, 1);
  CHECK(full.exact_rate == 0.0);
  CHECK(full.misses == 0);
  const auto rec = step_signal_example(10, 3, 20000, 2);
  CHECK(rec.exact_rate == doctest::Approx(0.7));
  CHECK(std::abs(rec.empirical_miss_rate - 0.7) <= 3 * std::sqrt(0.21 / 20000));
  CHECK(rec.interpolation_failures == 0);
  CHECK(rec.tv_failures == 0);
  CHECK(rec.below_threshold == 0);
  CHECK(rec.worst_solution_error >= 0.1);
  CHECK(rec.constructed > rec.misses - rec.one_sided);
  // P(all three samples on one side of index 5, which is unsampled)
  // = (C(5,3) + C(4,3)) / C(10,3) = 14/120.
  CHECK(static_cast<double>(rec.one_sided) / 20000 == doctest::Approx(14.0 / 120).epsilon(0.1));
  CHECK_THROWS_AS(step_signal_example(9, 3, 10, 1), ParameterError);
  CHECK_THROWS_AS(step_signal_example(10, 0, 10, 1), ParameterError);
}

TEST_CASE("noise injection meets the data budget exactly before clipping") {
  Rng rng(1);
  ScalarField f({10, 10});
  for (Index k = 0; k < f.size(); ++k) f[k] = rng.uniform();
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto lambda = sample_uniform_subset(100, 40, s);
    const double eta = 0.01 + 0.2 * rng.uniform();
    const auto g = noisy_observation(f, lambda, eta, 1.0, s);
    CHECK(masked_mse(f, g, lambda) <= eta * eta * (1 + 1e-12));
    CHECK(g.minCoeff() >= 0.0);
    CHECK(g.maxCoeff() <= 1.0);
  }
  ScalarField mid({10, 10}, 0.5);
  const auto lambda = sample_uniform_subset(100, 40, 3);
  CHECK(masked_mse(mid, noisy_observation(mid, lambda, 0.1, 1.0, 3), lambda) == doctest::Approx(0.01));
}

TEST_CASE("continuum pipeline") {
  PipelineConfig cfg;
  cfg.J = 3;
  cfg.rho = 1.0;
  cfg.trials = 2;
  const auto hp = AnalyticFunction2D::half_plane();
  const auto full = full_pipeline_thm4(hp, cfg);
  for (const auto& t : full.trials) {
    CHECK(t.discrete_error <= 1e-20);
    CHECK(t.continuum_error <= full.thm5_bound);
    CHECK(t.continuum_error == doctest::Approx(full.sampling_error));
  }
  REQUIRE(full.support_count.has_value());
  CHECK(*full.support_count == 50);
  CHECK(full.piecewise.has_value());

  cfg.rho = 0.5;
  cfg.J = 4;
  cfg.trials = 4;
  cfg.eta = 0.3;  // J = 4 >= -2 log2(0.3) = 3.47
  const auto noisy = full_pipeline_thm4(hp, cfg);
  CHECK(noisy.reduced_form);
  CHECK(noisy.trials.size() == 4);
  CHECK(noisy.discrete_violations == 0);
  CHECK(noisy.continuum_violations == 0);
  CHECK(to_json(noisy).dump() == to_json(full_pipeline_thm4(hp, cfg)).dump());

  CHECK_THROWS_AS(full_pipeline_thm4(AnalyticFunction2D::half_plane(0.5, 2.0), PipelineConfig{}), PreconditionError);
}

}
