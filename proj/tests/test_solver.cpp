#include <doctest.h>

#include "oracles.hpp"
#include "tvc/experiments.hpp"
#include "tvc/rng.hpp"
#include "tvc/solver_io.hpp"

using namespace tvc;

namespace {

TVProblem random_problem(Rng& rng, Shape shape, double rho, double eta_fraction, double M, std::uint64_t seed) {
  ScalarField f(shape);
  for (Index k = 0; k < f.size(); ++k) f[k] = rng.uniform(0, M);
  const Index m = std::max<Index>(2, std::llround(rho * static_cast<double>(f.size())));
  auto s = sample_uniform_subset(f.size(), m, seed);
  auto g = restrict_to(f, s);
  const double eta = eta_fraction * std::sqrt(variance_on(g));
  return TVProblem::make(shape, s, g, eta, M);
}

// Exact minimum TV of a 1-D interpolation problem: the free ends cost
// nothing and each gap between consecutive samples costs |g_{i+1} - g_i|.
double exact_1d_min_tv(const TVProblem& p) {
  double s = 0.0;
  for (Index i = 1; i < p.g.size(); ++i) s += std::abs(p.g[i] - p.g[i - 1]);
  return s;
}

} // namespace

TEST_SUITE("solver") {

TEST_CASE("problem validation") {
  SampleSet s{4, {0, 2}};
  Eigen::ArrayXd g(2);
  g << 0.2, 0.8;
  CHECK_NOTHROW(TVProblem::make({4}, s, g, 0.0, 1.0));
  CHECK_THROWS_AS(TVProblem::make({4}, s, g, -0.1, 1.0), ParameterError);
  CHECK_THROWS_AS(TVProblem::make({4}, s, g, 0.0, 0.5), ParameterError);
  CHECK_THROWS_AS(TVProblem::make({4}, s, g, 0.31, 1.0), ParameterError);  // eta^2 > var = 0.09
  Eigen::ArrayXd bad(2);
  bad << -0.1, 0.5;
  CHECK_THROWS_AS(TVProblem::make({4}, s, bad, 0.0, 1.0), ParameterError);
  CHECK_THROWS_AS(TVProblem::make({5}, s, g, 0.0, 1.0), ParameterError);
  SolverConfig c;
  c.max_outer_iters = 0;
  CHECK_THROWS_AS(c.validate(), ParameterError);
  CHECK_THROWS_AS(solver_method_from_string("newton"), ParameterError);
  CHECK_THROWS_AS(solve_equality(TVProblem::make({4}, s, g, 0.1, 1.0)), ParameterError);
}

TEST_CASE("1-D interpolation reaches the exact minimum TV with both methods") {
  Rng rng(21);
  for (int t = 0; t < 20; ++t) {
    const auto p = random_problem(rng, {Index(8 + rng.below(20))}, 0.4, 0.0, 1.0, 100 + t);
    const double exact = exact_1d_min_tv(p);
    for (auto method : {SolverMethod::SplitBregman, SolverMethod::PrimalDual}) {
      SolverConfig c;
      c.method = method;
      const auto r = solve_equality(p, c);
      CHECK(r.converged);
      CHECK(r.tv_value == doctest::Approx(exact).epsilon(1e-5));
      CHECK(std::abs(r.constraint_residual) <= 1e-12);
    }
  }
}

TEST_CASE("split Bregman and primal-dual agree on 2-D problems with noise") {
  Rng rng(5);
  for (int t = 0; t < 6; ++t) {
    const auto p = random_problem(rng, {12, 12}, 0.5, t % 2 ? 0.3 : 0.0, 1.0, 200 + t);
    SolverConfig sb, pd;
    pd.method = SolverMethod::PrimalDual;
    pd.max_outer_iters = 50000;
    const auto a = solve(p, sb), b = solve(p, pd);
    REQUIRE(a.converged);
    REQUIRE(b.converged);
    CHECK(a.tv_value == doctest::Approx(b.tv_value).epsilon(1e-4));
    CHECK(a.constraint_residual <= 1e-9);
    CHECK(b.constraint_residual <= 1e-9);
    CHECK(a.duality_gap <= 1e-4 * std::max(1.0, a.tv_value));
  }
}

TEST_CASE("solver TV never beats the brute-force optimum on a pinned grid") {
  // With data on the level grid the exhaustive search is exact for eta = 0:
  // some minimizer takes only observed values.
  Rng rng(8);
  for (int t = 0; t < 10; ++t) {
    ScalarField f({3, 3});
    for (Index k = 0; k < 9; ++k) f[k] = 0.25 * static_cast<double>(rng.below(5));
    auto s = sample_uniform_subset(9, 3 + static_cast<Index>(rng.below(4)), 300 + t);
    auto g = restrict_to(f, s);
    if (variance_on(g) == 0.0) continue;
    const auto p = TVProblem::make({3, 3}, s, g, 0.0, 1.0);
    const auto brute = brute_force_min_tv(p, 5);
    const auto r = solve_equality(p);
    CHECK(r.tv_value == doctest::Approx(brute.min_tv).epsilon(1e-5));
    CHECK(oracle::tv2d(std::vector<double>(brute.field.values().data(), brute.field.values().data() + 9), 3, 3) ==
          doctest::Approx(brute.min_tv));
  }
}

TEST_CASE("maximum principle and feasibility on random instances") {
  Rng rng(99);
  for (int t = 0; t < 20; ++t) {
    const double M = 1.0 + 2.0 * rng.uniform();
    const Shape shape = t % 2 ? Shape{Index(5 + rng.below(20))} : Shape{Index(4 + rng.below(8)), Index(4 + rng.below(8))};
    const auto p = random_problem(rng, shape, 0.3 + 0.5 * rng.uniform(), 0.2 * (t % 3), M, 400 + t);
    const auto r = solve(p);
    CHECK(check_max_principle(r, M, 1e-9));
    CHECK(masked_mse(r.u, p.g, p.samples) <= p.eta * p.eta * (1 + 1e-9) + 1e-15);
  }
}

TEST_CASE("eta at the sample variance returns the constant mean") {
  SampleSet s{6, {1, 4}};
  Eigen::ArrayXd g(2);
  g << 0.2, 0.6;
  const auto p = TVProblem::make({6}, s, g, 0.2, 1.0);
  const auto r = solve(p);
  CHECK(r.tv_value == 0.0);
  CHECK(r.converged);
  for (Index k = 0; k < 6; ++k) CHECK(r.u[k] == doctest::Approx(0.4));
}

TEST_CASE("full sampling reproduces the data exactly") {
  const auto f = shepp_logan(16);
  SampleSet all = sample_uniform_subset(f.size(), f.size(), 1);
  const auto r = solve_equality(TVProblem::from_field(f, all, 0.0, 1.0));
  CHECK((r.u.values() - f.values()).abs().maxCoeff() <= 1e-12);
}

TEST_CASE("iteration cap produces an unconverged result with a message") {
  Rng rng(4);
  const auto p = random_problem(rng, {16, 16}, 0.3, 0.0, 1.0, 17);
  SolverConfig c;
  c.max_outer_iters = 3;
  c.check_every = 1;
  const auto r = solve(p, c);
  CHECK_FALSE(r.converged);
  CHECK(r.iterations == 3);
  CHECK_FALSE(r.message.empty());
  CHECK(r.history.size() == 3);
}

TEST_CASE("problem, config and result json round trips") {
  Rng rng(6);
  const auto p = random_problem(rng, {6, 5}, 0.5, 0.1, 1.0, 3);
  const auto q = problem_from_json(to_json(p));
  CHECK(q.shape == p.shape);
  CHECK(q.samples.indices == p.samples.indices);
  CHECK((q.g == p.g).all());
  CHECK(q.eta == p.eta);
  const auto r = solve(p);
  const auto back = result_from_json(Json::parse(to_json(r).dump()));
  CHECK(back.tv_value == r.tv_value);
  CHECK(tv_aniso(back.u) == doctest::Approx(r.tv_value).epsilon(1e-12));
  CHECK(back.converged == r.converged);
  CHECK(back.history.size() == r.history.size());
  SolverConfig c;
  c.penalty = 7;
  const auto c2 = solver_config_from_json(to_json(c));
  CHECK(c2.penalty == 7);
  CHECK_THROWS_AS(solver_config_from_json(Json{{"penalti", 3}}), ParameterError);
  CHECK_THROWS_AS(solver_config_from_json(Json{{"penalty", -3}}), ParameterError);
}

TEST_CASE("brute force guards") {
  SampleSet s{13, {0, 5}};
  Eigen::ArrayXd g(2);
  g << 0.0, 1.0;
  CHECK_THROWS_AS(brute_force_min_tv(TVProblem::make({13}, s, g, 0.0, 1.0), 3), ParameterError);
  SampleSet t{4, {0, 3}};
  const auto r = brute_force_min_tv(TVProblem::make({4}, t, g, 0.0, 1.0), 3);
  CHECK(r.min_tv == doctest::Approx(1.0));
}

}
