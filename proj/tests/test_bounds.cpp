#include <doctest.h>

#include <cmath>

#include "tvc/bounds.hpp"
#include "tvc/error.hpp"
#include "tvc/rng.hpp"

using namespace tvc;

TEST_SUITE("bounds") {

TEST_CASE("golden constants by hand arithmetic") {
  BoundParams p;
  p.M = 1; p.C_f = 1; p.d = 2; p.a = 1; p.b = 0.5; p.N = 512; p.rho = 0.5;
  // (64/3)(4 + 3 sqrt(10 * 2.5 * 1 * 4)) = (64/3) * 34
  CHECK(std::abs(theorem2_constant(p) - 2176.0 / 3.0) <= 1e-12 * 2176.0 / 3.0);
  // 40 * 2.5 * 1 * 1 * 4
  CHECK(covering_constant(p) == doctest::Approx(400.0).epsilon(1e-15));
  // omega = 2^18, log2 = 18, |Omega|^-1/4 = 2^-4.5
  const double rate = 2176.0 / 3.0 / std::sqrt(0.5) * std::pow(2.0, -4.5) * std::pow(18.0, 1.5);
  CHECK(theorem2_rate(p) == doctest::Approx(rate).epsilon(1e-13));
  p.eta = 0.1;
  CHECK(theorem2_bound(p) == doctest::Approx(rate + 16.0 / 3.0 * 0.01).epsilon(1e-13));
}

TEST_CASE("covering bound value and validity range") {
  BoundParams p;
  p.N = 16; p.d = 1; p.C_f = 2; p.b = 0; p.a = 1; p.M = 1.5;
  // 40 * 2 * 1.5 * 2 * (1 + 4) = 1200; log2 16 = 4
  CHECK(covering_log_bound(p, 0.5) == doctest::Approx(1200.0 * 4 / 0.5));
  CHECK_THROWS_AS(covering_log_bound(p, 1.0 / 17), PreconditionError);
  CHECK_NOTHROW(covering_log_bound(p, 1.0 / 16));
  CHECK(rough_covering_log_bound(1.0, 0.5, 10) == doctest::Approx(10 * std::log(4.0)));
}

TEST_CASE("eps* solves its defining equation across random parameters") {
  Rng rng(123);
  for (int t = 0; t < 200; ++t) {
    BoundParams p;
    p.M = rng.uniform(1, 4);
    p.C_f = rng.uniform(0.05, 5);
    p.b = rng.uniform(0, 1);
    p.a = BoundParams::default_a(p.b) + rng.uniform(0, 1);
    p.d = 1 + static_cast<int>(rng.below(3));
    p.N = 4 + static_cast<long long>(rng.below(p.d == 3 ? 200 : 2000));
    p.rho = rng.uniform(0.05, 1);
    const double eps = epsilon_star(p);
    const double m = static_cast<double>(p.m());
    const double K = (2 * p.a + p.b) * p.C_f * (p.d + 2 * p.C_f) * std::pow(p.omega(), p.b) * std::log2(p.omega());
    const double t1 = 480 * p.M * p.M * K / eps, t2 = 3 * m * eps / (256 * p.M * p.M), t3 = std::log(p.omega());
    CHECK(std::abs(t1 - t2 + t3) <= 1e-10 * std::max({t1, t2, t3}));
    CHECK(std::abs(epsilon_equation_residual(p, eps)) <= 1e-10 * std::max({t1, t2, t3}));
    CHECK(prob_success_lower_bound(p, eps) == doctest::Approx(1.0 - 1.0 / p.omega()).epsilon(1e-9));
    // The equation is decreasing in eps, so larger eps gives a larger probability.
    CHECK(prob_success_lower_bound(p, 2 * eps) >= prob_success_lower_bound(p, eps));
    if (p.b < 1) CHECK(theorem2_rate(p) >= eps * (1 - 1e-12));
  }
}

TEST_CASE("parameter validation") {
  BoundParams p;
  p.M = 0.5;
  CHECK_THROWS_AS(p.validate(), ParameterError);
  p = {};
  p.b = 1.5;
  CHECK_THROWS_AS(p.validate(), ParameterError);
  p = {};
  p.a = 0.5;
  p.b = 0;
  CHECK_THROWS_AS(p.validate(), ParameterError);
  p = {};
  p.rho = 0;
  CHECK_THROWS_AS(p.validate(), ParameterError);
  p = {};
  p.b = 1;
  p.a = 1;
  CHECK_THROWS_AS(theorem2_bound(p), PreconditionError);
  CHECK(BoundParams::default_a(0.3) == 1.0);
}

TEST_CASE("sparse gradient bounds") {
  BoundParams p;
  p.M = 1; p.d = 2; p.a = 1; p.N = 32; p.rho = 0.25; p.s = 100;
  const auto t = theorem3_bounds(p);
  // (128/3)(2 + 3 sqrt(5 * 3 * 1 * 6)) = (128/3)(2 + 3 sqrt 90)
  const double c = 128.0 / 3.0 * (2 + 3 * std::sqrt(90.0));
  CHECK(t.constant == doctest::Approx(c).epsilon(1e-14));
  const double L = std::pow(10.0, 1.5);
  CHECK(t.by_density == doctest::Approx(c / 0.5 * L * std::sqrt(100.0 / 1024)).epsilon(1e-13));
  CHECK(t.by_count == doctest::Approx(c * L * std::sqrt(100.0 / 256)).epsilon(1e-13));
  p.s.reset();
  CHECK_THROWS_AS(theorem3_bounds(p), ParameterError);
}

TEST_CASE("continuum bounds constants") {
  const double tv = 2.0, M = 1.0;
  const auto b = theorem4_bounds(5, 0.5, 0.0, M, tv);
  const double c = 128.0 / 3.0 * (4 + 3 * std::sqrt(5.0 * 5 * 2 * 3)) * std::sqrt(2.0);
  CHECK(b.constant == doctest::Approx(c).epsilon(1e-14));
  CHECK(b.C1 == doctest::Approx(8 * c).epsilon(1e-14));
  CHECK(b.C2 == doctest::Approx(128.0 / 3.0).epsilon(1e-15));
  CHECK(b.C3 == doctest::Approx((32 + 8 * std::sqrt(M_PI)) * tv * M).epsilon(1e-15));
  CHECK(b.probability == doctest::Approx(1 - 1.0 / 1024));
  const double rate = std::pow(5.0, 1.5) * std::pow(2.0, -2.5) / std::sqrt(0.5);
  CHECK(b.discrete_bound == doctest::Approx(c * rate).epsilon(1e-13));
  CHECK(b.continuum_bound == doctest::Approx(8 * c * rate + b.C3 / 32).epsilon(1e-13));
  CHECK(std::isnan(b.continuum_bound_reduced));
  // J = 6 >= -2 log2(0.125) = 6: reduced form available.
  const auto r = theorem4_bounds(6, 0.5, 0.125, M, tv);
  CHECK_FALSE(std::isnan(r.continuum_bound_reduced));
  CHECK(std::isnan(theorem4_bounds(5, 0.5, 0.125, M, tv).continuum_bound_reduced));
  const auto pw = sparse_piecewise_bounds(6, 0.5, 0.0, 40, r);
  CHECK(pw.discrete_bound == doctest::Approx(r.constant * std::pow(6.0, 1.5) / 64 * std::sqrt(40.0) / std::sqrt(0.5)));
  CHECK_THROWS_AS(theorem4_bounds(0, 0.5, 0, 1, 1), ParameterError);
  CHECK_THROWS_AS(theorem4_bounds(3, 0.5, 0, 1, 1, 0.25), ParameterError);
}

}
