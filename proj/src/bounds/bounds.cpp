#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "tvc/bounds.hpp"
#include "tvc/error.hpp"

namespace tvc {

namespace {

double growth_term(const BoundParams& p) {
  return (2.0 * p.a + p.b) * p.C_f * (p.d + 2.0 * p.C_f);
}

// (2a+b) C_f (d + 2 C_f) |Omega|^b log2|Omega|
double class_size_term(const BoundParams& p) {
  const double omega = p.omega();
  return growth_term(p) * std::pow(omega, p.b) * std::log2(omega);
}

} // namespace

double BoundParams::omega() const { return std::pow(static_cast<double>(N), d); }

long long BoundParams::m() const { return std::llround(rho * omega()); }

double BoundParams::default_a(double b) { return std::max(1.0, 1.0 - b); }

void BoundParams::validate() const {
  if (!(M >= 1.0)) throw ParameterError("bounds: M must be >= 1");
  if (!(C_f > 0.0)) throw ParameterError("bounds: C_f must be > 0");
  if (!(b >= 0.0 && b <= 1.0)) throw ParameterError("bounds: b must lie in [0, 1]");
  if (!(a >= 1.0 - b - 1e-12)) throw ParameterError("bounds: a must be >= 1 - b");
  if (d < 1) throw ParameterError("bounds: d must be >= 1");
  if (N < 2) throw ParameterError("bounds: N must be >= 2");
  if (!(rho > 0.0 && rho <= 1.0)) throw ParameterError("bounds: rho must lie in (0, 1]");
  if (!(eta >= 0.0)) throw ParameterError("bounds: eta must be >= 0");
  if (m() < 1) throw ParameterError("bounds: round(rho |Omega|) must be >= 1");
  if (s && !(*s >= 1.0 && *s <= omega() - 1.0)) throw ParameterError("bounds: s must lie in [1, |Omega| - 1]");
}

double covering_constant(const BoundParams& p) {
  return 40.0 * (2.0 * p.a + p.b) * p.M * p.C_f * (p.d + 2.0 * p.C_f);
}

double covering_log_bound(const BoundParams& p, double r) {
  p.validate();
  const double omega = p.omega();
  const double r_min = std::pow(omega, -p.a);
  if (!(r >= r_min))
    throw PreconditionError("covering_log_bound: r = " + std::to_string(r) + " is below |Omega|^-a = " +
                            std::to_string(r_min));
  return covering_constant(p) * std::pow(omega, p.b) * std::log2(omega) / r;
}

double rough_covering_log_bound(double M, double r, long long card) {
  if (!(r > 0.0)) throw ParameterError("rough_covering_log_bound: r must be > 0");
  return static_cast<double>(card) * std::log(2.0 * M / r);
}

double prob_success_lower_bound(const BoundParams& p, double eps) {
  if (!(eps > 0.0)) throw ParameterError("prob_success_lower_bound: eps must be > 0");
  const double r = eps / (12.0 * p.M);
  if (r < std::pow(p.omega(), -p.a))
    throw PreconditionError("prob_success_lower_bound: eps / 12M is below |Omega|^-a; enlarge eps or a");
  const double exponent = covering_log_bound(p, r) - 3.0 * static_cast<double>(p.m()) * eps / (256.0 * p.M * p.M);
  return std::clamp(1.0 - std::exp(exponent), 0.0, 1.0);
}

double epsilon_equation_residual(const BoundParams& p, double eps) {
  const double m = static_cast<double>(p.m());
  return 480.0 * p.M * p.M * class_size_term(p) / eps - 3.0 * m * eps / (256.0 * p.M * p.M) +
         std::log(p.omega());
}

double epsilon_star(const BoundParams& p) {
  p.validate();
  const double m = static_cast<double>(p.m());
  const double L = std::log(p.omega());
  return 128.0 * p.M * p.M / (3.0 * m) * (L + std::sqrt(L * L + 22.5 * m * class_size_term(p)));
}

double theorem2_constant(const BoundParams& p) {
  return 64.0 / 3.0 * p.M * p.M * (4.0 + 3.0 * std::sqrt(10.0 * growth_term(p)));
}

double theorem2_rate(const BoundParams& p) {
  p.validate();
  const double omega = p.omega();
  return theorem2_constant(p) / std::sqrt(p.rho) * std::pow(omega, -(1.0 - p.b) / 2.0) *
         std::pow(std::log2(omega), 1.5);
}

double theorem2_bound(const BoundParams& p) {
  p.validate();
  if (p.b >= 1.0) throw PreconditionError("theorem2_bound: requires b < 1");
  return theorem2_rate(p) + 16.0 / 3.0 * p.eta * p.eta;
}

SparseGradientBounds theorem3_bounds(const BoundParams& p) {
  p.validate();
  if (!p.s) throw ParameterError("theorem3_bounds: gradient support size s is required");
  if (p.a < 1.0) throw PreconditionError("theorem3_bounds: requires a >= 1");
  const double c = 128.0 / 3.0 * p.M * p.M * (2.0 + 3.0 * std::sqrt(5.0 * (2.0 * p.a + 1.0) * p.M * (p.d + 4.0 * p.M)));
  const double omega = p.omega();
  const double log_term = std::pow(std::log2(omega), 1.5);
  const double noise = 16.0 / 3.0 * p.eta * p.eta;
  return {c, c / std::sqrt(p.rho) * log_term * std::sqrt(*p.s / omega) + noise,
          c * log_term * std::sqrt(*p.s / static_cast<double>(p.m())) + noise};
}

ContinuumBounds theorem4_bounds(int J, double rho, double eta, double M, double tv_f, double a) {
  if (J < 1) throw ParameterError("theorem4_bounds: J must be >= 1");
  if (!(rho > 0.0 && rho <= 1.0)) throw ParameterError("theorem4_bounds: rho must lie in (0, 1]");
  if (!(eta >= 0.0) || !(M > 0.0) || !(tv_f >= 0.0)) throw ParameterError("theorem4_bounds: invalid eta, M or TV(f)");
  if (!(a >= 0.5)) throw ParameterError("theorem4_bounds: a must be >= 1/2");
  ContinuumBounds r;
  r.constant = 128.0 / 3.0 * M * M * (4.0 + 3.0 * std::sqrt(5.0 * (4.0 * a + 1.0) * tv_f * (1.0 + tv_f))) *
               std::numbers::sqrt2;
  r.C1 = 8.0 * r.constant;
  r.C2 = 128.0 / 3.0;
  r.C3 = (32.0 + 8.0 * std::sqrt(std::numbers::pi)) * tv_f * M;
  const double rate = std::pow(static_cast<double>(J), 1.5) * std::pow(2.0, -J / 2.0) / std::sqrt(rho);
  const double eta_sq = eta * eta;
  r.discrete_bound = r.constant * rate + 16.0 / 3.0 * eta_sq;
  r.continuum_bound = r.C1 * rate + r.C2 * eta_sq + r.C3 * std::pow(2.0, -J);
  r.continuum_bound_reduced = (eta > 0.0 && J >= -2.0 * std::log2(eta))
                                  ? r.C1 * rate + (r.C2 + r.C3) * eta_sq
                                  : std::numeric_limits<double>::quiet_NaN();
  r.probability = 1.0 - std::pow(2.0, -2 * J);
  return r;
}

PiecewiseBounds sparse_piecewise_bounds(int J, double rho, double eta, long long support_count,
                                        const ContinuumBounds& k) {
  if (J < 1) throw ParameterError("sparse_piecewise_bounds: J must be >= 1");
  if (support_count < 1) throw ParameterError("sparse_piecewise_bounds: |S| must be >= 1");
  if (!(rho > 0.0 && rho <= 1.0)) throw ParameterError("sparse_piecewise_bounds: rho must lie in (0, 1]");
  const double rate = std::pow(static_cast<double>(J), 1.5) * std::pow(2.0, -J) *
                      std::sqrt(static_cast<double>(support_count)) / std::sqrt(rho);
  const double eta_sq = eta * eta;
  return {k.constant * rate + 16.0 / 3.0 * eta_sq, k.C1 * rate + k.C2 * eta_sq + k.C3 * std::pow(2.0, -J)};
}

} // namespace tvc
