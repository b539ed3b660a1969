#pragma once

// Closed-form constants and bounds of the TV data-completion error analysis:
// covering numbers of the hypothesis class, the sampling success probability,
// the error-level root eps*, and the restoration error bounds for growth-type,
// sparse-gradient and continuum (BV) data.

#include <optional>

namespace tvc {

struct BoundParams {
  double M = 1.0;    // pixel bound, >= 1
  double C_f = 1.0;  // TV growth constant: TV(f) <= C_f |Omega|^b
  double a = 1.0;    // radius exponent, a >= 1 - b
  double b = 0.0;    // TV growth exponent in [0, 1]
  int d = 2;
  long long N = 64;  // grid extent, |Omega| = N^d
  double rho = 0.5;  // sampling density in (0, 1]
  double eta = 0.0;
  std::optional<double> s;  // gradient support size

  double omega() const;   // |Omega|
  long long m() const;    // round(rho |Omega|)
  void validate() const;  // throws ParameterError

  /// a = max(1, 1 - b).
  static double default_a(double b);
};

/// 40 (2a+b) M C_f (d + 2 C_f).
double covering_constant(const BoundParams& p);

/// Upper bound on ln N(class, r): C |Omega|^b log2|Omega| / r. Requires r >= |Omega|^-a.
double covering_log_bound(const BoundParams& p, double r);

/// card * ln(2M / r).
double rough_covering_log_bound(double M, double r, long long card);

/// 1 - exp(covering_log_bound(eps / 12M) - 3 m eps / (256 M^2)), clamped to [0, 1].
/// The covering number is replaced by its upper bound, so the value is a
/// lower bound on the true success probability.
double prob_success_lower_bound(const BoundParams& p, double eps);

/// Left side minus right side of the equation defining eps*:
/// 480 M^2 K / eps - 3 m eps / (256 M^2) - ln(1/|Omega|).
double epsilon_equation_residual(const BoundParams& p, double eps);

/// Positive root of the equation above.
double epsilon_star(const BoundParams& p);

/// (64/3) M^2 (4 + 3 sqrt(10 (2a+b) C_f (d + 2 C_f))).
double theorem2_constant(const BoundParams& p);

/// c rho^-1/2 |Omega|^-(1-b)/2 (log2|Omega|)^3/2, an upper estimate of eps*.
double theorem2_rate(const BoundParams& p);

/// theorem2_rate + (16/3) eta^2. Requires b < 1.
double theorem2_bound(const BoundParams& p);

struct SparseGradientBounds {
  double constant;    // (128/3) M^2 (2 + 3 sqrt(5 (2a+1) M (d + 4M)))
  double by_density;  // c rho^-1/2 (log2|Omega|)^3/2 sqrt(s/|Omega|) + (16/3) eta^2
  double by_count;    // c (log2|Omega|)^3/2 sqrt(s/m) + (16/3) eta^2
};

/// Requires p.s and a >= 1.
SparseGradientBounds theorem3_bounds(const BoundParams& p);

struct ContinuumBounds {
  double constant;  // c
  double C1, C2, C3;
  double discrete_bound;   // c rho^-1/2 J^3/2 2^-J/2 + (16/3) eta^2
  double continuum_bound;  // C1 rho^-1/2 J^3/2 2^-J/2 + C2 eta^2 + C3 2^-J
  /// C1 rho^-1/2 J^3/2 2^-J/2 + (C2 + C3) eta^2; valid in place of the
  /// continuum bound when J >= -2 log2(eta). NaN otherwise.
  double continuum_bound_reduced;
  double probability;  // 1 - 2^-2J
};

ContinuumBounds theorem4_bounds(int J, double rho, double eta, double M, double tv_f, double a = 1.0);

struct PiecewiseBounds {
  double discrete_bound;   // c rho^-1/2 J^3/2 2^-J |S|^1/2 + (16/3) eta^2
  double continuum_bound;  // C1 rho^-1/2 J^3/2 2^-J |S|^1/2 + C2 eta^2 + C3 2^-J
};

/// Piecewise-constant variant with |S| = ||grad f||_0; constants from theorem4_bounds.
PiecewiseBounds sparse_piecewise_bounds(int J, double rho, double eta, long long support_count,
                                        const ContinuumBounds& constants);

} // namespace tvc
