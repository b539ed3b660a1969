#pragma once

// Continuum layer on the periodic unit square [0,1)^2: cell-average sampling
// of BV test functions, periodized bilinear B-spline synthesis, and the
// associated approximation, Bessel and TV checks.
//
// Cell Q_k = [k1 h, (k1+1) h) x [k2 h, (k2+1) h), h = 2^-J; k1 indexes x1 and
// is the row (slow) index of the sample field. The hat phi(2^J x - k) is
// centred at the corner x = k h and wraps modulo 1.

#include <vector>

#include <Eigen/Dense>

#include "tvc/grid.hpp"

namespace tvc {

struct Rectangle {
  double x1_lo, x1_hi, x2_lo, x2_hi;  // half-open [lo, hi) inside [0, 1]
  double height;
};

/// Piecewise-constant function on the tensor arrangement of breakpoints.
struct Arrangement {
  std::vector<double> x1, x2;  // sorted breakpoints, first 0, last 1
  Eigen::ArrayXXd value;       // (x1.size()-1) x (x2.size()-1)
};

class AnalyticFunction2D {
public:
  enum class Kind { PiecewiseConstant, SeparableBump };

  static AnalyticFunction2D constant(double c);
  static AnalyticFunction2D rectangle_sum(const std::vector<Rectangle>& rects);
  /// height on x1 < split, 0 elsewhere.
  static AnalyticFunction2D half_plane(double split = 0.5, double height = 1.0);
  /// Piecewise constant on an n1 x n2 uniform grid of cells.
  static AnalyticFunction2D tabulated(const ScalarField& values);
  /// alpha cos^2(pi (x1-c1)/w1) cos^2(pi (x2-c2)/w2) on |x_j - c_j| < w_j/2; support inside [0,1]^2.
  static AnalyticFunction2D separable_bump(double alpha, double c1, double c2, double w1, double w2);

  Kind kind() const { return kind_; }
  bool piecewise_constant() const { return kind_ == Kind::PiecewiseConstant; }
  const Arrangement& arrangement() const;

  /// Evaluation with period 1 in each variable.
  double operator()(double x1, double x2) const;

  /// Anisotropic TV on the torus; exact for both kinds.
  double total_variation() const;
  double sup_norm() const;
  double min_value() const;
  /// ||f||^2_{L2([0,1)^2)}.
  double l2_norm_sq() const;

private:
  Kind kind_ = Kind::PiecewiseConstant;
  Arrangement arr_;
  double alpha_ = 0.0, c1_ = 0.0, c2_ = 0.0, w1_ = 1.0, w2_ = 1.0;
};

/// f[k] = 2^{2J} int_{Q_k} f. Exact for piecewise-constant functions; tensor
/// Gauss-Legendre (16 points per axis) with adaptive refinement otherwise.
/// Throws NumericalError if refinement does not reach 1e-9.
ScalarField local_average_samples(const AnalyticFunction2D& f, int J);

class SplineSurface {
public:
  SplineSurface(ScalarField coeffs, int J);

  int level() const { return J_; }
  Index size() const { return n_; }
  const ScalarField& coefficients() const { return c_; }
  double coefficient(Index k1, Index k2) const;  // indices taken modulo 2^J

  double operator()(double x1, double x2) const;
  /// Sum_k phi(2^J x - k) at x; 1 up to rounding.
  double basis_sum(double x1, double x2) const;

private:
  ScalarField c_;
  int J_;
  Index n_;
};

SplineSurface interpolate(const ScalarField& coeffs, int J);

/// ||s - f||^2_{L2}: exact cell splitting for piecewise-constant f, adaptive
/// Gauss-Legendre to 1e-8 absolute otherwise.
double l2_error(const SplineSurface& s, const AnalyticFunction2D& f);

/// <u, phi(2^J . - k)> for every node k, as a 2^J x 2^J field.
ScalarField basis_inner_products(const AnalyticFunction2D& u, int J);

struct BesselCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds() const { return lhs <= rhs; }
};

/// lhs = sum_k |<u, phi(2^J . - k)>|^2, rhs = 4 2^{-2J} ||u||^2.
BesselCheck bessel_check(const AnalyticFunction2D& u, int J);

/// Per-axis periodic Gram matrix of the hats: 2/3 h on the diagonal, 1/6 h
/// to each neighbour (accumulated when neighbours coincide).
Eigen::MatrixXd hat_gram(int J);

/// lhs = ||sum_k c[k] phi(2^J . - k)||^2 via the Gram stencil, rhs = 4 2^{-2J} ||c||^2.
BesselCheck adjoint_bessel_check(const ScalarField& coeffs, int J);

struct TvComparison {
  double discrete = 0.0;      // tv_aniso of the cell averages
  double scaled_bound = 0.0;  // 2^J TV(f)
  bool holds() const { return discrete <= scaled_bound * (1.0 + 1e-12) + 1e-12; }
};

TvComparison discrete_tv_vs_continuum(const AnalyticFunction2D& f, int J);

struct InteriorCells {
  std::vector<bool> interior;  // indexed by linear cell index
  Index interior_count = 0;
  Index support_count = 0;     // |S| = 2^{2J} - |I|
};

/// I: cells k with k+e1, k+e2 in the grid whose closed L-shaped union
/// Q_k u Q_{k+e1} u Q_{k+e2} lies in the interior of one level set of f
/// (periodic topology). S is the complement.
InteriorCells interior_cell_sets(const AnalyticFunction2D& f, int J);

} // namespace tvc
