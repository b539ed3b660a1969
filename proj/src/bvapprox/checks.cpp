#include <cmath>

#include "tvc/bvapprox.hpp"

namespace tvc {

namespace {

// Closed intervals [a, b] and [p, q] inside [0, 1] meet on the circle R / Z.
bool meet_periodic(double a, double b, double p, double q) {
  return std::max(a, p) <= std::min(b, q) || (b == 1.0 && p == 0.0) || (q == 1.0 && a == 0.0);
}

} // namespace

BesselCheck bessel_check(const AnalyticFunction2D& u, int J) {
  const ScalarField ip = basis_inner_products(u, J);
  return {ip.values().square().sum(), 4.0 * std::pow(2.0, -2 * J) * u.l2_norm_sq()};
}

Eigen::MatrixXd hat_gram(int J) {
  if (J < 1 || J > 20) throw ParameterError("hat_gram: J must lie in [1, 20]");
  const Index n = Index(1) << J;
  const double h = 1.0 / static_cast<double>(n);
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n, n);
  for (Index k = 0; k < n; ++k) {
    G(k, k) += 2.0 / 3.0 * h;
    G(k, (k + 1) % n) += h / 6.0;
    G(k, (k + n - 1) % n) += h / 6.0;
  }
  return G;
}

BesselCheck adjoint_bessel_check(const ScalarField& coeffs, int J) {
  const Eigen::MatrixXd G = hat_gram(J);
  const Index n = G.rows();
  if (coeffs.dim() != 2 || coeffs.extent(0) != n || coeffs.extent(1) != n)
    throw ParameterError("adjoint_bessel_check: coefficients must be a 2^J x 2^J field");
  const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> C(
      coeffs.values().data(), n, n);
  const double lhs = ((G * C * G).array() * C.array()).sum();
  return {lhs, 4.0 * std::pow(2.0, -2 * J) * coeffs.values().square().sum()};
}

TvComparison discrete_tv_vs_continuum(const AnalyticFunction2D& f, int J) {
  return {tv_aniso(local_average_samples(f, J)), std::pow(2.0, J) * f.total_variation()};
}

InteriorCells interior_cell_sets(const AnalyticFunction2D& f, int J) {
  if (!f.piecewise_constant()) throw ParameterError("interior_cell_sets: requires a piecewise-constant function");
  if (J < 1 || J > 12) throw ParameterError("interior_cell_sets: J must lie in [1, 12]");
  const Arrangement& a = f.arrangement();
  const Index n = Index(1) << J;
  const double h = 1.0 / static_cast<double>(n);
  InteriorCells out;
  out.interior.assign(static_cast<std::size_t>(n * n), false);
  for (Index k1 = 0; k1 + 1 < n; ++k1)
    for (Index k2 = 0; k2 + 1 < n; ++k2) {
      const double squares[3][4] = {{k1 * h, (k1 + 1) * h, k2 * h, (k2 + 1) * h},
                                    {(k1 + 1) * h, (k1 + 2) * h, k2 * h, (k2 + 1) * h},
                                    {k1 * h, (k1 + 1) * h, (k2 + 1) * h, (k2 + 2) * h}};
      bool seen = false, uniform = true;
      double value = 0.0;
      for (Index i = 0; uniform && i < a.value.rows(); ++i)
        for (Index j = 0; uniform && j < a.value.cols(); ++j) {
          const double p = a.x1[static_cast<std::size_t>(i)], q = a.x1[static_cast<std::size_t>(i) + 1];
          const double r = a.x2[static_cast<std::size_t>(j)], t = a.x2[static_cast<std::size_t>(j) + 1];
          bool touches = false;
          for (const auto& s : squares)
            touches = touches || (meet_periodic(s[0], s[1], p, q) && meet_periodic(s[2], s[3], r, t));
          if (!touches) continue;
          if (!seen) {
            value = a.value(i, j);
            seen = true;
          } else if (a.value(i, j) != value) {
            uniform = false;
          }
        }
      if (uniform) {
        out.interior[static_cast<std::size_t>(k1 * n + k2)] = true;
        ++out.interior_count;
      }
    }
  out.support_count = n * n - out.interior_count;
  return out;
}

} // namespace tvc
