#include <algorithm>
#include <cmath>

#include "quadrature.hpp"
#include "tvc/bvapprox.hpp"

namespace tvc {

namespace {

Index cells_per_axis(int J) {
  if (J < 1 || J > 20) throw ParameterError("dyadic level J must lie in [1, 20]");
  return Index(1) << J;
}

// Length of [lo, hi) overlapped by each dyadic cell, for every arrangement interval.
Eigen::MatrixXd overlap_matrix(const std::vector<double>& breaks, Index n) {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, static_cast<Index>(breaks.size()) - 1);
  const double h = 1.0 / static_cast<double>(n);
  for (Index k = 0; k < n; ++k)
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
      const double lo = std::max(k * h, breaks[i]), hi = std::min((k + 1) * h, breaks[i + 1]);
      if (hi > lo) A(k, static_cast<Index>(i)) = hi - lo;
    }
  return A;
}

// Sorted union of the dyadic lines and the arrangement breakpoints.
std::vector<double> merged_breaks(const std::vector<double>& breaks, Index n) {
  std::vector<double> out = breaks;
  for (Index k = 0; k <= n; ++k) out.push_back(static_cast<double>(k) / static_cast<double>(n));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::size_t locate(const std::vector<double>& breaks, double x) {
  const auto it = std::upper_bound(breaks.begin(), breaks.end(), x);
  return static_cast<std::size_t>(it - breaks.begin() - 1);
}

} // namespace

ScalarField local_average_samples(const AnalyticFunction2D& f, int J) {
  const Index n = cells_per_axis(J);
  const double h = 1.0 / static_cast<double>(n);
  ScalarField out({n, n});
  if (f.piecewise_constant()) {
    const Arrangement& a = f.arrangement();
    const Eigen::MatrixXd avg = overlap_matrix(a.x1, n) * a.value.matrix() * overlap_matrix(a.x2, n).transpose() / (h * h);
    for (Index k1 = 0; k1 < n; ++k1)
      for (Index k2 = 0; k2 < n; ++k2) out[k1 * n + k2] = avg(k1, k2);
    return out;
  }
  const double tol = 1e-9 * h * h;
  for (Index k1 = 0; k1 < n; ++k1)
    for (Index k2 = 0; k2 < n; ++k2) {
      const auto r = detail::adaptive_tensor_gauss([&](double x1, double x2) { return f(x1, x2); }, k1 * h,
                                                   (k1 + 1) * h, k2 * h, (k2 + 1) * h, tol, 8);
      if (r.error > tol)
        throw NumericalError("local_average_samples: quadrature reached only " + std::to_string(r.error / (h * h)));
      out[k1 * n + k2] = r.value / (h * h);
    }
  return out;
}

SplineSurface::SplineSurface(ScalarField coeffs, int J) : c_(std::move(coeffs)), J_(J), n_(cells_per_axis(J)) {
  if (c_.dim() != 2 || c_.extent(0) != n_ || c_.extent(1) != n_)
    throw ParameterError("spline: coefficients must be a 2^J x 2^J field");
}

double SplineSurface::coefficient(Index k1, Index k2) const {
  k1 = ((k1 % n_) + n_) % n_;
  k2 = ((k2 % n_) + n_) % n_;
  return c_[k1 * n_ + k2];
}

double SplineSurface::operator()(double x1, double x2) const {
  const double t1 = (x1 - std::floor(x1)) * static_cast<double>(n_);
  const double t2 = (x2 - std::floor(x2)) * static_cast<double>(n_);
  const auto k1 = static_cast<Index>(std::floor(t1)), k2 = static_cast<Index>(std::floor(t2));
  const double s = t1 - static_cast<double>(k1), t = t2 - static_cast<double>(k2);
  return (1 - s) * (1 - t) * coefficient(k1, k2) + s * (1 - t) * coefficient(k1 + 1, k2) +
         (1 - s) * t * coefficient(k1, k2 + 1) + s * t * coefficient(k1 + 1, k2 + 1);
}

double SplineSurface::basis_sum(double x1, double x2) const {
  // Sum of the periodized hats at x, evaluated hat by hat.
  auto hat = [&](double x, Index k) {
    double total = 0.0;
    const double t = x * static_cast<double>(n_) - static_cast<double>(k);
    for (int wrap = -2; wrap <= 2; ++wrap) total += std::max(0.0, 1.0 - std::abs(t + wrap * static_cast<double>(n_)));
    return total;
  };
  const double y1 = x1 - std::floor(x1), y2 = x2 - std::floor(x2);
  double s = 0.0;
  for (Index k1 = 0; k1 < n_; ++k1) {
    const double a = hat(y1, k1);
    if (a == 0.0) continue;
    for (Index k2 = 0; k2 < n_; ++k2) s += a * hat(y2, k2);
  }
  return s;
}

SplineSurface interpolate(const ScalarField& coeffs, int J) { return SplineSurface(coeffs, J); }

double l2_error(const SplineSurface& s, const AnalyticFunction2D& f) {
  const Index n = s.size();
  const double h = 1.0 / static_cast<double>(n);
  if (f.piecewise_constant()) {
    // On each piece the integrand is a biquadratic polynomial; 3 points per axis are exact.
    const Arrangement& a = f.arrangement();
    const auto b1 = merged_breaks(a.x1, n), b2 = merged_breaks(a.x2, n);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < b1.size(); ++i) {
      const double m1 = 0.5 * (b1[i] + b1[i + 1]);
      const auto ai = static_cast<Index>(locate(a.x1, m1));
      for (std::size_t j = 0; j + 1 < b2.size(); ++j) {
        const double m2 = 0.5 * (b2[j] + b2[j + 1]);
        const double v = a.value(ai, static_cast<Index>(locate(a.x2, m2)));
        total += detail::tensor_gauss<3>([&](double x1, double x2) { const double e = s(x1, x2) - v; return e * e; },
                                         b1[i], b1[i + 1], b2[j], b2[j + 1]);
      }
    }
    return total;
  }
  const double tol = 1e-8 / static_cast<double>(n * n);
  double total = 0.0, err = 0.0;
  for (Index k1 = 0; k1 < n; ++k1)
    for (Index k2 = 0; k2 < n; ++k2) {
      const auto r = detail::adaptive_tensor_gauss(
          [&](double x1, double x2) { const double e = s(x1, x2) - f(x1, x2); return e * e; }, k1 * h, (k1 + 1) * h,
          k2 * h, (k2 + 1) * h, tol, 8);
      total += r.value;
      err += r.error;
    }
  if (err > 1e-8) throw NumericalError("l2_error: quadrature reached only " + std::to_string(err));
  return total;
}

ScalarField basis_inner_products(const AnalyticFunction2D& u, int J) {
  const Index n = cells_per_axis(J);
  const double h = 1.0 / static_cast<double>(n);
  Eigen::ArrayXXd ip = Eigen::ArrayXXd::Zero(n, n);
  // Adds the four corner-weight moments of one cell piece to the nodes it touches.
  auto deposit = [&](Index k1, Index k2, double m00, double m10, double m01, double m11) {
    ip(k1, k2) += m00;
    ip((k1 + 1) % n, k2) += m10;
    ip(k1, (k2 + 1) % n) += m01;
    ip((k1 + 1) % n, (k2 + 1) % n) += m11;
  };
  if (u.piecewise_constant()) {
    const Arrangement& a = u.arrangement();
    const auto b1 = merged_breaks(a.x1, n), b2 = merged_breaks(a.x2, n);
    // int_lo^hi of the rising hat weight (x - x0)/h, and of 1 - that.
    auto rising = [h](double lo, double hi, double x0) { return ((hi - x0) * (hi - x0) - (lo - x0) * (lo - x0)) / (2 * h); };
    for (std::size_t i = 0; i + 1 < b1.size(); ++i) {
      const double m1 = 0.5 * (b1[i] + b1[i + 1]);
      const auto k1 = std::min(static_cast<Index>(m1 * static_cast<double>(n)), n - 1);
      const double r1 = rising(b1[i], b1[i + 1], k1 * h), f1 = (b1[i + 1] - b1[i]) - r1;
      const auto ai = static_cast<Index>(locate(a.x1, m1));
      for (std::size_t j = 0; j + 1 < b2.size(); ++j) {
        const double m2 = 0.5 * (b2[j] + b2[j + 1]);
        const auto k2 = std::min(static_cast<Index>(m2 * static_cast<double>(n)), n - 1);
        const double r2 = rising(b2[j], b2[j + 1], k2 * h), f2 = (b2[j + 1] - b2[j]) - r2;
        const double v = a.value(ai, static_cast<Index>(locate(a.x2, m2)));
        deposit(k1, k2, v * f1 * f2, v * r1 * f2, v * f1 * r2, v * r1 * r2);
      }
    }
  } else {
    const double tol = 1e-12 * h * h;
    for (Index k1 = 0; k1 < n; ++k1)
      for (Index k2 = 0; k2 < n; ++k2) {
        double m[2][2];
        for (int p = 0; p < 2; ++p)
          for (int q = 0; q < 2; ++q) {
            auto integrand = [&](double x1, double x2) {
              const double s = x1 * static_cast<double>(n) - static_cast<double>(k1);
              const double t = x2 * static_cast<double>(n) - static_cast<double>(k2);
              return u(x1, x2) * (p ? s : 1 - s) * (q ? t : 1 - t);
            };
            m[p][q] = detail::adaptive_tensor_gauss(integrand, k1 * h, (k1 + 1) * h, k2 * h, (k2 + 1) * h, tol, 8).value;
          }
        deposit(k1, k2, m[0][0], m[1][0], m[0][1], m[1][1]);
      }
  }
  ScalarField out({n, n});
  for (Index k1 = 0; k1 < n; ++k1)
    for (Index k2 = 0; k2 < n; ++k2) out[k1 * n + k2] = ip(k1, k2);
  return out;
}

} // namespace tvc
