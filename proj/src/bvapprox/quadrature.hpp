#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/quadrature/gauss.hpp>

#include "tvc/error.hpp"

namespace tvc::detail {

/// Tensor Gauss-Legendre rule with N points per axis on [a,b] x [c,d].
template <unsigned N, typename F>
double tensor_gauss(const F& f, double a, double b, double c, double d) {
  using Rule = boost::math::quadrature::gauss<double, N>;
  return Rule::integrate([&](double x1) { return Rule::integrate([&](double x2) { return f(x1, x2); }, c, d); }, a, b);
}

struct AdaptiveResult {
  double value = 0.0;
  double error = 0.0;  // |coarse - refined| summed over accepted leaves
};

/// 16-point tensor rule compared with its 2x2 split; split recursively until
/// the difference is below `tol` (scaled by area) or `depth` levels are used.
template <typename F>
AdaptiveResult adaptive_tensor_gauss(const F& f, double a, double b, double c, double d, double tol, int depth,
                                     double coarse = std::nan("")) {
  if (std::isnan(coarse)) coarse = tensor_gauss<16>(f, a, b, c, d);
  const double ma = 0.5 * (a + b), mc = 0.5 * (c + d);
  const double q[4] = {tensor_gauss<16>(f, a, ma, c, mc), tensor_gauss<16>(f, a, ma, mc, d),
                       tensor_gauss<16>(f, ma, b, c, mc), tensor_gauss<16>(f, ma, b, mc, d)};
  const double fine = q[0] + q[1] + q[2] + q[3];
  if (std::abs(fine - coarse) <= tol || depth <= 0) return {fine, std::abs(fine - coarse)};
  AdaptiveResult out;
  const double sub_tol = tol / 4.0;
  const double box[4][4] = {{a, ma, c, mc}, {a, ma, mc, d}, {ma, b, c, mc}, {ma, b, mc, d}};
  for (int i = 0; i < 4; ++i) {
    const AdaptiveResult r = adaptive_tensor_gauss(f, box[i][0], box[i][1], box[i][2], box[i][3], sub_tol, depth - 1, q[i]);
    out.value += r.value;
    out.error += r.error;
  }
  return out;
}

} // namespace tvc::detail
