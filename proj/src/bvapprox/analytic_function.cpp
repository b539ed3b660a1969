#include <algorithm>
#include <cmath>
#include <numbers>

#include "tvc/bvapprox.hpp"

namespace tvc {

namespace {

double wrap_unit(double x) {
  const double w = x - std::floor(x);
  return w >= 1.0 ? 0.0 : w;
}

std::size_t interval_of(const std::vector<double>& breaks, double x) {
  const auto it = std::upper_bound(breaks.begin(), breaks.end(), x);
  return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(it - breaks.begin() - 1, 0,
                                                             static_cast<std::ptrdiff_t>(breaks.size()) - 2));
}

void check_edge(double lo, double hi) {
  if (!(lo >= 0.0 && hi <= 1.0 && lo < hi)) throw ParameterError("rectangle: edges must satisfy 0 <= lo < hi <= 1");
}

} // namespace

AnalyticFunction2D AnalyticFunction2D::constant(double c) {
  return rectangle_sum({{0.0, 1.0, 0.0, 1.0, c}});
}

AnalyticFunction2D AnalyticFunction2D::half_plane(double split, double height) {
  return rectangle_sum({{0.0, split, 0.0, 1.0, height}});
}

AnalyticFunction2D AnalyticFunction2D::rectangle_sum(const std::vector<Rectangle>& rects) {
  AnalyticFunction2D f;
  f.kind_ = Kind::PiecewiseConstant;
  std::vector<double> x1{0.0, 1.0}, x2{0.0, 1.0};
  for (const auto& r : rects) {
    check_edge(r.x1_lo, r.x1_hi);
    check_edge(r.x2_lo, r.x2_hi);
    if (!std::isfinite(r.height)) throw ParameterError("rectangle: height must be finite");
    x1.insert(x1.end(), {r.x1_lo, r.x1_hi});
    x2.insert(x2.end(), {r.x2_lo, r.x2_hi});
  }
  for (auto* v : {&x1, &x2}) {
    std::sort(v->begin(), v->end());
    v->erase(std::unique(v->begin(), v->end()), v->end());
  }
  Eigen::ArrayXXd value = Eigen::ArrayXXd::Zero(static_cast<Index>(x1.size()) - 1, static_cast<Index>(x2.size()) - 1);
  for (Index i = 0; i < value.rows(); ++i)
    for (Index j = 0; j < value.cols(); ++j) {
      const double m1 = 0.5 * (x1[static_cast<std::size_t>(i)] + x1[static_cast<std::size_t>(i) + 1]);
      const double m2 = 0.5 * (x2[static_cast<std::size_t>(j)] + x2[static_cast<std::size_t>(j) + 1]);
      for (const auto& r : rects)
        if (m1 >= r.x1_lo && m1 < r.x1_hi && m2 >= r.x2_lo && m2 < r.x2_hi) value(i, j) += r.height;
    }
  f.arr_ = {std::move(x1), std::move(x2), std::move(value)};
  return f;
}

AnalyticFunction2D AnalyticFunction2D::tabulated(const ScalarField& values) {
  if (values.dim() != 2) throw ParameterError("tabulated: field must be 2-D");
  if (!values.all_finite()) throw ParameterError("tabulated: values must be finite");
  AnalyticFunction2D f;
  const Index n1 = values.extent(0), n2 = values.extent(1);
  Arrangement a;
  for (Index i = 0; i <= n1; ++i) a.x1.push_back(static_cast<double>(i) / static_cast<double>(n1));
  for (Index j = 0; j <= n2; ++j) a.x2.push_back(static_cast<double>(j) / static_cast<double>(n2));
  a.value.resize(n1, n2);
  for (Index i = 0; i < n1; ++i)
    for (Index j = 0; j < n2; ++j) a.value(i, j) = values[i * n2 + j];
  f.arr_ = std::move(a);
  return f;
}

AnalyticFunction2D AnalyticFunction2D::separable_bump(double alpha, double c1, double c2, double w1, double w2) {
  if (!(w1 > 0.0 && w2 > 0.0) || c1 - w1 / 2 < 0.0 || c1 + w1 / 2 > 1.0 || c2 - w2 / 2 < 0.0 || c2 + w2 / 2 > 1.0)
    throw ParameterError("separable_bump: support must lie inside [0,1]^2");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw ParameterError("separable_bump: alpha must be finite and >= 0");
  AnalyticFunction2D f;
  f.kind_ = Kind::SeparableBump;
  f.alpha_ = alpha;
  f.c1_ = c1;
  f.c2_ = c2;
  f.w1_ = w1;
  f.w2_ = w2;
  return f;
}

const Arrangement& AnalyticFunction2D::arrangement() const {
  if (!piecewise_constant()) throw ParameterError("arrangement: function is not piecewise constant");
  return arr_;
}

double AnalyticFunction2D::operator()(double x1, double x2) const {
  x1 = wrap_unit(x1);
  x2 = wrap_unit(x2);
  if (piecewise_constant())
    return arr_.value(static_cast<Index>(interval_of(arr_.x1, x1)), static_cast<Index>(interval_of(arr_.x2, x2)));
  auto profile = [](double x, double c, double w) {
    const double t = (x - c) / w;
    if (std::abs(t) >= 0.5) return 0.0;
    const double v = std::cos(std::numbers::pi * t);
    return v * v;
  };
  return alpha_ * profile(x1, c1_, w1_) * profile(x2, c2_, w2_);
}

double AnalyticFunction2D::total_variation() const {
  // Bump: int |a'| = 2 and int a = w/2 per axis.
  if (!piecewise_constant()) return alpha_ * (w1_ + w2_);
  const auto& v = arr_.value;
  const Index n1 = v.rows(), n2 = v.cols();
  double tv = 0.0;
  for (Index i = 0; i < n1; ++i) {
    const Index prev = (i + n1 - 1) % n1;
    for (Index j = 0; j < n2; ++j)
      tv += std::abs(v(i, j) - v(prev, j)) * (arr_.x2[static_cast<std::size_t>(j) + 1] - arr_.x2[static_cast<std::size_t>(j)]);
  }
  for (Index j = 0; j < n2; ++j) {
    const Index prev = (j + n2 - 1) % n2;
    for (Index i = 0; i < n1; ++i)
      tv += std::abs(v(i, j) - v(i, prev)) * (arr_.x1[static_cast<std::size_t>(i) + 1] - arr_.x1[static_cast<std::size_t>(i)]);
  }
  return tv;
}

double AnalyticFunction2D::sup_norm() const {
  return piecewise_constant() ? arr_.value.abs().maxCoeff() : alpha_;
}

double AnalyticFunction2D::min_value() const {
  return piecewise_constant() ? arr_.value.minCoeff() : 0.0;
}

double AnalyticFunction2D::l2_norm_sq() const {
  // Bump: int cos^4 over one period-width w is 3w/8.
  if (!piecewise_constant()) return alpha_ * alpha_ * (3.0 / 8.0) * (3.0 / 8.0) * w1_ * w2_;
  double s = 0.0;
  for (Index i = 0; i < arr_.value.rows(); ++i)
    for (Index j = 0; j < arr_.value.cols(); ++j)
      s += arr_.value(i, j) * arr_.value(i, j) *
           (arr_.x1[static_cast<std::size_t>(i) + 1] - arr_.x1[static_cast<std::size_t>(i)]) *
           (arr_.x2[static_cast<std::size_t>(j) + 1] - arr_.x2[static_cast<std::size_t>(j)]);
  return s;
}

} // namespace tvc
