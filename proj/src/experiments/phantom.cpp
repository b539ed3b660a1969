#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "tvc/experiments.hpp"

namespace tvc {

namespace {

struct Ellipse {
  double intensity, semi_x, semi_y, centre_x, centre_y, angle_deg;
};

constexpr std::array<Ellipse, 10> kToft{{{1.0, 0.69, 0.92, 0.0, 0.0, 0.0},
                                         {-0.8, 0.6624, 0.874, 0.0, -0.0184, 0.0},
                                         {-0.2, 0.11, 0.31, 0.22, 0.0, -18.0},
                                         {-0.2, 0.16, 0.41, -0.22, 0.0, 18.0},
                                         {0.1, 0.21, 0.25, 0.0, 0.35, 0.0},
                                         {0.1, 0.046, 0.046, 0.0, 0.1, 0.0},
                                         {0.1, 0.046, 0.046, 0.0, -0.1, 0.0},
                                         {0.1, 0.046, 0.023, -0.08, -0.605, 0.0},
                                         {0.1, 0.023, 0.023, 0.0, -0.606, 0.0},
                                         {0.1, 0.023, 0.046, 0.06, -0.605, 0.0}}};

constexpr std::array<double, 10> kClassicIntensity{1.0, -0.98, -0.02, -0.02, 0.01,
                                                   0.01, 0.01, 0.01, 0.01, 0.01};

} // namespace

bool phantom_ellipse_contains(int row, double x, double y) {
  const Ellipse& e = kToft.at(static_cast<std::size_t>(row));
  const double phi = e.angle_deg * std::numbers::pi / 180.0;
  const double dx = x - e.centre_x, dy = y - e.centre_y;
  const double c = std::cos(phi), s = std::sin(phi);
  const double p = (dx * c + dy * s) / e.semi_x;
  const double q = (dy * c - dx * s) / e.semi_y;
  return p * p + q * q <= 1.0;
}

double phantom_intensity(int row, PhantomKind kind) {
  return kind == PhantomKind::Modified ? kToft.at(static_cast<std::size_t>(row)).intensity
                                       : kClassicIntensity.at(static_cast<std::size_t>(row));
}

ScalarField shepp_logan(Index n, PhantomKind kind) {
  if (n < 8) throw ParameterError("shepp_logan: n must be >= 8");
  ScalarField f({n, n}, 0.0);
  const double half = (static_cast<double>(n) - 1.0) / 2.0;
  for (Index i = 0; i < n; ++i) {
    const double y = (half - static_cast<double>(i)) / half;
    for (Index j = 0; j < n; ++j) {
      const double x = (static_cast<double>(j) - half) / half;
      double v = 0.0;
      for (int e = 0; e < static_cast<int>(kToft.size()); ++e)
        if (phantom_ellipse_contains(e, x, y)) v += phantom_intensity(e, kind);
      f[i * n + j] = std::clamp(v, 0.0, 1.0);
    }
  }
  f.box = 1.0;
  return f;
}

} // namespace tvc

namespace tvc {

std::string to_string(PhantomKind kind) { return kind == PhantomKind::Modified ? "modified" : "classic"; }

PhantomKind phantom_kind_from_string(const std::string& name) {
  if (name == "modified") return PhantomKind::Modified;
  if (name == "classic") return PhantomKind::Classic;
  throw ParameterError("unknown phantom '" + name + "' (expected modified or classic)");
}

} // namespace tvc
