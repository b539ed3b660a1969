#include <algorithm>
#include <cmath>

#include "detail.hpp"

namespace tvc::detail {

DifferenceOperator::DifferenceOperator(const Shape& shape)
    : nodes_(shape_size(shape)), edges_(tvc::edge_list(shape)), degree_(Eigen::ArrayXd::Zero(nodes_)),
      neighbours_(static_cast<std::size_t>(nodes_)) {
  for (Index e = 0; e < edges_.size(); ++e) {
    const Index a = edges_.tail[static_cast<std::size_t>(e)], b = edges_.head[static_cast<std::size_t>(e)];
    degree_[a] += 1.0;
    degree_[b] += 1.0;
    neighbours_[static_cast<std::size_t>(a)].push_back(b);
    neighbours_[static_cast<std::size_t>(b)].push_back(a);
  }
}

void DifferenceOperator::apply(const Eigen::ArrayXd& u, Eigen::ArrayXd& out) const {
  out.resize(edges());
  const Index* tail = edges_.tail.data();
  const Index* head = edges_.head.data();
  for (Index e = 0; e < edges(); ++e) out[e] = u[head[e]] - u[tail[e]];
}

void DifferenceOperator::adjoint(const Eigen::ArrayXd& p, Eigen::ArrayXd& out) const {
  out.setZero(nodes_);
  const Index* tail = edges_.tail.data();
  const Index* head = edges_.head.data();
  for (Index e = 0; e < edges(); ++e) {
    out[tail[e]] -= p[e];
    out[head[e]] += p[e];
  }
}

double DifferenceOperator::tv(const Eigen::ArrayXd& u) const {
  double s = 0.0;
  for (Index e = 0; e < edges(); ++e)
    s += std::abs(u[edges_.head[static_cast<std::size_t>(e)]] - u[edges_.tail[static_cast<std::size_t>(e)]]);
  return s;
}

FeasibleSet::FeasibleSet(const TVProblem& problem)
    : problem_(problem), sampled_(problem.samples.mask()),
      radius_sq_(static_cast<double>(problem.samples.m()) * problem.eta * problem.eta), multiplier_(0.0) {}

void FeasibleSet::project(Eigen::ArrayXd& y) { project(y, Eigen::ArrayXd::Ones(y.size())); }

void FeasibleSet::project(Eigen::ArrayXd& y, const Eigen::ArrayXd& weights) {
  const double M = problem_.M;
  for (Index k = 0; k < y.size(); ++k)
    if (!sampled_[static_cast<std::size_t>(k)]) y[k] = std::clamp(y[k], 0.0, M);

  const auto& idx = problem_.samples.indices;
  const auto& g = problem_.g;
  const Index m = problem_.samples.m();
  if (radius_sq_ == 0.0) {
    for (Index i = 0; i < m; ++i) y[idx[static_cast<std::size_t>(i)]] = g[i];
    return;
  }

  // Ball-and-box on the samples: x_i(l) = clamp(g_i + (y_i - g_i) / (1 + l w_i)),
  // with the multiplier l >= 0 found by safeguarded Newton on the residual.
  Eigen::ArrayXd d(m), w(m);
  for (Index i = 0; i < m; ++i) {
    const Index k = idx[static_cast<std::size_t>(i)];
    d[i] = y[k] - g[i];
    w[i] = weights[k];
  }
  auto residual = [&](double l, double* slope) {
    double s = 0.0, ds = 0.0;
    for (Index i = 0; i < m; ++i) {
      const double scale = 1.0 / (1.0 + l * w[i]);
      const double raw = g[i] + d[i] * scale;
      const double x = std::clamp(raw, 0.0, M);
      s += (x - g[i]) * (x - g[i]);
      if (x == raw) ds -= 2.0 * d[i] * d[i] * w[i] * scale * scale * scale;
    }
    if (slope) *slope = ds;
    return s;
  };
  auto write = [&](double l) {
    for (Index i = 0; i < m; ++i)
      y[idx[static_cast<std::size_t>(i)]] = std::clamp(g[i] + d[i] / (1.0 + l * w[i]), 0.0, M);
  };

  if (residual(0.0, nullptr) <= radius_sq_) {
    write(0.0);
    return;
  }
  double lo = 0.0;
  double hi = multiplier_ > 0.0 ? multiplier_ : 1.0;
  while (residual(hi, nullptr) > radius_sq_) {
    lo = hi;
    hi *= 4.0;
  }
  // The residual is convex and decreasing in l, so Newton iterates approach
  // the root from the infeasible side; a small probe past them closes the
  // bracket from the feasible side.
  double l = hi;
  for (int it = 0; it < 200; ++it) {
    double slope = 0.0;
    const double s = residual(l, &slope);
    if (s > radius_sq_) lo = l; else hi = l;
    if (hi - lo <= 1e-12 * hi) break;
    double next = slope < 0.0 ? l - (s - radius_sq_) / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (s > radius_sq_ && next - l <= 1e-9 * l) {
      const double probe = l + std::max(4.0 * (next - l), 1e-11 * l);
      if (probe < hi && residual(probe, nullptr) <= radius_sq_) hi = probe;
      if (hi - lo <= 1e-9 * hi) break;
    }
    l = next;
  }
  multiplier_ = hi;
  write(hi);
}

double FeasibleSet::support_lower_bound(const Eigen::ArrayXd& w) const {
  const double M = problem_.M;
  double free_part = 0.0;
  for (Index k = 0; k < w.size(); ++k)
    if (!sampled_[static_cast<std::size_t>(k)]) free_part += std::min(0.0, M * w[k]);
  const auto& idx = problem_.samples.indices;
  const auto& g = problem_.g;
  const Index m = problem_.samples.m();
  Eigen::ArrayXd ws(m);
  for (Index i = 0; i < m; ++i) ws[i] = w[idx[static_cast<std::size_t>(i)]];
  if (radius_sq_ == 0.0) return free_part + (g * ws).sum();

  // Lagrangian dual of min <x, w> over ball-and-box on the samples:
  //   phi(v) = min_{x in box} <x, w> + v/2 (|x - g|^2 - R^2),  x_i = clamp(g_i - w_i / v).
  // Every v >= 0 gives a lower bound; the maximizer makes |x(v) - g| = R.
  auto spread = [&](double v) {
    double s = 0.0;
    for (Index i = 0; i < m; ++i) {
      const double x = v > 0.0 ? std::clamp(g[i] - ws[i] / v, 0.0, M) : (ws[i] > 0.0 ? 0.0 : (ws[i] < 0.0 ? M : g[i]));
      s += (x - g[i]) * (x - g[i]);
    }
    return s;
  };
  auto phi = [&](double v) {
    double s = 0.0;
    for (Index i = 0; i < m; ++i) {
      if (v > 0.0) {
        const double x = std::clamp(g[i] - ws[i] / v, 0.0, M);
        s += ws[i] * x + 0.5 * v * (x - g[i]) * (x - g[i]);
      } else {
        s += std::min(0.0, M * ws[i]);
      }
    }
    return s - 0.5 * v * radius_sq_;
  };
  if (spread(0.0) <= radius_sq_) return free_part + phi(0.0);
  double lo = 0.0, hi = 1.0;
  while (spread(hi) > radius_sq_ && hi < 1e300) {
    lo = hi;
    hi *= 4.0;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
    const double mid = lo > 0.0 ? std::sqrt(lo * hi) : 0.5 * hi;
    if (spread(mid) > radius_sq_) lo = mid; else hi = mid;
  }
  return free_part + std::max(phi(lo), phi(hi));
}

double FeasibleSet::residual(const Eigen::ArrayXd& u) const {
  double s = 0.0;
  const auto& idx = problem_.samples.indices;
  for (Index i = 0; i < problem_.samples.m(); ++i) {
    const double r = u[idx[static_cast<std::size_t>(i)]] - problem_.g[i];
    s += r * r;
  }
  return s / static_cast<double>(problem_.samples.m()) - problem_.eta * problem_.eta;
}

Eigen::ArrayXd initial_guess(const TVProblem& problem) {
  Eigen::ArrayXd u = Eigen::ArrayXd::Constant(problem.size(), problem.g.mean());
  for (Index i = 0; i < problem.samples.m(); ++i) u[problem.samples.indices[static_cast<std::size_t>(i)]] = problem.g[i];
  return u;
}

double duality_gap(const DifferenceOperator& K, const FeasibleSet& C, const Eigen::ArrayXd& u,
                   const Eigen::ArrayXd& p) {
  Eigen::ArrayXd w;
  K.adjoint(p, w);
  return K.tv(u) - C.support_lower_bound(w);
}

bool gap_small(double gap, double tv, const TVProblem& problem, const SolverConfig& config) {
  return gap <= config.gap_tolerance * std::max(tv, problem.M);
}

} // namespace tvc::detail
