#include <algorithm>
#include <cmath>
#include <limits>

#include "tvc/covering.hpp"

namespace tvc {

namespace {

void require_in_range(const ScalarField& u, const QuantGrid& grid) {
  if (!u.all_finite() || (u.values().abs() > grid.M).any())
    throw PreconditionError("quantize: values must lie in [-M, M]");
}

double tv_of_indices(const std::vector<long long>& j, const EdgeList& edges) {
  long long s = 0;
  for (Index e = 0; e < edges.size(); ++e)
    s += std::llabs(j[static_cast<std::size_t>(edges.head[static_cast<std::size_t>(e)])] -
                    j[static_cast<std::size_t>(edges.tail[static_cast<std::size_t>(e)])]);
  return static_cast<double>(s);
}

ScalarField from_indices(const Shape& shape, const std::vector<long long>& j, const QuantGrid& grid) {
  ScalarField q(shape);
  for (std::size_t k = 0; k < j.size(); ++k) q[static_cast<Index>(k)] = grid.level(j[k]);
  return q;
}

} // namespace

std::vector<double> QuantGrid::levels() const {
  std::vector<double> out;
  for (long long j = -kappa; j <= kappa; ++j) out.push_back(level(j));
  return out;
}

QuantGrid quant_grid(double M, double r) {
  if (!(r > 0.0) || !(M > 0.0)) throw ParameterError("quant_grid: requires r > 0 and M > 0");
  return {r, M, static_cast<long long>(std::ceil(2.0 * M / r))};
}

std::vector<long long> admissible_levels(double x, const QuantGrid& grid) {
  std::vector<long long> out;
  const auto base = static_cast<long long>(std::floor(x / grid.step()));
  for (long long j = base - 1; j <= base + 2; ++j)
    if (j >= -grid.kappa && j <= grid.kappa && std::abs(x - grid.level(j)) <= grid.r / 2.0) out.push_back(j);
  return out;
}

ScalarField quantize_tv_1d(const ScalarField& u, const QuantGrid& grid) {
  if (u.dim() != 1) throw ParameterError("quantize_tv_1d: field must be 1-D");
  require_in_range(u, grid);
  const Index n = u.size();
  std::vector<std::vector<long long>> cand(static_cast<std::size_t>(n));
  std::vector<std::vector<long long>> cost(static_cast<std::size_t>(n));
  std::vector<std::vector<std::size_t>> from(static_cast<std::size_t>(n));
  for (Index k = 0; k < n; ++k) {
    auto& c = cand[static_cast<std::size_t>(k)];
    c = admissible_levels(u[k], grid);
    if (c.empty()) throw NumericalError("quantize_tv_1d: no admissible level");
    cost[static_cast<std::size_t>(k)].assign(c.size(), 0);
    from[static_cast<std::size_t>(k)].assign(c.size(), 0);
  }
  for (std::size_t k = 1; k < cand.size(); ++k) {
    for (std::size_t a = 0; a < cand[k].size(); ++a) {
      long long best = std::numeric_limits<long long>::max();
      for (std::size_t b = 0; b < cand[k - 1].size(); ++b) {
        const long long c = cost[k - 1][b] + std::llabs(cand[k][a] - cand[k - 1][b]);
        if (c < best) {
          best = c;
          from[k][a] = b;
        }
      }
      cost[k][a] = best;
    }
  }
  std::vector<long long> j(cand.size());
  std::size_t pick = static_cast<std::size_t>(
      std::min_element(cost.back().begin(), cost.back().end()) - cost.back().begin());
  for (std::size_t k = cand.size(); k-- > 0;) {
    j[k] = cand[k][pick];
    pick = from[k][pick];
  }
  return from_indices(u.shape(), j, grid);
}

ScalarField shifted_floor_quantize(const ScalarField& u, const QuantGrid& grid, double theta) {
  require_in_range(u, grid);
  if (!(theta >= 0.0 && theta < 1.0)) throw ParameterError("shifted_floor_quantize: theta must lie in [0, 1)");
  std::vector<long long> j(static_cast<std::size_t>(u.size()));
  for (Index k = 0; k < u.size(); ++k) {
    long long v = static_cast<long long>(std::floor(u[k] / grid.step() + theta));
    // Guard against rounding pushing the level just outside the r/2 window.
    while (grid.level(v) - u[k] > grid.r / 2.0) --v;
    while (u[k] - grid.level(v) > grid.r / 2.0) ++v;
    j[static_cast<std::size_t>(k)] = std::clamp(v, -grid.kappa, grid.kappa);
  }
  return from_indices(u.shape(), j, grid);
}

ScalarField best_shifted_floor_quantize(const ScalarField& u, const QuantGrid& grid) {
  require_in_range(u, grid);
  // The quantizer is piecewise constant in theta with breaks at frac(-u / step).
  std::vector<double> breaks{0.0};
  for (Index k = 0; k < u.size(); ++k) {
    const double x = u[k] / grid.step();
    const double t = std::ceil(x) - x;
    if (t > 0.0 && t < 1.0) breaks.push_back(t);
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  ScalarField best;
  double best_tv = std::numeric_limits<double>::infinity();
  for (double theta : breaks) {
    ScalarField q = shifted_floor_quantize(u, grid, theta);
    const double tv = tv_aniso(q);
    if (tv < best_tv) {
      best_tv = tv;
      best = std::move(q);
    }
  }
  return best;
}

std::optional<ScalarField> exhaustive_tv_quantization(const ScalarField& u, const QuantGrid& grid) {
  require_in_range(u, grid);
  const Index n = u.size();
  if (n > 12) throw ParameterError("exhaustive_tv_quantization: |Omega| must be <= 12");
  std::vector<std::vector<long long>> cand(static_cast<std::size_t>(n));
  for (Index k = 0; k < n; ++k) cand[static_cast<std::size_t>(k)] = admissible_levels(u[k], grid);

  const EdgeList edges = edge_list(u.shape());
  const double target = tv_aniso(u) / grid.step();
  std::vector<std::size_t> digit(cand.size(), 0);
  std::vector<long long> j(cand.size()), best_j;
  double best = std::numeric_limits<double>::infinity();
  for (;;) {
    for (std::size_t k = 0; k < cand.size(); ++k) j[k] = cand[k][digit[k]];
    const double tv = tv_of_indices(j, edges);
    if (tv < best) {
      best = tv;
      best_j = j;
    }
    std::size_t pos = cand.size();
    while (pos > 0) {
      if (++digit[pos - 1] < cand[pos - 1].size()) break;
      digit[pos - 1] = 0;
      --pos;
    }
    if (pos == 0) break;
  }
  if (best > target) return std::nullopt;
  return from_indices(u.shape(), best_j, grid);
}

} // namespace tvc
