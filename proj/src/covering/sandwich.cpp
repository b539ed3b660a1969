#include <algorithm>
#include <cmath>

#include "tvc/covering.hpp"

namespace tvc {

namespace {

double sup_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

std::vector<std::vector<double>> enumerate_class(const SandwichInstance& inst) {
  const Index n = shape_size(inst.shape);
  std::vector<double> values;
  for (int i = 0; i < inst.points; ++i)
    values.push_back(-inst.M + 2.0 * inst.M * i / (inst.points - 1));
  const EdgeList edges = edge_list(inst.shape);
  std::vector<std::vector<double>> members;
  std::vector<int> digit(static_cast<std::size_t>(n), 0);
  std::vector<double> u(static_cast<std::size_t>(n));
  for (;;) {
    for (std::size_t k = 0; k < u.size(); ++k) u[k] = values[static_cast<std::size_t>(digit[k])];
    double tv = 0.0;
    for (Index e = 0; e < edges.size(); ++e)
      tv += std::abs(u[static_cast<std::size_t>(edges.head[static_cast<std::size_t>(e)])] -
                     u[static_cast<std::size_t>(edges.tail[static_cast<std::size_t>(e)])]);
    if (tv <= inst.tv_max * (1.0 + 1e-12) + 1e-12) members.push_back(u);
    std::size_t pos = u.size();
    while (pos > 0) {
      if (++digit[pos - 1] < inst.points) break;
      digit[pos - 1] = 0;
      --pos;
    }
    if (pos == 0) break;
  }
  return members;
}

} // namespace

CoveringSandwich brute_force_covering_sandwich(const SandwichInstance& inst, double r) {
  if (shape_size(inst.shape) > 4) throw ParameterError("covering sandwich: |Omega| must be <= 4");
  if (inst.points < 2 || inst.points > 6) throw ParameterError("covering sandwich: points must lie in [2, 6]");
  if (!(r > 0.0) || !(inst.M > 0.0) || !(inst.tv_max >= 0.0))
    throw ParameterError("covering sandwich: requires r > 0, M > 0, T >= 0");
  const auto members = enumerate_class(inst);
  if (members.size() > 5000) throw ParameterError("covering sandwich: class exceeds 5000 elements");
  const std::size_t n = members.size();

  std::vector<std::vector<char>> close(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      close[i][j] = close[j][i] = sup_distance(members[i], members[j]) <= r ? 1 : 0;

  CoveringSandwich out;
  out.class_size = static_cast<long long>(n);

  // Greedy set cover; ties go to the lowest index.
  std::vector<char> covered(n, 0);
  std::vector<std::size_t> centers;
  std::size_t remaining = n;
  while (remaining > 0) {
    std::size_t best = 0, best_gain = 0;
    for (std::size_t c = 0; c < n; ++c) {
      std::size_t gain = 0;
      for (std::size_t j = 0; j < n; ++j) gain += (close[c][j] && !covered[j]) ? 1 : 0;
      if (gain > best_gain) {
        best_gain = gain;
        best = c;
      }
    }
    centers.push_back(best);
    for (std::size_t j = 0; j < n; ++j)
      if (close[best][j] && !covered[j]) {
        covered[j] = 1;
        --remaining;
      }
  }
  out.upper = static_cast<long long>(centers.size());

  out.cover_verified = std::all_of(members.begin(), members.end(), [&](const std::vector<double>& u) {
    return std::any_of(centers.begin(), centers.end(),
                       [&](std::size_t c) { return sup_distance(u, members[c]) <= r; });
  });

  // A closed r-ball holds at most one point of a set with pairwise distance
  // > 2r, so such a packing size is a lower bound on the covering number.
  std::vector<std::size_t> packing;
  for (std::size_t i = 0; i < n; ++i) {
    const bool separated = std::all_of(packing.begin(), packing.end(), [&](std::size_t j) {
      return sup_distance(members[i], members[j]) > 2.0 * r;
    });
    if (separated) packing.push_back(i);
  }
  out.lower = static_cast<long long>(packing.size());
  return out;
}

} // namespace tvc
