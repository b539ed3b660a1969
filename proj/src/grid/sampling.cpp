#include <algorithm>
#include <numeric>

#include "tvc/grid.hpp"
#include "tvc/rng.hpp"

namespace tvc {

SampleSet sample_uniform_subset(Index total, Index m, std::uint64_t seed) {
  if (total < 1 || m < 1 || m > total)
    throw ParameterError("sample_uniform_subset: need 1 <= m <= total");

  // Partial Fisher-Yates: the first m slots end up a uniform m-subset.
  std::vector<Index> pool(static_cast<std::size_t>(total));
  std::iota(pool.begin(), pool.end(), Index{0});
  Rng rng(seed);
  for (Index i = 0; i < m; ++i) {
    const auto j = i + static_cast<Index>(rng.below(static_cast<std::uint64_t>(total - i)));
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
  }

  SampleSet out;
  out.total = total;
  out.indices.assign(pool.begin(), pool.begin() + m);
  std::sort(out.indices.begin(), out.indices.end());
  return out;
}

} // namespace tvc
