#pragma once

// Grid containers and anisotropic difference operators.
//
// Linear order is row-major with axis 1 (index 0 here) slowest. Forward
// differences exist only where both endpoints lie in the grid; there is no
// periodic or reflected padding anywhere in this header.

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tvc/error.hpp"

namespace tvc {

using Index = Eigen::Index;
using Shape = std::vector<Index>;

inline Index shape_size(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), Index{1}, std::multiplies<>());
}

inline Shape hypercube(int dim, Index n) { return Shape(static_cast<std::size_t>(dim), n); }

/// Row-major strides, last axis contiguous.
inline std::vector<Index> strides_of(const Shape& shape) {
  std::vector<Index> s(shape.size(), 1);
  for (std::size_t j = shape.size(); j-- > 1;) s[j - 1] = s[j] * shape[j];
  return s;
}

template <typename Scalar>
class BasicField {
public:
  using Values = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

  BasicField() = default;

  explicit BasicField(Shape shape, Scalar fill = Scalar(0))
      : shape_(std::move(shape)), values_(Values::Constant(shape_size(shape_), fill)) {
    validate_shape();
  }

  BasicField(Shape shape, Values values) : shape_(std::move(shape)), values_(std::move(values)) {
    validate_shape();
    if (values_.size() != shape_size(shape_))
      throw ParameterError("field: value count does not match shape");
  }

  int dim() const { return static_cast<int>(shape_.size()); }
  const Shape& shape() const { return shape_; }
  Index extent(int axis) const { return shape_[static_cast<std::size_t>(axis)]; }
  Index size() const { return values_.size(); }

  const Values& values() const { return values_; }
  Values& values() { return values_; }

  Scalar operator[](Index k) const { return values_[k]; }
  Scalar& operator[](Index k) { return values_[k]; }

  Scalar at(std::initializer_list<Index> coords) const { return values_[linear(coords)]; }

  Index linear(std::initializer_list<Index> coords) const {
    if (coords.size() != shape_.size()) throw ParameterError("field: coordinate rank mismatch");
    Index k = 0;
    std::size_t j = 0;
    for (Index c : coords) {
      if (c < 0 || c >= shape_[j]) throw ParameterError("field: coordinate out of range");
      k = k * shape_[j++] + c;
    }
    return k;
  }

  bool all_finite() const { return values_.isFinite().all(); }

  /// Optional [0, M] tag carried by f, g and solver outputs.
  std::optional<Scalar> box;

private:
  void validate_shape() const {
    if (shape_.empty()) throw ParameterError("field: dimension must be >= 1");
    for (Index n : shape_)
      if (n < 1) throw ParameterError("field: extents must be >= 1");
  }

  Shape shape_;
  Values values_;
};

using ScalarField = BasicField<double>;

/// Shape of the axis-j forward-difference component.
inline Shape difference_shape(const Shape& shape, int axis) {
  Shape s = shape;
  s[static_cast<std::size_t>(axis)] = std::max<Index>(shape[static_cast<std::size_t>(axis)] - 1, 0);
  return s;
}

template <typename Scalar>
struct BasicGradient {
  // components[j] holds u[k+e_j] - u[k] in row-major order over difference_shape(shape, j).
  std::vector<Eigen::Array<Scalar, Eigen::Dynamic, 1>> components;
  std::vector<Shape> shapes;

  Scalar l1_norm() const {
    Scalar s(0);
    for (const auto& c : components) s += c.abs().sum();
    return s;
  }
};

using GradientField = BasicGradient<double>;

/// Every forward-difference pair (tail, head) in the order the gradient
/// components are flattened: axis by axis, row-major within an axis.
struct EdgeList {
  std::vector<Index> tail;
  std::vector<Index> head;
  std::vector<std::size_t> axis_offset;  // first edge of each axis, plus end

  Index size() const { return static_cast<Index>(tail.size()); }
};

inline EdgeList edge_list(const Shape& shape) {
  EdgeList edges;
  const auto strides = strides_of(shape);
  const Index n = shape_size(shape);
  for (std::size_t j = 0; j < shape.size(); ++j) {
    edges.axis_offset.push_back(edges.tail.size());
    for (Index k = 0; k < n; ++k) {
      const Index coord = (k / strides[j]) % shape[j];
      if (coord + 1 < shape[j]) {
        edges.tail.push_back(k);
        edges.head.push_back(k + strides[j]);
      }
    }
  }
  edges.axis_offset.push_back(edges.tail.size());
  return edges;
}

template <typename Scalar>
BasicGradient<Scalar> forward_diff(const BasicField<Scalar>& u) {
  const EdgeList edges = edge_list(u.shape());
  BasicGradient<Scalar> grad;
  for (int j = 0; j < u.dim(); ++j) {
    const std::size_t begin = edges.axis_offset[static_cast<std::size_t>(j)];
    const std::size_t end = edges.axis_offset[static_cast<std::size_t>(j) + 1];
    Eigen::Array<Scalar, Eigen::Dynamic, 1> c(static_cast<Index>(end - begin));
    for (std::size_t e = begin; e < end; ++e)
      c[static_cast<Index>(e - begin)] = u[edges.head[e]] - u[edges.tail[e]];
    grad.components.push_back(std::move(c));
    grad.shapes.push_back(difference_shape(u.shape(), j));
  }
  return grad;
}

/// Anisotropic TV seminorm: sum of |forward differences| over all axes.
template <typename Scalar>
Scalar tv_aniso(const BasicField<Scalar>& u) {
  const auto strides = strides_of(u.shape());
  Scalar total(0);
  for (int j = 0; j < u.dim(); ++j) {
    const Index n = u.extent(j), s = strides[static_cast<std::size_t>(j)];
    for (Index k = 0; k < u.size(); ++k)
      if ((k / s) % n + 1 < n) total += std::abs(u[k + s] - u[k]);
  }
  return total;
}

/// Number of grid points whose full forward stencil exists and carries a
/// nonzero total difference (strictly above `threshold`).
template <typename Scalar>
Index grad_support(const BasicField<Scalar>& u, Scalar threshold = Scalar(0)) {
  const auto strides = strides_of(u.shape());
  Index count = 0;
  for (Index k = 0; k < u.size(); ++k) {
    bool interior = true;
    Scalar sum(0);
    for (int j = 0; j < u.dim() && interior; ++j) {
      const Index s = strides[static_cast<std::size_t>(j)];
      if ((k / s) % u.extent(j) + 1 >= u.extent(j)) {
        interior = false;
      } else {
        sum += std::abs(u[k + s] - u[k]);
      }
    }
    if (interior && sum > threshold) ++count;
  }
  return count;
}

template <typename Scalar>
BasicField<Scalar> clamp_box(const BasicField<Scalar>& u, Scalar M) {
  if (!(M > Scalar(0))) throw ParameterError("clamp_box: M must be positive");
  BasicField<Scalar> out(u.shape(), u.values().max(Scalar(0)).min(M).eval());
  out.box = M;
  return out;
}

/// The observed index set; indices strictly increasing.
struct SampleSet {
  Index total = 0;
  std::vector<Index> indices;

  Index m() const { return static_cast<Index>(indices.size()); }
  double density() const { return static_cast<double>(m()) / static_cast<double>(total); }

  /// Throws ParameterError unless the invariants hold.
  void validate() const {
    if (indices.empty() || m() > total) throw ParameterError("sample set: need 1 <= m <= total");
    for (std::size_t i = 0; i < indices.size(); ++i) {
      if (indices[i] < 0 || indices[i] >= total)
        throw ParameterError("sample set: index out of range");
      if (i > 0 && indices[i] <= indices[i - 1])
        throw ParameterError("sample set: indices must be strictly increasing");
    }
  }

  std::vector<bool> mask() const {
    std::vector<bool> in(static_cast<std::size_t>(total), false);
    for (Index k : indices) in[static_cast<std::size_t>(k)] = true;
    return in;
  }
};

/// Uniform draw from all m-subsets of {0..total-1}; deterministic per seed.
SampleSet sample_uniform_subset(Index total, Index m, std::uint64_t seed);

/// Values of `u` at the sampled indices.
template <typename Scalar>
Eigen::Array<Scalar, Eigen::Dynamic, 1> restrict_to(const BasicField<Scalar>& u,
                                                   const SampleSet& samples) {
  Eigen::Array<Scalar, Eigen::Dynamic, 1> out(samples.m());
  for (Index i = 0; i < samples.m(); ++i) out[i] = u[samples.indices[static_cast<std::size_t>(i)]];
  return out;
}

/// (1/|L|) sum_{k in L} |u[k] - g[k]|^2 with g given in sample order.
template <typename Scalar, typename Derived>
Scalar masked_mse(const BasicField<Scalar>& u, const Eigen::ArrayBase<Derived>& g,
                  const SampleSet& samples) {
  if (g.size() != samples.m()) throw ParameterError("masked_mse: g does not match the sample set");
  if (samples.total != u.size()) throw ParameterError("masked_mse: sample set does not match field");
  Scalar s(0);
  for (Index i = 0; i < samples.m(); ++i) {
    const Scalar r = u[samples.indices[static_cast<std::size_t>(i)]] - g[i];
    s += r * r;
  }
  return s / static_cast<Scalar>(samples.m());
}

/// Population variance of the observed values.
template <typename Derived>
typename Derived::Scalar variance_on(const Eigen::ArrayBase<Derived>& g) {
  using Scalar = typename Derived::Scalar;
  if (g.size() < 1) throw ParameterError("variance_on: empty sample");
  const Scalar mean = g.mean();
  return (g - mean).square().sum() / static_cast<Scalar>(g.size());
}

} // namespace tvc
