#pragma once

// Dense tensors over a semiring and the compact-closed primitives on them:
// juxtaposition (tensor product), caps (pair contraction), cups (eta states),
// dagger, inner product, partial trace and index permutation.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "mixsem/error.hpp"
#include "mixsem/semiring.hpp"

namespace mixsem {

using Shape = std::vector<std::size_t>;

inline std::size_t shape_volume(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

inline std::string shape_string(const Shape& shape) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < shape.size(); ++i) os << (i ? "," : "") << shape[i];
  os << ')';
  return os.str();
}

/// Row-major dense tensor. A rank-0 tensor holds one scalar.
template <Semiring S>
class Tensor {
 public:
  using semiring = S;
  using value_type = typename S::value_type;

  Tensor() : Tensor(Shape{}) {}

  explicit Tensor(Shape shape) : shape_(std::move(shape)) {
    check_dims();
    data_.assign(shape_volume(shape_), S::zero());
  }

  Tensor(Shape shape, std::vector<value_type> data) : shape_(std::move(shape)), data_(std::move(data)) {
    check_dims();
    if (data_.size() != shape_volume(shape_)) {
      throw ShapeError("tensor data length " + std::to_string(data_.size()) + " does not match shape " +
                       shape_string(shape_));
    }
  }

  static Tensor scalar(value_type v) { return Tensor(Shape{}, {v}); }

  static Tensor vector(std::vector<value_type> v) {
    const std::size_t n = v.size();
    return Tensor(Shape{n}, std::move(v));
  }

  static Tensor matrix(std::initializer_list<std::initializer_list<value_type>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r ? rows.begin()->size() : 0;
    std::vector<value_type> data;
    data.reserve(r * c);
    for (const auto& row : rows) {
      if (row.size() != c) throw ShapeError("ragged matrix literal");
      data.insert(data.end(), row.begin(), row.end());
    }
    return Tensor(Shape{r, c}, std::move(data));
  }

  std::size_t rank() const { return shape_.size(); }
  const Shape& shape() const { return shape_; }
  std::size_t dim(std::size_t axis) const { return shape_.at(axis); }
  std::size_t size() const { return data_.size(); }

  std::span<const value_type> data() const { return data_; }
  std::span<value_type> data() { return data_; }

  value_type& operator[](std::size_t flat) { return data_[flat]; }
  const value_type& operator[](std::size_t flat) const { return data_[flat]; }

  value_type scalar_value() const {
    if (rank() != 0) throw ShapeError("scalar_value on tensor of rank " + std::to_string(rank()));
    return data_[0];
  }

  Shape strides() const {
    Shape s(shape_.size(), 1);
    for (std::size_t i = shape_.size(); i-- > 1;) s[i - 1] = s[i] * shape_[i];
    return s;
  }

  std::size_t flat_index(std::span<const std::size_t> idx) const {
    if (idx.size() != rank()) throw ShapeError("index arity does not match rank");
    std::size_t flat = 0;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      if (idx[i] >= shape_[i]) throw ShapeError("index out of range");
      flat = flat * shape_[i] + idx[i];
    }
    return flat;
  }

  value_type& at(std::initializer_list<std::size_t> idx) {
    return data_[flat_index(std::span<const std::size_t>(idx.begin(), idx.size()))];
  }
  const value_type& at(std::initializer_list<std::size_t> idx) const {
    return data_[flat_index(std::span<const std::size_t>(idx.begin(), idx.size()))];
  }
  value_type& at(std::span<const std::size_t> idx) { return data_[flat_index(idx)]; }
  const value_type& at(std::span<const std::size_t> idx) const { return data_[flat_index(idx)]; }

  /// Same data under a new shape of equal volume.
  Tensor reshaped(Shape shape) const { return Tensor(std::move(shape), data_); }

  friend bool operator==(const Tensor& a, const Tensor& b) { return a.shape_ == b.shape_ && a.data_ == b.data_; }

 private:
  void check_dims() const {
    for (std::size_t d : shape_) {
      if (d == 0) throw ShapeError("tensor dimensions must be positive, got " + shape_string(shape_));
    }
  }

  Shape shape_;
  std::vector<value_type> data_;
};

using RealTensor = Tensor<RealField>;
using BoolTensor = Tensor<BooleanSemiring>;

namespace detail {

// Odometer over a shape; returns false after the last multi-index.
inline bool next_index(std::vector<std::size_t>& idx, const Shape& shape) {
  for (std::size_t i = shape.size(); i-- > 0;) {
    if (++idx[i] < shape[i]) return true;
    idx[i] = 0;
  }
  return false;
}

}  // namespace detail

template <Semiring S>
Tensor<S> tensor_product(const Tensor<S>& a, const Tensor<S>& b) {
  Shape shape = a.shape();
  shape.insert(shape.end(), b.shape().begin(), b.shape().end());
  Tensor<S> out(shape);
  const std::size_t nb = b.size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < nb; ++j) out[i * nb + j] = S::mul(a[i], b[j]);
  }
  return out;
}

/// Reindex so that output axis k is input axis perm[k].
template <Semiring S>
Tensor<S> permute(const Tensor<S>& t, std::span<const std::size_t> perm) {
  const std::size_t r = t.rank();
  if (perm.size() != r) throw ShapeError("permutation length does not match rank");
  std::vector<bool> seen(r, false);
  for (std::size_t p : perm) {
    if (p >= r || seen[p]) throw ShapeError("invalid permutation");
    seen[p] = true;
  }
  Shape out_shape(r);
  for (std::size_t k = 0; k < r; ++k) out_shape[k] = t.dim(perm[k]);
  Tensor<S> out(out_shape);
  if (r == 0) {
    out[0] = t[0];
    return out;
  }
  const Shape in_strides = t.strides();
  Shape stride_for_out(r);
  for (std::size_t k = 0; k < r; ++k) stride_for_out[k] = in_strides[perm[k]];
  std::vector<std::size_t> idx(r, 0);
  std::size_t o = 0;
  do {
    std::size_t src = 0;
    for (std::size_t k = 0; k < r; ++k) src += idx[k] * stride_for_out[k];
    out[o++] = t[src];
  } while (detail::next_index(idx, out_shape));
  return out;
}

template <Semiring S>
Tensor<S> permute(const Tensor<S>& t, std::initializer_list<std::size_t> perm) {
  return permute(t, std::span<const std::size_t>(perm.begin(), perm.size()));
}

/// Cap on axes i and j: sum of the diagonal over the two axes. Rank drops by two.
template <Semiring S>
Tensor<S> contract_pair(const Tensor<S>& t, std::size_t i, std::size_t j) {
  if (i == j || i >= t.rank() || j >= t.rank()) throw ShapeError("contract_pair: invalid axes");
  if (t.dim(i) != t.dim(j)) {
    throw ShapeError("contract_pair: dimension mismatch " + std::to_string(t.dim(i)) + " vs " +
                     std::to_string(t.dim(j)));
  }
  if (i > j) std::swap(i, j);
  // Move the pair to the back, then sum the diagonal blocks.
  std::vector<std::size_t> perm;
  for (std::size_t k = 0; k < t.rank(); ++k) {
    if (k != i && k != j) perm.push_back(k);
  }
  perm.push_back(i);
  perm.push_back(j);
  const Tensor<S> moved = permute(t, std::span<const std::size_t>(perm));
  Shape out_shape(moved.shape().begin(), moved.shape().end() - 2);
  Tensor<S> out(out_shape);
  const std::size_t d = t.dim(i);
  const std::size_t block = d * d;
  for (std::size_t o = 0; o < out.size(); ++o) {
    auto acc = S::zero();
    for (std::size_t k = 0; k < d; ++k) acc = S::add(acc, moved[o * block + k * d + k]);
    out[o] = acc;
  }
  return out;
}

/// The cup: one on the diagonal, zero elsewhere.
template <Semiring S = RealField>
Tensor<S> eta_state(std::size_t d) {
  if (d == 0) throw ShapeError("eta_state: dimension must be positive");
  Tensor<S> out(Shape{d, d});
  for (std::size_t k = 0; k < d; ++k) out[k * d + k] = S::one();
  return out;
}

/// Swaps the row and column index groups and conjugates entries.
/// The result lists the column axes first, then the row axes.
template <Semiring S>
Tensor<S> dagger(const Tensor<S>& t, std::span<const std::size_t> rows, std::span<const std::size_t> cols) {
  if (rows.size() + cols.size() != t.rank()) throw ShapeError("dagger: index groups do not partition the rank");
  std::vector<std::size_t> perm(cols.begin(), cols.end());
  perm.insert(perm.end(), rows.begin(), rows.end());
  Tensor<S> out = permute(t, std::span<const std::size_t>(perm));
  for (auto& v : out.data()) v = S::conj(v);
  return out;
}

/// Matrix dagger: transpose plus conjugation.
template <Semiring S>
Tensor<S> dagger(const Tensor<S>& m) {
  if (m.rank() != 2) throw ShapeError("dagger: expected a matrix");
  const std::size_t rows[] = {0};
  const std::size_t cols[] = {1};
  return dagger(m, std::span<const std::size_t>(rows), std::span<const std::size_t>(cols));
}

template <Semiring S>
typename S::value_type inner_product(const Tensor<S>& u, const Tensor<S>& v) {
  if (u.shape() != v.shape()) {
    throw ShapeError("inner_product: shape mismatch " + shape_string(u.shape()) + " vs " + shape_string(v.shape()));
  }
  auto acc = S::zero();
  for (std::size_t i = 0; i < u.size(); ++i) acc = S::add(acc, S::mul(S::conj(u[i]), v[i]));
  return acc;
}

enum class Subsystem { A, B };

/// Partial trace of an operator on A (x) B. Accepts a (dA*dB)x(dA*dB) matrix
/// or a rank-4 tensor ordered (a, b, a', b'). Returns a matrix.
template <Semiring S>
Tensor<S> partial_trace(const Tensor<S>& op, std::size_t dim_a, std::size_t dim_b, Subsystem over) {
  const std::size_t n = dim_a * dim_b;
  Tensor<S> four;
  if (op.rank() == 2 && op.dim(0) == n && op.dim(1) == n) {
    four = op.reshaped(Shape{dim_a, dim_b, dim_a, dim_b});
  } else if (op.rank() == 4 && op.shape() == Shape{dim_a, dim_b, dim_a, dim_b}) {
    four = op;
  } else {
    throw ShapeError("partial_trace: operator shape " + shape_string(op.shape()) + " does not match " +
                     std::to_string(dim_a) + "x" + std::to_string(dim_b));
  }
  return over == Subsystem::B ? contract_pair(four, 1, 3) : contract_pair(four, 0, 2);
}

template <Semiring S = RealField>
Tensor<S> ones(Shape shape) {
  Tensor<S> t(std::move(shape));
  for (auto& v : t.data()) v = S::one();
  return t;
}

// Real-only helpers.

inline RealTensor scaled(RealTensor t, double factor) {
  for (auto& v : t.data()) v *= factor;
  return t;
}

inline RealTensor added(RealTensor a, const RealTensor& b) {
  if (a.shape() != b.shape()) throw ShapeError("added: shape mismatch");
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

inline double max_abs_diff(const RealTensor& a, const RealTensor& b) {
  if (a.shape() != b.shape()) {
    throw ShapeError("max_abs_diff: shape mismatch " + shape_string(a.shape()) + " vs " + shape_string(b.shape()));
  }
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double norm(const RealTensor& t) {
  double s = 0.0;
  for (double v : t.data()) s += v * v;
  return std::sqrt(s);
}

}  // namespace mixsem
