#pragma once

// Evaluation of a whole string diagram: juxtapose the factors, apply every cap,
// and read the open wires off in the requested order.

#include <algorithm>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mixsem/error.hpp"
#include "mixsem/tensor.hpp"

namespace mixsem {

/// Caps over the concatenated axis list of factor_0 (x) factor_1 (x) ...
/// `output` lists the open axes in result order; empty means ascending.
struct IndexWiring {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<std::size_t> output;
};

namespace detail {

struct Labelled {
  std::size_t factor;   // owning factor
  std::size_t axis;     // axis within that factor
  std::size_t label;    // shared by both ends of a cap
};

// Validated wiring: per global axis its label, plus the label order of the output.
struct ResolvedWiring {
  std::vector<std::vector<std::size_t>> factor_labels;
  std::vector<std::size_t> output_labels;
};

template <Semiring S>
ResolvedWiring resolve_wiring(const IndexWiring& ws, std::span<const Tensor<S>> factors) {
  constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> dims;
  std::vector<std::size_t> owner;
  for (std::size_t f = 0; f < factors.size(); ++f) {
    for (std::size_t d : factors[f].shape()) {
      dims.push_back(d);
      owner.push_back(f);
    }
  }
  const std::size_t total = dims.size();
  std::vector<std::size_t> label(total, kUnset);
  std::size_t next_label = 0;
  for (const auto& [i, j] : ws.pairs) {
    if (i >= total || j >= total || i == j) {
      throw ShapeError("wiring: contraction pair (" + std::to_string(i) + "," + std::to_string(j) + ") out of range");
    }
    if (label[i] != kUnset || label[j] != kUnset) {
      throw ShapeError("wiring: axis used twice in contraction pairs");
    }
    if (dims[i] != dims[j]) {
      throw ShapeError("wiring: paired axes " + std::to_string(i) + "," + std::to_string(j) +
                       " have different dimensions");
    }
    label[i] = label[j] = next_label++;
  }
  ResolvedWiring out;
  std::vector<std::size_t> open;
  for (std::size_t g = 0; g < total; ++g) {
    if (label[g] == kUnset) open.push_back(g);
  }
  std::vector<std::size_t> order = ws.output.empty() ? open : ws.output;
  if (order.size() != open.size()) throw ShapeError("wiring: output order must list every open axis exactly once");
  std::vector<bool> seen(total, false);
  for (std::size_t g : order) {
    if (g >= total || label[g] != kUnset || seen[g]) throw ShapeError("wiring: invalid output axis");
    seen[g] = true;
  }
  for (std::size_t g : order) {
    label[g] = next_label;
    out.output_labels.push_back(next_label++);
  }
  out.factor_labels.resize(factors.size());
  for (std::size_t g = 0; g < total; ++g) out.factor_labels[owner[g]].push_back(label[g]);
  return out;
}

template <Semiring S>
struct LabelledTensor {
  Tensor<S> tensor;
  std::vector<std::size_t> labels;
};

// Caps whose two ends sit on the same tensor.
template <Semiring S>
void trace_internal(LabelledTensor<S>& lt) {
  for (bool found = true; found;) {
    found = false;
    for (std::size_t a = 0; a < lt.labels.size() && !found; ++a) {
      for (std::size_t b = a + 1; b < lt.labels.size(); ++b) {
        if (lt.labels[a] == lt.labels[b]) {
          lt.tensor = contract_pair(lt.tensor, a, b);
          lt.labels.erase(lt.labels.begin() + static_cast<std::ptrdiff_t>(b));
          lt.labels.erase(lt.labels.begin() + static_cast<std::ptrdiff_t>(a));
          found = true;
          break;
        }
      }
    }
  }
}

// Contracts every label shared by x and y; result axes are x's free axes then y's.
template <Semiring S>
LabelledTensor<S> contract_shared(const LabelledTensor<S>& x, const LabelledTensor<S>& y) {
  std::vector<std::size_t> x_free, x_shared, y_free, y_shared;
  for (std::size_t a = 0; a < x.labels.size(); ++a) {
    bool shared = false;
    for (std::size_t b = 0; b < y.labels.size(); ++b) {
      if (x.labels[a] == y.labels[b]) {
        x_shared.push_back(a);
        y_shared.push_back(b);
        shared = true;
        break;
      }
    }
    if (!shared) x_free.push_back(a);
  }
  for (std::size_t b = 0; b < y.labels.size(); ++b) {
    if (std::find(y_shared.begin(), y_shared.end(), b) == y_shared.end()) y_free.push_back(b);
  }

  std::vector<std::size_t> px = x_free;
  px.insert(px.end(), x_shared.begin(), x_shared.end());
  std::vector<std::size_t> py = y_shared;
  py.insert(py.end(), y_free.begin(), y_free.end());
  const Tensor<S> xm = permute(x.tensor, std::span<const std::size_t>(px));
  const Tensor<S> ym = permute(y.tensor, std::span<const std::size_t>(py));

  std::size_t m = 1, k = 1, n = 1;
  Shape out_shape;
  LabelledTensor<S> out;
  for (std::size_t a : x_free) {
    m *= x.tensor.dim(a);
    out_shape.push_back(x.tensor.dim(a));
    out.labels.push_back(x.labels[a]);
  }
  for (std::size_t a : x_shared) k *= x.tensor.dim(a);
  for (std::size_t b : y_free) {
    n *= y.tensor.dim(b);
    out_shape.push_back(y.tensor.dim(b));
    out.labels.push_back(y.labels[b]);
  }
  out.tensor = Tensor<S>(out_shape);
  auto& r = out.tensor;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t c = 0; c < k; ++c) {
      const auto xv = xm[i * k + c];
      if (xv == S::zero()) continue;
      for (std::size_t j = 0; j < n; ++j) r[i * n + j] = S::add(r[i * n + j], S::mul(xv, ym[c * n + j]));
    }
  }
  return out;
}

}  // namespace detail

/// Evaluates the diagram: factors are merged left to right, each merge summing
/// over every cap between the accumulated result and the incoming factor.
template <Semiring S>
Tensor<S> apply_wiring(const IndexWiring& ws, std::span<const Tensor<S>> factors) {
  if (factors.empty()) throw ShapeError("apply_wiring: no factors");
  const detail::ResolvedWiring rw = detail::resolve_wiring(ws, factors);

  detail::LabelledTensor<S> acc{factors[0], rw.factor_labels[0]};
  detail::trace_internal(acc);
  for (std::size_t f = 1; f < factors.size(); ++f) {
    detail::LabelledTensor<S> next{factors[f], rw.factor_labels[f]};
    detail::trace_internal(next);
    acc = detail::contract_shared(acc, next);
  }

  std::vector<std::size_t> perm;
  for (std::size_t want : rw.output_labels) {
    const auto it = std::find(acc.labels.begin(), acc.labels.end(), want);
    perm.push_back(static_cast<std::size_t>(it - acc.labels.begin()));
  }
  return permute(acc.tensor, std::span<const std::size_t>(perm));
}

template <Semiring S>
Tensor<S> apply_wiring(const IndexWiring& ws, const std::vector<Tensor<S>>& factors) {
  return apply_wiring(ws, std::span<const Tensor<S>>(factors));
}

}  // namespace mixsem
