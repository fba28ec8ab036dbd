#pragma once

// The basis-induced commutative Frobenius algebra (copy, delete, merge, unit),
// its doubled form on operators, and the non-commutative operator algebra F_D.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <type_traits>
#include <vector>

#include "mixsem/cpm.hpp"
#include "mixsem/error.hpp"
#include "mixsem/tensor.hpp"
#include "mixsem/wiring.hpp"

namespace mixsem::frobenius {

/// Copy: v on the diagonal of a d x d matrix.
template <Semiring S>
Tensor<S> delta(const Tensor<S>& v) {
  if (v.rank() != 1) throw ShapeError("delta: expected a vector");
  const std::size_t d = v.dim(0);
  Tensor<S> out(Shape{d, d});
  for (std::size_t i = 0; i < d; ++i) out[i * d + i] = v[i];
  return out;
}

/// Merge: pointwise product.
template <Semiring S>
Tensor<S> mu(const Tensor<S>& u, const Tensor<S>& w) {
  if (u.rank() != 1 || u.shape() != w.shape()) {
    throw ShapeError("mu: expected vectors of equal length, got " + shape_string(u.shape()) + " and " +
                     shape_string(w.shape()));
  }
  Tensor<S> out(u.shape());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = S::mul(u[i], w[i]);
  return out;
}

/// Delete applied to v: the sum of its components.
template <Semiring S>
typename S::value_type iota(const Tensor<S>& v) {
  auto acc = S::zero();
  for (auto x : v.data()) acc = S::add(acc, x);
  return acc;
}

/// Unit: the all-ones vector.
template <Semiring S = RealField>
Tensor<S> zeta(std::size_t d) {
  return ones<S>(Shape{d});
}

/// Entrywise product of two operators (the doubled merge).
cpm::PositiveOperator hadamard_double(const cpm::PositiveOperator& p, const cpm::PositiveOperator& q);

/// Entrywise product of two equal-shape tensors.
template <Semiring S>
Tensor<S> hadamard(const Tensor<S>& a, const Tensor<S>& b) {
  if (a.shape() != b.shape()) throw ShapeError("hadamard: shape mismatch");
  Tensor<S> out(a.shape());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = S::mul(a[i], b[i]);
  return out;
}

/// F_D multiplication on states: the matrix product rho * sigma.
RealTensor mu_noncomm(const RealTensor& rho, const RealTensor& sigma);

enum class AlgebraKind { CommutativeBasis, DoubledBasis, NoncommutativeFD };

std::string to_string(AlgebraKind k);

/// Structure tensors over a carrier of dimension n (d, or d*d for the two
/// operator algebras, with composite index (a, b) -> a * d + b).
///   mul[out, in1, in2], unit[out], comul[out1, out2, in], counit[in]
template <Semiring S>
struct FrobeniusAlgebra {
  AlgebraKind kind = AlgebraKind::CommutativeBasis;
  std::size_t d = 1;
  std::size_t n = 1;
  Tensor<S> mul;
  Tensor<S> unit;
  Tensor<S> comul;
  Tensor<S> counit;

  static FrobeniusAlgebra make(AlgebraKind kind, std::size_t d) {
    if (d == 0) throw ShapeError("Frobenius algebra dimension must be positive");
    FrobeniusAlgebra a;
    a.kind = kind;
    a.d = d;
    a.n = kind == AlgebraKind::CommutativeBasis ? d : d * d;
    const std::size_t n = a.n;
    a.mul = Tensor<S>(Shape{n, n, n});
    a.comul = Tensor<S>(Shape{n, n, n});
    if (kind == AlgebraKind::NoncommutativeFD) {
      // (a,b) . (b,c) -> (a,c); unit vec(I); counit the trace.
      a.unit = Tensor<S>(Shape{n});
      a.counit = Tensor<S>(Shape{n});
      for (std::size_t x = 0; x < d; ++x) {
        a.unit[x * d + x] = S::one();
        a.counit[x * d + x] = S::one();
        for (std::size_t y = 0; y < d; ++y) {
          for (std::size_t z = 0; z < d; ++z) {
            a.mul.at({x * d + z, x * d + y, y * d + z}) = S::one();
            a.comul.at({x * d + y, y * d + z, x * d + z}) = S::one();
          }
        }
      }
    } else {
      // Doubled basis: the copying spider on composite indices, so the merge
      // is the Hadamard product and the unit is the all-ones matrix.
      for (std::size_t i = 0; i < n; ++i) {
        a.mul.at({i, i, i}) = S::one();
        a.comul.at({i, i, i}) = S::one();
      }
      a.unit = ones<S>(Shape{n});
      a.counit = ones<S>(Shape{n});
    }
    return a;
  }
};

struct LawReport {
  double associativity = 0.0;
  double unit = 0.0;
  double coassociativity = 0.0;
  double counit = 0.0;
  double frobenius = 0.0;
  double tolerance = 0.0;
  std::vector<std::string> failures;

  bool passed() const { return failures.empty(); }
  double max_deviation() const;
};

inline constexpr std::size_t kMaxLawDim = 8;

namespace detail {

template <Semiring S>
double deviation(const Tensor<S>& a, const Tensor<S>& b) {
  if (a.shape() != b.shape()) return std::numeric_limits<double>::infinity();
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if constexpr (std::is_same_v<S, RealField>) {
      m = std::max(m, std::abs(a[i] - b[i]));
    } else {
      if (a[i] != b[i]) m = 1.0;
    }
  }
  return m;
}

template <Semiring S>
Tensor<S> random_tensor(Shape shape, std::mt19937_64& rng) {
  Tensor<S> t(std::move(shape));
  if constexpr (std::is_same_v<S, RealField>) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (auto& v : t.data()) v = u(rng);
  } else {
    std::bernoulli_distribution b(0.5);
    for (auto& v : t.data()) v = b(rng) ? S::one() : S::zero();
  }
  return t;
}

template <Semiring S>
Tensor<S> wire(const IndexWiring& w, std::initializer_list<const Tensor<S>*> fs) {
  std::vector<Tensor<S>> factors;
  for (const auto* f : fs) factors.push_back(*f);
  return apply_wiring(w, factors);
}

}  // namespace detail

/// Evaluates associativity, both unit laws, coassociativity, both counit laws and
/// the Frobenius condition on `trials` random inputs each. The structure
/// tensors are always the first factors so their sparsity drives the contraction.
template <Semiring S>
LawReport check_frobenius_laws(const FrobeniusAlgebra<S>& alg, std::size_t trials, std::uint64_t seed = 1,
                               std::size_t max_dim = kMaxLawDim) {
  if (alg.d > max_dim) {
    throw ShapeError("check_frobenius_laws: dimension " + std::to_string(alg.d) + " exceeds maximum " +
                     std::to_string(max_dim));
  }
  LawReport r;
  r.tolerance = std::is_same_v<S, RealField> ? 1e-12 : 0.0;
  std::mt19937_64 rng(seed);
  const std::size_t n = alg.n;
  const auto& m = alg.mul;
  const auto& c = alg.comul;
  for (std::size_t t = 0; t < trials; ++t) {
    const Tensor<S> x3 = detail::random_tensor<S>(Shape{n, n, n}, rng);
    const Tensor<S> x2 = detail::random_tensor<S>(Shape{n, n}, rng);
    const Tensor<S> x1 = detail::random_tensor<S>(Shape{n}, rng);

    // mul(mul(x0, x1), x2) vs mul(x0, mul(x1, x2)); factors mul, X, mul.
    const auto assoc_l = detail::wire<S>({{{1, 3}, {2, 4}, {0, 7}, {5, 8}}, {6}}, {&m, &x3, &m});
    const auto assoc_r = detail::wire<S>({{{1, 4}, {2, 5}, {3, 7}, {0, 8}}, {6}}, {&m, &x3, &m});
    r.associativity = std::max(r.associativity, detail::deviation(assoc_l, assoc_r));

    const auto unit_l = detail::wire<S>({{{1, 3}, {2, 4}}, {0}}, {&m, &alg.unit, &x1});
    const auto unit_r = detail::wire<S>({{{1, 4}, {2, 3}}, {0}}, {&m, &alg.unit, &x1});
    r.unit = std::max({r.unit, detail::deviation(unit_l, x1), detail::deviation(unit_r, x1)});

    const auto coassoc_l = detail::wire<S>({{{2, 3}, {0, 6}}, {4, 5, 1}}, {&c, &x1, &c});
    const auto coassoc_r = detail::wire<S>({{{2, 3}, {1, 6}}, {0, 4, 5}}, {&c, &x1, &c});
    r.coassociativity = std::max(r.coassociativity, detail::deviation(coassoc_l, coassoc_r));

    const auto counit_l = detail::wire<S>({{{2, 3}, {0, 4}}, {1}}, {&c, &x1, &alg.counit});
    const auto counit_r = detail::wire<S>({{{2, 3}, {1, 4}}, {0}}, {&c, &x1, &alg.counit});
    r.counit = std::max({r.counit, detail::deviation(counit_l, x1), detail::deviation(counit_r, x1)});

    // comul . mul, (mul x 1)(1 x comul), (1 x mul)(comul x 1) on a two-wire input.
    const auto frob_a = detail::wire<S>({{{1, 3}, {2, 4}, {0, 7}}, {5, 6}}, {&m, &x2, &c});
    const auto frob_b = detail::wire<S>({{{2, 4}, {3, 6}, {0, 7}}, {5, 1}}, {&c, &x2, &m});
    const auto frob_c = detail::wire<S>({{{2, 3}, {1, 6}, {4, 7}}, {0, 5}}, {&c, &x2, &m});
    r.frobenius = std::max({r.frobenius, detail::deviation(frob_a, frob_b), detail::deviation(frob_a, frob_c)});
  }
  const auto flag = [&](double v, const char* name) {
    if (v > r.tolerance) r.failures.push_back(std::string(name) + " deviates by " + std::to_string(v));
  };
  flag(r.associativity, "associativity");
  flag(r.unit, "unit");
  flag(r.coassociativity, "coassociativity");
  flag(r.counit, "counit");
  flag(r.frobenius, "frobenius condition");
  return r;
}

// Merges written as linear maps on operators over W (x) W, for the Choi test.

/// X -> [X[(i,i),(i',i')]]: the doubled commutative merge.
cpm::SuperOperator hadamard_merge_map(std::size_t d);

/// X -> [sum_j X[(i,j),(j,k)]]: the F_D merge applied to one operator on W (x) W.
cpm::SuperOperator fd_merge_map(std::size_t d);

/// rho -> rho * sigma0.
cpm::SuperOperator right_multiply_map(const RealTensor& sigma0);

}  // namespace mixsem::frobenius
