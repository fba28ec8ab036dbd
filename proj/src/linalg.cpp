#include "mixsem/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mixsem/error.hpp"

namespace mixsem::linalg {

void require_square(const RealTensor& m, const char* what) {
  if (m.rank() != 2 || m.dim(0) != m.dim(1)) {
    throw ShapeError(std::string(what) + ": expected a square matrix, got " + shape_string(m.shape()));
  }
}

RealTensor identity(std::size_t n) { return eta_state<RealField>(n); }

RealTensor matmul(const RealTensor& a, const RealTensor& b) {
  if (a.rank() != 2 || b.rank() != 2 || a.dim(1) != b.dim(0)) {
    throw ShapeError("matmul: incompatible shapes " + shape_string(a.shape()) + " and " + shape_string(b.shape()));
  }
  const std::size_t m = a.dim(0), k = a.dim(1), n = b.dim(1);
  RealTensor c(Shape{m, n});
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t p = 0; p < k; ++p) {
      const double av = a[i * k + p];
      if (av == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) c[i * n + j] += av * b[p * n + j];
    }
  }
  return c;
}

RealTensor transpose(const RealTensor& m) {
  if (m.rank() != 2) throw ShapeError("transpose: expected a matrix");
  return permute(m, {1, 0});
}

RealTensor outer(const RealTensor& u, const RealTensor& v) {
  if (u.rank() != 1 || v.rank() != 1) throw ShapeError("outer: expected vectors");
  return tensor_product(u, v);
}

RealTensor apply(const RealTensor& m, const RealTensor& v) {
  if (m.rank() != 2 || v.rank() != 1 || m.dim(1) != v.dim(0)) {
    throw ShapeError("apply: incompatible shapes " + shape_string(m.shape()) + " and " + shape_string(v.shape()));
  }
  RealTensor out(Shape{m.dim(0)});
  const std::size_t n = m.dim(1);
  for (std::size_t i = 0; i < m.dim(0); ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += m[i * n + j] * v[j];
    out[i] = acc;
  }
  return out;
}

double trace(const RealTensor& m) {
  require_square(m, "trace");
  double t = 0.0;
  for (std::size_t i = 0; i < m.dim(0); ++i) t += m[i * m.dim(0) + i];
  return t;
}

double frobenius_norm(const RealTensor& m) { return norm(m); }

double max_asymmetry(const RealTensor& m) {
  require_square(m, "max_asymmetry");
  const std::size_t n = m.dim(0);
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) worst = std::max(worst, std::abs(m[i * n + j] - m[j * n + i]));
  }
  return worst;
}

SymmetricEigen jacobi_eigen(const RealTensor& m, double tolerance, int max_sweeps) {
  require_square(m, "jacobi_eigen");
  const std::size_t n = m.dim(0);
  std::vector<double> a(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i * n + j] = 0.5 * (m[i * n + j] + m[j * n + i]);
  }
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

  const double scale = std::max(1.0, frobenius_norm(m));
  auto off_mass = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j) s += a[i * n + j] * a[i * n + j];
      }
    }
    return std::sqrt(s);
  };

  int sweep = 0;
  for (; sweep < max_sweeps && off_mass() >= tolerance * scale; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (apq == 0.0) continue;
        const double app = a[p * n + p];
        const double aqq = a[q * n + q];
        // Rotation angle that annihilates a[p][q].
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k * n + p];
          const double akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[k * n + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p * n + k];
          const double aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * aqk;
          a[q * n + k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k * n + p];
          const double vkq = v[k * n + q];
          v[k * n + p] = c * vkp - s * vkq;
          v[k * n + q] = s * vkp + c * vkq;
        }
      }
    }
  }
  if (off_mass() >= tolerance * scale) {
    throw InvariantViolation("jacobi_eigen: no convergence after " + std::to_string(max_sweeps) + " sweeps");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a[x * n + x] < a[y * n + y]; });
  SymmetricEigen out;
  out.values.resize(n);
  out.vectors = RealTensor(Shape{n, n});
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a[order[k] * n + order[k]];
    for (std::size_t i = 0; i < n; ++i) out.vectors[i * n + k] = v[i * n + order[k]];
  }
  return out;
}

}  // namespace mixsem::linalg
