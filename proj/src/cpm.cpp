#include "mixsem/cpm.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mixsem/error.hpp"
#include "mixsem/linalg.hpp"

namespace mixsem::cpm {

namespace {

double entry_scale(const RealTensor& m) {
  double s = 1.0;
  for (double v : m.data()) s = std::max(s, std::abs(v));
  return s;
}

RealTensor flatten_state(const RealTensor& t) { return t.reshaped(Shape{std::max<std::size_t>(t.size(), 1)}); }

}  // namespace

PositiveOperator PositiveOperator::from_matrix(RealTensor m) {
  if (m.rank() != 2 || m.dim(0) != m.dim(1)) {
    throw ShapeError("positive operator must be a square matrix, got " + shape_string(m.shape()));
  }
  const double scale = entry_scale(m);
  const double asym = linalg::max_asymmetry(m);
  if (asym > kSymmetryTolerance * scale) {
    throw InvariantViolation("operator is not symmetric (max asymmetry " + std::to_string(asym) + ")");
  }
  const auto eig = linalg::jacobi_eigen(m);
  if (!eig.values.empty() && eig.values.front() < -kEigenTolerance * scale) {
    throw InvariantViolation("operator is not positive semi-definite (min eigenvalue " +
                             std::to_string(eig.values.front()) + ")");
  }
  return PositiveOperator(std::move(m));
}

double PositiveOperator::trace() const { return linalg::trace(m_); }

DensityMatrix DensityMatrix::from_matrix(RealTensor m) { return from_operator(PositiveOperator::from_matrix(std::move(m))); }

DensityMatrix DensityMatrix::from_operator(PositiveOperator p) {
  const double tr = p.trace();
  if (std::abs(tr - 1.0) > kTraceTolerance) {
    throw InvariantViolation("density matrix must have unit trace, got " + std::to_string(tr));
  }
  return DensityMatrix(std::move(p));
}

void SenseEnsemble::validate() const {
  if (entries.empty()) throw DataError("sense ensemble is empty");
  double total = 0.0;
  for (const auto& e : entries) {
    if (!(e.probability >= 0.0 && e.probability <= 1.0)) {
      throw DataError("sense probability out of [0,1]: " + std::to_string(e.probability));
    }
    const double n = norm(e.state);
    if (std::abs(n - 1.0) > kNormTolerance) throw DataError("sense state is not unit norm (norm " + std::to_string(n) + ")");
    if (e.state.size() != entries.front().state.size()) throw ShapeError("sense states have different sizes");
    total += e.probability;
  }
  if (std::abs(total - 1.0) > kTraceTolerance) throw DataError("sense probabilities sum to " + std::to_string(total));
}

DensityMatrix from_ensemble(const SenseEnsemble& e) {
  e.validate();
  const std::size_t n = e.entries.front().state.size();
  RealTensor rho(Shape{n, n});
  for (const auto& entry : e.entries) {
    const RealTensor v = flatten_state(entry.state);
    for (std::size_t i = 0; i < n; ++i) {
      const double pv = entry.probability * v[i];
      if (pv == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) rho[i * n + j] += pv * v[j];
    }
  }
  return DensityMatrix::from_matrix(std::move(rho));
}

DensityMatrix lift_pure(const RealTensor& v) {
  const double n = norm(v);
  if (n == 0.0) throw DataError("cannot lift the zero vector");
  const RealTensor u = scaled(flatten_state(v), 1.0 / n);
  return DensityMatrix::from_matrix(linalg::outer(u, u));
}

SuperOperator double_map(const RealTensor& f) {
  if (f.rank() != 2) throw ShapeError("double_map: expected a matrix");
  const RealTensor ft = linalg::transpose(f);
  SuperOperator op;
  op.in_dim = f.dim(1);
  op.out_dim = f.dim(0);
  op.apply = [f, ft, in = op.in_dim](const RealTensor& rho) {
    if (rho.rank() != 2 || rho.dim(0) != in || rho.dim(1) != in) {
      throw ShapeError("double_map: operator shape " + shape_string(rho.shape()) + " does not match input dimension");
    }
    return linalg::matmul(linalg::matmul(f, rho), ft);
  };
  return op;
}

SuperOperator kraus_map(std::vector<RealTensor> kraus) {
  if (kraus.empty()) throw ShapeError("kraus_map: no operators");
  SuperOperator op;
  op.in_dim = kraus.front().dim(1);
  op.out_dim = kraus.front().dim(0);
  for (const auto& k : kraus) {
    if (k.rank() != 2 || k.dim(0) != op.out_dim || k.dim(1) != op.in_dim) throw ShapeError("kraus_map: inconsistent shapes");
  }
  op.apply = [kraus = std::move(kraus), out = op.out_dim](const RealTensor& rho) {
    RealTensor acc(Shape{out, out});
    for (const auto& k : kraus) acc = added(acc, linalg::matmul(linalg::matmul(k, rho), linalg::transpose(k)));
    return acc;
  };
  return op;
}

SuperOperator transpose_map(std::size_t d) {
  return SuperOperator{d, d, [](const RealTensor& rho) { return linalg::transpose(rho); }};
}

RealTensor choi_matrix(const SuperOperator& f) {
  const std::size_t n = f.in_dim;
  const std::size_t m = f.out_dim;
  // |eta><eta| has entries [p, p', q, q'] = delta(p,p') delta(q,q'); its (p', q')
  // slice is the matrix unit E_{p'q'}, which F maps into the Choi block.
  const RealTensor eta = eta_state<RealField>(n);
  const RealTensor projector = cpm::lift_tensor(eta);
  RealTensor choi(Shape{m * n, m * n});
  for (std::size_t pp = 0; pp < n; ++pp) {
    for (std::size_t qq = 0; qq < n; ++qq) {
      RealTensor slice(Shape{n, n});
      for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = 0; q < n; ++q) slice[p * n + q] = projector.at({p, pp, q, qq});
      }
      const RealTensor image = f.apply(slice);
      if (image.rank() != 2 || image.dim(0) != m || image.dim(1) != m) {
        throw ShapeError("choi_matrix: map produced shape " + shape_string(image.shape()));
      }
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t k = 0; k < m; ++k) choi[(i * n + pp) * (m * n) + (k * n + qq)] = image[i * m + k];
      }
    }
  }
  return choi;
}

CpReport is_completely_positive(const SuperOperator& f, std::size_t max_dim) {
  if (f.in_dim * f.out_dim > max_dim) {
    throw ShapeError("is_completely_positive: Choi dimension " + std::to_string(f.in_dim * f.out_dim) +
                     " exceeds the configured maximum " + std::to_string(max_dim));
  }
  CpReport report;
  report.choi = choi_matrix(f);
  const double scale = entry_scale(report.choi);
  report.asymmetry = linalg::max_asymmetry(report.choi);
  const auto eig = linalg::jacobi_eigen(report.choi);
  report.min_eigenvalue = eig.values.front();
  const std::size_t n = report.choi.dim(0);
  if (report.asymmetry > kSymmetryTolerance * scale) {
    report.reason = "Choi matrix is not self-adjoint";
    return report;
  }
  if (report.min_eigenvalue < -kEigenTolerance * scale) {
    report.witness = RealTensor(Shape{n});
    for (std::size_t i = 0; i < n; ++i) report.witness[i] = eig.vectors[i * n];
    report.reason = "Choi matrix has a negative eigenvalue";
    return report;
  }
  report.completely_positive = true;
  return report;
}

double von_neumann_entropy(const DensityMatrix& rho) {
  const auto eig = linalg::jacobi_eigen(rho.matrix());
  double s = 0.0;
  for (double e : eig.values) {
    if (e < -kEigenTolerance) throw InvariantViolation("negative eigenvalue " + std::to_string(e) + " in density matrix");
    e = std::clamp(e, 0.0, 1.0);
    if (e > 0.0) s -= e * std::log(e);
  }
  return s;
}

double similarity(const PositiveOperator& rho, const PositiveOperator& sigma) {
  if (rho.dim() != sigma.dim()) throw ShapeError("similarity: dimension mismatch");
  return inner_product(rho.matrix(), sigma.matrix());
}

double similarity_normalized(const PositiveOperator& rho, const PositiveOperator& sigma) {
  const double a = norm(rho.matrix());
  const double b = norm(sigma.matrix());
  if (a == 0.0 || b == 0.0) throw DataError("similarity_normalized: zero operator");
  return similarity(rho, sigma) / (a * b);
}

DensityMatrix normalize(const PositiveOperator& p) {
  const double tr = p.trace();
  if (!(tr > 0.0)) throw DataError("cannot normalise an operator with zero trace");
  return DensityMatrix::from_matrix(scaled(p.matrix(), 1.0 / tr));
}

double entropy_of(const PositiveOperator& p) { return von_neumann_entropy(normalize(p)); }

DoubleDensity DoubleDensity::from_matrix(std::size_t d, RealTensor m) {
  if (m.rank() != 2 || m.dim(0) != d * d || m.dim(1) != d * d) {
    throw ShapeError("double density of dimension " + std::to_string(d) + " must be " + std::to_string(d * d) + "x" +
                     std::to_string(d * d));
  }
  DensityMatrix checked = DensityMatrix::from_matrix(std::move(m));
  return DoubleDensity(d, checked.matrix());
}

DoubleDensity DoubleDensity::from_inner_states(const std::vector<std::pair<double, DensityMatrix>>& states) {
  if (states.empty()) throw DataError("double density needs at least one inner state");
  const std::size_t d = states.front().second.dim();
  const std::size_t n = d * d;
  RealTensor m(Shape{n, n});
  for (const auto& [p, rho] : states) {
    if (rho.dim() != d) throw ShapeError("inner states have different dimensions");
    const RealTensor r = scaled(rho.matrix().reshaped(Shape{n}), 1.0 / norm(rho.matrix()));
    m = added(m, scaled(linalg::outer(r, r), p));
  }
  return from_matrix(d, std::move(m));
}

PositiveOperator ambiguity_operator(const DoubleDensity& D) { return PositiveOperator::from_matrix(D.matrix()); }

PositiveOperator generality_operator(const DoubleDensity& D) {
  return PositiveOperator::from_matrix(partial_trace(D.matrix(), D.dim(), D.dim(), Subsystem::A));
}

}  // namespace mixsem::cpm
