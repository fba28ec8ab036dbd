#include "mixsem/frobenius.hpp"

#include "mixsem/linalg.hpp"

namespace mixsem::frobenius {

cpm::PositiveOperator hadamard_double(const cpm::PositiveOperator& p, const cpm::PositiveOperator& q) {
  if (p.dim() != q.dim()) throw ShapeError("hadamard_double: dimension mismatch");
  return cpm::PositiveOperator::from_matrix(hadamard(p.matrix(), q.matrix()));
}

RealTensor mu_noncomm(const RealTensor& rho, const RealTensor& sigma) {
  linalg::require_square(rho, "mu_noncomm");
  linalg::require_square(sigma, "mu_noncomm");
  if (rho.dim(0) != sigma.dim(0)) throw ShapeError("mu_noncomm: dimension mismatch");
  return linalg::matmul(rho, sigma);
}

std::string to_string(AlgebraKind k) {
  switch (k) {
    case AlgebraKind::CommutativeBasis: return "commutative-basis";
    case AlgebraKind::DoubledBasis: return "doubled-basis";
    case AlgebraKind::NoncommutativeFD: return "noncommutative-FD";
  }
  return "?";
}

double LawReport::max_deviation() const {
  return std::max({associativity, unit, coassociativity, counit, frobenius});
}

namespace {

void check_input(const RealTensor& x, std::size_t n, const char* what) {
  if (x.rank() != 2 || x.dim(0) != n || x.dim(1) != n) {
    throw ShapeError(std::string(what) + ": expected a " + std::to_string(n) + "x" + std::to_string(n) + " operator");
  }
}

}  // namespace

cpm::SuperOperator hadamard_merge_map(std::size_t d) {
  const std::size_t n = d * d;
  return {n, d, [d, n](const RealTensor& x) {
            check_input(x, n, "hadamard_merge_map");
            RealTensor out(Shape{d, d});
            for (std::size_t i = 0; i < d; ++i) {
              for (std::size_t k = 0; k < d; ++k) out[i * d + k] = x[(i * d + i) * n + (k * d + k)];
            }
            return out;
          }};
}

cpm::SuperOperator fd_merge_map(std::size_t d) {
  const std::size_t n = d * d;
  return {n, d, [d, n](const RealTensor& x) {
            check_input(x, n, "fd_merge_map");
            RealTensor out(Shape{d, d});
            for (std::size_t i = 0; i < d; ++i) {
              for (std::size_t k = 0; k < d; ++k) {
                double s = 0.0;
                for (std::size_t j = 0; j < d; ++j) s += x[(i * d + j) * n + (j * d + k)];
                out[i * d + k] = s;
              }
            }
            return out;
          }};
}

cpm::SuperOperator right_multiply_map(const RealTensor& sigma0) {
  linalg::require_square(sigma0, "right_multiply_map");
  const std::size_t d = sigma0.dim(0);
  return {d, d, [sigma0, d](const RealTensor& rho) {
            check_input(rho, d, "right_multiply_map");
            return linalg::matmul(rho, sigma0);
          }};
}

}  // namespace mixsem::frobenius
