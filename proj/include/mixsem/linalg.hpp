#pragma once

// Small dense linear algebra on real rank-2 tensors.

#include <cstddef>
#include <vector>

#include "mixsem/tensor.hpp"

namespace mixsem::linalg {

RealTensor identity(std::size_t n);
RealTensor matmul(const RealTensor& a, const RealTensor& b);
RealTensor transpose(const RealTensor& m);
RealTensor outer(const RealTensor& u, const RealTensor& v);
RealTensor apply(const RealTensor& m, const RealTensor& v);
double trace(const RealTensor& m);
double frobenius_norm(const RealTensor& m);
double max_asymmetry(const RealTensor& m);
void require_square(const RealTensor& m, const char* what);

/// Eigenpairs of a symmetric matrix, eigenvalues ascending. Column k of
/// `vectors` belongs to `values[k]`.
struct SymmetricEigen {
  std::vector<double> values;
  RealTensor vectors;
};

/// Cyclic Jacobi rotations until the off-diagonal Frobenius mass drops below
/// `tolerance` times max(1, ||m||_F). The input is symmetrised first.
SymmetricEigen jacobi_eigen(const RealTensor& m, double tolerance = 1e-12, int max_sweeps = 100);

}  // namespace mixsem::linalg
