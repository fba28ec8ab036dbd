#pragma once

// Open-system meaning states: positive operators, density matrices built from
// sense ensembles, the doubling of linear maps, a Choi-matrix test for complete
// positivity, entropy and similarity, and the doubly-doubled (CPM^2) layer.

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "mixsem/tensor.hpp"

namespace mixsem::cpm {

/// Absolute tolerances, scaled by max(1, largest |entry|) for operators that
/// are not normalised.
inline constexpr double kSymmetryTolerance = 1e-9;
inline constexpr double kEigenTolerance = 1e-9;
inline constexpr double kTraceTolerance = 1e-9;
inline constexpr double kNormTolerance = 1e-9;

/// Symmetric positive semi-definite real operator.
class PositiveOperator {
 public:
  /// Validates symmetry and the smallest eigenvalue; throws InvariantViolation.
  static PositiveOperator from_matrix(RealTensor m);

  std::size_t dim() const { return m_.dim(0); }
  const RealTensor& matrix() const { return m_; }
  double trace() const;

 private:
  explicit PositiveOperator(RealTensor m) : m_(std::move(m)) {}
  RealTensor m_;
};

/// Positive operator with unit trace.
class DensityMatrix {
 public:
  static DensityMatrix from_matrix(RealTensor m);
  static DensityMatrix from_operator(PositiveOperator p);

  std::size_t dim() const { return op_.dim(); }
  const RealTensor& matrix() const { return op_.matrix(); }
  const PositiveOperator& as_operator() const { return op_; }

 private:
  explicit DensityMatrix(PositiveOperator p) : op_(std::move(p)) {}
  PositiveOperator op_;
};

struct SenseEntry {
  double probability = 0.0;
  RealTensor state;  // any rank; flattened when lifted
};

/// Probability-weighted pure meanings of one word.
struct SenseEnsemble {
  std::vector<SenseEntry> entries;

  /// Throws DataError unless probabilities lie in [0,1] and sum to 1 and
  /// every state has unit norm.
  void validate() const;
};

DensityMatrix from_ensemble(const SenseEnsemble& e);

/// Rank-one projector onto v / ||v||. Throws DataError for the zero vector.
DensityMatrix lift_pure(const RealTensor& v);

/// |v><v| on a tensor of any rank: the result has v's axes followed by a
/// copy of them (ket axes, then bra axes). No normalisation.
template <Semiring S>
Tensor<S> lift_tensor(const Tensor<S>& v) {
  Tensor<S> bra = v;
  for (auto& x : bra.data()) x = S::conj(x);
  return tensor_product(v, bra);
}

/// Linear map on matrices, from in_dim x in_dim to out_dim x out_dim.
struct SuperOperator {
  std::size_t in_dim = 0;
  std::size_t out_dim = 0;
  std::function<RealTensor(const RealTensor&)> apply;
};

/// rho -> f rho f^T for a matrix f of shape (out, in).
SuperOperator double_map(const RealTensor& f);

/// rho -> sum_k A_k rho A_k^T.
SuperOperator kraus_map(std::vector<RealTensor> kraus);

SuperOperator transpose_map(std::size_t d);

/// Largest in_dim * out_dim accepted by the Choi test (Choi matrices up to 216 x 216).
inline constexpr std::size_t kMaxChoiDim = 216;

struct CpReport {
  bool completely_positive = false;
  double min_eigenvalue = 0.0;
  double asymmetry = 0.0;
  RealTensor choi;
  RealTensor witness;  // eigenvector of the most negative eigenvalue, when one exists
  std::string reason;
};

/// Builds the Choi matrix (F (x) id)(|eta><eta|) and checks it is symmetric and
/// positive semi-definite.
CpReport is_completely_positive(const SuperOperator& f, std::size_t max_dim = kMaxChoiDim);

/// Choi matrix alone, ordered (output, input) x (output, input).
RealTensor choi_matrix(const SuperOperator& f);

/// -sum e ln e over the eigenvalues, with 0 ln 0 = 0.
double von_neumann_entropy(const DensityMatrix& rho);

/// Tr(rho^T sigma).
double similarity(const PositiveOperator& rho, const PositiveOperator& sigma);

/// Tr(rho^T sigma) / (||rho||_F ||sigma||_F). Throws DataError on a zero operator.
double similarity_normalized(const PositiveOperator& rho, const PositiveOperator& sigma);

DensityMatrix normalize(const PositiveOperator& p);

/// Entropy of normalize(p).
double entropy_of(const PositiveOperator& p);

/// Operator on W (x) W with composite indices (a, x), row index a * d + x.
class DoubleDensity {
 public:
  static DoubleDensity from_matrix(std::size_t d, RealTensor m);

  /// sum_k p_k |r_k>><<r_k| with r_k = vec(rho_k) / ||rho_k||_F.
  static DoubleDensity from_inner_states(const std::vector<std::pair<double, DensityMatrix>>& states);

  std::size_t dim() const { return d_; }
  const RealTensor& matrix() const { return m_; }

 private:
  DoubleDensity(std::size_t d, RealTensor m) : d_(d), m_(std::move(m)) {}
  std::size_t d_;
  RealTensor m_;
};

/// The outer-level state itself, read as an operator on W (x) W; its entropy
/// measures the outer mixing.
PositiveOperator ambiguity_operator(const DoubleDensity& D);

/// Partial trace over the outer wire pair: G[x,y] = sum_a D[(a,x),(a,y)].
PositiveOperator generality_operator(const DoubleDensity& D);

}  // namespace mixsem::cpm
