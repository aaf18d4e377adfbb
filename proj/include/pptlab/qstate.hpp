#pragma once

// Bipartite operator algebra on C^m (x) C^n. Basis ordering is |i>|j> -> i*n + j
// everywhere, so the (i,j) block of an operator is the n x n sub-block at rows
// i*n.., columns j*n...

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "pptlab/linalg.hpp"

namespace pptlab {

struct BipartiteDims {
  int m = 1;
  int n = 1;

  BipartiteDims() = default;
  BipartiteDims(int m_, int n_);

  int total() const { return m * n; }
  bool operator==(const BipartiteDims&) const = default;
};

inline constexpr double kHermiticityTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;
inline constexpr double kRankTol = 1e-9;

/// mn x mn Hermitian matrix tagged with its bipartite dimensions. The input
/// matrix is symmetrized on construction; the removed asymmetry is kept.
class HermitianOperator {
 public:
  HermitianOperator(BipartiteDims dims, const Matrix& entries,
                    double hermiticity_tol = kHermiticityTol);

  const BipartiteDims& dims() const { return dims_; }
  const Matrix& matrix() const { return entries_; }
  /// max-norm of (X - X^dagger) of the matrix passed to the constructor.
  double asymmetry() const { return asymmetry_; }

  /// n x n block <i| X |j>.
  Matrix block(int i, int j) const;
  double trace() const { return entries_.trace().real(); }

 private:
  BipartiteDims dims_;
  Matrix entries_;
  double asymmetry_ = 0.0;
};

/// A positive semidefinite operator with positive trace. States are not normalized.
class BipartiteState {
 public:
  explicit BipartiteState(HermitianOperator op, double psd_tol = kPsdTol);
  BipartiteState(BipartiteDims dims, const Matrix& entries, double psd_tol = kPsdTol);

  const HermitianOperator& op() const { return op_; }
  const BipartiteDims& dims() const { return op_.dims(); }
  const Matrix& matrix() const { return op_.matrix(); }
  double trace() const { return op_.trace(); }

 private:
  HermitianOperator op_;
};

/// rho = C^dagger C with C = [C_0 ... C_{m-1}], every C_i of shape r x n.
struct BlockFactor {
  BipartiteDims dims;
  int r_rows = 0;
  std::vector<Matrix> blocks;

  /// Throws InputError unless there are m blocks, all r_rows x n.
  void validate() const;
  /// The r x mn matrix [C_0 ... C_{m-1}].
  Matrix stacked() const;
};

/// Orthonormal columns spanning a subspace of C^ambient_dim.
struct SubspaceBasis {
  int ambient_dim = 0;
  Matrix vectors;
  double tol_used = 0.0;

  int dim() const { return static_cast<int>(vectors.cols()); }
  /// Throws InputError when the Gram matrix deviates from identity by more than tol.
  void check_orthonormal(double tol = 1e-10) const;
  /// Norm of the component of v orthogonal to the subspace.
  double distance(const Vector& v) const;
};

struct RankProfile {
  int rank = 0;
  int rank_gamma = 0;
  int rank_a = 0;
  int rank_b = 0;
  /// gaps for rho, rho^Gamma, rho_A, rho_B: first discarded / last kept
  /// singular value, 0 when the matrix has full rank.
  std::array<double, 4> singular_gaps{};
};

struct ReducedOperators {
  Matrix rho_a;
  Matrix rho_b;
};

struct PptVerdict {
  bool ppt = false;
  double min_eig = 0.0;
  double max_eig = 0.0;
};

BipartiteState from_blocks(const BlockFactor& factor);
BlockFactor factor_blocks(const BipartiteState& state, int r_rows, double tol_rel = kRankTol);

HermitianOperator partial_transpose(const HermitianOperator& op);
/// Raw block transpose on a matrix; exact entry permutation.
Matrix partial_transpose(const Matrix& x, BipartiteDims dims);

ReducedOperators reduced_operators(const HermitianOperator& op);
ReducedOperators reduced_operators(const Matrix& x, BipartiteDims dims);

RankProfile rank_profile(const BipartiteState& state, double tol_rel = kRankTol);
PptVerdict is_ppt(const BipartiteState& state, double tol = kPsdTol);

SubspaceBasis kernel_basis(const HermitianOperator& op, double tol_rel = kRankTol);
SubspaceBasis range_basis(const HermitianOperator& op, double tol_rel = kRankTol);
inline SubspaceBasis kernel_basis(const BipartiteState& s, double tol_rel = kRankTol) {
  return kernel_basis(s.op(), tol_rel);
}
inline SubspaceBasis range_basis(const BipartiteState& s, double tol_rel = kRankTol) {
  return range_basis(s.op(), tol_rel);
}

/// a (x) b up to scale, both factors unit norm with canonical phase.
struct ProductVector {
  Vector a;
  Vector b;

  /// Normalizes and phase-canonicalizes; throws InputError on a zero factor.
  static ProductVector make(const Vector& a, const Vector& b);
  Vector tensor() const;
};

/// |<a,a'>| * |<b,b'>|, the overlap of two product vectors.
double overlap(const ProductVector& x, const ProductVector& y);

/// Sum_k w_k |a_k b_k><a_k b_k| (unit weights when `weights` is empty).
BipartiteState product_mixture(BipartiteDims dims, const std::vector<ProductVector>& pvs,
                               const std::vector<double>& weights = {});

/// Rescales to unit trace.
BipartiteState normalized(const BipartiteState& state);

/// Vector a (x) b in the i*n+j ordering.
Vector kron(const Vector& a, const Vector& b);
/// The m x n coefficient matrix of a vector of C^m (x) C^n.
Matrix as_matrix(const Vector& v, BipartiteDims dims);

/// (P (x) Q) X (P (x) Q)^dagger for local operators P (m x m) and Q (n x n).
Matrix apply_local(const Matrix& x, const Matrix& p, const Matrix& q);

}  // namespace pptlab
