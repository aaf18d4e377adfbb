#pragma once

// Product vectors a (x) b inside a subspace K of C^m (x) C^n.
//
// With {W_j} an orthonormal basis of K^perp viewed as m x n matrices, a (x) b lies
// in K iff F(a) b = 0 where F(a)[j,l] = sum_i a_i conj(W_j[i,l]). G(b) is the
// same bilinear form read as a matrix acting on a.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pptlab/qstate.hpp"

namespace pptlab {

class KernelSystem {
 public:
  /// `perp` has orthonormal columns spanning K^perp.
  KernelSystem(BipartiteDims dims, const Matrix& perp);
  static KernelSystem from_subspace(const SubspaceBasis& k, BipartiteDims dims);

  const BipartiteDims& dims() const { return dims_; }
  /// dim K^perp
  int p() const { return static_cast<int>(perp_.cols()); }
  const Matrix& perp() const { return perp_; }

  Matrix F(const Vector& a) const;  // p x n
  Matrix G(const Vector& b) const;  // p x m
  double residual(const Vector& a, const Vector& b) const;
  /// The same subspace with the two parties exchanged.
  KernelSystem swapped() const;

 private:
  BipartiteDims dims_;
  Matrix perp_;
  std::vector<Matrix> fa_;  // m matrices p x n
  std::vector<Matrix> gb_;  // n matrices p x m
};

/// Deterministic scrambled-Halton start points on S(C^m) x S(C^n).
class StartSequence {
 public:
  StartSequence(BipartiteDims dims, std::uint64_t seed);
  std::pair<Vector, Vector> operator()(std::uint64_t index) const;

 private:
  BipartiteDims dims_;
  std::vector<int> bases_;
  std::vector<std::vector<int>> perms_;
  RealVector shift_;
};

struct EnumOptions {
  /// first-round start count; 0 means 40 * delta
  int start_count = 0;
  std::uint64_t seed = 1;
  /// 0 means std::thread::hardware_concurrency()
  int threads = 0;
  int max_rounds = 5;
  double residual_tol = 1e-10;
  double dedup_tol = 1e-6;
  double jacobian_tol = 1e-8;
  double empty_threshold = 1e-6;
  bool algebraic_check = true;
  bool line_search = true;
  int line_starts = 0;
};

enum class Classification { Empty, Finite, LikelyInfinite, Inconclusive };
std::string to_string(Classification c);

struct PointDiagnostics {
  int jacobian_rank = 0;
  double jacobian_cond = 0.0;
  bool isolated = false;
  bool transversal = false;
};

/// |fixed> (x) span (a_side) or span (x) |fixed>, contained in K.
struct LineSubspace {
  bool a_side = true;
  Vector fixed;
  Matrix span;
  double residual = 0.0;
};

struct AlgebraicCheck {
  /// "ok", "not-applicable", "skipped" or "degenerate"
  std::string status = "skipped";
  int candidates = 0;
  int roots = 0;
  int matched = 0;
  int added = 0;
};

struct EnumEvidence {
  std::int64_t delta = 0;
  std::vector<int> round_starts;
  std::vector<int> round_counts;
  int starts_used = 0;
  bool stable = false;
  double best_residual = 0.0;
  int non_isolated = 0;
  int non_transversal = 0;
  bool full_space = false;
  std::string stop_reason;
  std::vector<LineSubspace> subspaces;
  AlgebraicCheck algebraic;
};

struct EnumerationResult {
  std::vector<ProductVector> points;
  std::vector<double> residuals;
  std::vector<PointDiagnostics> diagnostics;
  Classification classification = Classification::Inconclusive;
  EnumEvidence evidence;

  int count() const { return static_cast<int>(points.size()); }
};

EnumerationResult enumerate_product_vectors(const SubspaceBasis& k, BipartiteDims dims,
                                            const EnumOptions& opts = {});
EnumerationResult enumerate_product_vectors(const KernelSystem& sys, const EnumOptions& opts = {});

struct CesVerdict {
  bool ces = false;
  bool by_dimension = false;
  int starts = 0;
  double best_residual = 0.0;
  Classification classification = Classification::Inconclusive;
  /// the multistart run behind the verdict; empty when decided by dimension
  EnumerationResult enumeration;
};

CesVerdict ces_check(const SubspaceBasis& subspace, BipartiteDims dims, const EnumOptions& opts = {});
inline bool is_ces(const SubspaceBasis& subspace, BipartiteDims dims, const EnumOptions& opts = {}) {
  return ces_check(subspace, dims, opts).ces;
}

/// rank [K | a (x) e_j | e_i (x) b] == mn. Throws InputError when a (x) b is not in K.
bool transversal(const SubspaceBasis& k, const ProductVector& pv, BipartiteDims dims,
                 double tol_rel = 1e-9);

PointDiagnostics point_diagnostics(const KernelSystem& sys, const Vector& a, const Vector& b,
                                   double tol_rel = 1e-8);

std::vector<LineSubspace> find_line_subspaces(const SubspaceBasis& k, BipartiteDims dims, int w_dim,
                                              const EnumOptions& opts = {});
/// A-side search only (w_dim >= 1); the b side is obtained through swapped().
std::vector<LineSubspace> find_fixed_a_subspaces(const KernelSystem& sys, int w_dim,
                                                 const EnumOptions& opts);

enum class Goodness { Good, Bad, Indeterminate };
enum class GoodnessReason {
  EmptyIntersection,
  CountEqualsDelta,
  CountBelowDeltaWithNonemptyX,
  InfiniteComponent,
  RankBelowBorderline
};
std::string to_string(Goodness g);
std::string to_string(GoodnessReason r);

struct GoodnessVerdict {
  Goodness verdict = Goodness::Indeterminate;
  GoodnessReason reason = GoodnessReason::RankBelowBorderline;
  std::optional<int> count;
  /// outcome the theory rules out (e.g. finite X below delta at borderline rank)
  bool anomaly = false;
  std::string note;
};

GoodnessVerdict classify_goodness(const BipartiteState& state, const EnumOptions& opts = {});
/// Decision table applied to an already enumerated kernel.
GoodnessVerdict classify_goodness(const BipartiteState& state, const EnumerationResult& kernel,
                                  const EnumOptions& opts = {});

bool general_position(const std::vector<ProductVector>& pvs, BipartiteDims dims, double tol = 1e-8);

ProductVector partial_conjugate(const ProductVector& pv);

struct SegreComponent {
  SubspaceBasis v;
  SubspaceBasis w;
};

std::vector<SegreComponent> separable_kernel_components(const std::vector<ProductVector>& pvs,
                                                        BipartiteDims dims);
GoodnessVerdict classify_separable_good(const std::vector<ProductVector>& pvs, BipartiteDims dims);

/// Number of points of `x` whose partial conjugate matches a distinct point of `y`.
int match_partial_conjugates(const std::vector<ProductVector>& x, const std::vector<ProductVector>& y,
                             double dedup_tol = 1e-6);

struct AlgebraicResult {
  std::string status = "not-applicable";
  int candidates = 0;
  std::vector<ProductVector> points;
};

/// Eigenvalue-based root finding for m <= 3 and a finite expected intersection.
AlgebraicResult algebraic_product_vectors(const KernelSystem& sys, std::uint64_t seed,
                                          double residual_tol = 1e-10);

/// Gauss-Newton refinement of a near product vector; returns the final residual.
double polish_product_vector(const KernelSystem& sys, Vector& a, Vector& b, int max_iter = 20);

}  // namespace pptlab
