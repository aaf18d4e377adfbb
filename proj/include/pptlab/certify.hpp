#pragma once

// Extremality and structure certificates for PPT states.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pptlab/qstate.hpp"
#include "pptlab/segre.hpp"

namespace pptlab {

enum class ExtremalityVerdict { Extreme, NotExtreme, Borderline };
std::string to_string(ExtremalityVerdict v);

struct Witness {
  /// Hermitian direction, range inside R(rho), orthogonal to rho, unit Frobenius norm.
  Matrix h;
  double epsilon = 0.0;
  Matrix rho1;
  Matrix rho2;
};

struct ExtremalityCert {
  int nullity = 0;
  ExtremalityVerdict verdict = ExtremalityVerdict::Borderline;
  /// singular values of the real constraint map, descending
  std::vector<double> singular_spectrum;
  /// smallest kept / largest discarded singular value (infinite if nothing is discarded or the discarded are 0)
  double gap = 0.0;
  bool ppt = true;
  int rank = 0;
  int rank_gamma = 0;
  std::optional<Witness> witness;
};

ExtremalityCert extremality_nullity(const BipartiteState& state, double cutoff = 1e-8);

/// rho -/+ eps H with eps just inside the PPT boundary; fills cert.witness.
Witness witness_decomposition(const BipartiteState& state, const ExtremalityCert& cert);

/// True when r^2 + s^2 <= m^2 n^2 + 1, i.e. extremality is not ruled out.
bool necessary_bound(int rank, int rank_gamma, int m, int n);

struct EdgeVerdict {
  bool is_edge = false;
  std::optional<ProductVector> violating;
  int starts = 0;
  double best_residual = 0.0;
  /// multistart search; emptiness is a numerical certificate, not a proof
  std::string certificate = "numerical";
};

EdgeVerdict edge_check(const BipartiteState& state, const EnumOptions& opts = {});
/// Reuses a range enumeration run with line_search off and the same options.
EdgeVerdict edge_check(const BipartiteState& state, const EnumerationResult& range_points,
                       const EnumOptions& opts = {});

struct SeparableTerm {
  double weight = 0.0;
  ProductVector pv;
};

struct SeparableDecomposition {
  std::vector<SeparableTerm> terms;
  double reconstruction_residual = 0.0;
  std::uint64_t seed_used = 0;
};

SeparableDecomposition rank_n_separable_decomposition(const BipartiteState& state,
                                                      std::uint64_t seed = 7);

enum class StrongExtremality { Yes, NotApplicable };
std::string to_string(StrongExtremality s);

StrongExtremality strongly_extreme_by_theorem(const BipartiteState& state, const EnumOptions& opts = {});
/// Same rule from already computed pieces.
StrongExtremality strongly_extreme_by_theorem(const BipartiteState& state, const GoodnessVerdict& good,
                                              const ExtremalityCert& cert);

struct Rank1Compression {
  Vector a;
  /// orthonormal basis of the hyperplane W with |a> (x) W in ker rho
  Matrix hyperplane;
  double residual = 0.0;
};

std::optional<Rank1Compression> find_rank1_compression(const BipartiteState& state,
                                                       const EnumOptions& opts = {});

}  // namespace pptlab
