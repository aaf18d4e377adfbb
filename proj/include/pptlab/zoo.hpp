#pragma once

// Explicit states and product bases: GenTiles2 UPBs, the Kon-Mnogo projector,
// and the good/bad block families built as rho = C^dagger C.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "pptlab/qstate.hpp"

namespace pptlab {

std::int64_t binomial(int n, int k);

/// Degree of the Segre variety of C^m (x) C^n: C(m+n-2, m-1).
std::int64_t delta(int m, int n);

/// Sum over k of C(r,k) C(m+n-2-r, m-1-k); equals delta(m,n) for 1 <= r <= m+n-2.
std::int64_t degree_sum(int m, int n, int r);

struct UpbFamily {
  BipartiteDims dims;
  std::vector<ProductVector> vectors;
  std::string family_name;

  /// max-norm of Gram - I over the tensor vectors.
  double orthonormality_defect() const;
};

/// The m*n - 2m + 1 vectors S_j, L_jk, F. Needs n >= m >= 3 and n > 3.
UpbFamily gentiles2_upb(int m, int n);

/// The five-vector Tiles UPB of 3 (x) 3.
UpbFamily tiles_upb();

/// I - sum |psi><psi| over the family; throws InputError when not orthonormal.
BipartiteState upb_complement_state(const UpbFamily& upb, double tol = 1e-10);

/// prod over m-th roots of unity z of f(z) = sum_k row[k] z^k.
cplx circulant_det(const std::vector<double>& first_row);

/// Dense circulant matrix with the given first row.
RealMatrix circulant_matrix(const std::vector<double>& first_row);

/// First row of the circulant Z with rho_A = Z / 2m for the GenTiles2 complement.
std::vector<double> gentiles2_z_row(int m);

struct KonMnogo {
  BipartiteState state;
  /// W_1..W_10 as 3 x 4 coefficient matrices.
  std::vector<Matrix> w;
  /// The rank-one factorization of each W_i.
  std::vector<ProductVector> pvs;
};

KonMnogo kon_mnogo();

enum class FamilyVariant { Good3x4Fixed, Good3xN, Bad3x4, Bad3xN, BadMxN };

std::string to_string(FamilyVariant v);

struct FamilyParams {
  FamilyVariant variant = FamilyVariant::Good3x4Fixed;
  /// Good3xN, n-3 entries; empty means b_i = i+1.
  std::vector<double> b;
  /// Bad3x4: a, b, c, d, e, f, g.
  std::array<double, 7> abcdefg{1, 1, 1, 1, 1, 0, 0};
  /// BadMxN: c_3..c_{m-1}; empty means c_i = i.
  std::vector<double> c;
};

/// Throws InputError when a parameter constraint fails.
void validate(const FamilyParams& params, int m, int n);

BlockFactor family_blocks(const FamilyParams& params, int m, int n);
BipartiteState make_family(const FamilyParams& params, int m, int n);

}  // namespace pptlab
