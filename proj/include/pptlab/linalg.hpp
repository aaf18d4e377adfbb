#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace pptlab {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Malformed input: bad dimensions, violated parameter constraints, unreadable files.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure could not reach a defensible answer.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rank of a spectrum together with the ratio (first discarded)/(last kept).
struct NumericRank {
  int rank = 0;
  double gap = 0.0;
};

/// `values` are nonnegative magnitudes in any order.
NumericRank numeric_rank(std::vector<double> values, double tol_rel);

/// Eigenvalues of a Hermitian matrix, ascending.
RealVector hermitian_eigenvalues(const Matrix& h);

std::vector<double> singular_values(const Matrix& a);

/// Orthonormal basis (columns) of the column space, by SVD with relative cutoff.
Matrix orthonormal_range(const Matrix& a, double tol_rel = 1e-10);

/// Orthonormal basis (columns) of the orthogonal complement of the column span of `a`.
Matrix orthogonal_complement(const Matrix& a, int ambient_dim, double tol_rel = 1e-10);

/// Orthonormal basis of the complement of a single unit vector (ambient x (n-1)).
Matrix complement_of_vector(const Vector& v);

/// Multiplies by a phase so that the first entry with modulus above `tiny`
/// is real and positive.
Vector canonical_phase(const Vector& v, double tiny = 1e-8);

double max_abs(const Matrix& a);

}  // namespace pptlab
