#include "pptlab/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace pptlab {

NumericRank numeric_rank(std::vector<double> values, double tol_rel) {
  std::sort(values.begin(), values.end(), std::greater<>());
  NumericRank out;
  if (values.empty() || values.front() <= 0.0) return out;
  const double cutoff = tol_rel * values.front();
  for (double v : values) {
    if (v > cutoff) ++out.rank;
  }
  if (out.rank < static_cast<int>(values.size())) {
    out.gap = values[out.rank] / values[out.rank - 1];
  }
  return out;
}

RealVector hermitian_eigenvalues(const Matrix& h) {
  if (h.rows() == 0) return RealVector();
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

std::vector<double> singular_values(const Matrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return {};
  Eigen::BDCSVD<Matrix> svd(a);
  const auto& s = svd.singularValues();
  return {s.data(), s.data() + s.size()};
}

Matrix orthonormal_range(const Matrix& a, double tol_rel) {
  if (a.rows() == 0 || a.cols() == 0) return Matrix(a.rows(), 0);
  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  int k = 0;
  if (s.size() > 0 && s(0) > 0.0) {
    while (k < s.size() && s(k) > tol_rel * s(0)) ++k;
  }
  return svd.matrixU().leftCols(k);
}

Matrix orthogonal_complement(const Matrix& a, int ambient_dim, double tol_rel) {
  if (a.cols() == 0) return Matrix::Identity(ambient_dim, ambient_dim);
  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeFullU);
  const auto& s = svd.singularValues();
  int k = 0;
  if (s.size() > 0 && s(0) > 0.0) {
    while (k < s.size() && s(k) > tol_rel * s(0)) ++k;
  }
  return svd.matrixU().rightCols(ambient_dim - k);
}

Matrix complement_of_vector(const Vector& v) {
  const auto n = v.size();
  if (n <= 1) return Matrix(n, 0);
  const Matrix vm = v;
  Eigen::HouseholderQR<Matrix> qr(vm);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  return q.rightCols(n - 1);
}

Vector canonical_phase(const Vector& v, double tiny) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v(i));
    if (mag > tiny) return v * (std::conj(v(i)) / mag);
  }
  return v;
}

double max_abs(const Matrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

}  // namespace pptlab
