#include <cmath>
#include <random>

#include "pptlab/segre.hpp"

namespace pptlab {

namespace {

Matrix gaussian_matrix(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix out(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) out(i, j) = cplx(g(rng), g(rng));
  }
  return out;
}

Matrix random_unitary(int n, std::mt19937_64& rng) {
  Eigen::HouseholderQR<Matrix> qr(gaussian_matrix(n, n, rng));
  return qr.householderQ() * Matrix::Identity(n, n);
}

Matrix kron_matrix(const Matrix& x, const Matrix& y) {
  Matrix out(x.rows() * y.rows(), x.cols() * y.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
    }
  }
  return out;
}

double rcond(const Matrix& a) {
  const auto sv = singular_values(a);
  if (sv.empty() || sv.front() == 0.0) return 0.0;
  return sv.back() / sv.front();
}

/// Roots x of det(a0 + x a1) = 0, via the eigenvalues of -a1^{-1} a0.
Vector pencil_roots(const Matrix& a0, const Matrix& a1) {
  const Matrix m = -a1.partialPivLu().solve(a0);
  Eigen::ComplexEigenSolver<Matrix> es(m, false);
  return es.eigenvalues();
}

}  // namespace

AlgebraicResult algebraic_product_vectors(const KernelSystem& sys, std::uint64_t seed,
                                          double residual_tol) {
  AlgebraicResult out;
  const int m = sys.dims().m, n = sys.dims().n, p = sys.p();
  if (m < 2 || m > 3 || p < m + n - 2 || p < n) return out;
  std::mt19937_64 rng(seed ^ 0xa5a5a5a5ULL);

  for (int attempt = 0; attempt < 4; ++attempt) {
    const Matrix u = random_unitary(m, rng);
    std::vector<Matrix> f;
    for (int k = 0; k < m; ++k) f.push_back(sys.F(u.col(k)));
    const Matrix r1 = gaussian_matrix(n, p, rng), r2 = gaussian_matrix(n, p, rng);
    std::vector<Matrix> a, b;
    for (int k = 0; k < m; ++k) {
      a.push_back(r1 * f[k]);
      b.push_back(r2 * f[k]);
    }
    std::vector<Vector> coords;
    if (m == 2) {
      if (rcond(a[1]) < 1e-12) continue;
      const Vector xs = pencil_roots(a[0], a[1]);
      for (Eigen::Index i = 0; i < xs.size(); ++i) {
        Vector c(2);
        c << 1.0, xs(i);
        coords.push_back(c);
      }
    } else {
      const Matrix d0 = kron_matrix(a[1], b[2]) - kron_matrix(a[2], b[1]);
      const Matrix d1 = kron_matrix(a[2], b[0]) - kron_matrix(a[0], b[2]);
      if (rcond(d0) < 1e-13 || rcond(a[2]) < 1e-12) continue;
      Eigen::ComplexEigenSolver<Matrix> es(d0.partialPivLu().solve(d1), false);
      const Vector xs = es.eigenvalues();
      for (Eigen::Index i = 0; i < xs.size(); ++i) {
        const Vector ys = pencil_roots(a[0] + xs(i) * a[1], a[2]);
        for (Eigen::Index k = 0; k < ys.size(); ++k) {
          Vector c(3);
          c << 1.0, xs(i), ys(k);
          coords.push_back(c);
        }
      }
    }
    out.status = "ok";
    for (const auto& c : coords) {
      if (!c.allFinite()) continue;
      Vector av = u * c;
      av.normalize();
      const Matrix fa = sys.F(av);
      Eigen::JacobiSVD<Matrix> svd(fa, Eigen::ComputeFullV);
      const auto& s = svd.singularValues();
      const double smin = s.size() < n ? 0.0 : s(n - 1);
      if (s(0) > 0.0 && smin / s(0) >= 1e-4) continue;
      ++out.candidates;
      Vector bv = svd.matrixV().col(n - 1);
      if (polish_product_vector(sys, av, bv, 30) > residual_tol) continue;
      const ProductVector pv = ProductVector::make(av, bv);
      bool dup = false;
      for (const auto& q : out.points) dup = dup || overlap(q, pv) > 1.0 - 1e-6;
      if (!dup) out.points.push_back(pv);
    }
    return out;
  }
  out.status = "degenerate";
  return out;
}

}  // namespace pptlab
