#pragma once

// Independent reference computations and random generators for the test suites.

#include <cmath>
#include <random>
#include <vector>

#include "pptlab/qstate.hpp"

namespace oracle {

using pptlab::BipartiteDims;
using pptlab::cplx;
using pptlab::Matrix;
using pptlab::RealMatrix;
using pptlab::Vector;

inline Vector random_vector(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = cplx(g(rng), g(rng));
  return v;
}

inline Matrix random_matrix(std::mt19937_64& rng, int r, int c) {
  std::normal_distribution<double> g;
  Matrix x(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) x(i, j) = cplx(g(rng), g(rng));
  return x;
}

inline Matrix random_hermitian(std::mt19937_64& rng, int d) {
  const Matrix x = random_matrix(rng, d, d);
  return 0.5 * (x + x.adjoint());
}

/// X X^dagger with X of shape d x r.
inline Matrix random_psd(std::mt19937_64& rng, int d, int r) {
  const Matrix x = random_matrix(rng, d, r);
  return x * x.adjoint();
}

inline Vector kron(const Vector& a, const Vector& b) {
  Vector v(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    for (Eigen::Index j = 0; j < b.size(); ++j) v(i * b.size() + j) = a(i) * b(j);
  return v;
}

inline Matrix kron(const Matrix& p, const Matrix& q) {
  Matrix out(p.rows() * q.rows(), p.cols() * q.cols());
  for (Eigen::Index i = 0; i < p.rows(); ++i)
    for (Eigen::Index j = 0; j < p.cols(); ++j)
      out.block(i * q.rows(), j * q.cols(), q.rows(), q.cols()) = p(i, j) * q;
  return out;
}

/// <i k| X^Gamma |j l> = <j k| X |i l>, entry by entry.
inline Matrix partial_transpose(const Matrix& x, BipartiteDims d) {
  Matrix out(x.rows(), x.cols());
  for (int i = 0; i < d.m; ++i)
    for (int j = 0; j < d.m; ++j)
      for (int k = 0; k < d.n; ++k)
        for (int l = 0; l < d.n; ++l) out(i * d.n + k, j * d.n + l) = x(j * d.n + k, i * d.n + l);
  return out;
}

inline Matrix reduced_a(const Matrix& x, BipartiteDims d) {
  Matrix out = Matrix::Zero(d.m, d.m);
  for (int i = 0; i < d.m; ++i)
    for (int j = 0; j < d.m; ++j)
      for (int k = 0; k < d.n; ++k) out(i, j) += x(i * d.n + k, j * d.n + k);
  return out;
}

inline Matrix reduced_b(const Matrix& x, BipartiteDims d) {
  Matrix out = Matrix::Zero(d.n, d.n);
  for (int k = 0; k < d.n; ++k)
    for (int l = 0; l < d.n; ++l)
      for (int i = 0; i < d.m; ++i) out(k, l) += x(i * d.n + k, i * d.n + l);
  return out;
}

inline long long pascal(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::vector<std::vector<long long>> t(n + 1);
  for (int i = 0; i <= n; ++i) {
    t[i].assign(i + 1, 1);
    for (int j = 1; j < i; ++j) t[i][j] = t[i - 1][j - 1] + t[i - 1][j];
  }
  return t[n][k];
}

inline int rank_qr(const Matrix& x, double tol_rel) {
  if (x.size() == 0) return 0;
  Eigen::ColPivHouseholderQR<Matrix> qr(x);
  qr.setThreshold(tol_rel);
  return static_cast<int>(qr.rank());
}

/// Roots (1, x) of det(W0 + x W1) for a 2 x n product system with n x n blocks:
/// the determinant is sampled on n+1 roots of unity, its coefficients recovered by
/// an inverse DFT and the roots taken from the companion matrix.
inline std::vector<std::pair<Vector, Vector>> two_qubit_style_roots(const Matrix& w, int n) {
  const Matrix w0 = w.leftCols(n), w1 = w.rightCols(n);
  const int s = n + 1;
  std::vector<cplx> samples(s), coef(s);
  for (int k = 0; k < s; ++k) {
    const cplx z = std::polar(1.0, 2.0 * M_PI * k / s);
    samples[k] = (w0 + z * w1).determinant();
  }
  for (int j = 0; j < s; ++j) {
    cplx c = 0.0;
    for (int k = 0; k < s; ++k) c += samples[k] * std::polar(1.0, -2.0 * M_PI * j * k / s);
    coef[j] = c / static_cast<double>(s);
  }
  Matrix comp = Matrix::Zero(n, n);
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) comp(i, n - 1) = -coef[i] / coef[n];
  Eigen::ComplexEigenSolver<Matrix> es(comp);
  std::vector<std::pair<Vector, Vector>> out;
  for (int i = 0; i < n; ++i) {
    const cplx x = es.eigenvalues()(i);
    Vector a(2);
    a << 1.0, x;
    Eigen::JacobiSVD<Matrix> svd(w0 + x * w1, Eigen::ComputeFullV);
    out.emplace_back(a.normalized(), svd.matrixV().col(n - 1));
  }
  return out;
}

/// Distance between unit vectors up to a global phase.
inline double phase_distance(const Vector& x, const Vector& y) {
  const cplx ip = y.dot(x);
  const cplx ph = std::abs(ip) > 0 ? ip / std::abs(ip) : cplx(1.0);
  return (x.normalized() - y.normalized() * ph).norm();
}

/// dim of {H Hermitian : (1-P)H = 0, (1-Q)H^Gamma = 0} over the full d x d Hermitian basis.
inline int hermitian_nullity(const Matrix& rho, BipartiteDims dims, double tol_rel = 1e-8) {
  const int d = dims.total();
  Eigen::SelfAdjointEigenSolver<Matrix> e1(rho), e2(oracle::partial_transpose(rho, dims));
  auto projector_off = [&](const Eigen::SelfAdjointEigenSolver<Matrix>& es) {
    const double top = es.eigenvalues().cwiseAbs().maxCoeff();
    Matrix p = Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i) {
      if (std::abs(es.eigenvalues()(i)) <= 1e-9 * top) p += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
    }
    return p;
  };
  const Matrix kp = projector_off(e1), kq = projector_off(e2);
  RealMatrix a(4 * d * d, d * d);
  int col = 0;
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      for (int part = 0; part < (i == j ? 1 : 2); ++part) {
        Matrix h = Matrix::Zero(d, d);
        if (i == j) {
          h(i, i) = 1.0;
        } else if (part == 0) {
          h(i, j) = h(j, i) = 1.0;
        } else {
          h(i, j) = cplx(0, 1);
          h(j, i) = cplx(0, -1);
        }
        const Matrix c1 = kp * h, c2 = kq * oracle::partial_transpose(h, dims);
        int row = 0;
        for (int u = 0; u < d; ++u)
          for (int v = 0; v < d; ++v) {
            a(row++, col) = c1(u, v).real();
            a(row++, col) = c1(u, v).imag();
            a(row++, col) = c2(u, v).real();
            a(row++, col) = c2(u, v).imag();
          }
        ++col;
      }
    }
  }
  Eigen::JacobiSVD<RealMatrix> svd(a);
  const auto& s = svd.singularValues();
  const double scale = std::max(1.0, s(0));
  int kept = 0;
  while (kept < s.size() && s(kept) > tol_rel * scale) ++kept;
  return d * d - kept;
}

}  // namespace oracle
