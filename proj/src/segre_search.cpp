#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "pptlab/segre.hpp"

namespace pptlab {

KernelSystem::KernelSystem(BipartiteDims dims, const Matrix& perp) : dims_(dims), perp_(perp) {
  if (perp.rows() != dims.total()) throw InputError("complement basis has the wrong length");
  const int m = dims.m, n = dims.n, p = static_cast<int>(perp.cols());
  fa_.assign(m, Matrix::Zero(p, n));
  gb_.assign(n, Matrix::Zero(p, m));
  for (int j = 0; j < p; ++j) {
    for (int i = 0; i < m; ++i) {
      for (int l = 0; l < n; ++l) {
        const cplx w = std::conj(perp(i * n + l, j));
        fa_[i](j, l) = w;
        gb_[l](j, i) = w;
      }
    }
  }
}

KernelSystem KernelSystem::from_subspace(const SubspaceBasis& k, BipartiteDims dims) {
  if (k.ambient_dim != dims.total()) throw InputError("subspace does not match dims");
  k.check_orthonormal();
  return KernelSystem(dims, orthogonal_complement(k.vectors, dims.total()));
}

Matrix KernelSystem::F(const Vector& a) const {
  Matrix out = Matrix::Zero(p(), dims_.n);
  for (int i = 0; i < dims_.m; ++i) out += a(i) * fa_[i];
  return out;
}

Matrix KernelSystem::G(const Vector& b) const {
  Matrix out = Matrix::Zero(p(), dims_.m);
  for (int l = 0; l < dims_.n; ++l) out += b(l) * gb_[l];
  return out;
}

double KernelSystem::residual(const Vector& a, const Vector& b) const {
  if (p() == 0) return 0.0;
  return (F(a) * b).norm();
}

KernelSystem KernelSystem::swapped() const {
  const int m = dims_.m, n = dims_.n;
  Matrix perm(perp_.rows(), perp_.cols());
  for (int i = 0; i < m; ++i) {
    for (int l = 0; l < n; ++l) perm.row(l * m + i) = perp_.row(i * n + l);
  }
  return KernelSystem(BipartiteDims(n, m), perm);
}

namespace {

std::vector<int> first_primes(int count) {
  std::vector<int> primes;
  for (int c = 2; static_cast<int>(primes.size()) < count; ++c) {
    bool prime = true;
    for (int q : primes) {
      if (q * q > c) break;
      if (c % q == 0) {
        prime = false;
        break;
      }
    }
    if (prime) primes.push_back(c);
  }
  return primes;
}

Vector min_eigvec(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  return es.eigenvectors().col(0);
}

}  // namespace

StartSequence::StartSequence(BipartiteDims dims, std::uint64_t seed) : dims_(dims) {
  const int d = 2 * (dims.m + dims.n);
  bases_ = first_primes(d);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int base : bases_) {
    std::vector<int> perm(base);
    for (int i = 0; i < base; ++i) perm[i] = i;
    std::shuffle(perm.begin() + 1, perm.end(), rng);
    perms_.push_back(std::move(perm));
  }
  shift_.resize(d);
  for (int i = 0; i < d; ++i) shift_(i) = unif(rng);
}

std::pair<Vector, Vector> StartSequence::operator()(std::uint64_t index) const {
  const int d = static_cast<int>(bases_.size());
  std::vector<double> u(d);
  for (int k = 0; k < d; ++k) {
    const int base = bases_[k];
    double x = 0.0, scale = 1.0 / base;
    for (std::uint64_t i = index + 1; i > 0; i /= base) {
      x += perms_[k][i % base] * scale;
      scale /= base;
    }
    x += shift_(k);
    u[k] = x - std::floor(x);
  }
  auto gauss_vec = [&](int offset, int len) {
    Vector v(len);
    for (int i = 0; i < len; ++i) {
      const double u1 = std::max(u[offset + 2 * i], 1e-300);
      const double u2 = u[offset + 2 * i + 1];
      const double r = std::sqrt(-2.0 * std::log(u1));
      v(i) = std::polar(r, 2.0 * std::numbers::pi * u2);
    }
    if (v.norm() == 0.0) v(0) = 1.0;
    return Vector(v / v.norm());
  };
  return {gauss_vec(0, dims_.m), gauss_vec(2 * dims_.m, dims_.n)};
}

double polish_product_vector(const KernelSystem& sys, Vector& a, Vector& b, int max_iter) {
  double res = sys.residual(a, b);
  const int m = sys.dims().m, n = sys.dims().n;
  if (sys.p() == 0 || m + n - 2 == 0) return res;
  for (int it = 0; it < max_iter && res > 1e-15; ++it) {
    const Matrix qa = complement_of_vector(a), qb = complement_of_vector(b);
    const Matrix fa = sys.F(a);
    Matrix j(sys.p(), m + n - 2);
    j.leftCols(m - 1) = sys.G(b) * qa;
    j.rightCols(n - 1) = fa * qb;
    Eigen::BDCSVD<Matrix> svd(j, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-10);
    const Vector step = svd.solve(-(fa * b));
    Vector a2 = a + qa * step.head(m - 1);
    Vector b2 = b + qb * step.tail(n - 1);
    a2.normalize();
    b2.normalize();
    const double res2 = sys.residual(a2, b2);
    if (!(res2 < res)) break;
    a = a2;
    b = b2;
    res = res2;
  }
  return res;
}

namespace detail {

/// Levenberg-Marquardt on the chart a + Qa x, b + Qb y, then Gauss-Newton.
/// When LM stalls, one alternating sweep is tried before giving up.
double local_solve(const KernelSystem& sys, Vector& a, Vector& b) {
  if (sys.p() == 0) return 0.0;
  const int m = sys.dims().m, n = sys.dims().n;
  double res = sys.residual(a, b);
  if (m + n - 2 == 0) return res;
  double lambda = 1e-2;
  double res_window = res;
  for (int it = 0; it < 200 && res > 1e-14; ++it) {
    if (it % 10 == 0) {
      if (it > 0 && res > 1e-3 && res > 0.99 * res_window) break;
      res_window = res;
    }
    const Matrix qa = complement_of_vector(a), qb = complement_of_vector(b);
    const Matrix fa = sys.F(a);
    Matrix j(sys.p(), m + n - 2);
    j.leftCols(m - 1) = sys.G(b) * qa;
    j.rightCols(n - 1) = fa * qb;
    const Matrix h = j.adjoint() * j;
    const Vector g = j.adjoint() * (fa * b);
    bool accepted = false;
    for (int t = 0; t < 12 && !accepted; ++t) {
      Matrix hd = h;
      hd.diagonal().array() += lambda;
      const Vector step = -hd.ldlt().solve(g);
      Vector a2 = a + qa * step.head(m - 1), b2 = b + qb * step.tail(n - 1);
      a2.normalize();
      b2.normalize();
      const double r2 = sys.residual(a2, b2);
      if (r2 < res) {
        a = a2;
        b = b2;
        res = r2;
        lambda = std::max(lambda * 0.1, 1e-12);
        accepted = true;
      } else {
        lambda *= 10.0;
      }
    }
    if (!accepted) break;
  }
  if (res > 1e-6) {
    const Matrix fa = sys.F(a);
    Vector b2 = min_eigvec(fa.adjoint() * fa);
    const Matrix gb = sys.G(b2);
    Vector a2 = min_eigvec(gb.adjoint() * gb);
    const double r2 = sys.residual(a2, b2);
    if (r2 < res) {
      a = a2;
      b = b2;
      res = r2;
    }
  }
  if (res < 1e-6) res = polish_product_vector(sys, a, b);
  return res;
}

}  // namespace detail

PointDiagnostics point_diagnostics(const KernelSystem& sys, const Vector& a, const Vector& b,
                                   double tol_rel) {
  const int m = sys.dims().m, n = sys.dims().n, p = sys.p();
  PointDiagnostics d;
  const int cols = m + n - 2;
  if (p == 0 || cols == 0) {
    d.jacobian_rank = 0;
    d.isolated = cols == 0;
    d.transversal = true;
    d.jacobian_cond = 1.0;
    return d;
  }
  Matrix j(p, cols);
  j.leftCols(m - 1) = sys.G(b) * complement_of_vector(a);
  j.rightCols(n - 1) = sys.F(a) * complement_of_vector(b);
  const auto sv = singular_values(j);
  const NumericRank nr = numeric_rank(sv, tol_rel);
  d.jacobian_rank = nr.rank;
  d.isolated = nr.rank == cols;
  d.transversal = nr.rank == p;
  const double smin = sv.back();
  d.jacobian_cond = smin > 0.0 ? sv.front() / smin : std::numeric_limits<double>::infinity();
  return d;
}

namespace {

double line_objective(const KernelSystem& sys, const Vector& a, int w, Matrix* basis) {
  const Matrix fa = sys.F(a);
  Eigen::SelfAdjointEigenSolver<Matrix> es(fa.adjoint() * fa);
  if (basis) *basis = es.eigenvectors().leftCols(w);
  return std::max(0.0, es.eigenvalues().head(w).sum());
}

void polish_line(const KernelSystem& sys, Vector& a, Matrix& bsp, int w) {
  const int m = sys.dims().m, n = sys.dims().n, p = sys.p();
  double obj = line_objective(sys, a, w, &bsp);
  for (int it = 0; it < 15 && obj > 1e-30; ++it) {
    const Matrix qa = complement_of_vector(a);
    const Matrix bperp = orthogonal_complement(bsp, n);
    const int k = static_cast<int>(bperp.cols());
    const Matrix fa = sys.F(a);
    const Matrix fbp = fa * bperp;
    Matrix j = Matrix::Zero(p * w, (m - 1) + w * k);
    Vector r(p * w);
    for (int c = 0; c < w; ++c) {
      j.block(c * p, 0, p, m - 1) = sys.G(bsp.col(c)) * qa;
      j.block(c * p, (m - 1) + c * k, p, k) = fbp;
      r.segment(c * p, p) = fa * bsp.col(c);
    }
    Eigen::BDCSVD<Matrix> svd(j, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-10);
    const Vector step = svd.solve(-r);
    Vector a2 = a + qa * step.head(m - 1);
    a2.normalize();
    Matrix b2;
    const double obj2 = line_objective(sys, a2, w, &b2);
    if (!(obj2 < obj)) break;
    a = a2;
    bsp = b2;
    obj = obj2;
  }
}

}  // namespace

std::vector<LineSubspace> find_fixed_a_subspaces(const KernelSystem& sys, int w, const EnumOptions& opts) {
  const int m = sys.dims().m, n = sys.dims().n, p = sys.p();
  std::vector<LineSubspace> out;
  if (w < 1 || w > n) return out;
  const StartSequence starts(sys.dims(), opts.seed ^ 0x5bd1e995ULL);
  const int count = opts.line_starts > 0 ? opts.line_starts : std::max(24, 6 * (m + n));

  auto record = [&](const Vector& a) {
    const Matrix fa = sys.F(a);
    Eigen::SelfAdjointEigenSolver<Matrix> es(fa.adjoint() * fa);
    const RealVector ev = es.eigenvalues().cwiseMax(0.0);
    const double res = std::sqrt(ev.head(w).sum());
    if (!(res < opts.residual_tol)) return;
    const Vector ac = canonical_phase(a);
    for (const auto& hit : out) {
      if (std::abs(hit.fixed.dot(ac)) > 1.0 - opts.dedup_tol) return;
    }
    int dim = 0;
    while (dim < n && std::sqrt(ev(dim)) < 1e-8) ++dim;
    dim = std::max(dim, w);
    out.push_back({true, ac, es.eigenvectors().leftCols(dim), res});
  };

  if (n - p >= w) {
    record(starts(0).first);
    return out;
  }
  for (int s = 0; s < count; ++s) {
    Vector a = starts(s).first;
    Matrix bsp;
    double obj = line_objective(sys, a, w, &bsp), prev = obj;
    for (int it = 0; it < 300 && obj > 1e-24; ++it) {
      Matrix h = Matrix::Zero(m, m);
      for (int c = 0; c < w; ++c) {
        const Matrix g = sys.G(bsp.col(c));
        h += g.adjoint() * g;
      }
      a = min_eigvec(h);
      obj = line_objective(sys, a, w, &bsp);
      if (obj < 1e-8) break;
      if (it > 20 && obj > 0.999 * prev) break;
      prev = obj;
    }
    if (obj < 1e-3) polish_line(sys, a, bsp, w);
    record(a);
  }
  return out;
}

std::vector<LineSubspace> find_line_subspaces(const SubspaceBasis& k, BipartiteDims dims, int w_dim,
                                              const EnumOptions& opts) {
  if (w_dim < 2) throw InputError("find_line_subspaces needs w_dim >= 2");
  const KernelSystem sys = KernelSystem::from_subspace(k, dims);
  auto out = find_fixed_a_subspaces(sys, w_dim, opts);
  for (auto hit : find_fixed_a_subspaces(sys.swapped(), w_dim, opts)) {
    hit.a_side = false;
    out.push_back(std::move(hit));
  }
  return out;
}

}  // namespace pptlab
