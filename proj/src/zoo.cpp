#include "pptlab/zoo.hpp"

#include <cmath>
#include <numbers>

namespace pptlab {

std::int64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::int64_t out = 1;
  for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

std::int64_t delta(int m, int n) {
  if (m < 1 || n < 1) throw InputError("delta needs positive dimensions");
  return binomial(m + n - 2, m - 1);
}

std::int64_t degree_sum(int m, int n, int r) {
  std::int64_t total = 0;
  for (int k = std::max(0, r - n + 1); k <= std::min(m - 1, r); ++k) {
    total += binomial(r, k) * binomial(m + n - 2 - r, m - 1 - k);
  }
  return total;
}

double UpbFamily::orthonormality_defect() const {
  const auto k = static_cast<Eigen::Index>(vectors.size());
  if (k == 0) return 0.0;
  Matrix v(dims.total(), k);
  for (Eigen::Index i = 0; i < k; ++i) v.col(i) = vectors[i].tensor();
  return max_abs(v.adjoint() * v - Matrix::Identity(k, k));
}

namespace {

Vector basis_vector(int dim, int idx) {
  Vector e = Vector::Zero(dim);
  e(idx) = 1.0;
  return e;
}

cplx root_of_unity(long long num, long long den) {
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(num % den) / den;
  return std::polar(1.0, angle);
}

}  // namespace

UpbFamily gentiles2_upb(int m, int n) {
  if (!(n >= m && m >= 3 && n > 3)) {
    throw InputError("GenTiles2 needs n >= m >= 3 and n > 3, got " + std::to_string(m) + "x" +
                     std::to_string(n));
  }
  UpbFamily upb{BipartiteDims(m, n), {}, "gentiles2"};
  for (int j = 0; j < m; ++j) {
    upb.vectors.push_back(ProductVector::make(
        basis_vector(m, j) - basis_vector(m, (j + 1) % m), basis_vector(n, j)));
  }
  for (int j = 0; j < m; ++j) {
    for (int k = 1; k <= n - 3; ++k) {
      Vector b = Vector::Zero(n);
      for (int i = 0; i <= m - 3; ++i) b((i + j + 1) % m) += root_of_unity(1LL * i * k, n - 2);
      for (int i = m - 2; i <= n - 3; ++i) b(i + 2) += root_of_unity(1LL * i * k, n - 2);
      upb.vectors.push_back(ProductVector::make(basis_vector(m, j), b));
    }
  }
  upb.vectors.push_back(ProductVector::make(Vector::Ones(m), Vector::Ones(n)));
  return upb;
}

UpbFamily tiles_upb() {
  UpbFamily upb{BipartiteDims(3, 3), {}, "tiles"};
  auto e = [](int i) { return basis_vector(3, i); };
  upb.vectors.push_back(ProductVector::make(e(0), e(0) - e(1)));
  upb.vectors.push_back(ProductVector::make(e(0) - e(1), e(2)));
  upb.vectors.push_back(ProductVector::make(e(2), e(1) - e(2)));
  upb.vectors.push_back(ProductVector::make(e(1) - e(2), e(0)));
  upb.vectors.push_back(ProductVector::make(Vector::Ones(3), Vector::Ones(3)));
  return upb;
}

BipartiteState upb_complement_state(const UpbFamily& upb, double tol) {
  for (const auto& pv : upb.vectors) {
    if (pv.a.size() != upb.dims.m || pv.b.size() != upb.dims.n) {
      throw InputError("UPB vector does not match dims");
    }
  }
  const double defect = upb.orthonormality_defect();
  if (defect > tol) {
    throw InputError("UPB is not orthonormal (Gram defect " + std::to_string(defect) + ")");
  }
  const int d = upb.dims.total();
  Matrix rho = Matrix::Identity(d, d);
  for (const auto& pv : upb.vectors) {
    const Vector v = pv.tensor();
    rho -= v * v.adjoint();
  }
  return BipartiteState(upb.dims, rho);
}

cplx circulant_det(const std::vector<double>& first_row) {
  const auto m = static_cast<long long>(first_row.size());
  cplx det = 1.0;
  for (long long j = 0; j < m; ++j) {
    cplx f = 0.0;
    for (long long k = m - 1; k >= 0; --k) f = f * root_of_unity(j, m) + first_row[k];
    det *= f;
  }
  return det;
}

RealMatrix circulant_matrix(const std::vector<double>& first_row) {
  const auto m = static_cast<Eigen::Index>(first_row.size());
  RealMatrix z(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) z(i, j) = first_row[(j - i + m) % m];
  }
  return z;
}

std::vector<double> gentiles2_z_row(int m) {
  if (m < 3) throw InputError("circulant Z needs m >= 3");
  std::vector<double> row(m, -2.0);
  row[0] = 4.0 * m - 2.0;
  row[1] = m - 2.0;
  row[m - 1] = m - 2.0;
  return row;
}

KonMnogo kon_mnogo() {
  std::vector<Matrix> w(10, Matrix::Zero(3, 4));
  w[0](0, 0) = 1;  w[0](1, 0) = -1;
  w[1](1, 1) = 1;  w[1](2, 1) = -1;
  w[2](0, 2) = -1; w[2](2, 2) = 1;
  w[3](0, 1) = 1;  w[3](0, 3) = -1;
  w[4](1, 2) = 1;  w[4](1, 3) = -1;
  w[5](2, 0) = 1;  w[5](2, 3) = -1;
  w[6].setOnes();
  w[7] = 15.0 * (-w[0] + w[2] + w[4] + w[5]) - 5.0 * w[3] + 3.0 * w[6];
  w[8] = 15.0 * (w[0] - w[1] + w[3] + w[5]) - 5.0 * w[4] + 3.0 * w[6];
  w[9] = 15.0 * (w[1] - w[2] + w[3] + w[4]) - 5.0 * w[5] + 3.0 * w[6];

  const BipartiteDims dims(3, 4);
  Matrix rho = Matrix::Identity(12, 12);
  for (int i = 0; i < 7; ++i) {
    const Vector v = Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, 1>>(
        Matrix(w[i].transpose()).data(), 12);
    rho -= v * v.adjoint() / v.squaredNorm();
  }
  std::vector<ProductVector> pvs;
  for (const auto& wi : w) {
    Eigen::JacobiSVD<Matrix> svd(wi, Eigen::ComputeFullU | Eigen::ComputeFullV);
    pvs.push_back(ProductVector::make(svd.matrixU().col(0), svd.matrixV().col(0).conjugate()));
  }
  return {BipartiteState(dims, rho), w, pvs};
}

std::string to_string(FamilyVariant v) {
  switch (v) {
    case FamilyVariant::Good3x4Fixed: return "good-3x4";
    case FamilyVariant::Good3xN: return "good-3xN";
    case FamilyVariant::Bad3x4: return "bad-3x4";
    case FamilyVariant::Bad3xN: return "bad-3xN";
    case FamilyVariant::BadMxN: return "bad-MxN";
  }
  return "unknown";
}

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw InputError(what);
}

std::vector<double> good_b(const FamilyParams& p, int n) {
  if (!p.b.empty()) return p.b;
  std::vector<double> b;
  for (int i = 1; i <= n - 3; ++i) b.push_back(i + 1.0);
  return b;
}

std::vector<double> bad_c(const FamilyParams& p, int m) {
  if (!p.c.empty()) return p.c;
  std::vector<double> c;
  for (int i = 3; i <= m - 1; ++i) c.push_back(i);
  return c;
}

BlockFactor good_3x4_fixed() {
  BlockFactor f{BipartiteDims(3, 4), 5, {}};
  Matrix c0 = Matrix::Zero(5, 4), c1(5, 4), c2(5, 4);
  c0(0, 0) = c0(1, 1) = c0(2, 2) = 1;
  c1 << 0, 1, 2, 0,
        1, 0, 0, 0,
        2, 0, 1, 0,
        0, 0, 1, 0,
        0, 0, -1, 1;
  c2 << 1, 0, 0, 0,
        0, -1, 1, 0,
        0, 1, -1, 0,
        -3, -1, 1, 1,
        0, 0, 0, 1;
  f.blocks = {c0, c1, c2};
  return f;
}

BlockFactor good_3xn(const std::vector<double>& b, int n) {
  const int k = n - 3;
  BlockFactor f{BipartiteDims(3, n), n + 1, {}};
  Matrix c0 = Matrix::Zero(n + 1, n), c1 = Matrix::Zero(n + 1, n), c2 = Matrix::Zero(n + 1, n);
  for (int i = 0; i < n - 1; ++i) c0(i, i) = 1;
  for (int i = 0; i < k; ++i) {
    c1(i, i) = k * (b[i] * b[i] - 1.0);
    c1(i, k) = 1;
    c1(i, k + 1) = b[i];
    c1(k, i) = 1;
    c1(k + 1, i) = b[i];
    c2(i, i) = b[i] - 1.0;
    c2(k + 2, i) = 1.0 - b[i] * b[i];
  }
  c1(k + 1, k + 1) = 1;
  c1(k + 2, k + 1) = 1;
  c1(k + 3, k + 1) = -1;
  c1(k + 3, k + 2) = 1;
  c2(k, k) = -1;
  c2(k, k + 1) = 1;
  c2(k + 1, k) = 1;
  c2(k + 1, k + 1) = -1;
  c2(k + 2, k) = -1;
  c2(k + 2, k + 1) = 1;
  c2(k + 2, k + 2) = 1;
  c2(k + 3, k + 2) = 1;
  f.blocks = {c0, c1, c2};
  return f;
}

std::array<Matrix, 3> bad_3x4_blocks(const std::array<double, 7>& p) {
  const double a = p[0], b = p[1], c = p[2], d = p[3], e = p[4], ff = p[5], g = p[6];
  Matrix c0 = Matrix::Zero(5, 4), c1 = Matrix::Zero(5, 4), c2 = Matrix::Zero(5, 4);
  c0(0, 0) = c0(1, 1) = 1;
  c1(1, 1) = -b * e / a;
  c1(2, 2) = 1;
  c1(3, 3) = 1;
  c1(4, 1) = b;
  c2(0, 1) = a;
  c2(1, 0) = a;
  c2(1, 1) = ff;
  c2(2, 1) = b;
  c2(3, 1) = b * d;
  c2(3, 3) = c;
  c2(4, 0) = e;
  c2(4, 1) = g;
  c2(4, 2) = 1;
  c2(4, 3) = d;
  return {c0, c1, c2};
}

std::array<Matrix, 3> bad_3xn_blocks(int n) {
  const auto base = bad_3x4_blocks({1, 1, 1, 1, 1, 0, 0});
  if (n == 4) return base;
  const int off = n - 4;
  std::array<Matrix, 3> out;
  for (auto& c : out) c = Matrix::Zero(n + 1, n);
  for (int i = 0; i < off; ++i) out[0](i, i) = 1;
  for (int i = 0; i < 3; ++i) out[i].block(off, off, 5, 4) += base[i];
  for (int i = 1; i < 3; ++i) {
    for (int j = 0; j < off; ++j) {
      out[i](j, j + 1) += 1;
      out[i](j + 1, j) += 1;
    }
  }
  out[2](n, n - 5) += 1;
  return out;
}

BlockFactor bad_mxn(const std::vector<double>& c, int m, int n) {
  const auto top = bad_3xn_blocks(n);
  const int r = m + n - 2;
  BlockFactor f{BipartiteDims(m, n), r, {}};
  for (int i = 0; i < m; ++i) {
    Matrix ci = Matrix::Zero(r, n);
    if (i < 3) {
      ci.topRows(n + 1) = top[i];
    } else {
      ci(0, 1) = 1;
      ci(n + 1 + (i - 3), 0) = c[i - 3];
      ci(n + 1 + (i - 3), 1) = -1;
    }
    if (i == 0) {
      for (int q = 0; q < m - 3; ++q) ci(n + 1 + q, 0) = 1;
    }
    f.blocks.push_back(ci);
  }
  return f;
}

}  // namespace

void validate(const FamilyParams& p, int m, int n) {
  const std::string shape = std::to_string(m) + "x" + std::to_string(n);
  switch (p.variant) {
    case FamilyVariant::Good3x4Fixed:
      require(m == 3 && n == 4, "good-3x4 is a 3x4 state, got " + shape);
      break;
    case FamilyVariant::Good3xN: {
      require(m == 3 && n >= 4, "good-3xN needs m = 3 and n >= 4, got " + shape);
      const auto b = good_b(p, n);
      require(static_cast<int>(b.size()) == n - 3,
              "good-3xN needs n-3 = " + std::to_string(n - 3) + " values of b");
      for (std::size_t i = 0; i < b.size(); ++i) {
        require(std::isfinite(b[i]), "b must be finite");
        require(std::abs(b[i] * b[i] - 1.0) > 1e-12, "b_i^2 must differ from 1");
        for (std::size_t j = 0; j < i; ++j) {
          require(std::abs(b[i] * b[i] - b[j] * b[j]) > 1e-12, "the b_i^2 must be distinct");
        }
      }
      break;
    }
    case FamilyVariant::Bad3x4:
      require(m == 3 && n == 4, "bad-3x4 is a 3x4 state, got " + shape);
      for (int i = 0; i < 7; ++i) require(std::isfinite(p.abcdefg[i]), "parameters must be finite");
      for (int i = 0; i < 5; ++i) {
        require(p.abcdefg[i] != 0.0, "bad-3x4 needs a, b, c, d, e nonzero");
      }
      break;
    case FamilyVariant::Bad3xN:
      require(m == 3 && n >= 4, "bad-3xN needs m = 3 and n >= 4, got " + shape);
      break;
    case FamilyVariant::BadMxN: {
      require(m >= 3 && n >= 4, "bad-MxN needs m >= 3 and n >= 4, got " + shape);
      const auto c = bad_c(p, m);
      require(static_cast<int>(c.size()) == m - 3,
              "bad-MxN needs m-3 = " + std::to_string(m - 3) + " values of c");
      for (std::size_t i = 0; i < c.size(); ++i) {
        require(std::isfinite(c[i]) && c[i] != 0.0, "c_i must be nonzero");
        for (std::size_t j = 0; j < i; ++j) require(c[i] != c[j], "c_i must be distinct");
      }
      break;
    }
  }
}

BlockFactor family_blocks(const FamilyParams& p, int m, int n) {
  validate(p, m, n);
  switch (p.variant) {
    case FamilyVariant::Good3x4Fixed:
      return good_3x4_fixed();
    case FamilyVariant::Good3xN:
      return good_3xn(good_b(p, n), n);
    case FamilyVariant::Bad3x4: {
      const auto c = bad_3x4_blocks(p.abcdefg);
      return {BipartiteDims(3, 4), 5, {c[0], c[1], c[2]}};
    }
    case FamilyVariant::Bad3xN: {
      const auto c = bad_3xn_blocks(n);
      return {BipartiteDims(3, n), n + 1, {c[0], c[1], c[2]}};
    }
    case FamilyVariant::BadMxN:
      return bad_mxn(bad_c(p, m), m, n);
  }
  throw InputError("unknown family");
}

BipartiteState make_family(const FamilyParams& p, int m, int n) {
  return from_blocks(family_blocks(p, m, n));
}

}  // namespace pptlab
