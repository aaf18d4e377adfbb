#include "pptlab/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pptlab {

BipartiteDims::BipartiteDims(int m_, int n_) : m(m_), n(n_) {
  if (m < 1 || n < 1) {
    throw InputError("bipartite dimensions must be positive, got " + std::to_string(m) +
                     "x" + std::to_string(n));
  }
}

HermitianOperator::HermitianOperator(BipartiteDims dims, const Matrix& entries,
                                     double hermiticity_tol)
    : dims_(dims) {
  if (entries.rows() != dims.total() || entries.cols() != dims.total()) {
    throw InputError("operator of size " + std::to_string(entries.rows()) + "x" +
                     std::to_string(entries.cols()) + " does not match dims " +
                     std::to_string(dims.m) + "x" + std::to_string(dims.n));
  }
  const Matrix adj = entries.adjoint();
  asymmetry_ = max_abs(entries - adj);
  const double scale = std::max(1.0, max_abs(entries));
  if (asymmetry_ > hermiticity_tol * scale) {
    throw InputError("operator is not Hermitian (asymmetry " + std::to_string(asymmetry_) + ")");
  }
  entries_ = 0.5 * (entries + adj);
}

Matrix HermitianOperator::block(int i, int j) const {
  const int n = dims_.n;
  return entries_.block(i * n, j * n, n, n);
}

BipartiteState::BipartiteState(HermitianOperator op, double psd_tol) : op_(std::move(op)) {
  const RealVector ev = hermitian_eigenvalues(op_.matrix());
  const double top = ev.size() ? ev.maxCoeff() : 0.0;
  if (!(top > 0.0)) throw InputError("state must have a positive eigenvalue");
  if (ev.minCoeff() < -psd_tol * top) {
    throw InputError("operator is not positive semidefinite (min eigenvalue " +
                     std::to_string(ev.minCoeff()) + ")");
  }
  if (!(op_.trace() > 0.0)) throw InputError("state must have positive trace");
}

BipartiteState::BipartiteState(BipartiteDims dims, const Matrix& entries, double psd_tol)
    : BipartiteState(HermitianOperator(dims, entries), psd_tol) {}

void BlockFactor::validate() const {
  if (static_cast<int>(blocks.size()) != dims.m) {
    throw InputError("block factor needs " + std::to_string(dims.m) + " blocks, got " +
                     std::to_string(blocks.size()));
  }
  if (r_rows < 1) throw InputError("block factor needs at least one row");
  for (const auto& c : blocks) {
    if (c.rows() != r_rows || c.cols() != dims.n) {
      throw InputError("block of shape " + std::to_string(c.rows()) + "x" +
                       std::to_string(c.cols()) + " where " + std::to_string(r_rows) + "x" +
                       std::to_string(dims.n) + " was expected");
    }
  }
}

Matrix BlockFactor::stacked() const {
  validate();
  Matrix c(r_rows, dims.total());
  for (int i = 0; i < dims.m; ++i) c.middleCols(i * dims.n, dims.n) = blocks[i];
  return c;
}

void SubspaceBasis::check_orthonormal(double tol) const {
  if (vectors.rows() != ambient_dim) throw InputError("basis vectors have the wrong length");
  if (vectors.cols() == 0) return;
  const Matrix gram = vectors.adjoint() * vectors;
  const double dev = max_abs(gram - Matrix::Identity(gram.rows(), gram.cols()));
  if (dev > tol) {
    throw InputError("basis is not orthonormal (Gram deviation " + std::to_string(dev) + ")");
  }
}

double SubspaceBasis::distance(const Vector& v) const {
  if (vectors.cols() == 0) return v.norm();
  return (v - vectors * (vectors.adjoint() * v)).norm();
}

BipartiteState from_blocks(const BlockFactor& factor) {
  const Matrix c = factor.stacked();
  return BipartiteState(factor.dims, c.adjoint() * c);
}

BlockFactor factor_blocks(const BipartiteState& state, int r_rows, double tol_rel) {
  const auto dims = state.dims();
  Eigen::SelfAdjointEigenSolver<Matrix> es(state.matrix());
  const RealVector& ev = es.eigenvalues();
  const double top = ev.maxCoeff();
  int rank = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) > tol_rel * top) ++rank;
  }
  if (r_rows < rank) {
    throw InputError("cannot factor a rank-" + std::to_string(rank) + " state with " +
                     std::to_string(r_rows) + " rows");
  }
  Matrix c = Matrix::Zero(r_rows, dims.total());
  // largest eigenvalues come last
  for (int k = 0; k < rank; ++k) {
    const Eigen::Index idx = ev.size() - 1 - k;
    c.row(k) = std::sqrt(ev(idx)) * es.eigenvectors().col(idx).adjoint();
  }
  BlockFactor out{dims, r_rows, {}};
  for (int i = 0; i < dims.m; ++i) out.blocks.push_back(c.middleCols(i * dims.n, dims.n));
  return out;
}

Matrix partial_transpose(const Matrix& x, BipartiteDims dims) {
  const int n = dims.n;
  Matrix out(x.rows(), x.cols());
  for (int i = 0; i < dims.m; ++i) {
    for (int j = 0; j < dims.m; ++j) out.block(j * n, i * n, n, n) = x.block(i * n, j * n, n, n);
  }
  return out;
}

HermitianOperator partial_transpose(const HermitianOperator& op) {
  return HermitianOperator(op.dims(), partial_transpose(op.matrix(), op.dims()));
}

ReducedOperators reduced_operators(const Matrix& x, BipartiteDims dims) {
  const int m = dims.m, n = dims.n;
  ReducedOperators out{Matrix::Zero(m, m), Matrix::Zero(n, n)};
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) out.rho_a(i, j) = x.block(i * n, j * n, n, n).trace();
    out.rho_b += x.block(i * n, i * n, n, n);
  }
  return out;
}

ReducedOperators reduced_operators(const HermitianOperator& op) {
  return reduced_operators(op.matrix(), op.dims());
}

namespace {

NumericRank hermitian_rank(const Matrix& h, double tol_rel) {
  const RealVector ev = hermitian_eigenvalues(h);
  std::vector<double> mags(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i) mags[i] = std::abs(ev(i));
  return numeric_rank(mags, tol_rel);
}

SubspaceBasis split_spectrum(const HermitianOperator& op, double tol_rel, bool want_kernel) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(op.matrix());
  const RealVector& ev = es.eigenvalues();
  const double top = ev.cwiseAbs().maxCoeff();
  std::vector<Eigen::Index> idx;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    const bool in_kernel = std::abs(ev(i)) <= tol_rel * top;
    if (in_kernel == want_kernel) idx.push_back(i);
  }
  SubspaceBasis out;
  out.ambient_dim = op.dims().total();
  out.tol_used = tol_rel;
  out.vectors.resize(out.ambient_dim, static_cast<Eigen::Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) out.vectors.col(k) = es.eigenvectors().col(idx[k]);
  return out;
}

}  // namespace

RankProfile rank_profile(const BipartiteState& state, double tol_rel) {
  const auto& op = state.op();
  const Matrix gamma = partial_transpose(op.matrix(), op.dims());
  const auto red = reduced_operators(op);
  const NumericRank r = hermitian_rank(op.matrix(), tol_rel);
  const NumericRank s = hermitian_rank(gamma, tol_rel);
  const NumericRank ra = hermitian_rank(red.rho_a, tol_rel);
  const NumericRank rb = hermitian_rank(red.rho_b, tol_rel);
  return {r.rank, s.rank, ra.rank, rb.rank, {r.gap, s.gap, ra.gap, rb.gap}};
}

PptVerdict is_ppt(const BipartiteState& state, double tol) {
  const Matrix gamma = partial_transpose(state.matrix(), state.dims());
  const RealVector ev = hermitian_eigenvalues(0.5 * (gamma + gamma.adjoint()));
  PptVerdict v;
  v.min_eig = ev.minCoeff();
  v.max_eig = ev.maxCoeff();
  v.ppt = v.min_eig >= -tol * v.max_eig;
  return v;
}

SubspaceBasis kernel_basis(const HermitianOperator& op, double tol_rel) {
  return split_spectrum(op, tol_rel, true);
}

SubspaceBasis range_basis(const HermitianOperator& op, double tol_rel) {
  return split_spectrum(op, tol_rel, false);
}

BipartiteState normalized(const BipartiteState& state) {
  return BipartiteState(state.dims(), state.matrix() / state.trace());
}

Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

Matrix as_matrix(const Vector& v, BipartiteDims dims) {
  Matrix out(dims.m, dims.n);
  for (int i = 0; i < dims.m; ++i) {
    for (int j = 0; j < dims.n; ++j) out(i, j) = v(i * dims.n + j);
  }
  return out;
}

Matrix apply_local(const Matrix& x, const Matrix& p, const Matrix& q) {
  const auto m = p.rows(), n = q.rows();
  Matrix pq = Matrix::Zero(m * n, m * n);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) pq.block(i * n, j * n, n, n) = p(i, j) * q;
  }
  return pq * x * pq.adjoint();
}

}  // namespace pptlab

namespace pptlab {

ProductVector ProductVector::make(const Vector& a, const Vector& b) {
  const double na = a.norm(), nb = b.norm();
  if (!(na > 0.0) || !(nb > 0.0)) throw InputError("product vector factor is zero");
  return {canonical_phase(a / na), canonical_phase(b / nb)};
}

Vector ProductVector::tensor() const { return kron(a, b); }

double overlap(const ProductVector& x, const ProductVector& y) {
  return std::abs(x.a.dot(y.a)) * std::abs(x.b.dot(y.b));
}

BipartiteState product_mixture(BipartiteDims dims, const std::vector<ProductVector>& pvs,
                               const std::vector<double>& weights) {
  if (!weights.empty() && weights.size() != pvs.size()) {
    throw InputError("weights and product vectors differ in length");
  }
  Matrix rho = Matrix::Zero(dims.total(), dims.total());
  for (std::size_t k = 0; k < pvs.size(); ++k) {
    if (pvs[k].a.size() != dims.m || pvs[k].b.size() != dims.n) {
      throw InputError("product vector does not match dims");
    }
    const Vector v = pvs[k].tensor();
    rho += (weights.empty() ? 1.0 : weights[k]) * v * v.adjoint();
  }
  return BipartiteState(dims, rho);
}

}  // namespace pptlab
