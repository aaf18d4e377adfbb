#include "pptlab/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "pptlab/zoo.hpp"

namespace pptlab {

std::string to_string(ExtremalityVerdict v) {
  switch (v) {
    case ExtremalityVerdict::Extreme: return "Extreme";
    case ExtremalityVerdict::NotExtreme: return "NotExtreme";
    case ExtremalityVerdict::Borderline: return "Borderline";
  }
  return "Borderline";
}

std::string to_string(StrongExtremality s) {
  return s == StrongExtremality::Yes ? "Yes" : "NotApplicable";
}

namespace {

/// H = P E_k P^dagger for the k-th element of the orthonormal real basis of r x r Hermitian matrices.
Matrix hermitian_direction(const Matrix& p, int k) {
  const int r = static_cast<int>(p.cols());
  if (k < r) return p.col(k) * p.col(k).adjoint();
  k -= r;
  int i = 0, j = 1;
  const int pairs = r * (r - 1) / 2;
  const bool imag = k >= pairs;
  if (imag) k -= pairs;
  // unrank k into the pair (i, j), i < j
  while (k >= r - 1 - i) {
    k -= r - 1 - i;
    ++i;
  }
  j = i + 1 + k;
  const double s = 1.0 / std::sqrt(2.0);
  const Matrix x = p.col(i) * p.col(j).adjoint();
  if (!imag) return s * (x + x.adjoint());
  return cplx(0.0, s) * (x - x.adjoint());
}

Matrix direction_from_params(const Matrix& p, const RealVector& x) {
  Matrix h = Matrix::Zero(p.rows(), p.rows());
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    if (x(k) != 0.0) h += x(k) * hermitian_direction(p, static_cast<int>(k));
  }
  return h;
}

double frob_inner(const Matrix& x, const Matrix& y) { return (x.adjoint() * y).trace().real(); }

}  // namespace

ExtremalityCert extremality_nullity(const BipartiteState& state, double cutoff) {
  const auto dims = state.dims();
  const int d = dims.total();
  ExtremalityCert cert;
  cert.ppt = is_ppt(state).ppt;
  const Matrix p = range_basis(state).vectors;
  const HermitianOperator gamma = partial_transpose(state.op());
  const Matrix qk = kernel_basis(gamma).vectors;
  const int r = static_cast<int>(p.cols());
  cert.rank = r;
  cert.rank_gamma = d - static_cast<int>(qk.cols());
  const int cols = r * r;
  const int krows = static_cast<int>(qk.cols()) * d;

  RealMatrix a(2 * krows, cols);
  for (int k = 0; k < cols; ++k) {
    const Matrix y = qk.adjoint() * partial_transpose(hermitian_direction(p, k), dims);
    const Eigen::Map<const Vector> v(y.data(), krows);
    a.col(k).head(krows) = v.real();
    a.col(k).tail(krows) = v.imag();
  }

  RealMatrix null_vectors;
  if (krows == 0) {
    cert.nullity = cols;
    cert.gap = std::numeric_limits<double>::infinity();
    null_vectors = RealMatrix::Identity(cols, cols);
  } else {
    Eigen::BDCSVD<RealMatrix> svd(a, Eigen::ComputeFullV);
    const RealVector& s = svd.singularValues();
    cert.singular_spectrum.assign(s.data(), s.data() + s.size());
    const double scale = s.size() > 0 ? std::max(s(0), 1.0) : 1.0;
    int kept = 0;
    while (kept < s.size() && s(kept) > cutoff * scale) ++kept;
    cert.nullity = cols - kept;
    if (kept == 0) {
      cert.gap = s.size() > 0 && s(0) > 0.0 ? 1.0 / (s(0) / scale) : std::numeric_limits<double>::infinity();
    } else if (kept < s.size() && s(kept) > 0.0) {
      cert.gap = s(kept - 1) / s(kept);
    } else {
      cert.gap = std::numeric_limits<double>::infinity();
    }
    null_vectors = svd.matrixV().rightCols(cert.nullity);
  }

  if (cert.gap < 1e2 || cert.nullity == 0) {
    cert.verdict = ExtremalityVerdict::Borderline;
  } else if (cert.nullity == 1) {
    cert.verdict = cert.gap > 1e4 ? ExtremalityVerdict::Extreme : ExtremalityVerdict::Borderline;
  } else {
    cert.verdict = ExtremalityVerdict::NotExtreme;
  }

  if (cert.nullity > 1) {
    const Matrix& rho = state.matrix();
    const double rr = frob_inner(rho, rho);
    Matrix best;
    double best_norm = -1.0;
    for (Eigen::Index c = 0; c < null_vectors.cols(); ++c) {
      Matrix h = direction_from_params(p, null_vectors.col(c));
      h -= (frob_inner(rho, h) / rr) * rho;
      const double nh = h.norm();
      if (nh > best_norm) {
        best_norm = nh;
        best = h;
      }
    }
    if (best_norm > 0.0) {
      Witness w;
      w.h = 0.5 * (best + best.adjoint()) / best_norm;
      cert.witness = w;
      if (cert.verdict == ExtremalityVerdict::NotExtreme && cert.ppt) {
        cert.witness = witness_decomposition(state, cert);
      }
    }
  }
  return cert;
}

Witness witness_decomposition(const BipartiteState& state, const ExtremalityCert& cert) {
  if (cert.nullity <= 1 || !cert.witness) {
    throw InputError("witness decomposition needs nullity > 1 and a witness direction");
  }
  const auto dims = state.dims();
  Witness w = *cert.witness;
  const Matrix& rho = state.matrix();
  const Matrix pr = range_basis(state).vectors;
  const Matrix rg = partial_transpose(rho, dims);
  const HermitianOperator gop(dims, rg);
  const Matrix qr = range_basis(gop).vectors;
  const Matrix hg = partial_transpose(w.h, dims);
  const Matrix c_rho = pr.adjoint() * rho * pr, c_h = pr.adjoint() * w.h * pr;
  const Matrix c_g = qr.adjoint() * rg * qr, c_hg = qr.adjoint() * hg * qr;

  auto feasible = [&](double eps) {
    for (double sgn : {-1.0, 1.0}) {
      if (hermitian_eigenvalues(c_rho + sgn * eps * c_h).minCoeff() < 0.0) return false;
      if (hermitian_eigenvalues(c_g + sgn * eps * c_hg).minCoeff() < 0.0) return false;
    }
    return true;
  };
  const double scale = rho.norm();
  double lo = 0.0, hi = scale;
  for (int it = 0; it < 200 && feasible(hi); ++it) {
    lo = hi;
    hi *= 2.0;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? lo : hi) = mid;
  }
  if (!(lo > 1e-10 * scale)) {
    throw NumericalError("no PPT-preserving step found along the witness direction");
  }
  w.epsilon = lo * (1.0 - 1e-9);
  w.rho1 = rho - w.epsilon * w.h;
  w.rho2 = rho + w.epsilon * w.h;
  w.rho1 = 0.5 * (w.rho1 + w.rho1.adjoint());
  w.rho2 = 0.5 * (w.rho2 + w.rho2.adjoint());
  return w;
}

bool necessary_bound(int rank, int rank_gamma, int m, int n) {
  const long long d = 1LL * m * n;
  if (m < 1 || n < 1 || rank < 1 || rank_gamma < 1 || rank > d || rank_gamma > d) {
    throw InputError("ranks must lie in [1, m*n]");
  }
  return 1LL * rank * rank + 1LL * rank_gamma * rank_gamma <= d * d + 1;
}

EdgeVerdict edge_check(const BipartiteState& state, const EnumOptions& opts) {
  EnumOptions o = opts;
  o.line_search = false;
  return edge_check(state, enumerate_product_vectors(range_basis(state), state.dims(), o), opts);
}

EdgeVerdict edge_check(const BipartiteState& state, const EnumerationResult& found, const EnumOptions& opts) {
  if (!is_ppt(state).ppt) throw InputError("edge check needs a PPT state");
  const auto dims = state.dims();
  const HermitianOperator gamma = partial_transpose(state.op());
  const SubspaceBasis range = range_basis(state), range_g = range_basis(gamma);
  EdgeVerdict v;

  const KernelSystem sys1 = KernelSystem::from_subspace(range, dims);
  const KernelSystem sys2 = KernelSystem::from_subspace(range_g, dims);
  v.starts = found.evidence.starts_used;
  v.best_residual = found.evidence.best_residual;
  if (found.evidence.full_space) {
    v.violating = ProductVector::make(Vector::Unit(dims.m, 0), Vector::Unit(dims.n, 0));
    if (range_g.distance(partial_conjugate(*v.violating).tensor()) < 1e-9) return v;
    v.violating.reset();
  }
  for (const auto& pv : found.points) {
    if (range_g.distance(partial_conjugate(pv).tensor()) < 1e-9) {
      v.violating = pv;
      return v;
    }
  }
  if (found.classification == Classification::Empty) {
    v.is_edge = true;
    return v;
  }

  // joint search for a (x) b in R(rho) with a* (x) b in R(rho^Gamma)
  auto min_vec = [](const Matrix& h) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    return Vector(es.eigenvectors().col(0));
  };
  auto joint_res = [&](const Vector& a, const Vector& b) {
    const double r1 = sys1.residual(a, b), r2 = sys2.residual(a.conjugate(), b);
    return std::sqrt(r1 * r1 + r2 * r2);
  };
  const StartSequence seq(dims, opts.seed ^ 0x2545f491ULL);
  const int count = static_cast<int>(std::min<std::int64_t>(400, 40 * delta(dims.m, dims.n)));
  double best = std::numeric_limits<double>::infinity();
  for (int s = 0; s < count; ++s) {
    auto [a, b] = seq(s);
    double res = joint_res(a, b);
    for (int it = 0; it < 400 && res > 1e-13; ++it) {
      const Matrix f1 = sys1.F(a), f2 = sys2.F(a.conjugate());
      b = min_vec(f1.adjoint() * f1 + f2.adjoint() * f2);
      const Matrix g1 = sys1.G(b), g2 = sys2.G(b).conjugate();
      a = min_vec(g1.adjoint() * g1 + g2.adjoint() * g2);
      const double r2 = joint_res(a, b);
      if (it > 30 && r2 > 0.999 * res) {
        res = r2;
        break;
      }
      res = r2;
    }
    best = std::min(best, res);
    if (res < 1e-9) {
      v.violating = ProductVector::make(a, b);
      v.starts += s + 1;
      v.best_residual = std::min(v.best_residual, best);
      return v;
    }
  }
  v.starts += count;
  v.best_residual = std::min(v.best_residual, best);
  v.is_edge = true;
  return v;
}

SeparableDecomposition rank_n_separable_decomposition(const BipartiteState& state, std::uint64_t seed) {
  const auto dims = state.dims();
  const int m = dims.m, n = dims.n;
  const RankProfile rp = rank_profile(state);
  if (!is_ppt(state).ppt || rp.rank != n || rp.rank_b != n || rp.rank_a > n) {
    throw InputError("rank-N decomposition needs a PPT state with rank = rank rho_B = N >= rank rho_A");
  }
  const BlockFactor f = factor_blocks(state, n);
  const Matrix c = f.stacked();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  for (int attempt = 0; attempt < 8; ++attempt) {
    RealVector u(m), t(m);
    for (int i = 0; i < m; ++i) u(i) = g(rng);
    for (int i = 0; i < m; ++i) t(i) = g(rng);
    Matrix cu = Matrix::Zero(n, n);
    for (int i = 0; i < m; ++i) cu += u(i) * f.blocks[i];
    const auto sv = singular_values(cu);
    if (sv.back() < 1e-10 * sv.front()) continue;
    const Matrix cu_inv = cu.partialPivLu().inverse();
    Matrix comb = Matrix::Zero(n, n);
    for (int i = 0; i < m; ++i) comb += t(i) * (f.blocks[i] * cu_inv);
    Eigen::ComplexSchur<Matrix> schur(comb);
    const Matrix& tri = schur.matrixT();
    const RealVector diag = tri.diagonal().cwiseAbs();
    double collide = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < i; ++j) collide = std::min(collide, std::abs(tri(i, i) - tri(j, j)));
    }
    if (n > 1 && collide < 1e-8 * std::max(1.0, diag.maxCoeff())) continue;
    const Matrix upper = tri.triangularView<Eigen::StrictlyUpper>();
    const double off = upper.norm() / std::max(tri.norm(), 1e-300);
    if (off > 1e-7) {
      throw NumericalError("simultaneous diagonalization failed (off-diagonal mass " +
                           std::to_string(off) + ")");
    }
    const Matrix rows = schur.matrixU().adjoint() * c;
    SeparableDecomposition out;
    out.seed_used = seed;
    Matrix recon = Matrix::Zero(state.matrix().rows(), state.matrix().cols());
    for (int r = 0; r < n; ++r) {
      const Vector v = rows.row(r).adjoint();
      const double w = v.squaredNorm();
      Eigen::JacobiSVD<Matrix> svd(as_matrix(v, dims), Eigen::ComputeFullU | Eigen::ComputeFullV);
      const auto& s = svd.singularValues();
      if (s.size() > 1 && s(1) > 1e-6 * s(0)) {
        throw NumericalError("recovered term is not a product vector");
      }
      const ProductVector pv = ProductVector::make(svd.matrixU().col(0), svd.matrixV().col(0).conjugate());
      const Vector pt = pv.tensor();
      recon += w * pt * pt.adjoint();
      out.terms.push_back({w, pv});
    }
    out.reconstruction_residual = (recon - state.matrix()).norm() / state.matrix().norm();
    return out;
  }
  throw NumericalError("no usable random combination for the simultaneous diagonalization");
}

StrongExtremality strongly_extreme_by_theorem(const BipartiteState& state, const GoodnessVerdict& good,
                                              const ExtremalityCert& cert) {
  const auto dims = state.dims();
  const bool yes = rank_profile(state).rank == dims.m + dims.n - 2 && good.verdict == Goodness::Good &&
                   cert.verdict == ExtremalityVerdict::Extreme;
  return yes ? StrongExtremality::Yes : StrongExtremality::NotApplicable;
}

StrongExtremality strongly_extreme_by_theorem(const BipartiteState& state, const EnumOptions& opts) {
  const auto dims = state.dims();
  if (rank_profile(state).rank != dims.m + dims.n - 2) return StrongExtremality::NotApplicable;
  const auto cert = extremality_nullity(state);
  if (cert.verdict != ExtremalityVerdict::Extreme) return StrongExtremality::NotApplicable;
  return strongly_extreme_by_theorem(state, classify_goodness(state, opts), cert);
}

std::optional<Rank1Compression> find_rank1_compression(const BipartiteState& state, const EnumOptions& opts) {
  const auto dims = state.dims();
  const KernelSystem sys(dims, range_basis(state).vectors);
  if (dims.n == 1) {
    return Rank1Compression{Vector::Unit(dims.m, 0), Matrix(1, 0), 0.0};
  }
  for (const auto& hit : find_fixed_a_subspaces(sys, dims.n - 1, opts)) {
    const auto sv = singular_values(sys.F(hit.fixed));
    if (hit.span.cols() == dims.n - 1 && !sv.empty() && sv.front() > 1e-8) {
      return Rank1Compression{hit.fixed, hit.span, hit.residual};
    }
  }
  return std::nullopt;
}

}  // namespace pptlab
