#include "pptlab/segre.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "pptlab/zoo.hpp"

namespace pptlab {

namespace detail {
double local_solve(const KernelSystem& sys, Vector& a, Vector& b);
}

std::string to_string(Classification c) {
  switch (c) {
    case Classification::Empty: return "Empty";
    case Classification::Finite: return "Finite";
    case Classification::LikelyInfinite: return "LikelyInfinite";
    case Classification::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

std::string to_string(Goodness g) {
  switch (g) {
    case Goodness::Good: return "Good";
    case Goodness::Bad: return "Bad";
    case Goodness::Indeterminate: return "Indeterminate";
  }
  return "Indeterminate";
}

std::string to_string(GoodnessReason r) {
  switch (r) {
    case GoodnessReason::EmptyIntersection: return "EmptyIntersection";
    case GoodnessReason::CountEqualsDelta: return "CountEqualsDelta";
    case GoodnessReason::CountBelowDeltaWithNonemptyX: return "CountBelowDeltaWithNonemptyX";
    case GoodnessReason::InfiniteComponent: return "InfiniteComponent";
    case GoodnessReason::RankBelowBorderline: return "RankBelowBorderline";
  }
  return "RankBelowBorderline";
}

namespace {

struct StartOutcome {
  Vector a, b;
  double residual = 0.0;
};

int worker_count(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

std::vector<StartOutcome> run_starts(const KernelSystem& sys, const StartSequence& seq,
                                     std::uint64_t first, int count, int threads) {
  std::vector<StartOutcome> out(count);
  auto work = [&](int lo, int hi) {
    for (int k = lo; k < hi; ++k) {
      auto [a, b] = seq(first + k);
      const double res = detail::local_solve(sys, a, b);
      out[k] = {std::move(a), std::move(b), res};
    }
  };
  const int t = std::min(threads, std::max(1, count / 16));
  if (t <= 1) {
    work(0, count);
    return out;
  }
  std::vector<std::thread> pool;
  const int chunk = (count + t - 1) / t;
  for (int i = 0; i < t; ++i) {
    const int lo = i * chunk, hi = std::min(count, lo + chunk);
    if (lo < hi) pool.emplace_back(work, lo, hi);
  }
  for (auto& th : pool) th.join();
  return out;
}

bool insert_point(std::vector<ProductVector>& pts, std::vector<double>& res, const ProductVector& pv,
                  double r, double dedup_tol) {
  for (const auto& q : pts) {
    if (overlap(q, pv) > 1.0 - dedup_tol) return false;
  }
  pts.push_back(pv);
  res.push_back(r);
  return true;
}

}  // namespace

EnumerationResult enumerate_product_vectors(const KernelSystem& sys, const EnumOptions& opts) {
  const auto dims = sys.dims();
  const std::int64_t d = delta(dims.m, dims.n);
  const std::int64_t first = opts.start_count > 0 ? opts.start_count : 40 * d;
  if (first < 4 * d) {
    throw InputError("start count " + std::to_string(first) + " is below the minimum 4*delta = " +
                     std::to_string(4 * d));
  }
  EnumerationResult out;
  auto& ev = out.evidence;
  ev.delta = d;

  if (sys.p() == 0) {
    ev.full_space = true;
    ev.stop_reason = "full-space";
    out.classification = Classification::LikelyInfinite;
    return out;
  }
  if (opts.line_search) {
    ev.subspaces = find_fixed_a_subspaces(sys, 2, opts);
    for (auto hit : find_fixed_a_subspaces(sys.swapped(), 2, opts)) {
      hit.a_side = false;
      ev.subspaces.push_back(std::move(hit));
    }
  }

  const StartSequence seq(dims, opts.seed);
  const int threads = worker_count(opts.threads);
  ev.best_residual = std::numeric_limits<double>::infinity();
  std::uint64_t next = 0;
  int streak = 0;
  for (int round = 0; round < opts.max_rounds; ++round) {
    const std::int64_t size = round < 2 ? first : first << (round - 1);
    const int before = out.count();
    for (const auto& o : run_starts(sys, seq, next, static_cast<int>(size), threads)) {
      ev.best_residual = std::min(ev.best_residual, o.residual);
      if (o.residual <= opts.residual_tol) {
        insert_point(out.points, out.residuals, ProductVector::make(o.a, o.b), o.residual,
                     opts.dedup_tol);
      }
    }
    next += size;
    ev.starts_used += static_cast<int>(size);
    ev.round_starts.push_back(static_cast<int>(size));
    ev.round_counts.push_back(out.count());
    if (round > 0) streak = out.count() == before ? streak + 1 : 0;
    if (streak >= 2) {
      ev.stable = true;
      ev.stop_reason = "stable";
      break;
    }
    if (out.count() > 3 * d) {
      ev.stop_reason = "count-exceeds-3delta";
      break;
    }
    if (!ev.subspaces.empty()) {
      ev.stop_reason = "subspace-detected";
      break;
    }
  }
  if (ev.stop_reason.empty()) ev.stop_reason = "max-rounds";

  auto diagnose = [&]() {
    out.diagnostics.clear();
    ev.non_isolated = ev.non_transversal = 0;
    for (const auto& pv : out.points) {
      out.diagnostics.push_back(point_diagnostics(sys, pv.a, pv.b, opts.jacobian_tol));
      ev.non_isolated += !out.diagnostics.back().isolated;
      ev.non_transversal += !out.diagnostics.back().transversal;
    }
  };
  diagnose();

  if (opts.algebraic_check && ev.subspaces.empty() && ev.non_isolated == 0 && out.count() <= d) {
    const auto alg = algebraic_product_vectors(sys, opts.seed, opts.residual_tol);
    ev.algebraic.status = alg.status;
    ev.algebraic.candidates = alg.candidates;
    if (alg.status == "ok") {
      ev.algebraic.roots = static_cast<int>(alg.points.size());
      for (const auto& pv : alg.points) {
        const double r = sys.residual(pv.a, pv.b);
        if (insert_point(out.points, out.residuals, pv, r, opts.dedup_tol)) {
          ++ev.algebraic.added;
        } else {
          ++ev.algebraic.matched;
        }
      }
      if (ev.algebraic.added > 0) diagnose();
    }
  }

  if (!ev.subspaces.empty() || out.count() > d) {
    out.classification = Classification::LikelyInfinite;
  } else if (out.count() == 0) {
    out.classification = ev.best_residual > opts.empty_threshold ? Classification::Empty
                                                                 : Classification::Inconclusive;
  } else if (ev.non_isolated == 0 && ev.stable) {
    out.classification = Classification::Finite;
  } else {
    out.classification = Classification::Inconclusive;
  }
  return out;
}

EnumerationResult enumerate_product_vectors(const SubspaceBasis& k, BipartiteDims dims,
                                            const EnumOptions& opts) {
  return enumerate_product_vectors(KernelSystem::from_subspace(k, dims), opts);
}

CesVerdict ces_check(const SubspaceBasis& subspace, BipartiteDims dims, const EnumOptions& opts) {
  CesVerdict v;
  if (subspace.dim() > (dims.m - 1) * (dims.n - 1)) {
    v.by_dimension = true;
    v.classification = Classification::LikelyInfinite;
    return v;
  }
  EnumOptions o = opts;
  o.line_search = false;
  v.enumeration = enumerate_product_vectors(subspace, dims, o);
  const auto& res = v.enumeration;
  v.ces = res.classification == Classification::Empty;
  v.starts = res.evidence.starts_used;
  v.best_residual = res.evidence.best_residual;
  v.classification = res.classification;
  return v;
}

bool transversal(const SubspaceBasis& k, const ProductVector& pv, BipartiteDims dims, double tol_rel) {
  const Vector v = pv.tensor();
  if (k.distance(v) > 1e-8) throw InputError("product vector is not in the subspace");
  const int m = dims.m, n = dims.n;
  Matrix stack(dims.total(), k.dim() + m + n);
  stack.leftCols(k.dim()) = k.vectors;
  for (int j = 0; j < n; ++j) stack.col(k.dim() + j) = kron(pv.a, Vector::Unit(n, j));
  for (int i = 0; i < m; ++i) stack.col(k.dim() + n + i) = kron(Vector::Unit(m, i), pv.b);
  return numeric_rank(singular_values(stack), tol_rel).rank == dims.total();
}

GoodnessVerdict classify_goodness(const BipartiteState& state, const EnumerationResult& kernel,
                                  const EnumOptions&) {
  const auto dims = state.dims();
  const int border = dims.m + dims.n - 2;
  const int r = rank_profile(state).rank;
  const std::int64_t d = delta(dims.m, dims.n);
  const auto cls = kernel.classification;
  GoodnessVerdict g;
  g.count = kernel.count();
  if (r > border) {
    if (cls == Classification::Empty) {
      g.verdict = Goodness::Good;
      g.reason = GoodnessReason::EmptyIntersection;
    } else if (kernel.count() > 0 || cls == Classification::LikelyInfinite) {
      g.verdict = Goodness::Bad;
      g.reason = cls == Classification::LikelyInfinite ? GoodnessReason::InfiniteComponent
                                                       : GoodnessReason::CountBelowDeltaWithNonemptyX;
    } else {
      g.reason = GoodnessReason::EmptyIntersection;
      g.note = "no kernel product vector found, but the best residual is small";
    }
    return g;
  }
  if (r == border) {
    if (cls == Classification::Finite && kernel.count() == d) {
      g.verdict = Goodness::Good;
      g.reason = GoodnessReason::CountEqualsDelta;
    } else if (cls == Classification::LikelyInfinite) {
      g.verdict = Goodness::Bad;
      g.reason = GoodnessReason::InfiniteComponent;
    } else if (cls == Classification::Finite) {
      g.reason = GoodnessReason::CountBelowDeltaWithNonemptyX;
      if (is_ppt(state).ppt) {
        g.verdict = Goodness::Bad;
        g.anomaly = true;
        g.note = "finite kernel intersection below delta at rank m+n-2; roots were likely missed";
      } else {
        g.note = "finite kernel intersection below delta for an NPT input";
      }
    } else if (cls == Classification::Empty) {
      g.reason = GoodnessReason::EmptyIntersection;
      g.anomaly = true;
      g.note = "empty kernel intersection is impossible at rank m+n-2";
    } else {
      g.reason = GoodnessReason::CountBelowDeltaWithNonemptyX;
      g.note = "kernel enumeration inconclusive";
    }
    return g;
  }
  g.reason = GoodnessReason::RankBelowBorderline;
  g.note = "rank below m+n-2 needs a product decomposition";
  return g;
}

GoodnessVerdict classify_goodness(const BipartiteState& state, const EnumOptions& opts) {
  const auto dims = state.dims();
  if (rank_profile(state).rank < dims.m + dims.n - 2) {
    GoodnessVerdict g;
    g.reason = GoodnessReason::RankBelowBorderline;
    g.note = "rank below m+n-2 needs a product decomposition";
    return g;
  }
  return classify_goodness(state, enumerate_product_vectors(kernel_basis(state), dims, opts), opts);
}

namespace {

bool subsets_independent(const std::vector<Vector>& vs, int dim, double tol) {
  const int k = static_cast<int>(vs.size());
  const int size = std::min(dim, k);
  if (size == 0) return true;
  std::vector<Vector> basis;
  basis.reserve(size);
  // depth-first over increasing index sequences; basis holds the orthonormalized prefix
  auto extend = [&](auto&& self, int start) -> bool {
    if (static_cast<int>(basis.size()) == size) return true;
    const int need = size - static_cast<int>(basis.size());
    for (int i = start; i <= k - need; ++i) {
      Vector v = vs[i];
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& q : basis) v -= q * q.dot(v);
      }
      const double nv = v.norm();
      if (nv < tol * vs[i].norm()) return false;
      basis.push_back(v / nv);
      const bool ok = self(self, i + 1);
      basis.pop_back();
      if (!ok) return false;
    }
    return true;
  };
  return extend(extend, 0);
}

}  // namespace

bool general_position(const std::vector<ProductVector>& pvs, BipartiteDims dims, double tol) {
  std::vector<Vector> as, bs;
  for (const auto& pv : pvs) {
    as.push_back(pv.a);
    bs.push_back(pv.b);
  }
  return subsets_independent(as, dims.m, tol) && subsets_independent(bs, dims.n, tol);
}

ProductVector partial_conjugate(const ProductVector& pv) {
  return ProductVector::make(pv.a.conjugate(), pv.b);
}

namespace {

constexpr int kMaxSeparableTerms = 20;

Matrix columns_of(const std::vector<ProductVector>& pvs, std::uint64_t mask, bool a_part, bool in_mask) {
  std::vector<Vector> cols;
  for (std::size_t k = 0; k < pvs.size(); ++k) {
    if (((mask >> k) & 1ULL) == (in_mask ? 1ULL : 0ULL)) cols.push_back(a_part ? pvs[k].a : pvs[k].b);
  }
  const auto rows = pvs.empty() ? 0 : (a_part ? pvs[0].a.size() : pvs[0].b.size());
  Matrix out(rows, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) out.col(c) = cols[c];
  return out;
}

bool contained(const Matrix& x, const Matrix& y) {
  if (x.cols() == 0) return true;
  if (y.cols() == 0) return false;
  return max_abs(x - y * (y.adjoint() * x)) < 1e-8;
}

void check_terms(const std::vector<ProductVector>& pvs, BipartiteDims dims) {
  if (static_cast<int>(pvs.size()) > kMaxSeparableTerms) {
    throw InputError("at most " + std::to_string(kMaxSeparableTerms) + " product vectors are supported");
  }
  for (const auto& pv : pvs) {
    if (pv.a.size() != dims.m || pv.b.size() != dims.n) throw InputError("product vector does not match dims");
  }
}

}  // namespace

std::vector<SegreComponent> separable_kernel_components(const std::vector<ProductVector>& pvs,
                                                        BipartiteDims dims) {
  check_terms(pvs, dims);
  const std::uint64_t total = 1ULL << pvs.size();
  std::vector<SegreComponent> all;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    const Matrix v = orthogonal_complement(columns_of(pvs, mask, true, true), dims.m);
    if (v.cols() == 0) continue;
    const Matrix w = orthogonal_complement(columns_of(pvs, mask, false, false), dims.n);
    if (w.cols() == 0) continue;
    all.push_back({{dims.m, v, 1e-10}, {dims.n, w, 1e-10}});
  }
  std::vector<SegreComponent> out;
  for (std::size_t i = 0; i < all.size(); ++i) {
    bool maximal = true;
    for (std::size_t j = 0; j < all.size() && maximal; ++j) {
      if (i == j) continue;
      const bool inside = contained(all[i].v.vectors, all[j].v.vectors) &&
                          contained(all[i].w.vectors, all[j].w.vectors);
      if (!inside) continue;
      const bool same = contained(all[j].v.vectors, all[i].v.vectors) &&
                        contained(all[j].w.vectors, all[i].w.vectors);
      if (!same || j < i) maximal = false;
    }
    if (maximal) out.push_back(all[i]);
  }
  return out;
}

GoodnessVerdict classify_separable_good(const std::vector<ProductVector>& pvs, BipartiteDims dims) {
  check_terms(pvs, dims);
  const int border = dims.m + dims.n - 2;
  const int count = static_cast<int>(pvs.size());
  GoodnessVerdict g;
  g.note = "separable route";
  if (count <= border) {
    const bool gp = general_position(pvs, dims);
    g.verdict = gp ? Goodness::Good : Goodness::Bad;
    if (!gp) {
      g.reason = GoodnessReason::InfiniteComponent;
    } else if (count == border) {
      g.reason = GoodnessReason::CountEqualsDelta;
      g.count = static_cast<int>(delta(dims.m, dims.n));
    } else {
      g.reason = GoodnessReason::RankBelowBorderline;
    }
    return g;
  }
  const std::uint64_t total = 1ULL << pvs.size();
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    const int ra = numeric_rank(singular_values(columns_of(pvs, mask, true, true)), 1e-10).rank;
    const int rb = numeric_rank(singular_values(columns_of(pvs, mask, false, false)), 1e-10).rank;
    if (ra < dims.m && rb < dims.n) {
      g.verdict = Goodness::Bad;
      g.reason = GoodnessReason::CountBelowDeltaWithNonemptyX;
      return g;
    }
  }
  g.verdict = Goodness::Good;
  g.reason = GoodnessReason::EmptyIntersection;
  g.count = 0;
  return g;
}

int match_partial_conjugates(const std::vector<ProductVector>& x, const std::vector<ProductVector>& y,
                             double dedup_tol) {
  std::vector<bool> used(y.size(), false);
  int matched = 0;
  for (const auto& pv : x) {
    const ProductVector c = partial_conjugate(pv);
    for (std::size_t j = 0; j < y.size(); ++j) {
      if (!used[j] && overlap(c, y[j]) > 1.0 - dedup_tol) {
        used[j] = true;
        ++matched;
        break;
      }
    }
  }
  return matched;
}

}  // namespace pptlab
