#include <doctest.h>

#include "oracles.hpp"
#include "pptlab/segre.hpp"
#include "pptlab/zoo.hpp"

using namespace pptlab;

namespace {

FamilyParams params(FamilyVariant v) {
  FamilyParams p;
  p.variant = v;
  return p;
}

EnumOptions multistart_only() {
  EnumOptions o;
  o.algebraic_check = false;
  return o;
}

/// Random subspace K of C^m (x) C^n with dim K^perp = p.
KernelSystem random_system(std::mt19937_64& rng, BipartiteDims dims, int p) {
  const Matrix perp = orthonormal_range(oracle::random_matrix(rng, dims.total(), p));
  return KernelSystem(dims, perp);
}

}  // namespace

TEST_CASE("kernel system residual equals the projection onto K^perp") {
  std::mt19937_64 rng(1);
  for (const auto dims : {BipartiteDims(2, 3), BipartiteDims(3, 4), BipartiteDims(4, 3)}) {
    const auto sys = random_system(rng, dims, 5);
    const Vector a = oracle::random_vector(rng, dims.m), b = oracle::random_vector(rng, dims.n);
    const double direct = (sys.perp().adjoint() * oracle::kron(a, b)).norm();
    CHECK(sys.residual(a, b) == doctest::Approx(direct).epsilon(1e-12));
    CHECK((sys.F(a) * b - sys.G(b) * a).norm() < 1e-12);
    const auto sw = sys.swapped();
    CHECK(sw.dims().m == dims.n);
    CHECK(sw.residual(b, a) == doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("start sequence is deterministic and lands on unit spheres") {
  const StartSequence s1(BipartiteDims(3, 4), 7), s2(BipartiteDims(3, 4), 7), s3(BipartiteDims(3, 4), 8);
  for (std::uint64_t k = 0; k < 50; ++k) {
    const auto [a, b] = s1(k);
    const auto [c, d] = s2(k);
    CHECK(a == c);
    CHECK(b == d);
    CHECK(std::abs(a.norm() - 1.0) < 1e-12);
    CHECK(std::abs(b.norm() - 1.0) < 1e-12);
  }
  CHECK(s1(3).first != s3(3).first);
}

TEST_CASE("2 x n enumeration agrees with the companion-matrix oracle") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 12; ++trial) {
    const int n = 2 + trial % 4;
    const BipartiteDims dims(2, n);
    const auto sys = random_system(rng, dims, n);
    const auto res = enumerate_product_vectors(sys, multistart_only());
    const auto roots = oracle::two_qubit_style_roots(sys.perp().adjoint(), n);
    CHECK(res.classification == Classification::Finite);
    REQUIRE(res.count() == n);
    std::vector<bool> used(n, false);
    for (const auto& [a, b] : roots) {
      int hit = -1;
      for (int i = 0; i < n; ++i) {
        if (!used[i] && oracle::phase_distance(res.points[i].a, a) < 1e-8 &&
            oracle::phase_distance(res.points[i].b, b) < 1e-8) {
          hit = i;
        }
      }
      CHECK(hit >= 0);
      if (hit >= 0) used[hit] = true;
    }
  }
}

TEST_CASE("Good 3x4 kernel has delta transversal points in general position") {
  const auto s = make_family(params(FamilyVariant::Good3x4Fixed), 3, 4);
  const auto k = kernel_basis(s);
  const auto res = enumerate_product_vectors(k, s.dims());
  CHECK(res.classification == Classification::Finite);
  CHECK(res.count() == 10);
  CHECK(res.evidence.stable);
  CHECK(res.evidence.algebraic.status == "ok");
  CHECK(res.evidence.algebraic.added == 0);
  for (const auto& pv : res.points) {
    CHECK((s.matrix() * pv.tensor()).norm() < 1e-9);
    CHECK(transversal(k, pv, s.dims()));
  }
  CHECK(general_position(res.points, s.dims()));
  const auto ces = ces_check(range_basis(s), s.dims());
  CHECK(ces.ces);
  CHECK(ces.best_residual > 1e-4);
  const auto g = classify_goodness(s, res);
  CHECK(g.verdict == Goodness::Good);
  CHECK(g.reason == GoodnessReason::CountEqualsDelta);
}

TEST_CASE("Kon-Mnogo kernel points match the ten rank-one W_i") {
  const auto km = kon_mnogo();
  const auto res = enumerate_product_vectors(kernel_basis(km.state), km.state.dims(), multistart_only());
  REQUIRE(res.count() == 10);
  for (const auto& w : km.pvs) {
    int hits = 0;
    for (const auto& p : res.points) hits += overlap(p, w) > 1.0 - 1e-6;
    CHECK(hits == 1);
  }
  CHECK_FALSE(general_position(res.points, km.state.dims()));
}

TEST_CASE("bad 3x4 kernel contains a line subspace") {
  const auto s = make_family(params(FamilyVariant::Bad3x4), 3, 4);
  const auto res = enumerate_product_vectors(kernel_basis(s), s.dims());
  CHECK(res.classification == Classification::LikelyInfinite);
  bool found = false;
  for (const auto& sub : res.evidence.subspaces) {
    if (!sub.a_side || sub.span.cols() != 2) continue;
    const Matrix proj = sub.span * sub.span.adjoint();
    Matrix expect = Matrix::Zero(4, 4);
    expect(2, 2) = expect(3, 3) = 1.0;
    found = found || (std::abs(std::abs(sub.fixed(0)) - 1.0) < 1e-8 && max_abs(proj - expect) < 1e-8);
  }
  CHECK(found);
  CHECK(classify_goodness(s, res).verdict == Goodness::Bad);
  const auto lines = find_line_subspaces(kernel_basis(s), s.dims(), 2);
  CHECK_FALSE(lines.empty());
}

TEST_CASE("empty, full-space and invalid enumerations") {
  std::mt19937_64 rng(3);
  const BipartiteDims dims(3, 3);
  const SubspaceBasis small{9, orthonormal_range(oracle::random_matrix(rng, 9, 2)), 0.0};
  const auto res = enumerate_product_vectors(small, dims);
  CHECK(res.classification == Classification::Empty);
  CHECK(res.evidence.best_residual > 1e-6);
  CHECK(is_ces(small, dims));
  const SubspaceBasis all{9, Matrix::Identity(9, 9), 0.0};
  const auto full = enumerate_product_vectors(all, dims);
  CHECK(full.classification == Classification::LikelyInfinite);
  CHECK(full.evidence.full_space);
  const auto big = ces_check(SubspaceBasis{9, orthonormal_range(oracle::random_matrix(rng, 9, 5)), 0.0}, dims);
  CHECK(big.by_dimension);
  CHECK_FALSE(big.ces);
  EnumOptions o;
  o.start_count = 10;
  CHECK_THROWS_AS(enumerate_product_vectors(small, dims, o), InputError);
}

TEST_CASE("enumeration is deterministic across thread counts") {
  const auto s = make_family(params(FamilyVariant::Good3xN), 3, 5);
  EnumOptions o1, o3;
  o1.threads = 1;
  o3.threads = 3;
  const auto r1 = enumerate_product_vectors(kernel_basis(s), s.dims(), o1);
  const auto r3 = enumerate_product_vectors(kernel_basis(s), s.dims(), o3);
  REQUIRE(r1.count() == r3.count());
  CHECK(r1.count() == 15);
  for (int i = 0; i < r1.count(); ++i) {
    CHECK(r1.points[i].a == r3.points[i].a);
    CHECK(r1.points[i].b == r3.points[i].b);
  }
}

TEST_CASE("algebraic solver matches multistart") {
  std::mt19937_64 rng(5);
  for (const auto dims : {BipartiteDims(2, 4), BipartiteDims(3, 3), BipartiteDims(3, 4)}) {
    const int p = dims.m + dims.n - 2;
    const auto sys = random_system(rng, dims, p);
    const auto alg = algebraic_product_vectors(sys, 1);
    const auto ms = enumerate_product_vectors(sys, multistart_only());
    CHECK(alg.status == "ok");
    CHECK(static_cast<int>(alg.points.size()) == delta(dims.m, dims.n));
    CHECK(ms.count() == delta(dims.m, dims.n));
    int matched = 0;
    for (const auto& x : alg.points)
      for (const auto& y : ms.points) matched += overlap(x, y) > 1.0 - 1e-6;
    CHECK(matched == ms.count());
  }
  CHECK(algebraic_product_vectors(random_system(rng, BipartiteDims(4, 4), 6), 1).status == "not-applicable");
}

TEST_CASE("partial conjugation carries the kernel onto the kernel of rho^Gamma") {
  std::mt19937_64 rng(6);
  const BipartiteDims dims(2, 3);
  std::vector<ProductVector> pvs;
  for (int k = 0; k < 3; ++k) {
    pvs.push_back(ProductVector::make(oracle::random_vector(rng, 2), oracle::random_vector(rng, 3)));
  }
  const auto s = product_mixture(dims, pvs);
  const BipartiteState g(partial_transpose(s.op()));
  const auto x = enumerate_product_vectors(kernel_basis(s), dims);
  const auto y = enumerate_product_vectors(kernel_basis(g), dims);
  REQUIRE(x.classification == Classification::Finite);
  CHECK(x.count() == y.count());
  CHECK(match_partial_conjugates(x.points, y.points) == x.count());
  const auto pc = partial_conjugate(x.points[0]);
  CHECK((pc.a - x.points[0].a.conjugate()).norm() < 1e-12);
}

TEST_CASE("general position against a brute-force rank test") {
  std::mt19937_64 rng(7);
  const BipartiteDims dims(3, 3);
  std::vector<ProductVector> pvs;
  for (int k = 0; k < 6; ++k) {
    pvs.push_back(ProductVector::make(oracle::random_vector(rng, 3), oracle::random_vector(rng, 3)));
  }
  CHECK(general_position(pvs, dims));
  auto dependent = pvs;
  dependent[4] = ProductVector::make(pvs[0].a + pvs[1].a, pvs[4].b);
  CHECK_FALSE(general_position(dependent, dims));
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j)
      for (int k = j + 1; k < 6; ++k) {
        Matrix a(3, 3);
        a << dependent[i].a, dependent[j].a, dependent[k].a;
        if (oracle::rank_qr(a, 1e-8) < 3) CHECK((i == 0 && j == 1 && k == 4));
      }
}

TEST_CASE("separable states: kernel components and goodness") {
  std::mt19937_64 rng(8);
  const BipartiteDims dims(2, 3);
  std::vector<ProductVector> pvs;
  for (int k = 0; k < 3; ++k) {
    pvs.push_back(ProductVector::make(oracle::random_vector(rng, 2), oracle::random_vector(rng, 3)));
  }
  const auto s = product_mixture(dims, pvs);
  for (const auto& comp : separable_kernel_components(pvs, dims)) {
    for (int i = 0; i < comp.v.dim(); ++i)
      for (int j = 0; j < comp.w.dim(); ++j) {
        CHECK((s.matrix() * oracle::kron(Vector(comp.v.vectors.col(i)), Vector(comp.w.vectors.col(j)))).norm() < 1e-9);
      }
  }
  const auto g = classify_separable_good(pvs, dims);
  CHECK(g.verdict == Goodness::Good);
  CHECK(g.count == 3);
}

TEST_CASE("goodness decision table") {
  std::mt19937_64 rng(9);
  const BipartiteDims dims(3, 3);
  const BipartiteState full(dims, oracle::random_psd(rng, 9, 9));
  const auto gf = classify_goodness(full);
  CHECK(gf.verdict == Goodness::Good);
  CHECK(gf.reason == GoodnessReason::EmptyIntersection);
  const BipartiteState low(dims, oracle::random_psd(rng, 9, 2));
  CHECK(classify_goodness(low).verdict == Goodness::Indeterminate);
  const auto gt = upb_complement_state(tiles_upb());
  const auto gg = classify_goodness(gt);
  CHECK(gg.verdict == Goodness::Good);
  CHECK(gg.count == 6);
  const auto pd = point_diagnostics(KernelSystem::from_subspace(kernel_basis(gt), dims), tiles_upb().vectors[0].a,
                                    tiles_upb().vectors[0].b);
  CHECK(pd.isolated);
  CHECK(to_string(Classification::LikelyInfinite) == "LikelyInfinite");
}

TEST_CASE("transversality rejects points outside the subspace") {
  const auto s = make_family(params(FamilyVariant::Good3x4Fixed), 3, 4);
  const auto k = kernel_basis(s);
  const auto pv = ProductVector::make(Vector::Ones(3), Vector::Ones(4));
  CHECK_THROWS_AS(transversal(k, pv, s.dims()), InputError);
}
