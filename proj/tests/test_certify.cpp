#include <doctest.h>

#include "oracles.hpp"
#include "pptlab/certify.hpp"
#include "pptlab/zoo.hpp"

using namespace pptlab;

namespace {

FamilyParams params(FamilyVariant v) {
  FamilyParams p;
  p.variant = v;
  return p;
}

BipartiteState random_separable(std::mt19937_64& rng, BipartiteDims dims, int terms) {
  std::vector<ProductVector> pvs;
  std::vector<double> w;
  std::uniform_real_distribution<double> u(0.5, 2.0);
  for (int k = 0; k < terms; ++k) {
    pvs.push_back(ProductVector::make(oracle::random_vector(rng, dims.m), oracle::random_vector(rng, dims.n)));
    w.push_back(u(rng));
  }
  return product_mixture(dims, pvs, w);
}

}  // namespace

TEST_CASE("nullity agrees with the full Hermitian-basis oracle") {
  std::mt19937_64 rng(21);
  for (const auto dims : {BipartiteDims(2, 2), BipartiteDims(2, 3), BipartiteDims(3, 3)}) {
    for (int terms = 1; terms <= 4; ++terms) {
      const auto s = random_separable(rng, dims, terms);
      CHECK(extremality_nullity(s).nullity == oracle::hermitian_nullity(s.matrix(), dims));
    }
  }
  const auto g = make_family(params(FamilyVariant::Good3x4Fixed), 3, 4);
  CHECK(oracle::hermitian_nullity(g.matrix(), g.dims()) == 1);
  const auto km = kon_mnogo().state;
  CHECK(extremality_nullity(km).nullity == oracle::hermitian_nullity(km.matrix(), km.dims()));
}

TEST_CASE("extreme states") {
  const auto g = make_family(params(FamilyVariant::Good3x4Fixed), 3, 4);
  const auto c = extremality_nullity(g);
  CHECK(c.verdict == ExtremalityVerdict::Extreme);
  CHECK(c.nullity == 1);
  CHECK(c.gap > 1e4);
  CHECK(c.rank == 5);
  CHECK(c.rank_gamma == 5);
  Matrix pure = Matrix::Zero(4, 4);
  pure(0, 0) = 1.0;
  const auto p = extremality_nullity(BipartiteState(BipartiteDims(2, 2), pure));
  CHECK(p.verdict == ExtremalityVerdict::Extreme);
  CHECK(p.nullity == 1);
  for (int n = 5; n <= 6; ++n) {
    CHECK(extremality_nullity(make_family(params(FamilyVariant::Bad3xN), 3, n)).verdict ==
          ExtremalityVerdict::Extreme);
  }
}

TEST_CASE("non-extreme states come with a PPT decomposition") {
  Matrix d = Matrix::Zero(4, 4);
  d(0, 0) = d(3, 3) = 1.0;
  const BipartiteState s(BipartiteDims(2, 2), d);
  const auto c = extremality_nullity(s);
  CHECK(c.verdict == ExtremalityVerdict::NotExtreme);
  CHECK(c.nullity == 2);
  REQUIRE(c.witness.has_value());
  const auto& w = *c.witness;
  CHECK(max_abs(0.5 * (w.rho1 + w.rho2) - d) < 1e-10);
  CHECK(max_abs(w.rho1 - w.rho2) > 0.1);
  CHECK(std::abs(w.h.norm() - 1.0) < 1e-12);
  CHECK(std::abs((d.adjoint() * w.h).trace()) < 1e-12);
  for (const Matrix& r : {w.rho1, w.rho2}) {
    const BipartiteState rs(BipartiteDims(2, 2), r, 1e-8);
    CHECK(is_ppt(rs, 1e-8).ppt);
    CHECK(range_basis(s).distance(range_basis(rs).vectors.col(0)) < 1e-8);
  }
  const auto mixed = extremality_nullity(BipartiteState(BipartiteDims(2, 2), Matrix::Identity(4, 4)));
  CHECK(mixed.nullity == 16);
  Matrix two = Matrix::Zero(4, 4);
  two(0, 0) = 1.0;
  CHECK_THROWS_AS(witness_decomposition(BipartiteState(BipartiteDims(2, 2), two), extremality_nullity(BipartiteState(BipartiteDims(2, 2), two))), InputError);
}

TEST_CASE("necessary rank bound") {
  CHECK_FALSE(necessary_bound(6, 6, 2, 4));
  CHECK(necessary_bound(5, 5, 3, 4));
  CHECK(necessary_bound(1, 1, 2, 2));
  CHECK_FALSE(necessary_bound(4, 4, 2, 2));
  CHECK_THROWS_AS(necessary_bound(0, 3, 2, 2), InputError);
  CHECK_THROWS_AS(necessary_bound(5, 3, 2, 2), InputError);
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix h = oracle::random_hermitian(rng, 8);
    const Matrix rho = Matrix::Identity(8, 8) + 0.05 * h / max_abs(h);
    const BipartiteState s(BipartiteDims(2, 4), rho);
    REQUIRE(is_ppt(s).ppt);
    const auto c = extremality_nullity(s);
    CHECK(c.verdict == ExtremalityVerdict::NotExtreme);
    CHECK_FALSE(necessary_bound(c.rank, c.rank_gamma, 2, 4));
  }
}

TEST_CASE("edge states") {
  const auto g = make_family(params(FamilyVariant::Good3x4Fixed), 3, 4);
  const auto e = edge_check(g);
  CHECK(e.is_edge);
  CHECK(e.certificate == "numerical");
  CHECK(e.starts >= 400);
  Matrix d = Matrix::Zero(4, 4);
  d(0, 0) = d(3, 3) = 1.0;
  const auto ne = edge_check(BipartiteState(BipartiteDims(2, 2), d));
  CHECK_FALSE(ne.is_edge);
  REQUIRE(ne.violating.has_value());
  CHECK(overlap(*ne.violating, ProductVector::make(Vector::Unit(2, 0), Vector::Unit(2, 0))) +
            overlap(*ne.violating, ProductVector::make(Vector::Unit(2, 1), Vector::Unit(2, 1))) >
        1.0 - 1e-6);
  Vector phi = Vector::Zero(4);
  phi(0) = phi(3) = 1.0;
  CHECK_THROWS_AS(edge_check(BipartiteState(BipartiteDims(2, 2), phi * phi.adjoint())), InputError);
}

TEST_CASE("rank-N separable decomposition round trip") {
  std::mt19937_64 rng(23);
  for (const auto dims : {BipartiteDims(2, 2), BipartiteDims(2, 3), BipartiteDims(3, 3), BipartiteDims(3, 4)}) {
    std::vector<ProductVector> pvs;
    std::vector<double> w;
    for (int k = 0; k < dims.n; ++k) {
      pvs.push_back(ProductVector::make(oracle::random_vector(rng, dims.m), oracle::random_vector(rng, dims.n)));
      w.push_back(0.5 + k);
    }
    const auto s = product_mixture(dims, pvs, w);
    const auto dec = rank_n_separable_decomposition(s);
    CHECK(dec.reconstruction_residual < 1e-10);
    REQUIRE(static_cast<int>(dec.terms.size()) == dims.n);
    for (int k = 0; k < dims.n; ++k) {
      int hits = 0;
      for (const auto& t : dec.terms) {
        if (overlap(t.pv, pvs[k]) > 1.0 - 1e-8) {
          ++hits;
          CHECK(t.weight == doctest::Approx(w[k]).epsilon(1e-8));
        }
      }
      CHECK(hits == 1);
    }
  }
  CHECK_THROWS_AS(rank_n_separable_decomposition(make_family(params(FamilyVariant::Good3x4Fixed), 3, 4)),
                  InputError);
}

TEST_CASE("strong extremality by theorem") {
  CHECK(strongly_extreme_by_theorem(make_family(params(FamilyVariant::Good3x4Fixed), 3, 4)) ==
        StrongExtremality::Yes);
  CHECK(strongly_extreme_by_theorem(make_family(params(FamilyVariant::BadMxN), 4, 4)) ==
        StrongExtremality::NotApplicable);
  CHECK(to_string(StrongExtremality::Yes) == "Yes");
}

TEST_CASE("rank-one compressions") {
  Matrix rho = Matrix::Zero(6, 6);
  rho(0, 0) = 1.0;
  rho.block(3, 3, 3, 3) = Matrix::Identity(3, 3);
  const auto rc = find_rank1_compression(BipartiteState(BipartiteDims(2, 3), rho));
  REQUIRE(rc.has_value());
  CHECK(std::abs(std::abs(rc->a(0)) - 1.0) < 1e-8);
  CHECK(rc->hyperplane.cols() == 2);
  CHECK_FALSE(find_rank1_compression(make_family(params(FamilyVariant::Good3x4Fixed), 3, 4)).has_value());
}
