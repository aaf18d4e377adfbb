#include <doctest.h>

#include "oracles.hpp"
#include "pptlab/zoo.hpp"

using namespace pptlab;

namespace {

FamilyParams params(FamilyVariant v) {
  FamilyParams p;
  p.variant = v;
  return p;
}

double gamma_defect(const BipartiteState& s) {
  return max_abs(s.matrix() - partial_transpose(s.matrix(), s.dims()));
}

}  // namespace

TEST_CASE("binomials and the Segre degree") {
  for (int n = 0; n <= 30; ++n)
    for (int k = -1; k <= n + 1; ++k) CHECK(binomial(n, k) == oracle::pascal(n, k));
  CHECK(delta(3, 3) == 6);
  CHECK(delta(3, 4) == 10);
  CHECK(delta(2, 7) == 7);
  CHECK(delta(1, 5) == 1);
  for (int m = 1; m <= 8; ++m)
    for (int n = 1; n <= 8; ++n) {
      CHECK(delta(m, n) == delta(n, m));
      for (int r = 1; r <= m + n - 2; ++r) {
        long long sum = 0;
        for (int k = 0; k <= m - 1; ++k) sum += oracle::pascal(r, k) * oracle::pascal(m + n - 2 - r, m - 1 - k);
        CHECK(degree_sum(m, n, r) == sum);
        CHECK(degree_sum(m, n, r) == delta(m, n));
      }
    }
}

TEST_CASE("circulant determinant matches a dense determinant") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int m = 1; m <= 9; ++m) {
    std::vector<double> row(m);
    for (auto& x : row) x = u(rng);
    const RealMatrix c = circulant_matrix(row);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) CHECK(c(i, j) == row[(j - i + m) % m]);
    const double dense = c.fullPivLu().determinant();
    const cplx f = circulant_det(row);
    CHECK(std::abs(f.imag()) < 1e-9 * std::max(1.0, std::abs(dense)));
    CHECK(std::abs(f.real() - dense) < 1e-9 * std::max(1.0, std::abs(dense)));
  }
  const auto z3 = gentiles2_z_row(3);
  CHECK(z3 == std::vector<double>{10, 1, 1});
  CHECK(circulant_det(z3).real() == doctest::Approx(972.0));
  CHECK(circulant_det(gentiles2_z_row(4)).real() == doctest::Approx(32768.0));
}

TEST_CASE("GenTiles2 is an orthonormal product family with the expected complement") {
  for (auto [m, n] : std::vector<std::pair<int, int>>{{3, 4}, {3, 5}, {4, 5}, {4, 6}, {5, 7}}) {
    const auto upb = gentiles2_upb(m, n);
    CHECK(static_cast<int>(upb.vectors.size()) == m * n - 2 * m + 1);
    CHECK(upb.orthonormality_defect() < 1e-12);
    const auto s = upb_complement_state(upb);
    for (const auto& pv : upb.vectors) CHECK((s.matrix() * pv.tensor()).norm() < 1e-12);
    const auto rp = rank_profile(s);
    CHECK(rp.rank == 2 * m - 1);
    CHECK(rp.rank_a == m);
    CHECK(rp.rank_b == m + 1);
    CHECK(is_ppt(s).ppt);
    const RealMatrix z = circulant_matrix(gentiles2_z_row(m));
    CHECK(max_abs(reduced_operators(s.op()).rho_a * (2.0 * m) - z.cast<cplx>()) < 1e-10);
  }
  CHECK_THROWS_AS(gentiles2_upb(2, 4), InputError);
  CHECK_THROWS_AS(gentiles2_upb(4, 3), InputError);
}

TEST_CASE("Tiles UPB") {
  const auto upb = tiles_upb();
  CHECK(upb.vectors.size() == 5);
  CHECK(upb.orthonormality_defect() < 1e-12);
  CHECK(rank_profile(upb_complement_state(upb)).rank == 4);
  auto broken = upb;
  broken.vectors[1] = broken.vectors[0];
  CHECK_THROWS_AS(upb_complement_state(broken), InputError);
}

TEST_CASE("Kon-Mnogo state") {
  const auto km = kon_mnogo();
  const auto rp = rank_profile(km.state);
  CHECK(rp.rank == 5);
  CHECK(rp.rank_a == 3);
  CHECK(rp.rank_b == 4);
  CHECK(is_ppt(km.state).ppt);
  REQUIRE(km.w.size() == 10);
  for (int i = 0; i < 10; ++i) {
    const auto s = singular_values(km.w[i]);
    CHECK(s[1] < 1e-14 * s[0]);
    const Matrix pw = km.pvs[i].a * km.pvs[i].b.transpose();
    CHECK(oracle::phase_distance(Eigen::Map<const Vector>(pw.data(), 12),
                                 Eigen::Map<const Vector>(km.w[i].data(), 12)) < 1e-12);
    CHECK((km.state.matrix() * km.pvs[i].tensor()).norm() < 1e-12);
  }
}

TEST_CASE("good families are Gamma-invariant with birank (N+1, N+1)") {
  const auto g4 = make_family(params(FamilyVariant::Good3x4Fixed), 3, 4);
  CHECK(gamma_defect(g4) == 0.0);
  CHECK(rank_profile(g4).rank == 5);
  CHECK(rank_profile(g4).rank_gamma == 5);
  for (int n = 4; n <= 8; ++n) {
    const auto s = make_family(params(FamilyVariant::Good3xN), 3, n);
    CHECK(gamma_defect(s) <= 1e-14);
    const auto rp = rank_profile(s);
    CHECK(rp.rank == n + 1);
    CHECK(rp.rank_gamma == n + 1);
    CHECK(rp.rank_a == 3);
    CHECK(rp.rank_b == n);
  }
  auto p = params(FamilyVariant::Good3xN);
  p.b = {2.0, 3.0};
  CHECK(rank_profile(make_family(p, 3, 5)).rank == 6);
}

TEST_CASE("bad 3x4 family at unit parameters is the first 3xN state") {
  const auto s = make_family(params(FamilyVariant::Bad3x4), 3, 4);
  const auto t = make_family(params(FamilyVariant::Bad3xN), 3, 4);
  CHECK(max_abs(s.matrix() - t.matrix()) == 0.0);
  CHECK(gamma_defect(s) == 0.0);
  CHECK(rank_profile(s).rank == 5);
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 5; ++trial) {
    const Vector v = oracle::random_vector(rng, 2);
    Vector b = Vector::Zero(4);
    b(2) = v(0);
    b(3) = v(1);
    CHECK((s.matrix() * oracle::kron(Vector(Vector::Unit(3, 0)), b)).norm() < 1e-12);
  }
}

TEST_CASE("3xN states: reduced operator and rank") {
  for (int n = 5; n <= 8; ++n) {
    const auto s = make_family(params(FamilyVariant::Bad3xN), 3, n);
    Matrix expect(3, 3);
    expect << n - 2, -1, 0, -1, 2 * n - 4, 2 * n - 7, 0, 2 * n - 7, 2 * n + 1;
    CHECK(max_abs(reduced_operators(s.op()).rho_a - expect) == 0.0);
    CHECK(rank_profile(s).rank == n + 1);
    CHECK(gamma_defect(s) == 0.0);
  }
}

TEST_CASE("MxN family") {
  for (int m = 3; m <= 6; ++m)
    for (int n = std::max(m, 4); n <= 7; ++n) {
      const auto s = make_family(params(FamilyVariant::BadMxN), m, n);
      CHECK(is_ppt(s).ppt);
      CHECK(rank_profile(s).rank == m + n - 2);
      CHECK(reduced_operators(s.op()).rho_a(0, 0).real() == m + n - 5);
      CHECK(gamma_defect(s) == 0.0);
      std::mt19937_64 rng(m * 10 + n);
      const Vector v = oracle::random_vector(rng, 2);
      Vector b = Vector::Zero(n);
      b(n - 2) = v(0);
      b(n - 1) = v(1);
      CHECK((s.matrix() * oracle::kron(Vector(Vector::Unit(m, 0)), b)).norm() <= 1e-12);
    }
  auto p = params(FamilyVariant::BadMxN);
  p.c = {1.0};
  CHECK(rank_profile(make_family(p, 4, 4)).rank == 6);
}

TEST_CASE("family parameter validation") {
  auto g = params(FamilyVariant::Good3xN);
  g.b = {1.0, 2.0};
  CHECK_THROWS_AS(make_family(g, 3, 5), InputError);
  g.b = {2.0, -2.0};
  CHECK_THROWS_AS(make_family(g, 3, 5), InputError);
  g.b = {2.0};
  CHECK_THROWS_AS(make_family(g, 3, 5), InputError);
  CHECK_THROWS_AS(make_family(params(FamilyVariant::Good3xN), 4, 5), InputError);
  auto b = params(FamilyVariant::Bad3x4);
  b.abcdefg[2] = 0.0;
  CHECK_THROWS_AS(make_family(b, 3, 4), InputError);
  CHECK_THROWS_AS(make_family(params(FamilyVariant::BadMxN), 2, 4), InputError);
  auto c = params(FamilyVariant::BadMxN);
  c.c = {2.0, 2.0};
  CHECK_THROWS_AS(make_family(c, 5, 5), InputError);
  CHECK_NOTHROW(make_family(params(FamilyVariant::BadMxN), 3, 4));
  CHECK(to_string(FamilyVariant::BadMxN) == "bad-MxN");
}
