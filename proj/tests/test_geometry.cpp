#include <doctest.h>

#include <random>

#include "ahg/geometry.hpp"
#include "configs.hpp"
#include "test_util.hpp"

using namespace ahg;
using ahg::testing::Q;
using namespace ahg::testing;

namespace {

bool annihilates(const PointConfig& cfg, const IntVector& l) {
  for (const auto& row : cfg.A) {
    long v = 0;
    for (std::size_t i = 0; i < l.size(); ++i) v += row[i] * l[i];
    if (v != 0) return false;
  }
  return true;
}

std::vector<Rational> image(const PointConfig& cfg, const std::vector<Rational>& g) {
  std::vector<Rational> out(cfg.rank(), Rational(0));
  for (std::size_t k = 0; k < cfg.rank(); ++k)
    for (std::size_t i = 0; i < cfg.size(); ++i) out[k] += cfg.A[k][i] * g[i];
  return out;
}

}  // namespace

TEST_CASE("point configurations validate the linear form") {
  CHECK_THROWS_AS(PointConfig::from_columns({{1, 0}, {0, 1}}, {1, 0}), InvalidConfig);
  CHECK(f4_config().spans_lattice());
  CHECK(g3_config().spans_lattice());
  CHECK_FALSE(PointConfig::from_columns({{1, 0}, {1, 2}}, {1, 0}).spans_lattice());
}

TEST_CASE("lattice kernels") {
  auto f4 = f4_config();
  auto basis = lattice_kernel(f4);
  REQUIRE(basis.dim() == 2);
  CHECK(same_lattice(basis.B, {{-1, -1, 1, 0, 1, 0}, {-1, -1, 0, 1, 0, 1}}));
  CHECK(maximal_minor_gcd(basis.B) == 1);

  auto g3 = lattice_kernel(g3_config());
  REQUIRE(g3.dim() == 2);
  for (const auto& row : g3.B) CHECK(annihilates(g3_config(), row));
  IntMatrix with = g3.B;
  with.push_back({1, -2, 1, 0});
  CHECK(same_lattice(with, g3.B));
  // an index-2 sublattice is not the same lattice
  CHECK_FALSE(same_lattice({{2, -4, 2, 0}, {-2, 1, 0, 1}}, g3.B));

  auto simplex = PointConfig::from_columns({{1, 0}, {1, 1}}, {1, 0});
  CHECK(lattice_kernel(simplex).dim() == 0);
}

TEST_CASE("kernel of random configurations is primitive") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<long> entry(-3, 3);
  std::uniform_int_distribution<std::size_t> cols(2, 7);
  for (int trial = 0; trial < 1000; ++trial) {
    std::size_t n = cols(rng), r = 1 + trial % 3;
    IntMatrix A(r, IntVector(n));
    for (auto& v : A[0]) v = 1;
    for (std::size_t k = 1; k < r; ++k)
      for (auto& v : A[k]) v = entry(rng);
    PointConfig cfg(A, unit_vector(r, 0));
    auto basis = lattice_kernel(cfg);
    for (const auto& row : basis.B) CHECK(annihilates(cfg, row));
    if (basis.dim() > 0) CHECK(maximal_minor_gcd(basis.B) == 1);
    Matrix<Rational> qa;
    for (const auto& row : A) qa.emplace_back(row.begin(), row.end());
    CHECK(basis.dim() == n - row_reduce(qa, n).size());
  }
}

TEST_CASE("simplex volumes") {
  Triangulation f4_t{{{0, 1, 2, 3}, {0, 1, 2, 5}, {0, 1, 3, 4}, {0, 1, 4, 5}}};
  CHECK(simplex_volume(f4_config(), f4_t) == 4);
  CHECK(simplex_volume(g3_config(), Triangulation{{{0, 1}, {1, 2}, {0, 3}}}) == 3);
  for (std::size_t n : {2, 3, 4}) {
    auto [cfg, t] = fc_config(n);
    CHECK(simplex_volume(cfg, t) == (1L << n));
  }
  CHECK_THROWS_AS(simplex_volume(f4_config(), Triangulation{{{0, 1, 4, 2}, {2, 3, 4, 5}}}), SingularSimplex);
}

TEST_CASE("gamma candidates") {
  Rational r = Q("1/3");
  auto f4 = gamma_candidates(f4_config(), {-r, -r - Q("1/2"), Q("-1/2"), Q("-1/2")}, {0, 1, 2, 3});
  REQUIRE(f4.size() == 1);
  CHECK((f4[0] == std::vector<Rational>{-r, -r - Q("1/2"), Q("-1/2"), Q("-1/2"), 0, 0}));

  auto g3 = gamma_candidates(g3_config(), {-r, Rational(-1)}, {0, 1});
  REQUIRE(g3.size() == 1);
  CHECK((g3[0] == std::vector<Rational>{-r, r - 1, 0, 0}));

  auto g3_wide = gamma_candidates(g3_config(), {-r, Rational(-1)}, {1, 3});
  CHECK(g3_wide.size() == 2);

  auto doubled = PointConfig::from_columns({{1, 0}, {1, 2}, {1, 1}}, {1, 0});
  std::vector<Rational> beta{Q("2/5"), Q("1/7")};
  auto two = gamma_candidates(doubled, beta, {0, 1});
  REQUIRE(two.size() == 2);
  CHECK_FALSE(lattice_equivalent(two[0], two[1]));
  for (const auto& g : two) CHECK((image(doubled, g) == beta));
}

TEST_CASE("bounded normality probe") {
  CHECK(normality_probe(f4_config(), 3).normal_up_to_bound);
  CHECK(normality_probe(g3_config(), 3).normal_up_to_bound);
  auto bad = normality_probe(PointConfig::from_columns({{1, 0}, {1, 2}}, {1, 0}), 2);
  CHECK_FALSE(bad.normal_up_to_bound);
  REQUIRE(bad.counterexample);
  CHECK(*bad.counterexample == IntVector{1, 1});
}
