#include <doctest.h>

#include "ahg/gammaseries.hpp"
#include "configs.hpp"
#include "test_util.hpp"

using namespace ahg;
using namespace ahg::testing;

namespace {

std::vector<Rational> f4_beta(const Rational& r) { return {-r, -r - Q("1/2"), Q("-1/2"), Q("-1/2")}; }

std::vector<Rational> f4_gamma1(const Rational& r) {
  return {-r, -r - Q("1/2"), Q("-1/2"), Q("-1/2"), 0, 0};
}

// Appell F4(a, b; c1, c2 | x, y) straight from its double-sum definition.
Rational f4_coefficient(const Rational& a, const Rational& b, const Rational& c1, const Rational& c2, long m, long n) {
  return pochhammer(a, m + n) * pochhammer(b, m + n) /
         (pochhammer(c1, m) * pochhammer(c2, n) * pochhammer(Rational(1), m) * pochhammer(Rational(1), n));
}

DehomFrame f4_frame(const Rational& r) { return {f4_gamma1(r), ExponentGrid::uniform(2, 2), {1, 1}}; }

bool all_zero(const std::vector<PuiseuxSeries>& v) {
  for (const auto& s : v)
    if (!s.is_zero()) return false;
  return true;
}

}  // namespace

TEST_CASE("Γ-series coefficients") {
  Rational r = Q("1/3");
  auto ts = gamma_series(f4_config(), f4_basis(), f4_gamma1(r), 6);
  CHECK(ts.coeff({1, 0}) == Q("5/9"));
  CHECK(ts.coeff({1, 0}) == 2 * r * (r + Q("1/2")));
  CHECK(ts.coeff({0, 0}) == 1);
  CHECK(ts.coeff({-1, 0}) == 0);
  CHECK(ts.coeff({2, -1}) == 0);

  std::vector<Rational> bad = f4_gamma1(r);
  bad[4] = -1;
  CHECK_THROWS_AS(gamma_series(f4_config(), f4_basis(), bad, 2), DegenerateBase);
}

TEST_CASE("dehomogenization offsets") {
  Rational r = Q("1/3");
  auto cfg = f4_config();
  auto frame = f4_frame(r);
  std::vector<std::vector<std::size_t>> simplices{{0, 1, 2, 3}, {0, 1, 2, 5}, {0, 1, 3, 4}, {0, 1, 4, 5}};
  std::vector<std::vector<Rational>> expected{{0, 0}, {0, Q("1/2")}, {Q("1/2"), 0}, {Q("1/2"), Q("1/2")}};
  for (std::size_t k = 0; k < 4; ++k) {
    auto gammas = gamma_candidates(cfg, f4_beta(r), simplices[k]);
    REQUIRE(gammas.size() == 1);
    auto series = dehomogenize(gamma_series(cfg, f4_basis(), gammas[0], 6), frame, 12);
    CHECK((series.offset() == expected[k]));
    CHECK(series.constant_term() == GaussianRational(1));
  }

  // Table-3 style parameters put a y^{1−2r} prefactor on the second element.
  std::vector<Rational> beta3{-r, -r - Q("1/2"), Q("-1/2"), 2 * r - 1};
  auto g1 = gamma_candidates(cfg, beta3, simplices[0])[0];
  auto g2 = gamma_candidates(cfg, beta3, simplices[1])[0];
  CHECK((lattice_offset(f4_basis(), g2, g1) == std::vector<Rational>{0, 1 - 2 * r}));
  CHECK((lattice_offset(f4_basis(), g1, g1) == std::vector<Rational>{0, 0}));

  std::vector<Rational> off = g1;
  off[0] += Q("1/5");
  CHECK_THROWS_AS(lattice_offset(f4_basis(), off, g1), OffsetUnsolvable);
}

TEST_CASE("Γ-series against the F4 double sum") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 1000; ++trial) {
    Rational r;
    do r = random_rational(rng, 12, 9);
    while (is_integer(2 * r));
    auto series = dehomogenize(gamma_series(f4_config(), f4_basis(), f4_gamma1(r), 4), f4_frame(r), 8);
    for (long m = 0; m < 4; ++m)
      for (long n = 0; m + n < 4; ++n)
        CHECK(series.coeff({int(2 * m), int(2 * n)}) ==
              GaussianRational(f4_coefficient(r, r + Q("1/2"), Q("1/2"), Q("1/2"), m, n)));
  }
}

TEST_CASE("partial derivatives") {
  ExponentGrid grid = ExponentGrid::uniform(2, 1);
  std::vector<Rational> mu{Q("1/3"), Q("5/6"), Q("-1/2"), Q("-1/2"), 0, 0};
  HomogenizedSeries bare{mu, f4_basis(), PuiseuxSeries::constant(grid, GaussianRational(1), 6)};
  auto d1 = apply_partial(bare, 0);
  CHECK(d1.mu[0] == Q("-2/3"));
  CHECK(d1.S.constant_term() == GaussianRational(Q("1/3")));
  CHECK(d1.S.terms().size() == 1);

  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Rational> m(6);
    for (auto& v : m) v = random_rational(rng);
    HomogenizedSeries hs{m, f4_basis(), random_series(rng, {1, 1}, 6)};
    std::size_t i = trial % 6, j = (trial / 6) % 6;
    auto ij = apply_partial(apply_partial(hs, i), j);
    auto ji = apply_partial(apply_partial(hs, j), i);
    CHECK((ij.mu == ji.mu));
    CHECK(equal_to_order(ij.S, ji.S));
  }
}

TEST_CASE("structure and Euler residuals") {
  Rational r = Q("1/3");
  auto cfg = f4_config();
  auto hs = homogenize(gamma_series(cfg, f4_basis(), f4_gamma1(r), 8), ExponentGrid::uniform(2, 1), 8);
  for (const auto& l : f4_basis().B) CHECK(structure_residual(hs, l).is_zero());
  CHECK(structure_residual(hs, {-2, -2, 1, 1, 1, 1}).is_zero());
  CHECK(all_zero(euler_residual(hs, cfg, f4_beta(r))));

  HomogenizedSeries bare{f4_gamma1(r), f4_basis(), PuiseuxSeries::constant(ExponentGrid::uniform(2, 1), 1, 6)};
  auto res = structure_residual(bare, {-1, -1, 1, 0, 1, 0});
  REQUIRE(res.terms().size() == 1);
  CHECK(res.terms().begin()->second == GaussianRational(-(r * (r + Q("1/2")))));

  auto beta = f4_beta(r);
  auto shifted = beta;
  shifted[0] -= 1;
  auto euler = euler_residual(bare, cfg, shifted);
  CHECK(equal_to_order(euler[0], bare.S));
  for (std::size_t j = 1; j < 4; ++j) CHECK(euler[j].is_zero());
}

TEST_CASE("Euler residual vanishes exactly when A·μ = β") {
  std::mt19937_64 rng(12);
  auto cfg = f4_config();
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<Rational> mu(6);
    for (auto& v : mu) v = random_rational(rng, 4, 3);
    std::vector<Rational> beta(4, Rational(0));
    for (std::size_t j = 0; j < 4; ++j)
      for (std::size_t i = 0; i < 6; ++i) beta[j] += cfg.A[j][i] * mu[i];
    bool perturb = trial % 2;
    if (perturb) beta[trial % 4] += random_rational(rng, 3, 2) == 0 ? Rational(1) : Rational(2);
    HomogenizedSeries hs{mu, f4_basis(), random_series(rng, {1, 2}, 5, GaussianRational(1))};
    CHECK(all_zero(euler_residual(hs, cfg, beta)) == !perturb);
  }
}

TEST_CASE("FC Γ-series in three variables") {
  Rational r = Q("2/5");
  auto [cfg, tri] = fc_config(3);
  std::vector<Rational> beta{-r, -r - Q("1/2"), Q("-1/2"), Q("-1/2"), Q("-1/2")};
  auto basis = fc_basis(3);
  auto gamma = gamma_candidates(cfg, beta, tri.simplices.front())[0];
  auto hs = homogenize(gamma_series(cfg, basis, gamma, 5), ExponentGrid::uniform(3, 1), 5);
  for (const auto& l : basis.B) CHECK(structure_residual(hs, l).is_zero());
  CHECK(all_zero(euler_residual(hs, cfg, beta)));
  auto d12 = apply_partial(apply_partial(hs, 0), 1);
  CHECK((std::vector<Rational>(d12.mu.begin(), d12.mu.begin() + 5) ==
         std::vector<Rational>{-r - 1, -r - Q("3/2"), Q("-1/2"), Q("-1/2"), Q("-1/2")}));
}
