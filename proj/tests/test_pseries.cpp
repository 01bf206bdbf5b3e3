#include <doctest.h>

#include "ahg/pseries.hpp"
#include "test_util.hpp"

using namespace ahg;
using ahg::testing::G;
using ahg::testing::Q;

namespace {

ExponentGrid flat2 = ExponentGrid::uniform(2, 1);

PuiseuxSeries poly(const ExponentGrid& grid, long order, std::initializer_list<std::pair<Exponent, const char*>> t) {
  PuiseuxSeries s(grid, order);
  for (const auto& [e, c] : t) s.add_term(e, G(c));
  return s;
}

}  // namespace

TEST_CASE("multiplication") {
  auto a = poly(flat2, 6, {{{0, 0}, "1"}, {{1, 0}, "1"}, {{0, 1}, "1"}});
  auto b = poly(flat2, 6, {{{0, 0}, "1"}, {{1, 0}, "-1"}, {{0, 1}, "-1"}});
  auto expected = poly(flat2, 6, {{{0, 0}, "1"}, {{2, 0}, "-1"}, {{1, 1}, "-2"}, {{0, 2}, "-1"}});
  CHECK(equal_to_order(mul(a, b), expected));
  CHECK(mul(a, b).terms().size() == 4);

  SUBCASE("square roots multiply through the grid") {
    ExponentGrid g = ExponentGrid::uniform(1, 2);
    auto root = PuiseuxSeries::monomial(g, {1}, GaussianRational(1), 10);
    auto sq = mul(root, root);
    CHECK(sq.terms().size() == 1);
    CHECK(sq.coeff({2}) == GaussianRational(1));
    CHECK(sq.absolute_exponent({2})[0] == 1);
  }

  SUBCASE("square roots multiply through the offset") {
    ExponentGrid g = ExponentGrid::uniform(1, 1);
    PuiseuxSeries root(g, {Q("1/2")}, 10);
    root.add_term({0}, GaussianRational(1));
    auto sq = mul(root, root);
    CHECK(sq.offset()[0] == 1);
    CHECK(sq.constant_term() == GaussianRational(1));
  }

  SUBCASE("order follows the min rule") {
    auto x = PuiseuxSeries::constant(flat2, GaussianRational(1), 5);
    auto y = PuiseuxSeries::constant(flat2, GaussianRational(2), 3);
    CHECK(mul(x, y).order() == 3);
  }
}

TEST_CASE("alignment of offsets and grids") {
  ExponentGrid g = ExponentGrid::uniform(1, 1);
  PuiseuxSeries a(g, {Q("1/3")}, 4);
  a.add_term({0}, GaussianRational(1));
  auto b = PuiseuxSeries::constant(g, GaussianRational(2), 4);
  auto s = add(a, b);
  CHECK(s.offset()[0] == 0);
  CHECK(s.grid().ram[0] == 3);
  CHECK(s.coeff({1}) == GaussianRational(1));
  CHECK(s.coeff({0}) == GaussianRational(2));
  // a is known for relative degree < 4, i.e. absolute degree < 13/3
  CHECK(s.order() == 12);
}

TEST_CASE("inversion") {
  ExponentGrid g = ExponentGrid::uniform(1, 1);
  auto one_minus_x = poly(g, 8, {{{0}, "1"}, {{1}, "-1"}});
  auto inv = invert(one_minus_x);
  for (int k = 0; k < 8; ++k) CHECK(inv.coeff({k}) == GaussianRational(1));

  auto i_const = PuiseuxSeries::constant(g, GaussianRational::i(), 4);
  CHECK(invert(i_const).constant_term() == -GaussianRational::i());

  auto x_only = poly(g, 4, {{{1}, "1"}});
  CHECK_THROWS_AS(invert(x_only), NonUnit);
  auto factored = invert(poly(g, 6, {{{1}, "1"}, {{2}, "-1"}}), true);
  CHECK(factored.offset()[0] == -1);
  CHECK(factored.coeff({0}) == GaussianRational(1));
  CHECK(factored.coeff({3}) == GaussianRational(1));
}

TEST_CASE("rational powers") {
  ExponentGrid g = ExponentGrid::uniform(1, 1);
  auto one_minus_z = poly(g, 6, {{{0}, "1"}, {{1}, "-1"}});
  auto root = pow_rational(one_minus_z, Q("1/2"));
  CHECK(root.coeff({0}) == GaussianRational(1));
  CHECK(root.coeff({1}) == GaussianRational(Q("-1/2")));
  CHECK(root.coeff({2}) == GaussianRational(Q("-1/8")));
  CHECK(root.coeff({3}) == GaussianRational(Q("-1/16")));
  CHECK(root.coeff({4}) == GaussianRational(Q("-5/128")));

  auto neg = pow_rational(one_minus_z, Q("1/2"), Branch::Negative);
  CHECK(neg.coeff({0}) == GaussianRational(-1));
  CHECK(neg.coeff({1}) == GaussianRational(Q("1/2")));
  CHECK(neg.coeff({2}) == GaussianRational(Q("1/8")));

  auto unit = ahg::testing::random_series(*new std::mt19937_64(3), {1, 1}, 6);
  auto zero_power = pow_rational(unit, Q("0"));
  CHECK(zero_power.terms().size() == 1);
  CHECK(zero_power.constant_term() == GaussianRational(1));

  auto four = poly(g, 5, {{{0}, "4"}, {{1}, "4"}});
  auto two_root = pow_rational(four, Q("1/2"));  // 2·(1+z)^{1/2}
  CHECK(two_root.coeff({0}) == GaussianRational(2));
  CHECK(two_root.coeff({1}) == GaussianRational(1));
  auto two = poly(g, 5, {{{0}, "2"}, {{1}, "1"}});
  CHECK_THROWS_AS(pow_rational(two, Q("1/2")), NonRepresentableConstantPower);
  CHECK_THROWS_AS(pow_rational(two, Q("1/3")), NonRepresentableConstantPower);
  CHECK_THROWS_AS(pow_rational(poly(g, 5, {{{1}, "1"}}), Q("1/2")), NonUnit);

  SUBCASE("offset scales with the exponent") {
    PuiseuxSeries y(g, {Q("1")}, 4);
    y.add_term({0}, GaussianRational(1));
    auto p = pow_rational(y, Q("1/3"));
    CHECK(p.offset()[0] == Q("1/3"));
  }
}

TEST_CASE("theta operators") {
  auto x2y = poly(flat2, 8, {{{2, 1}, "1"}});
  CHECK(theta(x2y, 0).coeff({2, 1}) == GaussianRational(2));

  ExponentGrid half = ExponentGrid::uniform(1, 2);
  auto root_x = PuiseuxSeries::monomial(half, {1}, GaussianRational(1), 6);
  CHECK(theta(root_x, 0).coeff({1}) == GaussianRational(Q("1/2")));

  // y^{1−2r} at r = 1/3
  PuiseuxSeries py(ExponentGrid::uniform(2, 1), {Q("0"), Q("1/3")}, 4);
  py.add_term({0, 0}, GaussianRational(1));
  auto t = theta(py, 1);
  CHECK(t.coeff({0, 0}) == GaussianRational(Q("1/3")));
  CHECK(t.offset()[1] == Q("1/3"));
  CHECK(theta(py, 0).is_zero());
}

TEST_CASE("monomial division") {
  auto xy = poly(flat2, 8, {{{1, 1}, "1"}});
  auto q = monomial_div(xy, {Q("1"), Q("0")});
  CHECK(q.coeff({0, 1}) == GaussianRational(1));
  CHECK(q.terms().size() == 1);
  CHECK(q.order() == 7);

  auto x_plus_y = poly(flat2, 8, {{{1, 0}, "1"}, {{0, 1}, "1"}});
  try {
    monomial_div(x_plus_y, {Q("1"), Q("0")});
    FAIL("expected NotDivisible");
  } catch (const NotDivisible& e) {
    CHECK(e.monomial() == std::vector<Rational>{Q("0"), Q("1")});
  }
  auto bad = first_non_divisible(x_plus_y, {Q("1"), Q("0")});
  REQUIRE(bad);
  CHECK((*bad)[1] == 1);

  PuiseuxSeries py(flat2, {Q("0"), Q("1/3")}, 4);
  py.add_term({0, 0}, GaussianRational(1));
  auto shifted = monomial_div(py, {Q("0"), Q("1")}, DivisionMode::Shift);
  CHECK(shifted.offset()[1] == Q("-2/3"));
}

TEST_CASE("variable negation and restriction") {
  ExponentGrid half = ExponentGrid::uniform(2, 2);
  PuiseuxSeries s(half, 10);
  s.add_term({1, 0}, GaussianRational(1));  // √x
  s.add_term({2, 0}, GaussianRational(1));  // x
  s.add_term({0, 2}, GaussianRational(3));  // 3y
  auto n = negate_variable(s, 0);
  CHECK(n.coeff({1, 0}) == GaussianRational::i());
  CHECK(n.coeff({2, 0}) == GaussianRational(-1));
  CHECK(n.coeff({0, 2}) == GaussianRational(3));
  auto r = restrict_zero(s, 0);
  CHECK(r.terms().size() == 1);
}

TEST_CASE("mismatch certificates report the lowest monomial") {
  auto a = poly(flat2, 6, {{{0, 0}, "1"}, {{1, 0}, "2"}, {{0, 2}, "5"}});
  auto b = poly(flat2, 6, {{{0, 0}, "1"}, {{1, 0}, "2"}, {{1, 1}, "7"}, {{0, 2}, "4"}});
  auto cert = first_difference(a, b);
  REQUIRE(cert);
  CHECK(cert->exponent == std::vector<Rational>{Q("0"), Q("2")});
  CHECK(cert->expected == GaussianRational(5));
  CHECK(cert->actual == GaussianRational(4));
  CHECK_FALSE(first_difference(a, a));
}

TEST_CASE("ring laws on random triples") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<int> ram = (trial % 2) ? std::vector<int>{1, 2} : std::vector<int>{2, 2};
    auto a = ahg::testing::random_series(rng, ram, 6, std::nullopt, 5);
    auto b = ahg::testing::random_series(rng, ram, 6, std::nullopt, 5);
    auto c = ahg::testing::random_series(rng, ram, 6, std::nullopt, 5);
    CHECK(equal_to_order(mul(mul(a, b), c), mul(a, mul(b, c))));
    CHECK(equal_to_order(mul(a, add(b, c)), add(mul(a, b), mul(a, c))));
    CHECK(equal_to_order(mul(a, b), mul(b, a)));
  }
}

TEST_CASE("power law, Leibniz rule and chain rule") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 1000; ++trial) {
    auto a = ahg::testing::random_series(rng, {2, 1}, 6, GaussianRational(1), 4);
    auto b = ahg::testing::random_series(rng, {2, 1}, 6, std::nullopt, 4);
    Rational p = ahg::testing::random_rational(rng, 7, 5), q = ahg::testing::random_rational(rng, 7, 5);
    CHECK(equal_to_order(mul(pow_rational(a, p), pow_rational(a, q)), pow_rational(a, p + q)));

    std::size_t j = trial % 2;
    CHECK(equal_to_order(theta(mul(a, b), j), add(mul(theta(a, j), b), mul(a, theta(b, j)))));

    auto lhs = theta(pow_rational(a, p), j);
    auto rhs = scale(mul(pow_rational(a, p - 1), theta(a, j)), GaussianRational(p));
    CHECK(equal_to_order(lhs, rhs));
  }
}

TEST_CASE("exp and log are inverse") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    auto a = ahg::testing::random_series(rng, {1, 2}, 7, GaussianRational(1), 6);
    CHECK(equal_to_order(exp_series(log_unit(a)), a));
    auto inv = invert(a);
    CHECK(equal_to_order(mul(a, inv), PuiseuxSeries::constant(a.grid(), GaussianRational(1), a.order())));
  }
}
