#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "roa/poly.hpp"

using namespace roa;

TEST_CASE("basis sizes and ordering") {
  Basis b0(1, 0);
  CHECK(b0.size() == 1);
  CHECK(b0[0].degree() == 0);

  Basis b(2, 2);
  REQUIRE(b.size() == 6);
  // 1, x1, x2, x1^2, x1*x2, x2^2
  CHECK(b[0].exps() == std::vector<int>{0, 0});
  CHECK(b[1].exps() == std::vector<int>{1, 0});
  CHECK(b[2].exps() == std::vector<int>{0, 1});
  CHECK(b[3].exps() == std::vector<int>{2, 0});
  CHECK(b[4].exps() == std::vector<int>{1, 1});
  CHECK(b[5].exps() == std::vector<int>{0, 2});

  Basis big(3, 9);
  CHECK(big.size() == 220);  // binomial(12, 3)
  CHECK(static_cast<int>(binomial(12, 3)) == 220);
}

TEST_CASE("basis index round-trip") {
  Basis b(3, 5);
  for (int i = 0; i < b.size(); ++i) CHECK(b.index_of(b[i]) == i);
  CHECK(b.index_of(MultiIndex({6, 0, 0})) == -1);
}

TEST_CASE("arithmetic basics") {
  Poly x = Poly::variable(1, 0);
  Poly x2 = x * x;
  CHECK(x2.degree() == 2);
  CHECK(x2.coeff(MultiIndex({2})) == doctest::Approx(1.0));

  Poly p = Poly(1, 1.0) - x2;  // 1 - x^2
  CHECK(p.eval({0.5}) == doctest::Approx(0.75));

  // x(x-0.5)(x+0.5) expands to x^3 - 0.25 x
  Poly cubic = x * (x - Poly(1, 0.5)) * (x + Poly(1, 0.5));
  Poly expected = x * x * x - 0.25 * x;
  CHECK(approx_equal(cubic, expected, 1e-15));
  CHECK(approx_equal(cubic * Poly(1, 1.0), expected, 1e-15));
}

TEST_CASE("eval of product equals product of evals") {
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  std::uniform_real_distribution<double> pt(-1.5, 1.5);
  for (int trial = 0; trial < 30; ++trial) {
    int n = 1 + static_cast<int>(rng() % 3);
    Basis b(n, 6);
    Poly p(n), q(n);
    for (int i = 0; i < b.size(); ++i) {
      if (rng() % 3 == 0) p.add_term(b[i], coef(rng));
      if (rng() % 3 == 0) q.add_term(b[i], coef(rng));
    }
    std::vector<double> z(static_cast<std::size_t>(n));
    for (double& v : z) v = pt(rng);
    double lhs = (p * q).eval(z);
    double rhs = p.eval(z) * q.eval(z);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
  }
}

TEST_CASE("diff") {
  // d/dx1 (x1^2 x2) = 2 x1 x2
  Poly p = Poly::monomial(2, MultiIndex({2, 1}));
  Poly d = diff(p, 0);
  CHECK(approx_equal(d, Poly::monomial(2, MultiIndex({1, 1}), 2.0), 1e-15));
  CHECK(diff(Poly(2, 7.0), 1).is_zero());
  // d/dt (t x^3) = x^3
  Poly q = Poly::monomial(2, MultiIndex({1, 3}));
  CHECK(approx_equal(diff(q, 0), Poly::monomial(2, MultiIndex({0, 3})), 1e-15));
}

TEST_CASE("lie derivative") {
  // (t, x) space, n = 1
  Poly t = Poly::variable(2, 0);
  Poly x = Poly::variable(2, 1);
  std::vector<Poly> f = {x * x * x - 0.25 * x};

  CHECK(approx_equal(lie(t, f), Poly(2, 1.0), 1e-15));

  std::vector<Poly> fx = {x};
  CHECK(approx_equal(lie(x, fx), x, 1e-15));

  // lie(x^2) with cubic dynamics: 2x * (x^3 - 0.25x) = 2x^4 - 0.5x^2
  Poly expected = 2.0 * x * x * x * x - 0.5 * x * x;
  CHECK(approx_equal(lie(x * x, f), expected, 1e-15));

  CHECK(lie(Poly(2, 3.0), f).is_zero());
}

TEST_CASE("lie linearity") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  Basis b(2, 4);
  std::vector<Poly> f = {parse_poly("x1^3 - 0.25*x1", 1, true)};
  for (int trial = 0; trial < 10; ++trial) {
    Poly v1(2), v2(2);
    for (int i = 0; i < b.size(); ++i) {
      v1.add_term(b[i], coef(rng));
      v2.add_term(b[i], coef(rng));
    }
    double a = coef(rng), c = coef(rng);
    Poly lhs = lie(a * v1 + c * v2, f);
    Poly rhs = a * lie(v1, f) + c * lie(v2, f);
    CHECK(approx_equal(lhs, rhs, 1e-12));
  }
}

TEST_CASE("promotion and substitution") {
  Poly px = parse_poly("1 - x1^2", 1, false);
  Poly ptx = promote_with_time(px);
  CHECK(ptx.nvars() == 2);
  CHECK(ptx.eval({3.0, 0.5}) == doctest::Approx(0.75));

  Poly v = parse_poly("t^2*x1 + x1 - 2*t", 1, true);
  Poly at0 = substitute_var(v, 0, 0.0);
  CHECK(at0.nvars() == 1);
  CHECK(at0.eval({2.0}) == doctest::Approx(2.0));
  Poly at1 = substitute_var(v, 0, 1.0);
  CHECK(at1.eval({2.0}) == doctest::Approx(2.0 + 2.0 - 2.0));

  Poly scaled = scale_var(v, 0, 10.0);  // t -> 10 t
  CHECK(scaled.eval({0.1, 2.0}) == doctest::Approx(v.eval({1.0, 2.0})));

  std::vector<double> sc{2.0}, off{-1.0};
  Poly aff = affine_substitute(px, sc, off);  // x -> 2x - 1
  CHECK(aff.eval({0.75}) == doctest::Approx(px.eval({0.5})));
}

TEST_CASE("parser") {
  Poly p = parse_poly("2.5*x1^2*x2 - 0.8*t + 1", 2, true);
  CHECK(p.nvars() == 3);
  CHECK(p.coeff(MultiIndex({0, 2, 1})) == doctest::Approx(2.5));
  CHECK(p.coeff(MultiIndex({1, 0, 0})) == doctest::Approx(-0.8));
  CHECK(p.coeff(MultiIndex({0, 0, 0})) == doctest::Approx(1.0));

  CHECK_THROWS_AS(parse_poly("2x1", 1, false), std::invalid_argument);
  CHECK_THROWS_AS(parse_poly("x1*y", 1, false), std::invalid_argument);
  CHECK_THROWS_AS(parse_poly("x2", 1, false), std::invalid_argument);
  CHECK_THROWS_AS(parse_poly("t + x1", 1, false), std::invalid_argument);
  CHECK_THROWS_AS(parse_poly("x1^-2", 1, false), std::invalid_argument);
  CHECK_THROWS_AS(parse_poly("", 1, false), std::invalid_argument);
  CHECK_THROWS_AS(parse_poly("x1 x2", 2, false), std::invalid_argument);

  // print then reparse
  Poly q = parse_poly("-x1 + 0.5*x1^3 - 2", 1, false);
  Poly q2 = parse_poly(poly_to_string(q, false), 1, false);
  CHECK(approx_equal(q, q2, 1e-12));
}
