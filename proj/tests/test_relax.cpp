#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "roa/relax.hpp"
#include "support/oracles.hpp"

using namespace roa;

namespace {

SystemSpec cubic_spec() {
  SystemSpec s;
  s.n = 1;
  s.f = {parse_poly("x1^3 - 0.25*x1", 1, true)};
  s.g_x = parse_poly("1 - x1^2", 1, false);
  s.g_t = parse_poly("0.09 - x1^2", 1, false);
  s.horizon = 10.0;
  s.domain = DomainDescriptor::box({-1.0}, {1.0});
  return s;
}

SystemSpec static_spec() {
  SystemSpec s;
  s.n = 1;
  s.f = {Poly(2)};  // frozen dynamics
  s.g_x = parse_poly("1 - x1^2", 1, false);
  s.g_t = parse_poly("0.09 - x1^2", 1, false);
  s.horizon = 1.0;
  s.domain = DomainDescriptor::box({-1.0}, {1.0});
  return s;
}

RelaxationResult solve_dual(const SystemSpec& spec, int k, int deg_w, int deg_v) {
  DualAssembly a = build_dual(spec, k, deg_w, deg_v);
  Solution s = solve(a.program);
  return extract(a, s);
}

}  // namespace

TEST_CASE("degree plan") {
  SystemSpec s = cubic_spec();
  DegreePlan p = DegreePlan::make(s, 8, 16, 16);
  CHECK(p.d_x == 1);
  CHECK(p.d_t == 1);
  CHECK(p.deg_f == 3);
  CHECK(p.flow_budget == 18);
  CHECK(p.half_p == 9);
  CHECK(p.half_q1 == 8);
  CHECK(p.half_q2 == 8);
  CHECK(p.half_pt1 == 8);
  CHECK(p.half_qt1 == 7);
  CHECK(p.deg_r == 14);
  CHECK(p.half_p0 == 8);
  CHECK(p.half_s0 == 8);

  CHECK_THROWS_AS(DegreePlan::make(s, 0, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(DegreePlan::make(s, 4, 10, 8), std::invalid_argument);
}

TEST_CASE("normalization maps the cubic onto the unit interval") {
  SystemSpec s = cubic_spec();
  s.domain = DomainDescriptor::box({-0.7}, {0.7});
  s.g_x = parse_poly("0.49 - x1^2", 1, false);
  NormalizedSystem ns = normalize(s);
  CHECK(ns.det_scale == doctest::Approx(0.7));
  CHECK(ns.scaled.horizon == 1.0);
  // g_x(0.7 y) = 0.49 (1 - y^2)
  CHECK(ns.scaled.g_x.eval({1.0}) == doctest::Approx(0.0));
  CHECK(ns.scaled.g_x.eval({0.0}) == doctest::Approx(0.49));
  // f_scaled(s, y) = (T/0.7) f(0.7 y) at y = 1: (10/0.7) * (0.343 - 0.175)
  CHECK(ns.scaled.f[0].eval({0.3, 1.0}) ==
        doctest::Approx(10.0 / 0.7 * (0.343 - 0.7 * 0.25)));
}

TEST_CASE("liouville rows for constant and linear-in-time test monomials") {
  SystemSpec s = cubic_spec();
  PrimalAssembly a = build_primal(s, 3);
  // row multiplier for the constant test monomial appears with +1 on the
  // muT1/muT2 masses and -1 on the mu0 mass
  int lam0 = a.liouville_off + a.test_basis.index_of(MultiIndex({0, 0}));
  auto count_in_row = [&](int measure, const MultiIndex& m, int var) {
    double c = 0.0;
    for (const auto& t : a.program.rows[static_cast<std::size_t>(
                                            a.moment_row(measure, m))]
                             .terms) {
      if (t.block == ConicProgram::kFree && t.row == var) c += t.coef;
    }
    return c;
  };
  CHECK(count_in_row(2, MultiIndex({0, 0}), lam0) == doctest::Approx(1.0));
  CHECK(count_in_row(3, MultiIndex({0}), lam0) == doctest::Approx(1.0));
  CHECK(count_in_row(1, MultiIndex({0}), lam0) == doctest::Approx(-1.0));
  CHECK(count_in_row(0, MultiIndex({0, 0}), lam0) == doctest::Approx(0.0));

  // test monomial t: L t = 1, so the mu-mass row carries -1 and muT2 sees
  // the value at the (scaled) final time 1
  int lamt = a.liouville_off + a.test_basis.index_of(MultiIndex({1, 0}));
  CHECK(count_in_row(2, MultiIndex({1, 0}), lamt) == doctest::Approx(1.0));
  CHECK(count_in_row(3, MultiIndex({0}), lamt) == doctest::Approx(1.0));
  CHECK(count_in_row(0, MultiIndex({0, 0}), lamt) == doctest::Approx(-1.0));
  CHECK(count_in_row(1, MultiIndex({0}), lamt) == doctest::Approx(0.0));
}

TEST_CASE("static dynamics: inner set converges to the target interval") {
  SystemSpec s = static_spec();
  RelaxationResult r = solve_dual(s, 8, 16, 16);
  REQUIRE(r.ok());

  // identities hold at sample points
  CHECK(r.identity_residual <= 1e-6);

  // w >= 0 and w >= v(0,.) + 1 on the state set
  Poly v0 = substitute_var(r.v, 0, 0.0);
  std::uint64_t state = 42;
  for (int i = 0; i < 1000; ++i) {
    double x = 2.0 * oracles::uniform01(state) - 1.0;
    double wv = r.w.eval({x});
    CHECK(wv >= -1e-7);
    CHECK(wv >= v0.eval({x}) + 1.0 - 1e-6);
  }

  // sublevel volume on a grid: the true region of attraction is the target
  // interval (-0.3, 0.3) itself, so the inner volume lies in (0, 0.6]
  int inner = 0, total = 2001;
  for (int i = 0; i < total; ++i) {
    double x = -1.0 + 2.0 * i / (total - 1);
    if (r.w.eval({x}) < 1.0 - 1e-9) {
      ++inner;
      CHECK(std::abs(x) < 0.3 + 1e-6);  // inner set sits inside the target
    }
  }
  double vol = inner * (2.0 / (total - 1));
  CHECK(vol > 0.0);
  CHECK(vol <= 0.6 + 1e-9);

  // the optimum dominates the complement volume 2 - 0.6 = 1.4
  CHECK(r.d_star >= 1.4 - 1e-6);
  CHECK(r.d_star <= 2.0 + 1e-6);
}

TEST_CASE("zero gap between the moment side and the sos side") {
  SystemSpec s = cubic_spec();
  for (int k : {4, 6}) {
    DualAssembly da = build_dual(s, k, 2 * k, 2 * k);
    Solution ds = solve(da.program);
    REQUIRE(ds.ok());
    RelaxationResult dr = extract(da, ds);

    PrimalAssembly pa = build_primal(s, k);
    Solution ps = solve(pa.program);
    REQUIRE(ps.ok());
    PrimalSolveInfo pi = extract_primal(pa, ps);

    CHECK(std::abs(pi.p_star - dr.d_star) <= 1e-5 * (1.0 + std::abs(dr.d_star)));

    // mass balance from the moment side: total final mass equals initial mass
    MomentVector mu0 = pi.moments(pa, ps, 1);
    MomentVector muT1 = pi.moments(pa, ps, 2);
    MomentVector muT2 = pi.moments(pa, ps, 3);
    double m0 = mu0[MultiIndex::zeros(1)];
    double mT = muT1[MultiIndex::zeros(2)] + muT2[MultiIndex::zeros(1)];
    CHECK(m0 == doctest::Approx(mT).epsilon(1e-5));
    CHECK(m0 >= -1e-7);
  }
}

TEST_CASE("hierarchy is monotone on the cubic") {
  SystemSpec s = cubic_spec();
  RelaxationResult r8 = solve_dual(s, 4, 8, 8);
  RelaxationResult r12 = solve_dual(s, 6, 12, 12);
  REQUIRE(r8.ok());
  REQUIRE(r12.ok());
  CHECK(r12.d_star <= r8.d_star + 1e-6 * (1.0 + std::abs(r8.d_star)));
  CHECK(r8.d_star >= 1.0 - 1e-4);  // never below the true complement volume
}

TEST_CASE("running minimum certificate") {
  SystemSpec s = static_spec();
  RelaxationResult a = solve_dual(s, 3, 6, 6);
  RelaxationResult b = solve_dual(s, 4, 8, 8);
  REQUIRE(a.ok());
  REQUIRE(b.ok());

  RunningMin rm1 = running_min({a});
  double x0[] = {0.17};
  CHECK(rm1.eval(x0) == doctest::Approx(a.w.eval({0.17})));

  RunningMin rm2 = running_min({a, b});
  for (double x : {-0.9, -0.31, 0.05, 0.44, 0.88}) {
    double xx[] = {x};
    CHECK(rm2.eval(xx) ==
          doctest::Approx(std::min(a.w.eval({x}), b.w.eval({x}))));
  }

  // the union sublevel set can only grow
  int inner_a = 0, inner_min = 0;
  for (int i = 0; i < 1001; ++i) {
    double x = -1.0 + 2.0 * i / 1000.0;
    double xx[] = {x};
    if (a.w.eval({x}) < 1.0) ++inner_a;
    if (rm2.eval(xx) < 1.0) ++inner_min;
  }
  CHECK(inner_min >= inner_a);

  CHECK_THROWS_AS(running_min({}), std::invalid_argument);
}
