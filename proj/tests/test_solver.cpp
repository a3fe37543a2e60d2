#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "roa/solver.hpp"

using namespace roa;

TEST_CASE("scalar bound") {
  // min x s.t. x = X, X >= 0 (1x1 block); optimum 0
  ConicProgram p;
  int u = p.add_free();
  int blk = p.add_block(1);
  p.objective.push_back(ConicProgram::free_term(u, 1.0));
  ConicProgram::Row row;
  row.terms.push_back(ConicProgram::free_term(u, 1.0));
  row.terms.push_back(ConicProgram::block_term(blk, 0, 0, -1.0));
  row.rhs = 0.0;
  p.rows.push_back(row);

  Solution s = solve(p);
  REQUIRE(s.ok());
  CHECK(s.primal_obj == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(std::abs(s.primal_obj - s.dual_obj) <= 1e-6);
}

TEST_CASE("correlation corner") {
  // min Q12 s.t. Q PSD, Q11 = Q22 = 1; optimum -1
  ConicProgram p;
  int blk = p.add_block(2);
  p.objective.push_back(ConicProgram::block_term(blk, 0, 1, 1.0));
  ConicProgram::Row r1, r2;
  r1.terms.push_back(ConicProgram::block_term(blk, 0, 0, 1.0));
  r1.rhs = 1.0;
  r2.terms.push_back(ConicProgram::block_term(blk, 1, 1, 1.0));
  r2.rhs = 1.0;
  p.rows.push_back(r1);
  p.rows.push_back(r2);

  Solution s = solve(p);
  REQUIRE(s.ok());
  CHECK(s.primal_obj == doctest::Approx(-1.0).epsilon(1e-6));

  // returned block stays PSD up to tolerance
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s.psd_vals[0]);
  CHECK(es.eigenvalues().minCoeff() >= -1e-8);
}

namespace {

// max gamma s.t. x^4 - 3x^2 + 2 - gamma is a sum of squares with Gram basis
// (1, x, x^2). Rows match coefficients of 1, x, x^2, x^3, x^4.
ConicProgram sos_lower_bound_program() {
  ConicProgram p;
  int g = p.add_free();
  int q = p.add_block(3);
  p.maximize = true;
  p.objective.push_back(ConicProgram::free_term(g, 1.0));

  auto row = [&](double rhs) {
    ConicProgram::Row r;
    r.rhs = rhs;
    return r;
  };
  // constant: Q00 + gamma = 2
  ConicProgram::Row r0 = row(2.0);
  r0.terms.push_back(ConicProgram::block_term(q, 0, 0, 1.0));
  r0.terms.push_back(ConicProgram::free_term(g, 1.0));
  // x: 2 Q01 = 0
  ConicProgram::Row r1 = row(0.0);
  r1.terms.push_back(ConicProgram::block_term(q, 0, 1, 2.0));
  // x^2: Q11 + 2 Q02 = -3
  ConicProgram::Row r2 = row(-3.0);
  r2.terms.push_back(ConicProgram::block_term(q, 1, 1, 1.0));
  r2.terms.push_back(ConicProgram::block_term(q, 0, 2, 2.0));
  // x^3: 2 Q12 = 0
  ConicProgram::Row r3 = row(0.0);
  r3.terms.push_back(ConicProgram::block_term(q, 1, 2, 2.0));
  // x^4: Q22 = 1
  ConicProgram::Row r4 = row(1.0);
  r4.terms.push_back(ConicProgram::block_term(q, 2, 2, 1.0));

  p.rows = {r0, r1, r2, r3, r4};
  return p;
}

}  // namespace

TEST_CASE("univariate quartic lower bound") {
  // The quartic's minimum sits at x^2 = 1.5 with value 2.25 - 4.5 + 2 = -0.25,
  // and a univariate nonnegative polynomial is a sum of squares, so the SOS
  // bound is exactly -0.25.
  ConicProgram p = sos_lower_bound_program();
  Solution s = solve(p);
  REQUIRE(s.ok());
  CHECK(s.primal_obj == doctest::Approx(-0.25).epsilon(1e-6));
}

TEST_CASE("deterministic resolve") {
  ConicProgram p = sos_lower_bound_program();
  Solution a = solve(p);
  Solution b = solve(p);
  CHECK(a.primal_obj == doctest::Approx(b.primal_obj).epsilon(1e-10));
  CHECK(a.dual_obj == doctest::Approx(b.dual_obj).epsilon(1e-10));
  CHECK(a.iterations == b.iterations);
}

TEST_CASE("weak duality on optimal solves") {
  ConicProgram p = sos_lower_bound_program();
  Solution s = solve(p);
  REQUIRE(s.ok());
  // maximization: primal objective <= dual bound up to residual tolerance
  CHECK(s.primal_obj <= s.dual_obj + 1e-6 * (1.0 + std::abs(s.dual_obj)));
}

TEST_CASE("infeasible program is not reported optimal") {
  // X >= 0 scalar with X = -1
  ConicProgram p;
  int blk = p.add_block(1);
  p.objective.push_back(ConicProgram::block_term(blk, 0, 0, 1.0));
  ConicProgram::Row r;
  r.terms.push_back(ConicProgram::block_term(blk, 0, 0, 1.0));
  r.rhs = -1.0;
  p.rows.push_back(r);
  Solution s = solve(p);
  CHECK(s.status != SolveStatus::kOptimal);
  CHECK(s.status != SolveStatus::kNearOptimal);
  CHECK_FALSE(s.trace.empty());
}

TEST_CASE("sdpa dump") {
  ConicProgram p = sos_lower_bound_program();
  std::string path = "dump_test.dat-s";
  write_sdpa_sparse(p, path);
  std::ifstream is(path);
  REQUIRE(is.good());
  std::string line;
  int comment_lines = 0, data_lines = 0;
  bool seen_mdim = false;
  while (std::getline(is, line)) {
    if (!line.empty() && line[0] == '"') {
      ++comment_lines;
      continue;
    }
    if (line.find("mDIM") != std::string::npos) {
      seen_mdim = true;
      CHECK(line.substr(0, 1) == "5");
    }
    ++data_lines;
  }
  CHECK(comment_lines >= 3);
  CHECK(seen_mdim);
  CHECK(data_lines >= 4 + 8);  // header lines plus one line per nonzero
  std::remove(path.c_str());
}
