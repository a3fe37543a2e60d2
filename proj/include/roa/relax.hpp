#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "roa/conic.hpp"
#include "roa/moments.hpp"
#include "roa/poly.hpp"
#include "roa/solver.hpp"
#include "roa/sos.hpp"

namespace roa {

// Problem data: dynamics xdot = f(t, x) on the state set {g_x > 0}, target
// set {g_t > 0}, horizon T, and an integration domain covering the state set.
struct SystemSpec {
  int n = 0;
  std::vector<Poly> f;  // each in (t, x) with n + 1 variables, time first
  Poly g_x;             // x-only
  Poly g_t;             // x-only
  double horizon = 0.0;
  DomainDescriptor domain;

  void validate() const;
};

// Degree bookkeeping shared by both relaxation builders. Budgets are the
// total degrees at which each identity is matched; every multiplier gets the
// largest half-degree whose product with its factor stays inside the budget.
struct DegreePlan {
  int k = 0, deg_v = 0, deg_w = 0;
  int d_x = 0, d_t = 0, deg_f = 0;
  int flow_budget = 0;  // covers -Lv, which can exceed 2k when deg f > 1
  int init_budget = 0;
  int w_budget = 0;
  int half_p = 0, half_q1 = 0, half_q2 = 0;
  int half_pt1 = 0, half_qt1 = 0, deg_r = 0;
  int half_pt2 = 0, half_qt2 = 0, half_qt3 = 0;
  int half_p0 = 0, half_q01 = 0;
  int half_s0 = 0, half_s1 = 0;

  static DegreePlan make(const SystemSpec& spec, int k, int deg_w, int deg_v);
};

// The problem mapped onto the unit box/ball with time running over [0, 1].
// x_original = scale .* x_scaled + offset, t_original = horizon * t_scaled.
struct NormalizedSystem {
  SystemSpec scaled;  // horizon 1, unit domain
  std::vector<double> scale, offset;
  double det_scale = 1.0;
  double horizon = 1.0;  // original horizon
};

NormalizedSystem normalize(const SystemSpec& spec);

struct MultiplierInfo {
  std::string name;
  int block = -1;
  Basis half_basis;
  Poly factor;   // in the identity's variable space
  int identity;  // 1..5
  bool in_tx;
};

// Dual-side sum-of-squares program: decision variables are the coefficients
// of v, w, the free boundary multiplier, and one Gram block per squared
// multiplier; rows match the five identities coefficient-wise.
struct DualAssembly {
  ConicProgram program;
  DegreePlan plan;
  NormalizedSystem norm;
  Basis v_basis;  // (t,x) scaled coords
  Basis w_basis;  // x scaled coords
  Basis r_basis;  // (t,x) scaled coords
  int v_off = 0, w_off = 0, r_off = 0;
  std::vector<MultiplierInfo> multipliers;
  MomentVector lebesgue;  // over the scaled domain
};

DualAssembly build_dual(const SystemSpec& spec, int k, int deg_w, int deg_v);

struct MeasureInfo {
  std::string name;
  Basis basis;
  int row_offset = 0;  // program row of this measure's first moment
  bool in_tx = false;
};

// Moment-side program. Decision variables of the mathematical problem are
// the five truncated moment sequences; the stored ConicProgram is its exact
// conic transpose (one row per moment), so the solver's row duals are the
// moments and its dual objective is the moment optimum.
struct PrimalAssembly {
  ConicProgram program;
  DegreePlan plan;
  NormalizedSystem norm;
  std::vector<MeasureInfo> measures;  // mu, mu0, muT1, muT2, muhat0
  Basis test_basis;                   // Liouville test monomials, (t,x)
  Basis w_test_basis;                 // domination test monomials, x
  Basis boundary_basis;               // boundary equality multipliers, (t,x)
  int liouville_off = 0, domination_off = 0, boundary_off = 0;
  MomentVector lebesgue;

  int moment_row(int measure, const MultiIndex& m) const;
};

PrimalAssembly build_primal(const SystemSpec& spec, int k);

struct RelaxationResult {
  int k = 0, deg_w = 0, deg_v = 0;
  Poly w;  // x-only, original coordinates
  Poly v;  // (t,x), original coordinates
  double d_star = 0.0;  // objective of the sum-of-squares side
  double p_star = 0.0;  // objective bound of the moment side
  SolveStatus status = SolveStatus::kNumericalFailure;
  SolveResiduals residuals;
  int iterations = 0;
  double identity_residual = 0.0;  // worst sampled identity mismatch
  double wall_time_s = 0.0;

  bool ok() const {
    return status == SolveStatus::kOptimal || status == SolveStatus::kNearOptimal;
  }
};

// Re-evaluates all five identities of a solved dual program at sample points
// in scaled coordinates; returns the worst residual scaled by
// 1 / (1 + max coefficient magnitude).
double max_identity_residual(const DualAssembly& a, const Solution& s, int npoints,
                             std::uint64_t seed);

RelaxationResult extract(const DualAssembly& a, const Solution& s);

struct PrimalSolveInfo {
  double p_star = 0.0;
  SolveStatus status = SolveStatus::kNumericalFailure;
  SolveResiduals residuals;
  MomentVector moments(const PrimalAssembly& a, const Solution& s, int measure) const;
};

PrimalSolveInfo extract_primal(const PrimalAssembly& a, const Solution& s);

// Pointwise minimum of the certificates from several orders; its strict
// sublevel set {min_i w_i < 1} is the union of the individual inner sets.
struct RunningMin {
  std::vector<Poly> ws;
  double eval(std::span<const double> x) const;
};

RunningMin running_min(const std::vector<RelaxationResult>& results);

}  // namespace roa
