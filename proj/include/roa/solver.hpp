#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "roa/conic.hpp"

namespace roa {

enum class SolveStatus {
  kOptimal,
  kNearOptimal,
  kInfeasible,
  kUnbounded,
  kNumericalFailure,
};

std::string to_string(SolveStatus s);

struct SolveOptions {
  double gap_tol = 1e-8;
  double feas_tol = 1e-8;
  int max_iter = 200;
  bool scale_rows = true;
  int verbosity = 0;
};

struct SolveResiduals {
  double primal_eq = 0.0;  // ||Ax - b||_inf relative
  double dual_cone = 0.0;  // ||A'y + s - c||_inf relative
  double gap = 0.0;        // relative objective gap
};

struct Solution {
  SolveStatus status = SolveStatus::kNumericalFailure;
  std::vector<double> free_vals;
  std::vector<Eigen::MatrixXd> psd_vals;
  std::vector<double> row_duals;
  std::vector<Eigen::MatrixXd> dual_psd;
  double primal_obj = 0.0;
  double dual_obj = 0.0;
  SolveResiduals residuals;
  int iterations = 0;
  std::vector<std::string> trace;  // one line per iteration

  bool ok() const {
    return status == SolveStatus::kOptimal || status == SolveStatus::kNearOptimal;
  }
};

// Primal-dual interior-point solve (Nesterov-Todd scaling, Mehrotra-style
// adaptive centering) of the conic program. Deterministic for identical
// inputs and options.
Solution solve(const ConicProgram& p, const SolveOptions& opts = {});

}  // namespace roa
