#include "roa/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <stdexcept>

namespace roa {

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kNearOptimal: return "near-optimal";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kUnbounded: return "unbounded";
    case SolveStatus::kNumericalFailure: return "numerical-failure";
  }
  return "unknown";
}

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct BlockEntry {
  int r, c;
  double coef;  // multiplies X[r][c] of the symmetric block, pair counted once
};

// One constraint row restricted to a single block.
struct BlockRow {
  int row;
  std::vector<BlockEntry> entries;
};

struct Prepared {
  int m = 0;
  int nf = 0;
  int nblocks = 0;
  std::vector<int> orders;
  MatrixXd Au;                                  // m x nf
  VectorXd b;                                   // m
  VectorXd cf;                                  // nf
  std::vector<MatrixXd> C;                      // per-block symmetric cost
  std::vector<std::vector<BlockRow>> block_rows;  // per block
  VectorXd row_scale;                           // original row / scale = solved row
  double sense = 1.0;                           // -1 when maximizing
};

// Symmetric matrix of a row's action on one block: <Sym, X> equals
// sum entries coef * X[r][c] with the unordered pair counted once.
void add_sym(MatrixXd& G, const BlockEntry& e) {
  if (e.r == e.c) {
    G(e.r, e.c) += e.coef;
  } else {
    G(e.r, e.c) += 0.5 * e.coef;
    G(e.c, e.r) += 0.5 * e.coef;
  }
}

double dot_row_block(const std::vector<BlockEntry>& entries, const MatrixXd& X) {
  double v = 0.0;
  for (const BlockEntry& e : entries) v += e.coef * X(e.r, e.c);
  return v;
}

// W * Sym(row) * W accumulated from rank-one outer products.
MatrixXd scaled_row_matrix(const std::vector<BlockEntry>& entries, const MatrixXd& W) {
  int n = static_cast<int>(W.rows());
  MatrixXd T = MatrixXd::Zero(n, n);
  for (const BlockEntry& e : entries) {
    if (e.r == e.c) {
      T.noalias() += e.coef * (W.col(e.r) * W.col(e.c).transpose());
    } else {
      T.noalias() += (0.5 * e.coef) * (W.col(e.r) * W.col(e.c).transpose());
      T.noalias() += (0.5 * e.coef) * (W.col(e.c) * W.col(e.r).transpose());
    }
  }
  return T;
}

Prepared prepare(const ConicProgram& p, const SolveOptions& opts) {
  p.validate();
  Prepared pr;
  pr.m = static_cast<int>(p.rows.size());
  pr.nf = p.num_free;
  pr.nblocks = static_cast<int>(p.block_orders.size());
  pr.orders = p.block_orders;
  pr.sense = p.maximize ? -1.0 : 1.0;

  pr.Au = MatrixXd::Zero(pr.m, pr.nf);
  pr.b.resize(pr.m);
  pr.cf = VectorXd::Zero(pr.nf);
  pr.C.resize(static_cast<std::size_t>(pr.nblocks));
  for (int j = 0; j < pr.nblocks; ++j) {
    pr.C[static_cast<std::size_t>(j)] =
        MatrixXd::Zero(pr.orders[static_cast<std::size_t>(j)],
                       pr.orders[static_cast<std::size_t>(j)]);
  }
  pr.block_rows.resize(static_cast<std::size_t>(pr.nblocks));
  pr.row_scale = VectorXd::Ones(pr.m);

  for (const ConicProgram::Term& t : p.objective) {
    if (t.block == ConicProgram::kFree) {
      pr.cf[t.row] += pr.sense * t.coef;
    } else {
      add_sym(pr.C[static_cast<std::size_t>(t.block)],
              {std::max(t.row, t.col), std::min(t.row, t.col), pr.sense * t.coef});
    }
  }

  // Merge duplicate coordinates within each row, then split by block.
  for (int i = 0; i < pr.m; ++i) {
    const ConicProgram::Row& row = p.rows[static_cast<std::size_t>(i)];
    double scale = 0.0;
    std::map<std::tuple<int, int, int>, double> merged;
    for (const ConicProgram::Term& t : row.terms) {
      int r = t.block == ConicProgram::kFree ? t.row : std::max(t.row, t.col);
      int c = t.block == ConicProgram::kFree ? 0 : std::min(t.row, t.col);
      merged[{t.block, r, c}] += t.coef;
    }
    for (const auto& [key, coef] : merged) scale = std::max(scale, std::abs(coef));
    if (!opts.scale_rows || scale <= 0.0) scale = 1.0;
    pr.row_scale[i] = scale;
    pr.b[i] = row.rhs / scale;
    for (const auto& [key, coef] : merged) {
      auto [blk, r, c] = key;
      if (coef == 0.0) continue;
      if (blk == ConicProgram::kFree) {
        pr.Au(i, r) += coef / scale;
      } else {
        auto& rows_j = pr.block_rows[static_cast<std::size_t>(blk)];
        if (rows_j.empty() || rows_j.back().row != i) rows_j.push_back({i, {}});
        rows_j.back().entries.push_back({r, c, coef / scale});
      }
    }
  }
  return pr;
}

struct Iterate {
  VectorXd u;   // free
  std::vector<MatrixXd> X;
  VectorXd y;
  std::vector<MatrixXd> S;
};

// Largest alpha with X + alpha D staying PSD (1 when unconstrained is capped
// by the caller).
double max_step(const MatrixXd& X, const MatrixXd& D) {
  Eigen::LLT<MatrixXd> llt(X);
  if (llt.info() != Eigen::Success) return 0.0;
  MatrixXd L = llt.matrixL();
  MatrixXd B = L.triangularView<Eigen::Lower>().solve(D);
  B = L.triangularView<Eigen::Lower>().solve(B.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (B + B.transpose()),
                                             Eigen::EigenvaluesOnly);
  double lmin = es.eigenvalues().minCoeff();
  if (lmin >= -1e-14) return std::numeric_limits<double>::infinity();
  return -1.0 / lmin;
}

}  // namespace

Solution solve(const ConicProgram& prog, const SolveOptions& opts) {
  Prepared pr = prepare(prog, opts);
  const int m = pr.m, nf = pr.nf, nb = pr.nblocks;
  Solution sol;
  if (m == 0 || nb == 0) {
    throw std::invalid_argument("solve: program needs rows and at least one block");
  }

  double nu = 0.0;
  for (int o : pr.orders) nu += o;

  double bnorm = pr.b.size() ? pr.b.cwiseAbs().maxCoeff() : 0.0;
  double cnorm = nf ? pr.cf.cwiseAbs().maxCoeff() : 0.0;
  for (const MatrixXd& Cj : pr.C) {
    if (Cj.size()) cnorm = std::max(cnorm, Cj.cwiseAbs().maxCoeff());
  }

  Iterate it;
  it.u = VectorXd::Zero(nf);
  it.y = VectorXd::Zero(m);
  double xinit = std::max(1.0, bnorm);
  double sinit = std::max(1.0, cnorm);
  for (int j = 0; j < nb; ++j) {
    int n = pr.orders[static_cast<std::size_t>(j)];
    it.X.push_back(xinit * MatrixXd::Identity(n, n));
    it.S.push_back(sinit * MatrixXd::Identity(n, n));
  }

  auto primal_obj = [&]() {
    double v = nf ? pr.cf.dot(it.u) : 0.0;
    for (int j = 0; j < nb; ++j)
      v += (pr.C[static_cast<std::size_t>(j)].array() *
            it.X[static_cast<std::size_t>(j)].array())
               .sum();
    return v;
  };
  auto dual_obj = [&]() { return pr.b.dot(it.y); };

  auto residual_rp = [&]() {
    VectorXd rp = pr.b;
    if (nf) rp.noalias() -= pr.Au * it.u;
    for (int j = 0; j < nb; ++j) {
      for (const BlockRow& br : pr.block_rows[static_cast<std::size_t>(j)])
        rp[br.row] -= dot_row_block(br.entries, it.X[static_cast<std::size_t>(j)]);
    }
    return rp;
  };

  auto residual_rd = [&](std::vector<MatrixXd>& RD, VectorXd& rdu) {
    rdu = pr.cf;
    if (nf) rdu.noalias() -= pr.Au.transpose() * it.y;
    RD.clear();
    for (int j = 0; j < nb; ++j) {
      MatrixXd R = pr.C[static_cast<std::size_t>(j)] - it.S[static_cast<std::size_t>(j)];
      for (const BlockRow& br : pr.block_rows[static_cast<std::size_t>(j)]) {
        double yi = it.y[br.row];
        if (yi == 0.0) continue;
        for (const BlockEntry& e : br.entries) {
          if (e.r == e.c) {
            R(e.r, e.c) -= yi * e.coef;
          } else {
            R(e.r, e.c) -= 0.5 * yi * e.coef;
            R(e.c, e.r) -= 0.5 * yi * e.coef;
          }
        }
      }
      RD.push_back(std::move(R));
    }
  };

  char tracebuf[256];
  double best_err = std::numeric_limits<double>::infinity();
  Iterate best = it;
  SolveResiduals best_res;
  SolveResiduals final_res;
  SolveStatus status = SolveStatus::kNumericalFailure;
  int iter = 0;
  int tiny_steps = 0;
  int no_progress = 0;

  for (iter = 0; iter < opts.max_iter; ++iter) {
    VectorXd rp = residual_rp();
    std::vector<MatrixXd> RD;
    VectorXd rdu;
    residual_rd(RD, rdu);

    double mu = 0.0;
    for (int j = 0; j < nb; ++j)
      mu += (it.X[static_cast<std::size_t>(j)].array() *
             it.S[static_cast<std::size_t>(j)].array())
                .sum();
    mu = nu > 0 ? mu / nu : 0.0;

    double pobj = primal_obj(), dobj = dual_obj();
    double relp = rp.cwiseAbs().maxCoeff() / (1.0 + bnorm);
    double reld = nf ? rdu.cwiseAbs().maxCoeff() : 0.0;
    for (const MatrixXd& R : RD) reld = std::max(reld, R.cwiseAbs().maxCoeff());
    reld /= (1.0 + cnorm);
    double relgap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));

    final_res = {relp, reld, relgap};
    std::snprintf(tracebuf, sizeof(tracebuf),
                  "it %3d  pobj % .9e  dobj % .9e  gap %.2e  rp %.2e  rd %.2e  mu %.2e",
                  iter, pr.sense * pobj, pr.sense * dobj, relgap, relp, reld, mu);
    sol.trace.push_back(tracebuf);
    if (opts.verbosity > 0) std::puts(tracebuf);

    double err = std::max({relp, reld, relgap});
    if (err < 0.9999 * best_err) {
      best_err = err;
      best = it;
      best_res = final_res;
      no_progress = 0;
    } else if (++no_progress >= 25) {
      sol.trace.push_back("no progress; returning best iterate");
      break;
    }

    if (relp <= opts.feas_tol && reld <= opts.feas_tol && relgap <= opts.gap_tol) {
      status = SolveStatus::kOptimal;
      best = it;
      best_res = final_res;
      break;
    }
    double dvg = 1e12 * std::max(1.0, bnorm + cnorm);
    if (std::abs(pobj) > dvg || (it.u.size() > 0 && it.u.cwiseAbs().maxCoeff() > dvg)) {
      status = relp <= 1e-6 ? SolveStatus::kUnbounded : SolveStatus::kNumericalFailure;
      break;
    }
    if (std::abs(dobj) > dvg) {
      status = reld <= 1e-6 ? SolveStatus::kInfeasible : SolveStatus::kNumericalFailure;
      break;
    }

    // Nesterov-Todd scaling per block: W S W = X with W = G G'. In the
    // G-frame both iterates map to the same matrix
    // lambda = G' S G = G^{-1} X G^{-T}.
    std::vector<MatrixXd> W(static_cast<std::size_t>(nb));
    std::vector<MatrixXd> G(static_cast<std::size_t>(nb));
    std::vector<MatrixXd> Ginv(static_cast<std::size_t>(nb));
    std::vector<MatrixXd> LamQ(static_cast<std::size_t>(nb));
    std::vector<VectorXd> LamD(static_cast<std::size_t>(nb));
    bool scale_ok = true;
    for (int j = 0; j < nb; ++j) {
      const MatrixXd& X = it.X[static_cast<std::size_t>(j)];
      const MatrixXd& S = it.S[static_cast<std::size_t>(j)];
      Eigen::LLT<MatrixXd> lx(X);
      if (lx.info() != Eigen::Success) {
        scale_ok = false;
        break;
      }
      MatrixXd Lx = lx.matrixL();
      MatrixXd Mj = Lx.transpose() * S * Lx;
      Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (Mj + Mj.transpose()));
      if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0) {
        scale_ok = false;
        break;
      }
      VectorXd droot = es.eigenvalues().cwiseSqrt().cwiseSqrt();  // d^{1/4}
      MatrixXd Gj = Lx * es.eigenvectors() * droot.cwiseInverse().asDiagonal();
      MatrixXd Gjinv = droot.asDiagonal() * es.eigenvectors().transpose() *
                       Lx.triangularView<Eigen::Lower>()
                           .solve(MatrixXd::Identity(X.rows(), X.cols()));
      MatrixXd lam = Gj.transpose() * S * Gj;
      Eigen::SelfAdjointEigenSolver<MatrixXd> el(0.5 * (lam + lam.transpose()));
      if (el.info() != Eigen::Success || el.eigenvalues().minCoeff() <= 0.0) {
        scale_ok = false;
        break;
      }
      W[static_cast<std::size_t>(j)] = Gj * Gj.transpose();
      G[static_cast<std::size_t>(j)] = std::move(Gj);
      Ginv[static_cast<std::size_t>(j)] = std::move(Gjinv);
      LamQ[static_cast<std::size_t>(j)] = el.eigenvectors();
      LamD[static_cast<std::size_t>(j)] = el.eigenvalues();
    }
    if (!scale_ok) {
      status = SolveStatus::kNumericalFailure;
      sol.trace.push_back("scaling breakdown: iterate lost positive definiteness");
      break;
    }

    // Schur complement M = A_c (W (.) W) A_c'.
    MatrixXd M = MatrixXd::Zero(m, m);
    for (int j = 0; j < nb; ++j) {
      const auto& rows_j = pr.block_rows[static_cast<std::size_t>(j)];
      const MatrixXd& Wj = W[static_cast<std::size_t>(j)];
      for (std::size_t a = 0; a < rows_j.size(); ++a) {
        MatrixXd T = scaled_row_matrix(rows_j[a].entries, Wj);
        for (std::size_t bidx = a; bidx < rows_j.size(); ++bidx) {
          double v = dot_row_block(rows_j[bidx].entries, T);
          M(rows_j[a].row, rows_j[bidx].row) += v;
          if (rows_j[a].row != rows_j[bidx].row)
            M(rows_j[bidx].row, rows_j[a].row) += v;
        }
      }
    }

    // Augmented saddle system, factored once per iteration with a small
    // quasidefinite regularization; refinement runs against the exact matrix.
    const int dim = m + nf;
    MatrixXd K = MatrixXd::Zero(dim, dim);
    K.topLeftCorner(m, m) = M;
    if (nf) {
      K.topRightCorner(m, nf) = pr.Au;
      K.bottomLeftCorner(nf, m) = pr.Au.transpose();
    }
    double mdiag = std::max(M.diagonal().cwiseAbs().maxCoeff(), 1e-12);
    double reg = 1e-14 * mdiag;
    Eigen::PartialPivLU<MatrixXd> klu;
    MatrixXd Kreg;
    for (int attempt = 0; attempt < 6; ++attempt) {
      Kreg = K;
      Kreg.topLeftCorner(m, m).diagonal().array() += reg;
      if (nf) Kreg.bottomRightCorner(nf, nf).diagonal().array() -= reg;
      klu.compute(Kreg);
      double rcond_proxy = klu.matrixLU().diagonal().cwiseAbs().minCoeff();
      if (rcond_proxy > 0.0 && std::isfinite(rcond_proxy)) break;
      reg *= 1e3;
    }

    // Residual rhs - K z accumulated with Neumaier compensation; plain double
    // residuals are what caps refinement on ill-conditioned late iterations.
    auto kkt_residual = [&](const VectorXd& rhs, const VectorXd& z) {
      VectorXd resid = rhs;
      VectorXd comp = VectorXd::Zero(dim);
      for (int j = 0; j < dim; ++j) {
        double zj = z[j];
        if (zj == 0.0) continue;
        for (int i = 0; i < dim; ++i) {
          double term = -K(i, j) * zj;
          double s = resid[i] + term;
          if (std::abs(resid[i]) >= std::abs(term))
            comp[i] += (resid[i] - s) + term;
          else
            comp[i] += (term - s) + resid[i];
          resid[i] = s;
        }
      }
      resid += comp;
      return resid;
    };

    // Solves [M Au; Au' 0] [dy; du] = [r1; r2] with iterative refinement.
    auto solve_kkt = [&](const VectorXd& r1, const VectorXd& r2, VectorXd& dy,
                         VectorXd& du) {
      VectorXd rhs(dim);
      rhs.head(m) = r1;
      if (nf) rhs.tail(nf) = r2;
      VectorXd z = klu.solve(rhs);
      VectorXd resid = kkt_residual(rhs, z);
      double rnorm = resid.cwiseAbs().maxCoeff();
      double rhsnorm = std::max(rhs.cwiseAbs().maxCoeff(), 1e-300);
      for (int pass = 0; pass < 10 && rnorm > 1e-15 * rhsnorm; ++pass) {
        VectorXd corr = klu.solve(resid);
        VectorXd z2 = z + corr;
        VectorXd resid2 = kkt_residual(rhs, z2);
        double rnorm2 = resid2.cwiseAbs().maxCoeff();
        if (rnorm2 >= 0.5 * rnorm) {
          if (rnorm2 < rnorm) z = z2;
          break;
        }
        z = z2;
        resid = resid2;
        rnorm = rnorm2;
      }
      dy = z.head(m);
      du = nf ? VectorXd(z.tail(nf)) : VectorXd();
    };

    // Newton direction for one complementarity target VT, one elimination
    // pass plus refinement sweeps against the full system
    //   A dx = rp,  A'dy + ds = rd,  dxc + W ds W = VT.
    auto direction = [&](const std::vector<MatrixXd>& VT, VectorXd& dy, VectorXd& du,
                         std::vector<MatrixXd>& DX, std::vector<MatrixXd>& DS) {
      dy = VectorXd::Zero(m);
      du = VectorXd::Zero(nf);
      DX.assign(static_cast<std::size_t>(nb), MatrixXd());
      DS.assign(static_cast<std::size_t>(nb), MatrixXd());
      for (int j = 0; j < nb; ++j) {
        int n = pr.orders[static_cast<std::size_t>(j)];
        DX[static_cast<std::size_t>(j)] = MatrixXd::Zero(n, n);
        DS[static_cast<std::size_t>(j)] = MatrixXd::Zero(n, n);
      }

      double prev_err = std::numeric_limits<double>::infinity();
      VectorXd dy_prev, du_prev;
      std::vector<MatrixXd> DX_prev, DS_prev;
      for (int pass = 0; pass < 4; ++pass) {
        // residuals of the current direction w.r.t. the Newton system
        VectorXd res_p = rp;
        if (nf) res_p.noalias() -= pr.Au * du;
        VectorXd res_du = rdu;
        if (nf) res_du.noalias() -= pr.Au.transpose() * dy;
        std::vector<MatrixXd> res_dc(static_cast<std::size_t>(nb));
        std::vector<MatrixXd> res_c(static_cast<std::size_t>(nb));
        double err = res_du.size() ? res_du.cwiseAbs().maxCoeff() : 0.0;
        for (int j = 0; j < nb; ++j) {
          const MatrixXd& Wj = W[static_cast<std::size_t>(j)];
          MatrixXd RDc = RD[static_cast<std::size_t>(j)] - DS[static_cast<std::size_t>(j)];
          for (const BlockRow& br : pr.block_rows[static_cast<std::size_t>(j)]) {
            res_p[br.row] -= dot_row_block(br.entries, DX[static_cast<std::size_t>(j)]);
            double dyi = dy[br.row];
            if (dyi == 0.0) continue;
            for (const BlockEntry& e : br.entries) {
              if (e.r == e.c) {
                RDc(e.r, e.c) -= dyi * e.coef;
              } else {
                RDc(e.r, e.c) -= 0.5 * dyi * e.coef;
                RDc(e.c, e.r) -= 0.5 * dyi * e.coef;
              }
            }
          }
          res_dc[static_cast<std::size_t>(j)] = RDc;
          res_c[static_cast<std::size_t>(j)] =
              VT[static_cast<std::size_t>(j)] - DX[static_cast<std::size_t>(j)] -
              Wj * DS[static_cast<std::size_t>(j)] * Wj;
          err = std::max(err, RDc.cwiseAbs().maxCoeff());
          err = std::max(err, res_c[static_cast<std::size_t>(j)].cwiseAbs().maxCoeff());
        }
        err = std::max(err, res_p.cwiseAbs().maxCoeff());
        if (err >= prev_err || !std::isfinite(err)) {
          dy = dy_prev;
          du = du_prev;
          DX = DX_prev;
          DS = DS_prev;
          break;
        }
        dy_prev = dy;
        du_prev = du;
        DX_prev = DX;
        DS_prev = DS;
        prev_err = err;
        if (pass > 0 && err <= 1e-11 * (1.0 + bnorm + cnorm)) break;

        // eliminate cone corrections, solve the saddle, map back
        VectorXd r1 = res_p;
        for (int j = 0; j < nb; ++j) {
          const MatrixXd& Wj = W[static_cast<std::size_t>(j)];
          MatrixXd P = Wj * res_dc[static_cast<std::size_t>(j)] * Wj -
                       res_c[static_cast<std::size_t>(j)];
          for (const BlockRow& br : pr.block_rows[static_cast<std::size_t>(j)])
            r1[br.row] += dot_row_block(br.entries, P);
        }
        VectorXd cy, cu;
        solve_kkt(r1, res_du, cy, cu);
        dy += cy;
        if (nf) du += cu;
        for (int j = 0; j < nb; ++j) {
          MatrixXd CSj = res_dc[static_cast<std::size_t>(j)];
          for (const BlockRow& br : pr.block_rows[static_cast<std::size_t>(j)]) {
            double cyi = cy[br.row];
            if (cyi == 0.0) continue;
            for (const BlockEntry& e : br.entries) {
              if (e.r == e.c) {
                CSj(e.r, e.c) -= cyi * e.coef;
              } else {
                CSj(e.r, e.c) -= 0.5 * cyi * e.coef;
                CSj(e.c, e.r) -= 0.5 * cyi * e.coef;
              }
            }
          }
          const MatrixXd& Wj = W[static_cast<std::size_t>(j)];
          MatrixXd CXj = res_c[static_cast<std::size_t>(j)] - Wj * CSj * Wj;
          DX[static_cast<std::size_t>(j)] += 0.5 * (CXj + CXj.transpose());
          DS[static_cast<std::size_t>(j)] += 0.5 * (CSj + CSj.transpose());
        }
      }
    };

    auto step_lengths = [&](const std::vector<MatrixXd>& DX,
                            const std::vector<MatrixXd>& DS) {
      double ap = std::numeric_limits<double>::infinity();
      double ad = ap;
      for (int j = 0; j < nb; ++j) {
        ap = std::min(ap, max_step(it.X[static_cast<std::size_t>(j)],
                                   DX[static_cast<std::size_t>(j)]));
        ad = std::min(ad, max_step(it.S[static_cast<std::size_t>(j)],
                                   DS[static_cast<std::size_t>(j)]));
      }
      return std::pair<double, double>(ap, ad);
    };

    // Predictor (affine direction, sigma = 0).
    std::vector<MatrixXd> VT(static_cast<std::size_t>(nb));
    for (int j = 0; j < nb; ++j) VT[static_cast<std::size_t>(j)] = -it.X[static_cast<std::size_t>(j)];
    VectorXd dy_a, du_a;
    std::vector<MatrixXd> DX_a, DS_a;
    direction(VT, dy_a, du_a, DX_a, DS_a);
    auto [apa, ada] = step_lengths(DX_a, DS_a);
    double ap_aff = std::min(1.0, apa);
    double ad_aff = std::min(1.0, ada);
    double mu_aff = 0.0;
    for (int j = 0; j < nb; ++j) {
      mu_aff += ((it.X[static_cast<std::size_t>(j)] + ap_aff * DX_a[static_cast<std::size_t>(j)]).array() *
                 (it.S[static_cast<std::size_t>(j)] + ad_aff * DS_a[static_cast<std::size_t>(j)]).array())
                    .sum();
    }
    mu_aff = nu > 0 ? mu_aff / nu : 0.0;
    double sigma = std::pow(std::max(0.0, mu_aff / mu), 3.0);
    // Keep complementarity from outrunning feasibility: once mu dives far
    // below the residual level, the scaling gets so ill-conditioned that the
    // residuals can never be recovered.
    double absres = std::max(relp * (1.0 + bnorm), reld * (1.0 + cnorm));
    if (mu > 0.0 && absres > 0.1 * mu)
      sigma = std::max(sigma, std::min(0.9, 2.0 * absres / mu));
    sigma = std::min(std::max(sigma, 1e-8), 0.999);

    // Corrector: target sigma*mu*I - lambda^2 - H(dXa dSa) in the scaled
    // frame, mapped back through a Lyapunov solve in lambda's eigenbasis.
    for (int j = 0; j < nb; ++j) {
      const MatrixXd& Qb = LamQ[static_cast<std::size_t>(j)];
      const VectorXd& db = LamD[static_cast<std::size_t>(j)];
      MatrixXd H = Ginv[static_cast<std::size_t>(j)] *
                   DX_a[static_cast<std::size_t>(j)] *
                   DS_a[static_cast<std::size_t>(j)] * G[static_cast<std::size_t>(j)];
      MatrixXd Rt = Qb.transpose() * (-0.5 * (H + H.transpose())) * Qb;
      for (int r = 0; r < Rt.rows(); ++r) {
        Rt(r, r) += sigma * mu - db[r] * db[r];
        for (int c = 0; c < Rt.cols(); ++c) Rt(r, c) *= 2.0 / (db[r] + db[c]);
      }
      MatrixXd U = Qb * Rt * Qb.transpose();
      MatrixXd VTj = G[static_cast<std::size_t>(j)] * U *
                     G[static_cast<std::size_t>(j)].transpose();
      VT[static_cast<std::size_t>(j)] = 0.5 * (VTj + VTj.transpose());
    }
    VectorXd dy, du;
    std::vector<MatrixXd> DX, DS;
    direction(VT, dy, du, DX, DS);
    auto [apc, adc] = step_lengths(DX, DS);
    // A common step keeps feasibility and complementarity in lock-step;
    // letting them decouple drives mu to zero while the residuals stall.
    double ap = std::min(1.0, 0.99 * std::min(apc, adc));
    double ad = ap;

    if (opts.verbosity > 1) {
      std::snprintf(tracebuf, sizeof(tracebuf),
                    "      sigma %.2e  ap %.2e  ad %.2e  muaff %.2e", sigma, ap, ad,
                    mu_aff);
      std::puts(tracebuf);
    }

    if (ap < 1e-5 && ad < 1e-5) {
      if (++tiny_steps >= 3) {
        sol.trace.push_back("step sizes collapsed");
        break;
      }
    } else {
      tiny_steps = 0;
    }

    if (nf) it.u += ap * du;
    it.y += ad * dy;
    for (int j = 0; j < nb; ++j) {
      it.X[static_cast<std::size_t>(j)] += ap * DX[static_cast<std::size_t>(j)];
      it.S[static_cast<std::size_t>(j)] += ad * DS[static_cast<std::size_t>(j)];
      it.X[static_cast<std::size_t>(j)] =
          0.5 * (it.X[static_cast<std::size_t>(j)] +
                 it.X[static_cast<std::size_t>(j)].transpose())
                    .eval();
      it.S[static_cast<std::size_t>(j)] =
          0.5 * (it.S[static_cast<std::size_t>(j)] +
                 it.S[static_cast<std::size_t>(j)].transpose())
                    .eval();
    }
  }

  if (status != SolveStatus::kOptimal && status != SolveStatus::kInfeasible &&
      status != SolveStatus::kUnbounded) {
    it = best;
    final_res = best_res;
    // Accept a mildly unconverged endpoint when the gap closed.
    if (final_res.gap <= 1e-6 && final_res.primal_eq <= 1e-6 &&
        final_res.dual_cone <= 1e-6)
      status = SolveStatus::kNearOptimal;
  }

  sol.status = status;
  sol.iterations = iter;
  sol.residuals = final_res;
  sol.free_vals.assign(it.u.data(), it.u.data() + it.u.size());
  sol.psd_vals = it.X;
  sol.dual_psd = it.S;
  sol.row_duals.resize(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i)
    sol.row_duals[static_cast<std::size_t>(i)] = it.y[i] / pr.row_scale[i];
  sol.primal_obj = pr.sense * primal_obj();
  sol.dual_obj = pr.sense * dual_obj();
  return sol;
}

}  // namespace roa
