#include "roa/relax.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace roa {

namespace {

int even_up(int d) { return d + (d & 1); }

std::uint64_t splitmix(std::uint64_t& s) {
  std::uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double unif(std::uint64_t& s, double lo, double hi) {
  return lo + (hi - lo) * ((splitmix(s) >> 11) * 0x1.0p-53);
}

}  // namespace

void SystemSpec::validate() const {
  if (n < 1) throw std::invalid_argument("SystemSpec: state dimension must be >= 1");
  if (static_cast<int>(f.size()) != n)
    throw std::invalid_argument("SystemSpec: expected n dynamics entries");
  for (const Poly& fi : f) {
    if (fi.nvars() != n + 1)
      throw std::invalid_argument("SystemSpec: dynamics must live in (t, x)");
  }
  if (g_x.nvars() != n || g_t.nvars() != n)
    throw std::invalid_argument("SystemSpec: g_x and g_t must be x-only");
  if (!(horizon > 0.0)) throw std::invalid_argument("SystemSpec: horizon must be > 0");
  if (domain.dim() != n)
    throw std::invalid_argument("SystemSpec: domain dimension mismatch");
}

DegreePlan DegreePlan::make(const SystemSpec& spec, int k, int deg_w, int deg_v) {
  spec.validate();
  DegreePlan p;
  p.k = k;
  p.deg_v = deg_v;
  p.deg_w = deg_w;
  p.d_x = (spec.g_x.degree() + 1) / 2;
  p.d_t = (spec.g_t.degree() + 1) / 2;
  p.deg_f = 0;
  for (const Poly& fi : spec.f) p.deg_f = std::max(p.deg_f, fi.degree());

  if (k < std::max({p.d_x, p.d_t, 1}))
    throw std::invalid_argument("relaxation order k leaves an empty multiplier basis");
  if (deg_v < 1 || deg_v > 2 * k || deg_w < 1 || deg_w > 2 * k)
    throw std::invalid_argument("degrees must satisfy 1 <= deg <= 2k");

  p.flow_budget = even_up(std::max(2 * k, deg_v - 1 + p.deg_f));
  p.half_p = p.flow_budget / 2;
  p.half_q1 = p.flow_budget / 2 - 1;
  p.half_q2 = (p.flow_budget - spec.g_x.degree()) / 2;

  p.half_pt1 = k;
  p.half_qt1 = k - 1;
  p.deg_r = 2 * k - spec.g_x.degree();

  p.half_pt2 = k;
  p.half_qt2 = (2 * k - spec.g_x.degree()) / 2;
  p.half_qt3 = (2 * k - spec.g_t.degree()) / 2;

  p.init_budget = even_up(std::max(deg_v, deg_w));
  p.half_p0 = p.init_budget / 2;
  p.half_q01 = (p.init_budget - spec.g_x.degree()) / 2;

  p.w_budget = even_up(deg_w);
  p.half_s0 = p.w_budget / 2;
  p.half_s1 = (p.w_budget - spec.g_x.degree()) / 2;

  if (p.half_q2 < 0 || p.half_qt2 < 0 || p.half_qt3 < 0 || p.half_q01 < 0 ||
      p.half_s1 < 0 || p.deg_r < 0)
    throw std::invalid_argument("relaxation order k leaves an empty multiplier basis");
  return p;
}

NormalizedSystem normalize(const SystemSpec& spec) {
  spec.validate();
  NormalizedSystem ns;
  ns.horizon = spec.horizon;
  int n = spec.n;
  ns.scale.resize(static_cast<std::size_t>(n));
  ns.offset.resize(static_cast<std::size_t>(n));
  if (spec.domain.kind == DomainDescriptor::Kind::kBox) {
    for (int i = 0; i < n; ++i) {
      ns.scale[static_cast<std::size_t>(i)] =
          0.5 * (spec.domain.upper[static_cast<std::size_t>(i)] -
                 spec.domain.lower[static_cast<std::size_t>(i)]);
      ns.offset[static_cast<std::size_t>(i)] =
          0.5 * (spec.domain.upper[static_cast<std::size_t>(i)] +
                 spec.domain.lower[static_cast<std::size_t>(i)]);
    }
  } else {
    for (int i = 0; i < n; ++i) {
      ns.scale[static_cast<std::size_t>(i)] = spec.domain.radius;
      ns.offset[static_cast<std::size_t>(i)] = spec.domain.center[static_cast<std::size_t>(i)];
    }
  }
  ns.det_scale = 1.0;
  for (double s : ns.scale) ns.det_scale *= s;

  ns.scaled.n = n;
  ns.scaled.horizon = 1.0;
  ns.scaled.g_x = affine_substitute(spec.g_x, ns.scale, ns.offset);
  ns.scaled.g_t = affine_substitute(spec.g_t, ns.scale, ns.offset);
  if (spec.domain.kind == DomainDescriptor::Kind::kBox) {
    ns.scaled.domain = DomainDescriptor::box(std::vector<double>(n, -1.0),
                                             std::vector<double>(n, 1.0));
  } else {
    ns.scaled.domain = DomainDescriptor::ball(std::vector<double>(n, 0.0), 1.0);
  }

  // f_scaled_i(s, y) = (T / scale_i) f_i(T s, scale .* y + offset)
  std::vector<double> sc(static_cast<std::size_t>(n + 1), 1.0);
  std::vector<double> off(static_cast<std::size_t>(n + 1), 0.0);
  for (int i = 0; i < n; ++i) {
    sc[static_cast<std::size_t>(i + 1)] = ns.scale[static_cast<std::size_t>(i)];
    off[static_cast<std::size_t>(i + 1)] = ns.offset[static_cast<std::size_t>(i)];
  }
  for (int i = 0; i < n; ++i) {
    Poly fi = scale_var(spec.f[static_cast<std::size_t>(i)], 0, spec.horizon);
    fi = affine_substitute(fi, sc, off);
    ns.scaled.f.push_back(fi * (spec.horizon / ns.scale[static_cast<std::size_t>(i)]));
  }
  return ns;
}

DualAssembly build_dual(const SystemSpec& spec, int k, int deg_w, int deg_v) {
  DualAssembly a;
  a.plan = DegreePlan::make(spec, k, deg_w, deg_v);
  a.norm = normalize(spec);
  const SystemSpec& s = a.norm.scaled;
  const int nx = s.n, ntx = s.n + 1;
  const DegreePlan& pl = a.plan;

  a.v_basis = Basis(ntx, deg_v);
  a.w_basis = Basis(nx, deg_w);
  a.r_basis = Basis(ntx, pl.deg_r);

  ConicProgram& prog = a.program;
  a.v_off = prog.add_free(a.v_basis.size());
  a.w_off = prog.add_free(a.w_basis.size());
  a.r_off = prog.add_free(a.r_basis.size());

  auto add_mult = [&](const std::string& name, int nvars, int halfdeg,
                      const Poly& factor, int identity) {
    MultiplierInfo mi;
    mi.name = name;
    mi.half_basis = Basis(nvars, halfdeg);
    mi.block = prog.add_block(mi.half_basis.size());
    mi.factor = factor;
    mi.identity = identity;
    mi.in_tx = (nvars == ntx);
    a.multipliers.push_back(mi);
    return static_cast<int>(a.multipliers.size()) - 1;
  };

  Poly one_tx(ntx, 1.0), one_x(nx, 1.0);
  Poly tw = time_weight(1.0, ntx);
  Poly gx_tx = promote_with_time(s.g_x);

  int p = add_mult("p", ntx, pl.half_p, one_tx, 1);
  int q1 = add_mult("q1", ntx, pl.half_q1, tw, 1);
  int q2 = add_mult("q2", ntx, pl.half_q2, gx_tx, 1);
  int p0 = add_mult("p0", nx, pl.half_p0, one_x, 2);
  int q01 = add_mult("q01", nx, pl.half_q01, s.g_x, 2);
  int pt1 = add_mult("pT1", ntx, pl.half_pt1, one_tx, 3);
  int qt1 = add_mult("qT1", ntx, pl.half_qt1, tw, 3);
  int pt2 = add_mult("pT2", nx, pl.half_pt2, one_x, 4);
  int qt2 = add_mult("qT2", nx, pl.half_qt2, s.g_x, 4);
  int qt3 = add_mult("qT3", nx, pl.half_qt3, s.g_t, 4);
  int s0 = add_mult("s0", nx, pl.half_s0, one_x, 5);
  int s1 = add_mult("s1", nx, pl.half_s1, s.g_x, 5);

  auto gram = [&](IdentityBuilder& ib, int mi, double sign) {
    ib.add_gram(a.multipliers[static_cast<std::size_t>(mi)].block,
                a.multipliers[static_cast<std::size_t>(mi)].half_basis,
                a.multipliers[static_cast<std::size_t>(mi)].factor, sign);
  };

  // (1)  -Lv = p + q1 t(1-t) + q2 g_x     on (t, x)
  {
    IdentityBuilder ib(ntx, pl.flow_budget);
    for (int i = 0; i < a.v_basis.size(); ++i) {
      Poly mono = Poly::monomial(ntx, a.v_basis[i]);
      ib.add_free_poly(a.v_off + i, lie(mono, s.f), -1.0);
    }
    gram(ib, p, -1.0);
    gram(ib, q1, -1.0);
    gram(ib, q2, -1.0);
    ib.emit(prog);
  }

  // (2)  w - v(0,.) - 1 = p0 + q01 g_x    on x
  {
    IdentityBuilder ib(nx, pl.init_budget);
    for (int i = 0; i < a.w_basis.size(); ++i)
      ib.add_free_poly(a.w_off + i, Poly::monomial(nx, a.w_basis[i]), 1.0);
    for (int i = 0; i < a.v_basis.size(); ++i) {
      if (a.v_basis[i].exp(0) != 0) continue;
      ib.add_free_poly(a.v_off + i, Poly::monomial(nx, a.v_basis[i].dropped(0)), -1.0);
    }
    ib.add_constant(Poly(nx, -1.0));
    gram(ib, p0, -1.0);
    gram(ib, q01, -1.0);
    ib.emit(prog);
  }

  // (3)  v = pT1 + qT1 t(1-t) + r g_x     on (t, x)
  {
    IdentityBuilder ib(ntx, 2 * k);
    for (int i = 0; i < a.v_basis.size(); ++i)
      ib.add_free_poly(a.v_off + i, Poly::monomial(ntx, a.v_basis[i]), 1.0);
    gram(ib, pt1, -1.0);
    gram(ib, qt1, -1.0);
    ib.add_free_poly_block(a.r_off, a.r_basis, gx_tx, -1.0);
    ib.emit(prog);
  }

  // (4)  v(1,.) = pT2 + qT2 g_x - qT3 g_t on x
  {
    IdentityBuilder ib(nx, 2 * k);
    for (int i = 0; i < a.v_basis.size(); ++i)
      ib.add_free_poly(a.v_off + i, Poly::monomial(nx, a.v_basis[i].dropped(0)), 1.0);
    gram(ib, pt2, -1.0);
    gram(ib, qt2, -1.0);
    gram(ib, qt3, 1.0);
    ib.emit(prog);
  }

  // (5)  w = s0 + s1 g_x                  on x
  {
    IdentityBuilder ib(nx, pl.w_budget);
    for (int i = 0; i < a.w_basis.size(); ++i)
      ib.add_free_poly(a.w_off + i, Poly::monomial(nx, a.w_basis[i]), 1.0);
    gram(ib, s0, -1.0);
    gram(ib, s1, -1.0);
    ib.emit(prog);
  }

  // objective: integral of w over the original-coordinates domain
  a.lebesgue = lebesgue_moments(s.domain, nx, deg_w);
  for (int i = 0; i < a.w_basis.size(); ++i) {
    double li = a.lebesgue.values[i] * a.norm.det_scale;
    if (li != 0.0)
      prog.objective.push_back(ConicProgram::free_term(a.w_off + i, li));
  }
  prog.maximize = false;
  return a;
}

int PrimalAssembly::moment_row(int measure, const MultiIndex& m) const {
  const MeasureInfo& mi = measures[static_cast<std::size_t>(measure)];
  int idx = mi.basis.index_of(m);
  if (idx < 0) throw std::logic_error("moment index beyond truncation");
  return mi.row_offset + idx;
}

PrimalAssembly build_primal(const SystemSpec& spec, int k) {
  PrimalAssembly a;
  a.plan = DegreePlan::make(spec, k, 2 * k, 2 * k);
  a.norm = normalize(spec);
  const SystemSpec& s = a.norm.scaled;
  const int nx = s.n, ntx = s.n + 1;
  const DegreePlan& pl = a.plan;

  Poly one_tx(ntx, 1.0), one_x(nx, 1.0);
  Poly tw = time_weight(1.0, ntx);
  Poly gx_tx = promote_with_time(s.g_x);

  auto add_measure = [&](const std::string& name, int nvars, int maxdeg) {
    MeasureInfo mi;
    mi.name = name;
    mi.basis = Basis(nvars, maxdeg);
    mi.in_tx = (nvars == ntx);
    a.measures.push_back(mi);
    return static_cast<int>(a.measures.size()) - 1;
  };

  // Row space: one equality row per truncated moment of each measure.
  int total_rows = 0;
  const int kMu = add_measure("mu", ntx, pl.flow_budget);
  const int kMu0 = add_measure("mu0", nx, 2 * k);
  const int kMuT1 = add_measure("muT1", ntx, 2 * k);
  const int kMuT2 = add_measure("muT2", nx, 2 * k);
  const int kMuHat = add_measure("muhat0", nx, 2 * k);
  for (MeasureInfo& mi : a.measures) {
    mi.row_offset = total_rows;
    total_rows += mi.basis.size();
  }
  a.program.rows.resize(static_cast<std::size_t>(total_rows));

  // Mass of the free initial measure is the objective of the moment side; it
  // enters this transposed program as the right-hand side.
  a.program.rows[static_cast<std::size_t>(
                     a.moment_row(kMu0, MultiIndex::zeros(nx)))]
      .rhs = a.norm.det_scale;

  a.test_basis = Basis(ntx, 2 * k);
  a.w_test_basis = Basis(nx, 2 * k);
  a.boundary_basis = Basis(ntx, pl.deg_r);

  ConicProgram& prog = a.program;
  a.liouville_off = prog.add_free(a.test_basis.size());
  a.domination_off = prog.add_free(a.w_test_basis.size());
  a.boundary_off = prog.add_free(a.boundary_basis.size());

  auto row_add_free = [&](int measure, const MultiIndex& m, int var, double coef) {
    prog.rows[static_cast<std::size_t>(a.moment_row(measure, m))].terms.push_back(
        ConicProgram::free_term(var, coef));
  };

  // Flow balance rows, one multiplier per (t,x) test monomial:
  //   <v, muT1> + <v(1,.), muT2> - <v(0,.), mu0> - <Lv, mu> = 0.
  for (int i = 0; i < a.test_basis.size(); ++i) {
    const MultiIndex& m = a.test_basis[i];
    int var = a.liouville_off + i;
    row_add_free(kMuT1, m, var, 1.0);
    row_add_free(kMuT2, m.dropped(0), var, 1.0);
    if (m.exp(0) == 0) row_add_free(kMu0, m.dropped(0), var, -1.0);
    Poly lm = lie(Poly::monomial(ntx, m), s.f);
    for (const auto& [mm, c] : lm.terms()) row_add_free(kMu, mm, var, -c);
  }

  // Domination rows: <w, mu0> + <w, muhat0> = l for every x test monomial.
  a.lebesgue = lebesgue_moments(s.domain, nx, 2 * k);
  for (int i = 0; i < a.w_test_basis.size(); ++i) {
    const MultiIndex& m = a.w_test_basis[i];
    int var = a.domination_off + i;
    row_add_free(kMu0, m, var, 1.0);
    row_add_free(kMuHat, m, var, 1.0);
    prog.objective.push_back(
        ConicProgram::free_term(var, a.lebesgue.values[i]));
  }

  // Boundary support of muT1 as equality rows: <g_x m, muT1> = 0.
  for (int i = 0; i < a.boundary_basis.size(); ++i) {
    const MultiIndex& m = a.boundary_basis[i];
    int var = a.boundary_off + i;
    for (const auto& [d, c] : gx_tx.terms()) row_add_free(kMuT1, m.plus(d), var, c);
  }

  // Moment and localizing blocks per measure.
  auto add_lmi = [&](int measure, int halfdeg, const Poly& factor) {
    const MeasureInfo& mi = a.measures[static_cast<std::size_t>(measure)];
    Basis half(mi.basis.nvars(), halfdeg);
    int blk = prog.add_block(half.size());
    for (int r = 0; r < half.size(); ++r) {
      for (int c = r; c < half.size(); ++c) {
        MultiIndex base = half[r].plus(half[c]);
        double mult = (r == c) ? 1.0 : 2.0;
        for (const auto& [g, fc] : factor.terms()) {
          prog.rows[static_cast<std::size_t>(a.moment_row(measure, base.plus(g)))]
              .terms.push_back(ConicProgram::block_term(blk, r, c, -mult * fc));
        }
      }
    }
  };

  add_lmi(kMu, pl.half_p, one_tx);
  add_lmi(kMu, pl.half_q1, tw);
  add_lmi(kMu, pl.half_q2, gx_tx);
  add_lmi(kMu0, pl.half_p0, one_x);
  add_lmi(kMu0, pl.half_q01, s.g_x);
  add_lmi(kMuT1, pl.half_pt1, one_tx);
  add_lmi(kMuT1, pl.half_qt1, tw);
  add_lmi(kMuT2, pl.half_pt2, one_x);
  add_lmi(kMuT2, pl.half_qt2, s.g_x);
  add_lmi(kMuT2, pl.half_qt3, -1.0 * s.g_t);
  add_lmi(kMuHat, pl.half_s0, one_x);
  add_lmi(kMuHat, pl.half_s1, s.g_x);

  prog.maximize = false;
  return a;
}

double RunningMin::eval(std::span<const double> x) const {
  double m = std::numeric_limits<double>::infinity();
  for (const Poly& w : ws) m = std::min(m, w.eval(x));
  return m;
}

RunningMin running_min(const std::vector<RelaxationResult>& results) {
  if (results.empty())
    throw std::invalid_argument("running_min: no results");
  RunningMin rm;
  for (const RelaxationResult& r : results) rm.ws.push_back(r.w);
  return rm;
}

double max_identity_residual(const DualAssembly& a, const Solution& s, int npoints,
                             std::uint64_t seed) {
  const SystemSpec& sys = a.norm.scaled;
  const int nx = sys.n, ntx = sys.n + 1;

  Poly vt(ntx), wt(nx), rt(ntx);
  for (int i = 0; i < a.v_basis.size(); ++i)
    vt.add_term(a.v_basis[i], s.free_vals[static_cast<std::size_t>(a.v_off + i)]);
  for (int i = 0; i < a.w_basis.size(); ++i)
    wt.add_term(a.w_basis[i], s.free_vals[static_cast<std::size_t>(a.w_off + i)]);
  for (int i = 0; i < a.r_basis.size(); ++i)
    rt.add_term(a.r_basis[i], s.free_vals[static_cast<std::size_t>(a.r_off + i)]);

  std::vector<Poly> mult;
  double coef_scale = std::max({vt.max_abs_coeff(), wt.max_abs_coeff(),
                                rt.max_abs_coeff()});
  for (const MultiplierInfo& mi : a.multipliers) {
    Poly g = gram_to_poly(mi.half_basis, s.psd_vals[static_cast<std::size_t>(mi.block)]);
    coef_scale = std::max(coef_scale, g.max_abs_coeff());
    mult.push_back(std::move(g));
  }

  Poly lie_v = lie(vt, sys.f);
  Poly v0 = substitute_var(vt, 0, 0.0);
  Poly v1 = substitute_var(vt, 0, 1.0);
  Poly tw = time_weight(1.0, ntx);
  Poly gx_tx = promote_with_time(sys.g_x);

  const Poly& p = mult[0];
  const Poly& q1 = mult[1];
  const Poly& q2 = mult[2];
  const Poly& p0 = mult[3];
  const Poly& q01 = mult[4];
  const Poly& pt1 = mult[5];
  const Poly& qt1 = mult[6];
  const Poly& pt2 = mult[7];
  const Poly& qt2 = mult[8];
  const Poly& qt3 = mult[9];
  const Poly& s0 = mult[10];
  const Poly& s1 = mult[11];

  std::uint64_t state = seed;
  double worst = 0.0;
  std::vector<double> ptx(static_cast<std::size_t>(ntx));
  for (int it = 0; it < npoints; ++it) {
    ptx[0] = unif(state, 0.0, 1.0);
    for (int i = 1; i <= nx; ++i) ptx[static_cast<std::size_t>(i)] = unif(state, -1.2, 1.2);
    std::span<const double> px(ptx.data() + 1, static_cast<std::size_t>(nx));

    double twv = ptx[0] * (1.0 - ptx[0]);
    double gxv = sys.g_x.eval(px);
    double gtv = sys.g_t.eval(px);

    double r1 = -lie_v.eval(ptx) -
                (p.eval(ptx) + q1.eval(ptx) * twv + q2.eval(ptx) * gxv);
    double r2 = wt.eval(px) - v0.eval(px) - 1.0 -
                (p0.eval(px) + q01.eval(px) * gxv);
    double r3 = vt.eval(ptx) -
                (pt1.eval(ptx) + qt1.eval(ptx) * twv + rt.eval(ptx) * gxv);
    double r4 = v1.eval(px) - (pt2.eval(px) + qt2.eval(px) * gxv - qt3.eval(px) * gtv);
    double r5 = wt.eval(px) - (s0.eval(px) + s1.eval(px) * gxv);
    for (double r : {r1, r2, r3, r4, r5}) worst = std::max(worst, std::abs(r));
  }
  return worst / (1.0 + coef_scale);
}

RelaxationResult extract(const DualAssembly& a, const Solution& s) {
  RelaxationResult res;
  res.k = a.plan.k;
  res.deg_v = a.plan.deg_v;
  res.deg_w = a.plan.deg_w;
  res.status = s.status;
  res.residuals = s.residuals;
  res.iterations = s.iterations;
  res.d_star = s.primal_obj;
  res.p_star = s.dual_obj;
  if (!s.ok()) return res;

  const int nx = a.norm.scaled.n, ntx = nx + 1;
  Poly wt(nx), vt(ntx);
  for (int i = 0; i < a.w_basis.size(); ++i)
    wt.add_term(a.w_basis[i], s.free_vals[static_cast<std::size_t>(a.w_off + i)]);
  for (int i = 0; i < a.v_basis.size(); ++i)
    vt.add_term(a.v_basis[i], s.free_vals[static_cast<std::size_t>(a.v_off + i)]);

  // back to original coordinates: x_scaled = (x - offset) / scale,
  // t_scaled = t / horizon
  std::vector<double> isc(static_cast<std::size_t>(nx)), ioff(static_cast<std::size_t>(nx));
  for (int i = 0; i < nx; ++i) {
    isc[static_cast<std::size_t>(i)] = 1.0 / a.norm.scale[static_cast<std::size_t>(i)];
    ioff[static_cast<std::size_t>(i)] =
        -a.norm.offset[static_cast<std::size_t>(i)] / a.norm.scale[static_cast<std::size_t>(i)];
  }
  res.w = affine_substitute(wt, isc, ioff);

  std::vector<double> isct(static_cast<std::size_t>(ntx), 1.0),
      iofft(static_cast<std::size_t>(ntx), 0.0);
  isct[0] = 1.0 / a.norm.horizon;
  for (int i = 0; i < nx; ++i) {
    isct[static_cast<std::size_t>(i + 1)] = isc[static_cast<std::size_t>(i)];
    iofft[static_cast<std::size_t>(i + 1)] = ioff[static_cast<std::size_t>(i)];
  }
  res.v = affine_substitute(vt, isct, iofft);

  res.identity_residual = max_identity_residual(a, s, 100, 0x5eed0001ULL);
  return res;
}

PrimalSolveInfo extract_primal(const PrimalAssembly& a, const Solution& s) {
  PrimalSolveInfo info;
  info.status = s.status;
  info.residuals = s.residuals;
  info.p_star = s.dual_obj;
  (void)a;
  return info;
}

MomentVector PrimalSolveInfo::moments(const PrimalAssembly& a, const Solution& s,
                                      int measure) const {
  const MeasureInfo& mi = a.measures[static_cast<std::size_t>(measure)];
  MomentVector mv;
  mv.basis = mi.basis;
  mv.values.resize(mi.basis.size());
  for (int i = 0; i < mi.basis.size(); ++i)
    mv.values[i] = s.row_duals[static_cast<std::size_t>(mi.row_offset + i)];
  return mv;
}

}  // namespace roa
