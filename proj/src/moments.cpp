#include "roa/moments.hpp"

#include <cmath>
#include <stdexcept>

namespace roa {

DomainDescriptor DomainDescriptor::box(std::vector<double> lower,
                                       std::vector<double> upper) {
  if (lower.size() != upper.size() || lower.empty())
    throw std::invalid_argument("DomainDescriptor::box: bad bounds");
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (!(lower[i] < upper[i]))
      throw std::invalid_argument("DomainDescriptor::box: lower must be < upper");
  }
  DomainDescriptor d;
  d.kind = Kind::kBox;
  d.lower = std::move(lower);
  d.upper = std::move(upper);
  return d;
}

DomainDescriptor DomainDescriptor::ball(std::vector<double> center, double radius) {
  if (center.empty() || !(radius > 0.0))
    throw std::invalid_argument("DomainDescriptor::ball: bad parameters");
  DomainDescriptor d;
  d.kind = Kind::kBall;
  d.center = std::move(center);
  d.radius = radius;
  return d;
}

int DomainDescriptor::dim() const {
  return static_cast<int>(kind == Kind::kBox ? lower.size() : center.size());
}

double DomainDescriptor::volume() const {
  if (kind == Kind::kBox) {
    double v = 1.0;
    for (std::size_t i = 0; i < lower.size(); ++i) v *= upper[i] - lower[i];
    return v;
  }
  int n = dim();
  // Unit-ball volume pi^{n/2} / Gamma(n/2 + 1).
  double unit = std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
  return unit * std::pow(radius, n);
}

bool DomainDescriptor::contains(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim()) return false;
  if (kind == Kind::kBox) {
    for (std::size_t i = 0; i < lower.size(); ++i) {
      if (x[i] < lower[i] || x[i] > upper[i]) return false;
    }
    return true;
  }
  double r2 = 0.0;
  for (std::size_t i = 0; i < center.size(); ++i) {
    double d = x[i] - center[i];
    r2 += d * d;
  }
  return r2 <= radius * radius;
}

std::pair<std::vector<double>, std::vector<double>> DomainDescriptor::bounding_box()
    const {
  if (kind == Kind::kBox) return {lower, upper};
  std::vector<double> lo(center.size()), hi(center.size());
  for (std::size_t i = 0; i < center.size(); ++i) {
    lo[i] = center[i] - radius;
    hi[i] = center[i] + radius;
  }
  return {lo, hi};
}

double MomentVector::operator[](const MultiIndex& m) const {
  int idx = basis.index_of(m);
  if (idx < 0)
    throw std::out_of_range("MomentVector: monomial beyond truncation degree");
  return values[idx];
}

namespace {

// Integral of x^a over the centered n-ball of radius R. Zero whenever any
// exponent is odd; otherwise R^{|a|+n} * 2 prod Gamma((a_i+1)/2)
// / ((|a|+n) Gamma((|a|+n)/2)).
double centered_ball_moment(const MultiIndex& a, double R) {
  int n = a.nvars();
  int total = a.degree();
  double log_num = std::log(2.0);
  for (int i = 0; i < n; ++i) {
    if (a.exp(i) % 2 == 1) return 0.0;
    log_num += std::lgamma(0.5 * (a.exp(i) + 1));
  }
  double log_den = std::log(static_cast<double>(total + n)) +
                   std::lgamma(0.5 * (total + n));
  return std::pow(R, total + n) * std::exp(log_num - log_den);
}

}  // namespace

MomentVector lebesgue_moments(const DomainDescriptor& dom, int nvars, int maxdeg) {
  if (dom.dim() != nvars)
    throw std::invalid_argument("lebesgue_moments: domain dimension mismatch");
  MomentVector mv;
  mv.basis = Basis(nvars, maxdeg);
  mv.values.resize(mv.basis.size());

  if (dom.kind == DomainDescriptor::Kind::kBox) {
    for (int i = 0; i < mv.basis.size(); ++i) {
      const MultiIndex& m = mv.basis[i];
      double v = 1.0;
      for (int d = 0; d < nvars; ++d) {
        int a = m.exp(d);
        v *= (std::pow(dom.upper[static_cast<std::size_t>(d)], a + 1) -
              std::pow(dom.lower[static_cast<std::size_t>(d)], a + 1)) /
             (a + 1);
      }
      mv.values[i] = v;
    }
    return mv;
  }

  bool centered = true;
  for (double c : dom.center) centered = centered && (c == 0.0);
  for (int i = 0; i < mv.basis.size(); ++i) {
    const MultiIndex& m = mv.basis[i];
    if (centered) {
      mv.values[i] = centered_ball_moment(m, dom.radius);
      continue;
    }
    // Shift to the centered ball: x = u + c, expand binomially per variable.
    double sum = 0.0;
    std::vector<int> j(static_cast<std::size_t>(nvars), 0);
    auto rec = [&](auto&& self, int var, double coef, std::vector<int>& lo) -> void {
      if (var == nvars) {
        sum += coef * centered_ball_moment(MultiIndex(lo), dom.radius);
        return;
      }
      int a = m.exp(var);
      double c = dom.center[static_cast<std::size_t>(var)];
      for (int jj = 0; jj <= a; ++jj) {
        lo[static_cast<std::size_t>(var)] = jj;
        double b = static_cast<double>(binomial(a, jj)) * std::pow(c, a - jj);
        if (b != 0.0) self(self, var + 1, coef * b, lo);
      }
      lo[static_cast<std::size_t>(var)] = 0;
    };
    rec(rec, 0, 1.0, j);
    mv.values[i] = sum;
  }
  return mv;
}

Eigen::MatrixXd moment_matrix(const MomentVector& y, int k) {
  if (2 * k > y.maxdeg())
    throw std::invalid_argument("moment_matrix: moments truncated below 2k");
  Basis half(y.nvars(), k);
  Eigen::MatrixXd M(half.size(), half.size());
  for (int r = 0; r < half.size(); ++r) {
    for (int c = r; c < half.size(); ++c) {
      double v = y[half[r].plus(half[c])];
      M(r, c) = v;
      M(c, r) = v;
    }
  }
  return M;
}

Eigen::MatrixXd localizing_matrix(const Poly& g, const MomentVector& y, int k) {
  if (g.nvars() != y.nvars())
    throw std::invalid_argument("localizing_matrix: nvars mismatch");
  int dg = (g.degree() + 1) / 2;
  int order = k - dg;
  if (order < 0)
    throw std::invalid_argument("localizing_matrix: order k too small for deg g");
  if (2 * order + g.degree() > y.maxdeg())
    throw std::invalid_argument("localizing_matrix: moments truncated too low");
  Basis half(y.nvars(), order);
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(half.size(), half.size());
  for (int r = 0; r < half.size(); ++r) {
    for (int c = r; c < half.size(); ++c) {
      double v = 0.0;
      for (const auto& [gamma, coef] : g.terms()) {
        v += coef * y[half[r].plus(half[c]).plus(gamma)];
      }
      M(r, c) = v;
      M(c, r) = v;
    }
  }
  return M;
}

}  // namespace roa
