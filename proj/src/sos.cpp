#include "roa/sos.hpp"

#include <stdexcept>

namespace roa {

Poly gram_to_poly(const Basis& half_basis, const Eigen::MatrixXd& Q) {
  if (Q.rows() != half_basis.size() || Q.cols() != half_basis.size())
    throw std::invalid_argument("gram_to_poly: Gram size does not match basis");
  Poly p(half_basis.nvars());
  for (int r = 0; r < half_basis.size(); ++r) {
    for (int c = r; c < half_basis.size(); ++c) {
      double w = (r == c) ? Q(r, c) : Q(r, c) + Q(c, r);
      if (w == 0.0) continue;
      p.add_term(half_basis[r].plus(half_basis[c]), w);
    }
  }
  return p.cleanup();
}

Poly time_weight(double T, int nvars) {
  if (!(T > 0.0)) throw std::invalid_argument("time_weight: T must be positive");
  Poly t = Poly::variable(nvars, 0);
  return t * T - t * t;
}

ConicProgram::Row& IdentityBuilder::row(const MultiIndex& m) {
  if (m.degree() > max_degree_)
    throw std::logic_error("IdentityBuilder: product degree exceeds the budget");
  return rows_[m];
}

void IdentityBuilder::add_free_poly(int var, const Poly& poly, double coef) {
  if (poly.nvars() != nvars_)
    throw std::invalid_argument("IdentityBuilder: nvars mismatch");
  for (const auto& [m, c] : poly.terms())
    row(m).terms.push_back(ConicProgram::free_term(var, coef * c));
}

void IdentityBuilder::add_constant(const Poly& poly) {
  if (poly.nvars() != nvars_)
    throw std::invalid_argument("IdentityBuilder: nvars mismatch");
  for (const auto& [m, c] : poly.terms()) row(m).rhs -= c;
}

void IdentityBuilder::add_gram(int block, const Basis& half_basis,
                               const Poly& factor, double sign) {
  if (half_basis.nvars() != nvars_ || factor.nvars() != nvars_)
    throw std::invalid_argument("IdentityBuilder: nvars mismatch");
  for (int r = 0; r < half_basis.size(); ++r) {
    for (int c = r; c < half_basis.size(); ++c) {
      MultiIndex base = half_basis[r].plus(half_basis[c]);
      double mult = (r == c) ? 1.0 : 2.0;
      for (const auto& [g, fc] : factor.terms()) {
        row(base.plus(g))
            .terms.push_back(ConicProgram::block_term(block, r, c, sign * mult * fc));
      }
    }
  }
}

void IdentityBuilder::add_free_poly_block(int first_var, const Basis& basis,
                                          const Poly& factor, double sign) {
  if (basis.nvars() != nvars_ || factor.nvars() != nvars_)
    throw std::invalid_argument("IdentityBuilder: nvars mismatch");
  for (int i = 0; i < basis.size(); ++i) {
    for (const auto& [g, fc] : factor.terms()) {
      row(basis[i].plus(g))
          .terms.push_back(ConicProgram::free_term(first_var + i, sign * fc));
    }
  }
}

int IdentityBuilder::emit(ConicProgram& prog) const {
  int added = 0;
  for (const auto& [m, r] : rows_) {
    if (r.terms.empty() && r.rhs == 0.0) continue;
    prog.rows.push_back(r);
    ++added;
  }
  return added;
}

}  // namespace roa
