#pragma once

#include <Eigen/Dense>
#include <map>

#include "roa/conic.hpp"
#include "roa/poly.hpp"

namespace roa {

// Expands m(x)' Q m(x) for the monomial vector m of the half-degree basis.
// The coefficient of a monomial collects Q[a][b] over all decompositions
// a + b, off-diagonal pairs counted twice.
Poly gram_to_poly(const Basis& half_basis, const Eigen::MatrixXd& Q);

// The time-interval weight t(T - t) as a polynomial with variable 0 = t.
Poly time_weight(double T, int nvars);

// Accumulates the coefficient-matching equality rows of one polynomial
// identity, written as
//
//   sum of contributions(variables) + constants = 0,
//
// one row per monomial. Contributions may exceed max_degree only if a
// bookkeeping bug produced them, so emit() throws in that case. Rows are
// emitted in graded-lex monomial order.
class IdentityBuilder {
 public:
  IdentityBuilder(int nvars, int max_degree)
      : nvars_(nvars), max_degree_(max_degree) {}

  // coef * poly attached to the free program variable var.
  void add_free_poly(int var, const Poly& poly, double coef = 1.0);

  // Known polynomial without variables; lands on the row right-hand sides.
  void add_constant(const Poly& poly);

  // sign * factor * (m' Q m) for the Gram block with the given half basis.
  void add_gram(int block, const Basis& half_basis, const Poly& factor,
                double sign);

  // sign * factor * sum_g coeff_g mono_g over a free coefficient vector
  // starting at program variable first_var, indexed by basis.
  void add_free_poly_block(int first_var, const Basis& basis, const Poly& factor,
                           double sign);

  // Appends the accumulated rows to the program and returns the number added.
  int emit(ConicProgram& prog) const;

 private:
  ConicProgram::Row& row(const MultiIndex& m);

  int nvars_;
  int max_degree_;
  std::map<MultiIndex, ConicProgram::Row> rows_;
};

}  // namespace roa
