#pragma once

#include <Eigen/Dense>
#include <vector>

#include "roa/poly.hpp"

namespace roa {

// Integration domain carrying exact Lebesgue moments: an axis-aligned box
// or a Euclidean ball. The domain must equal or outer-bound the constraint
// set it stands in for.
struct DomainDescriptor {
  enum class Kind { kBox, kBall };
  Kind kind = Kind::kBox;
  std::vector<double> lower;   // box
  std::vector<double> upper;   // box
  std::vector<double> center;  // ball
  double radius = 0.0;         // ball

  static DomainDescriptor box(std::vector<double> lower, std::vector<double> upper);
  static DomainDescriptor ball(std::vector<double> center, double radius);

  int dim() const;
  double volume() const;
  bool contains(std::span<const double> x) const;
  // Smallest axis-aligned box covering the domain, as (lower, upper).
  std::pair<std::vector<double>, std::vector<double>> bounding_box() const;
};

// Truncated moment sequence indexed by a monomial basis.
struct MomentVector {
  Basis basis;
  Eigen::VectorXd values;

  int nvars() const { return basis.nvars(); }
  int maxdeg() const { return basis.maxdeg(); }
  double operator[](const MultiIndex& m) const;
};

// Exact moments of the Lebesgue measure over the domain for all monomials
// of degree <= maxdeg. Box moments multiply per-coordinate interval powers;
// ball moments use the Gamma-function formula for monomials over a centered
// ball (zero for any odd exponent) with center offsets handled by binomial
// expansion.
MomentVector lebesgue_moments(const DomainDescriptor& dom, int nvars, int maxdeg);

// Moment matrix of order k: entry (a, b) = y[a + b] over Basis(nvars, k).
Eigen::MatrixXd moment_matrix(const MomentVector& y, int k);

// Localizing matrix for g at hierarchy order k; the matrix order is
// k - ceil(deg g / 2) and entry (a, b) = sum_c g_c * y[a + b + c].
Eigen::MatrixXd localizing_matrix(const Poly& g, const MomentVector& y, int k);

}  // namespace roa
