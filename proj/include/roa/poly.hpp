#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace roa {

std::uint64_t binomial(int n, int k);

// Exponent tuple of one monomial with a cached total degree.
//
// Ordering is graded lexicographic: lower total degree first; within a
// degree the monomial with the larger exponent on the earliest variable
// comes first, so for two variables the degree-2 run is x1^2, x1*x2, x2^2.
// Variable 0 is the time variable in (t, x) contexts.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> exps);
  static MultiIndex zeros(int nvars);

  int nvars() const { return static_cast<int>(exps_.size()); }
  int degree() const { return degree_; }
  int exp(int var) const { return exps_[static_cast<std::size_t>(var)]; }
  const std::vector<int>& exps() const { return exps_; }

  MultiIndex plus(const MultiIndex& other) const;
  // Removes one power of var; requires exp(var) > 0.
  MultiIndex minus_one(int var) const;
  // Inserts a new variable with exponent e at position pos.
  MultiIndex inserted(int pos, int e) const;
  // Drops the variable at position pos (its exponent is discarded).
  MultiIndex dropped(int pos) const;

  bool operator==(const MultiIndex& o) const { return exps_ == o.exps_; }
  bool operator!=(const MultiIndex& o) const { return exps_ != o.exps_; }
  bool operator<(const MultiIndex& o) const;

 private:
  std::vector<int> exps_;
  int degree_ = 0;
};

// Sparse multivariate polynomial with real coefficients.
//
// Values are immutable in spirit: every operation returns a new Poly.
// Terms whose coefficient is negligible relative to the largest one are
// dropped after arithmetic so sparsity is preserved.
class Poly {
 public:
  Poly() = default;
  explicit Poly(int nvars) : nvars_(nvars) {}
  Poly(int nvars, double constant);
  static Poly monomial(int nvars, MultiIndex m, double coef = 1.0);
  static Poly variable(int nvars, int var);

  int nvars() const { return nvars_; }
  // Total degree; 0 for the zero polynomial by convention.
  int degree() const;
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }
  const std::map<MultiIndex, double>& terms() const { return terms_; }
  double coeff(const MultiIndex& m) const;
  double max_abs_coeff() const;

  // Accumulates c onto the coefficient of m without any cleanup.
  void add_term(const MultiIndex& m, double c);
  // Drops terms with |c| < kDropTol * max |coefficient|.
  Poly& cleanup();

  // Direct monomial evaluation with compensated summation.
  double eval(std::span<const double> point) const;
  double eval(std::initializer_list<double> point) const;

  Poly operator-() const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);

  static constexpr double kDropTol = 1e-14;

 private:
  int nvars_ = 0;
  std::map<MultiIndex, double> terms_;
};

Poly operator+(const Poly& a, const Poly& b);
Poly operator-(const Poly& a, const Poly& b);
Poly operator*(const Poly& a, const Poly& b);
Poly operator*(const Poly& a, double s);
Poly operator*(double s, const Poly& a);

bool approx_equal(const Poly& a, const Poly& b, double tol);

// Formal partial derivative with respect to one variable.
Poly diff(const Poly& p, int var);

// Flow derivative of a scalar test function: dv/dt + grad_x v . f.
// v and every f_i live in (t, x) space with n + 1 variables, time first.
Poly lie(const Poly& v, const std::vector<Poly>& f);

// Injects an x-only polynomial into (t, x) space (time exponent 0).
Poly promote_with_time(const Poly& p);

// Fixes one variable to a value; the result has one variable fewer.
Poly substitute_var(const Poly& p, int var, double value);

// Substitution x_var -> factor * x_var.
Poly scale_var(const Poly& p, int var, double factor);

// Substitution x_i -> scale[i] * x_i + offset[i] for every variable.
Poly affine_substitute(const Poly& p, std::span<const double> scale,
                       std::span<const double> offset);

// Ordered monomial basis of all multi-indices up to a total degree.
class Basis {
 public:
  Basis() = default;
  Basis(int nvars, int maxdeg);

  int nvars() const { return nvars_; }
  int maxdeg() const { return maxdeg_; }
  int size() const { return static_cast<int>(mons_.size()); }
  const MultiIndex& operator[](int i) const {
    return mons_[static_cast<std::size_t>(i)];
  }
  const std::vector<MultiIndex>& monomials() const { return mons_; }
  // Position of m in the basis, or -1 when m is not present.
  int index_of(const MultiIndex& m) const;

 private:
  int nvars_ = 0;
  int maxdeg_ = 0;
  std::vector<MultiIndex> mons_;
  std::map<MultiIndex, int> lookup_;
};

// Parses text like "2.5*x1^2*x2 - 0.8*t + 1". Variables are t (only when
// with_time is set) and x1..xnx. Implicit multiplication is rejected, as is
// any unknown identifier. Throws std::invalid_argument on malformed input.
Poly parse_poly(const std::string& text, int nx, bool with_time);

std::string poly_to_string(const Poly& p, bool with_time);

}  // namespace roa
