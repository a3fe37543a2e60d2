#include "roa/poly.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace roa {

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  }
  return r;
}

MultiIndex::MultiIndex(std::vector<int> exps) : exps_(std::move(exps)) {
  degree_ = std::accumulate(exps_.begin(), exps_.end(), 0);
  for (int e : exps_) {
    if (e < 0) throw std::invalid_argument("MultiIndex: negative exponent");
  }
}

MultiIndex MultiIndex::zeros(int nvars) {
  return MultiIndex(std::vector<int>(static_cast<std::size_t>(nvars), 0));
}

MultiIndex MultiIndex::plus(const MultiIndex& other) const {
  if (nvars() != other.nvars())
    throw std::invalid_argument("MultiIndex: nvars mismatch in plus");
  std::vector<int> e = exps_;
  for (std::size_t i = 0; i < e.size(); ++i) e[i] += other.exps_[i];
  return MultiIndex(std::move(e));
}

MultiIndex MultiIndex::minus_one(int var) const {
  std::vector<int> e = exps_;
  if (e[static_cast<std::size_t>(var)] <= 0)
    throw std::invalid_argument("MultiIndex: exponent underflow");
  e[static_cast<std::size_t>(var)] -= 1;
  return MultiIndex(std::move(e));
}

MultiIndex MultiIndex::inserted(int pos, int e) const {
  std::vector<int> v = exps_;
  v.insert(v.begin() + pos, e);
  return MultiIndex(std::move(v));
}

MultiIndex MultiIndex::dropped(int pos) const {
  std::vector<int> v = exps_;
  v.erase(v.begin() + pos);
  return MultiIndex(std::move(v));
}

bool MultiIndex::operator<(const MultiIndex& o) const {
  if (degree_ != o.degree_) return degree_ < o.degree_;
  // Within a degree the larger leading exponent sorts first.
  return std::lexicographical_compare(o.exps_.begin(), o.exps_.end(),
                                      exps_.begin(), exps_.end());
}

Poly::Poly(int nvars, double constant) : nvars_(nvars) {
  if (constant != 0.0) terms_[MultiIndex::zeros(nvars)] = constant;
}

Poly Poly::monomial(int nvars, MultiIndex m, double coef) {
  if (m.nvars() != nvars)
    throw std::invalid_argument("Poly::monomial: nvars mismatch");
  Poly p(nvars);
  if (coef != 0.0) p.terms_[std::move(m)] = coef;
  return p;
}

Poly Poly::variable(int nvars, int var) {
  std::vector<int> e(static_cast<std::size_t>(nvars), 0);
  e[static_cast<std::size_t>(var)] = 1;
  return monomial(nvars, MultiIndex(std::move(e)));
}

int Poly::degree() const {
  return terms_.empty() ? 0 : terms_.rbegin()->first.degree();
}

double Poly::coeff(const MultiIndex& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? 0.0 : it->second;
}

double Poly::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& [mi, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

void Poly::add_term(const MultiIndex& m, double c) {
  if (m.nvars() != nvars_)
    throw std::invalid_argument("Poly::add_term: nvars mismatch");
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) it->second += c;
}

Poly& Poly::cleanup() {
  double scale = max_abs_coeff();
  double tol = kDropTol * scale;
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (std::abs(it->second) <= tol)
      it = terms_.erase(it);
    else
      ++it;
  }
  return *this;
}

double Poly::eval(std::span<const double> point) const {
  if (static_cast<int>(point.size()) != nvars_)
    throw std::invalid_argument("Poly::eval: point dimension mismatch");
  // Kahan summation over terms.
  double sum = 0.0, comp = 0.0;
  for (const auto& [m, c] : terms_) {
    double term = c;
    for (int v = 0; v < nvars_; ++v) {
      int e = m.exp(v);
      if (e == 0) continue;
      double base = point[static_cast<std::size_t>(v)];
      double pw = 1.0;
      while (e > 0) {  // power by squaring
        if (e & 1) pw *= base;
        base *= base;
        e >>= 1;
      }
      term *= pw;
    }
    double y = term - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

double Poly::eval(std::initializer_list<double> point) const {
  return eval(std::span<const double>(point.begin(), point.size()));
}

Poly Poly::operator-() const {
  Poly r(nvars_);
  for (const auto& [m, c] : terms_) r.terms_[m] = -c;
  return r;
}

Poly& Poly::operator+=(const Poly& o) {
  if (nvars_ != o.nvars_)
    throw std::invalid_argument("Poly: nvars mismatch in +");
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  cleanup();
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  if (nvars_ != o.nvars_)
    throw std::invalid_argument("Poly: nvars mismatch in -");
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  cleanup();
  return *this;
}

Poly operator+(const Poly& a, const Poly& b) {
  Poly r = a;
  r += b;
  return r;
}

Poly operator-(const Poly& a, const Poly& b) {
  Poly r = a;
  r -= b;
  return r;
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.nvars() != b.nvars())
    throw std::invalid_argument("Poly: nvars mismatch in *");
  Poly r(a.nvars());
  for (const auto& [ma, ca] : a.terms()) {
    for (const auto& [mb, cb] : b.terms()) {
      r.add_term(ma.plus(mb), ca * cb);
    }
  }
  return r.cleanup();
}

Poly operator*(const Poly& a, double s) {
  Poly r(a.nvars());
  if (s == 0.0) return r;
  for (const auto& [m, c] : a.terms()) r.add_term(m, c * s);
  return r;
}

Poly operator*(double s, const Poly& a) { return a * s; }

bool approx_equal(const Poly& a, const Poly& b, double tol) {
  if (a.nvars() != b.nvars()) return false;
  Poly d = a - b;
  return d.max_abs_coeff() <= tol;
}

Poly diff(const Poly& p, int var) {
  if (var < 0 || var >= p.nvars())
    throw std::invalid_argument("diff: variable out of range");
  Poly r(p.nvars());
  for (const auto& [m, c] : p.terms()) {
    int e = m.exp(var);
    if (e == 0) continue;
    r.add_term(m.minus_one(var), c * static_cast<double>(e));
  }
  return r;
}

Poly lie(const Poly& v, const std::vector<Poly>& f) {
  int ntx = v.nvars();
  if (static_cast<int>(f.size()) != ntx - 1)
    throw std::invalid_argument("lie: expected n dynamics entries in (t,x)");
  for (const Poly& fi : f) {
    if (fi.nvars() != ntx)
      throw std::invalid_argument("lie: dynamics nvars mismatch");
  }
  Poly r = diff(v, 0);
  for (int i = 1; i < ntx; ++i) {
    r += diff(v, i) * f[static_cast<std::size_t>(i - 1)];
  }
  return r;
}

Poly promote_with_time(const Poly& p) {
  Poly r(p.nvars() + 1);
  for (const auto& [m, c] : p.terms()) r.add_term(m.inserted(0, 0), c);
  return r;
}

Poly substitute_var(const Poly& p, int var, double value) {
  Poly r(p.nvars() - 1);
  for (const auto& [m, c] : p.terms()) {
    double factor = std::pow(value, m.exp(var));
    if (factor == 0.0) continue;
    r.add_term(m.dropped(var), c * factor);
  }
  return r.cleanup();
}

Poly scale_var(const Poly& p, int var, double factor) {
  Poly r(p.nvars());
  for (const auto& [m, c] : p.terms()) {
    r.add_term(m, c * std::pow(factor, m.exp(var)));
  }
  return r.cleanup();
}

Poly affine_substitute(const Poly& p, std::span<const double> scale,
                       std::span<const double> offset) {
  int n = p.nvars();
  if (static_cast<int>(scale.size()) != n || static_cast<int>(offset.size()) != n)
    throw std::invalid_argument("affine_substitute: dimension mismatch");
  Poly result(n);
  for (const auto& [m, c] : p.terms()) {
    // Expand c * prod_i (scale_i x_i + offset_i)^{e_i} one variable at a time.
    Poly term(n, c);
    for (int v = 0; v < n; ++v) {
      int e = m.exp(v);
      if (e == 0) continue;
      Poly lin(n, offset[static_cast<std::size_t>(v)]);
      lin += Poly::variable(n, v) * scale[static_cast<std::size_t>(v)];
      for (int j = 0; j < e; ++j) term = term * lin;
    }
    result += term;
  }
  return result.cleanup();
}

Basis::Basis(int nvars, int maxdeg) : nvars_(nvars), maxdeg_(maxdeg) {
  if (nvars < 1) throw std::invalid_argument("Basis: nvars must be positive");
  if (maxdeg < 0) throw std::invalid_argument("Basis: negative degree");
  std::vector<int> e(static_cast<std::size_t>(nvars), 0);
  // Emit all monomials of total degree d in graded-lex order.
  auto gen = [&](auto&& self, int pos, int remaining) -> void {
    if (pos == nvars - 1) {
      e[static_cast<std::size_t>(pos)] = remaining;
      mons_.emplace_back(e);
      return;
    }
    for (int k = remaining; k >= 0; --k) {
      e[static_cast<std::size_t>(pos)] = k;
      self(self, pos + 1, remaining - k);
    }
  };
  for (int d = 0; d <= maxdeg; ++d) gen(gen, 0, d);
  for (int i = 0; i < size(); ++i) lookup_[mons_[static_cast<std::size_t>(i)]] = i;
}

int Basis::index_of(const MultiIndex& m) const {
  auto it = lookup_.find(m);
  return it == lookup_.end() ? -1 : it->second;
}

namespace {

struct Token {
  enum Kind { kNumber, kIdent, kPlus, kMinus, kStar, kCaret, kEnd } kind;
  double value = 0.0;
  std::string text;
  std::size_t pos = 0;
};

class Lexer {
 public:
  explicit Lexer(const std::string& s) : s_(s) {}

  Token next() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    Token t;
    t.pos = i_;
    if (i_ >= s_.size()) {
      t.kind = Token::kEnd;
      return t;
    }
    char c = s_[i_];
    if (c == '+') { ++i_; t.kind = Token::kPlus; return t; }
    if (c == '-') { ++i_; t.kind = Token::kMinus; return t; }
    if (c == '*') { ++i_; t.kind = Token::kStar; return t; }
    if (c == '^') { ++i_; t.kind = Token::kCaret; return t; }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + i_;
      char* end = nullptr;
      t.value = std::strtod(begin, &end);
      if (end == begin) fail("malformed number", i_);
      i_ += static_cast<std::size_t>(end - begin);
      t.kind = Token::kNumber;
      // A number glued to an identifier means an implicit product.
      if (i_ < s_.size() && (std::isalpha(static_cast<unsigned char>(s_[i_]))))
        fail("implicit '*' is not allowed", i_);
      return t;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t j = i_;
      while (j < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[j])) || s_[j] == '_'))
        ++j;
      t.kind = Token::kIdent;
      t.text = s_.substr(i_, j - i_);
      i_ = j;
      if (i_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[i_])) ||
                             s_[i_] == '.'))
        fail("implicit '*' is not allowed", i_);
      return t;
    }
    fail(std::string("unexpected character '") + c + "'", i_);
    return t;  // unreachable
  }

  [[noreturn]] void fail(const std::string& what, std::size_t pos) const {
    std::ostringstream os;
    os << "polynomial parse error at position " << pos << ": " << what;
    throw std::invalid_argument(os.str());
  }

 private:
  const std::string& s_;
  std::size_t i_ = 0;
};

}  // namespace

Poly parse_poly(const std::string& text, int nx, bool with_time) {
  int nvars = nx + (with_time ? 1 : 0);
  Lexer lex(text);
  Poly result(nvars);
  Token tok = lex.next();

  auto var_index = [&](const std::string& name, std::size_t pos) -> int {
    if (name == "t") {
      if (!with_time)
        lex.fail("variable 't' is not allowed in this context", pos);
      return 0;
    }
    if (name.size() >= 2 && name[0] == 'x') {
      bool digits = true;
      for (std::size_t i = 1; i < name.size(); ++i)
        digits = digits && std::isdigit(static_cast<unsigned char>(name[i]));
      if (digits) {
        int k = std::atoi(name.c_str() + 1);
        if (k >= 1 && k <= nx) return (with_time ? 1 : 0) + k - 1;
        lex.fail("variable '" + name + "' is out of range", pos);
      }
    }
    lex.fail("unknown identifier '" + name + "'", pos);
    return -1;  // unreachable
  };

  bool first = true;
  while (tok.kind != Token::kEnd) {
    double sign = 1.0;
    if (tok.kind == Token::kPlus || tok.kind == Token::kMinus) {
      sign = (tok.kind == Token::kMinus) ? -1.0 : 1.0;
      tok = lex.next();
    } else if (!first) {
      lex.fail("expected '+' or '-' between terms", tok.pos);
    }
    first = false;

    double coef = sign;
    std::vector<int> exps(static_cast<std::size_t>(nvars), 0);
    bool any_factor = false;
    while (true) {
      if (tok.kind == Token::kNumber) {
        coef *= tok.value;
        tok = lex.next();
      } else if (tok.kind == Token::kIdent) {
        int v = var_index(tok.text, tok.pos);
        std::size_t vpos = tok.pos;
        tok = lex.next();
        int power = 1;
        if (tok.kind == Token::kCaret) {
          tok = lex.next();
          if (tok.kind != Token::kNumber || tok.value < 0 ||
              tok.value != std::floor(tok.value))
            lex.fail("exponent must be a nonnegative integer", vpos);
          power = static_cast<int>(tok.value);
          tok = lex.next();
        }
        exps[static_cast<std::size_t>(v)] += power;
      } else {
        lex.fail("expected a number or a variable", tok.pos);
      }
      any_factor = true;
      if (tok.kind == Token::kStar) {
        tok = lex.next();
        continue;
      }
      break;
    }
    if (!any_factor) lex.fail("empty term", tok.pos);
    result.add_term(MultiIndex(std::move(exps)), coef);
  }
  if (first) throw std::invalid_argument("polynomial parse error: empty input");
  return result.cleanup();
}

std::string poly_to_string(const Poly& p, bool with_time) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : p.terms()) {
    double a = c;
    if (first) {
      if (a < 0) { os << "-"; a = -a; }
    } else {
      os << (a < 0 ? " - " : " + ");
      a = std::abs(a);
    }
    first = false;
    std::ostringstream num;
    num.precision(12);
    num << a;
    bool coef_printed = !(m.degree() > 0 && num.str() == "1");
    if (coef_printed) os << num.str();
    bool prev = coef_printed;
    for (int v = 0; v < p.nvars(); ++v) {
      int e = m.exp(v);
      if (e == 0) continue;
      if (prev) os << "*";
      if (with_time && v == 0)
        os << "t";
      else
        os << "x" << (with_time ? v : v + 1);
      if (e > 1) os << "^" << e;
      prev = true;
    }
  }
  return os.str();
}

}  // namespace roa
