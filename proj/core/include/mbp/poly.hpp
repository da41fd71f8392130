#pragma once

#include "mbp/matrix.hpp"
#include "mbp/rational.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mbp {

// Univariate polynomial, coefficients stored from degree 0 upward, no trailing zeros.
class Poly {
 public:
  Poly() = default;
  explicit Poly(const Rational& c);
  explicit Poly(std::vector<Rational> coeffs);

  static Poly x() { return Poly(std::vector<Rational>{0, 1}); }
  // a + b x
  static Poly linear(const Rational& a, const Rational& b) { return Poly(std::vector<Rational>{a, b}); }

  int degree() const { return int(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_constant() const { return c_.size() <= 1; }
  Rational coeff(int i) const { return i < int(c_.size()) ? c_[i] : Rational(0); }
  const std::vector<Rational>& coeffs() const { return c_; }
  Rational leading() const { return c_.empty() ? Rational(0) : c_.back(); }

  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Rational& s);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator-(Poly a) { return a *= Rational(-1); }
  friend Poly operator*(Poly a, const Rational& s) { return a *= s; }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
  friend bool operator<(const Poly& a, const Poly& b);

  Rational eval(const Rational& v) const;
  RatMatrix eval(const RatMatrix& m) const;
  Poly monic() const;
  std::string to_string(const std::string& var = "x") const;

 private:
  void trim();
  std::vector<Rational> c_;
};

std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b);
Poly gcd(Poly a, Poly b);
// Rational roots with multiplicities, plus the cofactor left without rational roots.
struct RootSplit {
  std::vector<std::pair<Rational, int>> roots;
  Poly cofactor;
};
RootSplit rational_roots(const Poly& p);
// det(x I - m).
Poly characteristic_polynomial(const RatMatrix& m);

// Polynomial in `arity` commuting variables, one per tensor slot.
class MultiPoly {
 public:
  using Exponents = std::vector<int>;

  explicit MultiPoly(int arity = 2) : arity_(arity) {}
  static MultiPoly constant(int arity, const Rational& c);
  static MultiPoly variable(int arity, int slot);
  static MultiPoly from_poly(int arity, int slot, const Poly& p);

  int arity() const { return arity_; }
  const std::map<Exponents, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Rational constant_term() const;
  // Slots whose variable occurs.
  std::vector<int> support_slots() const;

  void add_term(const Exponents& e, const Rational& c);
  MultiPoly& operator+=(const MultiPoly& o);
  MultiPoly& operator-=(const MultiPoly& o);
  MultiPoly& operator*=(const Rational& s);
  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator-(MultiPoly a) { return a *= Rational(-1); }
  friend MultiPoly operator*(MultiPoly a, const Rational& s) { return a *= s; }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
  friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
    return a.arity_ == b.arity_ && a.terms_ == b.terms_;
  }
  friend bool operator<(const MultiPoly& a, const MultiPoly& b);

  // Re-index slots: slot s of this goes to slot_map[s] of the result.
  MultiPoly embed(int new_arity, const std::vector<int>& slot_map) const;
  // Exact quotient by a univariate polynomial in one slot, if it exists.
  std::optional<MultiPoly> divide(int slot, const Poly& f) const;
  Rational eval(const std::vector<Rational>& point) const;
  std::string to_string(const std::vector<std::string>& vars) const;

 private:
  int arity_;
  std::map<Exponents, Rational> terms_;
};

// Elements f(x, y) of R_X (x) R_Y.
using BiPoly = MultiPoly;

Poly bipoly_eval_left(const BiPoly& f, const Rational& v);
Poly bipoly_eval_right(const BiPoly& f, const Rational& v);
Rational bipoly_eval(const BiPoly& f, const Rational& left, const Rational& right);
// Sum of a_ij L^i V R^j for f = sum a_ij x^i y^j.
RatMatrix bipoly_apply(const BiPoly& f, const RatMatrix& left, const RatMatrix& v, const RatMatrix& right);

// Element of a tensor product of localized polynomial lines: numerator over a product of
// monic denominator factors, kept per slot.
class LocalizedElem {
 public:
  using Denominator = std::map<Poly, int>;

  explicit LocalizedElem(int arity = 2);
  explicit LocalizedElem(MultiPoly num);
  LocalizedElem(MultiPoly num, std::vector<Denominator> den);
  static LocalizedElem constant(int arity, const Rational& c);

  int arity() const { return num_.arity(); }
  const MultiPoly& num() const { return num_; }
  const std::vector<Denominator>& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const;
  bool is_constant() const { return is_polynomial() && num_.is_constant(); }
  Rational constant_term() const { return num_.constant_term(); }

  LocalizedElem& operator+=(const LocalizedElem& o);
  LocalizedElem& operator-=(const LocalizedElem& o);
  LocalizedElem& operator*=(const Rational& s);
  friend LocalizedElem operator+(LocalizedElem a, const LocalizedElem& b) { return a += b; }
  friend LocalizedElem operator-(LocalizedElem a, const LocalizedElem& b) { return a -= b; }
  friend LocalizedElem operator-(LocalizedElem a) { return a *= Rational(-1); }
  friend LocalizedElem operator*(LocalizedElem a, const Rational& s) { return a *= s; }
  friend LocalizedElem operator*(const LocalizedElem& a, const LocalizedElem& b);
  friend bool operator==(const LocalizedElem& a, const LocalizedElem& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator<(const LocalizedElem& a, const LocalizedElem& b);

  LocalizedElem embed(int new_arity, const std::vector<int>& slot_map) const;
  std::string to_string(const std::vector<std::string>& vars) const;

 private:
  void normalize();
  MultiPoly num_;
  std::vector<Denominator> den_;
};

// Forbidden factors per slot; an empty list marks a trivial (field) slot whose variable may not occur.
using SlotRings = std::vector<std::vector<Poly>>;

// True iff e is a nonzero constant times a product of forbidden factors and their inverses.
bool is_unit(const LocalizedElem& e, const SlotRings& forbidden);
std::optional<LocalizedElem> unit_inverse(const LocalizedElem& e, const SlotRings& forbidden);
// Sum of a_ij L^i V R^j scaled by the inverses of the denominators evaluated at L and R.
RatMatrix localized_apply(const LocalizedElem& f, const RatMatrix& left, const RatMatrix& v, const RatMatrix& right);

}  // namespace mbp
