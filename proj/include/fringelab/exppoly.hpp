#pragma once

#include <map>
#include <string>
#include <vector>

#include "fringelab/rational.hpp"

namespace fringe {

/// Polynomial in x with rational coefficients; coef[j] multiplies x^j.
/// Normalized: no trailing zero coefficients (the zero polynomial is empty).
using Poly = std::vector<BigRational>;

Poly poly_normalize(Poly p);
Poly poly_add(const Poly& a, const Poly& b);
Poly poly_scale(const Poly& a, const BigRational& c);
Poly poly_mul(const Poly& a, const Poly& b);
Poly poly_derivative(const Poly& a);
Poly poly_antiderivative(const Poly& a);  // constant of integration 0
BigRational poly_eval(const Poly& a, const BigRational& x);

/// Exact constant of the form sum_k q_k * e^k with rational q_k and
/// integer k >= 0 (even in everything arising here). Structural equality
/// is exact equality.
class ExpValue {
 public:
  ExpValue() = default;
  explicit ExpValue(BigRational rational_part);

  void add_term(long k, const BigRational& q);
  const std::map<long, BigRational>& coeffs() const { return coeffs_; }

  ExpValue& operator+=(const ExpValue& o);
  friend ExpValue operator+(ExpValue a, const ExpValue& b) { return a += b; }
  ExpValue scaled(const BigRational& c) const;

  friend bool operator==(const ExpValue& a, const ExpValue& b) { return a.coeffs_ == b.coeffs_; }
  friend bool operator!=(const ExpValue& a, const ExpValue& b) { return !(a == b); }

  bool is_zero() const { return coeffs_.empty(); }

  /// e.g. "e^4/128 - e^2/8 + 233/384" (highest exponent first).
  std::string to_string() const;
  double to_double() const;
  /// Decimal value with `digits` fractional digits; exact rational
  /// evaluation against e approximated far beyond the printed precision.
  std::string to_decimal_string(int digits) const;

 private:
  std::map<long, BigRational> coeffs_;
};

/// Element of the ring { sum_k p_k(x) e^{kx} : p_k rational polynomials,
/// k >= 0 integer }, closed under the kernel integral below. Unique
/// representation, so equality is structural.
class ExpPoly {
 public:
  ExpPoly() = default;
  static ExpPoly zero() { return {}; }
  static ExpPoly constant(const BigRational& c);
  static ExpPoly term(long k, Poly p);

  const std::map<long, Poly>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  ExpPoly& operator+=(const ExpPoly& o);
  friend ExpPoly operator+(ExpPoly a, const ExpPoly& b) { return a += b; }
  friend ExpPoly operator*(const ExpPoly& a, const ExpPoly& b);
  ExpPoly scaled(const BigRational& c) const;

  friend bool operator==(const ExpPoly& a, const ExpPoly& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const ExpPoly& a, const ExpPoly& b) { return !(a == b); }

  ExpPoly derivative() const;
  BigRational eval_at_zero() const;
  std::string to_string() const;
  double eval(double x) const;

 private:
  void insert_term(long k, Poly p);
  std::map<long, Poly> terms_;
};

/// x |-> integral_0^x f(y) e^{2(x-y)} dy, exactly. The result F satisfies
/// F(0) = 0 and F' = f + 2F.
ExpPoly kernel_integral(const ExpPoly& f);

/// integral_0^1 f(x) dx as an exact ExpValue.
ExpValue integral01(const ExpPoly& f);

/// Rational approximation of e^k (k >= 0) with relative error below 1e-150;
/// cached. Used for numeric evaluation of ExpValue.
const BigRational& e_power_approx(long k);

}  // namespace fringe
