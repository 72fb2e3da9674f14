#pragma once

#include <gmp.h>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace fringe {

/// Arbitrary-precision rational, always kept in canonical reduced form
/// (gcd(|num|, den) = 1, den >= 1). Thin value-semantic wrapper over GMP.
class BigRational {
 public:
  BigRational() { mpq_init(q_); }
  BigRational(long n) {
    mpq_init(q_);
    mpq_set_si(q_, n, 1);
  }
  BigRational(long num, long den);
  /// Parses "a", "a/b", or a decimal like "0.25" (converted exactly).
  explicit BigRational(std::string_view text);

  BigRational(const BigRational& o) {
    mpq_init(q_);
    mpq_set(q_, o.q_);
  }
  BigRational(BigRational&& o) noexcept {
    mpq_init(q_);
    mpq_swap(q_, o.q_);
  }
  BigRational& operator=(const BigRational& o) {
    if (this != &o) mpq_set(q_, o.q_);
    return *this;
  }
  BigRational& operator=(BigRational&& o) noexcept {
    if (this != &o) mpq_swap(q_, o.q_);
    return *this;
  }
  ~BigRational() { mpq_clear(q_); }

  static BigRational from_pow2(long e);  // 2^e, e may be negative

  BigRational& operator+=(const BigRational& o) {
    mpq_add(q_, q_, o.q_);
    return *this;
  }
  BigRational& operator-=(const BigRational& o) {
    mpq_sub(q_, q_, o.q_);
    return *this;
  }
  BigRational& operator*=(const BigRational& o) {
    mpq_mul(q_, q_, o.q_);
    return *this;
  }
  BigRational& operator/=(const BigRational& o);

  friend BigRational operator+(BigRational a, const BigRational& b) { return a += b; }
  friend BigRational operator-(BigRational a, const BigRational& b) { return a -= b; }
  friend BigRational operator*(BigRational a, const BigRational& b) { return a *= b; }
  friend BigRational operator/(BigRational a, const BigRational& b) { return a /= b; }
  BigRational operator-() const {
    BigRational r(*this);
    mpq_neg(r.q_, r.q_);
    return r;
  }

  friend bool operator==(const BigRational& a, const BigRational& b) {
    return mpq_equal(a.q_, b.q_) != 0;
  }
  friend bool operator!=(const BigRational& a, const BigRational& b) { return !(a == b); }
  friend bool operator<(const BigRational& a, const BigRational& b) {
    return mpq_cmp(a.q_, b.q_) < 0;
  }
  friend bool operator>(const BigRational& a, const BigRational& b) { return b < a; }
  friend bool operator<=(const BigRational& a, const BigRational& b) { return !(b < a); }
  friend bool operator>=(const BigRational& a, const BigRational& b) { return !(a < b); }

  int sign() const { return mpq_sgn(q_); }
  bool is_zero() const { return mpq_sgn(q_) == 0; }

  /// Integer power; negative exponents allowed for nonzero values.
  BigRational pow(long e) const;

  double to_double() const { return mpq_get_d(q_); }
  /// "num/den", or just "num" for integers.
  std::string to_string() const;
  /// Decimal expansion, round-to-nearest at `digits` fractional digits.
  std::string to_decimal_string(int digits) const;

  /// Fits-in-long accessors; throw if out of range.
  long num_as_long() const;
  long den_as_long() const;

  const mpq_t& raw() const { return q_; }
  mpq_t& raw() { return q_; }

 private:
  mpq_t q_;
};

std::ostream& operator<<(std::ostream& os, const BigRational& r);

/// Harmonic number h_n = sum_{i=1}^{n} 1/i, exact.
BigRational harmonic(long n);

/// n! as a rational (exact).
BigRational factorial(long n);

/// Catalan number C_n = binom(2n, n)/(n+1), exact.
BigRational catalan(long n);

}  // namespace fringe
