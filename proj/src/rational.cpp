#include "fringelab/rational.hpp"

#include <ostream>
#include <stdexcept>
#include <vector>

namespace fringe {

BigRational::BigRational(long num, long den) {
  if (den == 0) throw std::invalid_argument("BigRational: zero denominator");
  mpq_init(q_);
  mpq_set_si(q_, num, 1);
  mpq_t d;
  mpq_init(d);
  mpq_set_si(d, den, 1);
  mpq_div(q_, q_, d);
  mpq_clear(d);
}

BigRational::BigRational(std::string_view text) {
  mpq_init(q_);
  // the object is never constructed on a throw, so release q_ first
  auto fail = [this](const std::string& msg) {
    mpq_clear(q_);
    throw std::invalid_argument(msg);
  };
  std::string s(text);
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    // decimal: shift the point out and divide by the matching power of ten
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    size_t frac_len = s.size() - dot - 1;
    if (digits.empty() || digits == "-") fail("BigRational: cannot parse '" + s + "'");
    if (mpq_set_str(q_, digits.c_str(), 10) != 0)
      fail("BigRational: cannot parse '" + s + "'");
    mpz_t pow;
    mpz_init_set_ui(pow, 10);
    mpz_pow_ui(pow, pow, frac_len);
    mpz_mul(mpq_denref(q_), mpq_denref(q_), pow);
    mpz_clear(pow);
    mpq_canonicalize(q_);
    return;
  }
  if (mpq_set_str(q_, s.c_str(), 10) != 0) fail("BigRational: cannot parse '" + s + "'");
  if (mpz_sgn(mpq_denref(q_)) == 0) fail("BigRational: zero denominator in '" + s + "'");
  mpq_canonicalize(q_);
}

BigRational BigRational::from_pow2(long e) {
  BigRational r(1);
  if (e >= 0) {
    mpz_mul_2exp(mpq_numref(r.q_), mpq_numref(r.q_), static_cast<mp_bitcnt_t>(e));
  } else {
    mpz_mul_2exp(mpq_denref(r.q_), mpq_denref(r.q_), static_cast<mp_bitcnt_t>(-e));
  }
  mpq_canonicalize(r.q_);
  return r;
}

BigRational& BigRational::operator/=(const BigRational& o) {
  if (o.is_zero()) throw std::domain_error("BigRational: division by zero");
  mpq_div(q_, q_, o.q_);
  return *this;
}

BigRational BigRational::pow(long e) const {
  if (e == 0) return BigRational(1);
  if (is_zero()) {
    if (e < 0) throw std::domain_error("BigRational: 0^negative");
    return BigRational(0);
  }
  BigRational base(*this);
  if (e < 0) {
    BigRational one(1);
    base = one / base;
    e = -e;
  }
  BigRational acc(1);
  while (e > 0) {
    if (e & 1) acc *= base;
    base *= base;
    e >>= 1;
  }
  return acc;
}

std::string BigRational::to_string() const {
  char* cstr = mpq_get_str(nullptr, 10, q_);
  std::string s(cstr);
  void (*freefunc)(void*, size_t);
  mp_get_memory_functions(nullptr, nullptr, &freefunc);
  freefunc(cstr, s.size() + 1);
  return s;
}

std::string BigRational::to_decimal_string(int digits) const {
  if (digits < 0) throw std::invalid_argument("to_decimal_string: negative digits");
  mpz_t num, scaled, rem, pow;
  mpz_init_set(num, mpq_numref(q_));
  bool neg = mpz_sgn(num) < 0;
  mpz_abs(num, num);
  mpz_init_set_ui(pow, 10);
  mpz_pow_ui(pow, pow, static_cast<unsigned long>(digits));
  mpz_init(scaled);
  mpz_init(rem);
  mpz_mul(scaled, num, pow);
  // round to nearest: (num*10^d + den/2) / den, ties away from zero
  mpz_t half;
  mpz_init_set(half, mpq_denref(q_));
  mpz_fdiv_q_ui(half, half, 2);
  mpz_add(scaled, scaled, half);
  mpz_fdiv_q(scaled, scaled, mpq_denref(q_));
  mpz_fdiv_qr(scaled, rem, scaled, pow);
  char* ip = mpz_get_str(nullptr, 10, scaled);
  char* fp = mpz_get_str(nullptr, 10, rem);
  std::string intpart(ip), fracpart(fp);
  void (*freefunc)(void*, size_t);
  mp_get_memory_functions(nullptr, nullptr, &freefunc);
  freefunc(ip, intpart.size() + 1);
  freefunc(fp, fracpart.size() + 1);
  mpz_clears(num, scaled, rem, pow, half, nullptr);
  if (static_cast<int>(fracpart.size()) < digits)
    fracpart.insert(0, static_cast<size_t>(digits) - fracpart.size(), '0');
  std::string out = neg ? "-" : "";
  out += intpart;
  if (digits > 0) out += "." + fracpart;
  return out;
}

long BigRational::num_as_long() const {
  if (!mpz_fits_slong_p(mpq_numref(q_))) throw std::overflow_error("numerator too large");
  return mpz_get_si(mpq_numref(q_));
}

long BigRational::den_as_long() const {
  if (!mpz_fits_slong_p(mpq_denref(q_))) throw std::overflow_error("denominator too large");
  return mpz_get_si(mpq_denref(q_));
}

std::ostream& operator<<(std::ostream& os, const BigRational& r) { return os << r.to_string(); }

BigRational harmonic(long n) {
  BigRational h(0);
  for (long i = 1; i <= n; ++i) h += BigRational(1, i);
  return h;
}

BigRational factorial(long n) {
  BigRational f(1);
  for (long i = 2; i <= n; ++i) f *= BigRational(i);
  return f;
}

BigRational catalan(long n) {
  // binom(2n, n)/(n+1)
  BigRational c(1);
  for (long i = 0; i < n; ++i) c *= BigRational(2 * (2 * i + 1), i + 2);
  return c;
}

}  // namespace fringe
