#include "fringelab/exppoly.hpp"

#include <cmath>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace fringe {

Poly poly_normalize(Poly p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
  return p;
}

Poly poly_add(const Poly& a, const Poly& b) {
  Poly out(std::max(a.size(), b.size()));
  for (size_t i = 0; i < out.size(); ++i) {
    if (i < a.size()) out[i] += a[i];
    if (i < b.size()) out[i] += b[i];
  }
  return poly_normalize(std::move(out));
}

Poly poly_scale(const Poly& a, const BigRational& c) {
  if (c.is_zero()) return {};
  Poly out(a);
  for (auto& x : out) x *= c;
  return out;
}

Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly out(a.size() + b.size() - 1);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return poly_normalize(std::move(out));
}

Poly poly_derivative(const Poly& a) {
  if (a.size() <= 1) return {};
  Poly out(a.size() - 1);
  for (size_t i = 1; i < a.size(); ++i) out[i - 1] = a[i] * BigRational(static_cast<long>(i));
  return poly_normalize(std::move(out));
}

Poly poly_antiderivative(const Poly& a) {
  if (a.empty()) return {};
  Poly out(a.size() + 1);
  for (size_t i = 0; i < a.size(); ++i)
    out[i + 1] = a[i] / BigRational(static_cast<long>(i) + 1);
  return poly_normalize(std::move(out));
}

BigRational poly_eval(const Poly& a, const BigRational& x) {
  BigRational acc(0);
  for (size_t i = a.size(); i-- > 0;) {
    acc *= x;
    acc += a[i];
  }
  return acc;
}

ExpValue::ExpValue(BigRational rational_part) {
  if (!rational_part.is_zero()) coeffs_[0] = std::move(rational_part);
}

void ExpValue::add_term(long k, const BigRational& q) {
  if (k < 0) throw std::invalid_argument("ExpValue: negative exponent");
  auto it = coeffs_.find(k);
  if (it == coeffs_.end()) {
    if (!q.is_zero()) coeffs_.emplace(k, q);
    return;
  }
  it->second += q;
  if (it->second.is_zero()) coeffs_.erase(it);
}

ExpValue& ExpValue::operator+=(const ExpValue& o) {
  for (const auto& [k, q] : o.coeffs_) add_term(k, q);
  return *this;
}

ExpValue ExpValue::scaled(const BigRational& c) const {
  ExpValue out;
  if (c.is_zero()) return out;
  for (const auto& [k, q] : coeffs_) out.coeffs_.emplace(k, q * c);
  return out;
}

namespace {

std::string rational_times_exp(const BigRational& q, long k, bool leading) {
  // renders |q|·e^k in the "3 e^4/256" style; sign handled by the caller
  BigRational a = q.sign() < 0 ? -q : q;
  std::string num = a.to_string();
  std::string out;
  auto slash = num.find('/');
  std::string numerator = slash == std::string::npos ? num : num.substr(0, slash);
  std::string denominator = slash == std::string::npos ? "" : num.substr(slash + 1);
  if (k == 0) {
    out = num;
  } else {
    if (numerator != "1") out = numerator + " ";
    out += "e^" + std::to_string(k);
    if (!denominator.empty()) out += "/" + denominator;
  }
  if (leading) return (q.sign() < 0 ? "-" : "") + out;
  return (q.sign() < 0 ? " - " : " + ") + out;
}

}  // namespace

std::string ExpValue::to_string() const {
  if (coeffs_.empty()) return "0";
  std::string out;
  bool leading = true;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    out += rational_times_exp(it->second, it->first, leading);
    leading = false;
  }
  return out;
}

double ExpValue::to_double() const {
  BigRational acc(0);
  for (const auto& [k, q] : coeffs_) acc += q * e_power_approx(k);
  return acc.to_double();
}

std::string ExpValue::to_decimal_string(int digits) const {
  BigRational acc(0);
  for (const auto& [k, q] : coeffs_) acc += q * e_power_approx(k);
  return acc.to_decimal_string(digits);
}

ExpPoly ExpPoly::constant(const BigRational& c) {
  ExpPoly f;
  if (!c.is_zero()) f.terms_[0] = Poly{c};
  return f;
}

ExpPoly ExpPoly::term(long k, Poly p) {
  if (k < 0) throw std::invalid_argument("ExpPoly: negative exponent");
  ExpPoly f;
  p = poly_normalize(std::move(p));
  if (!p.empty()) f.terms_[k] = std::move(p);
  return f;
}

void ExpPoly::insert_term(long k, Poly p) {
  if (p.empty()) return;
  auto it = terms_.find(k);
  if (it == terms_.end()) {
    terms_.emplace(k, std::move(p));
    return;
  }
  it->second = poly_add(it->second, p);
  if (it->second.empty()) terms_.erase(it);
}

ExpPoly& ExpPoly::operator+=(const ExpPoly& o) {
  for (const auto& [k, p] : o.terms_) insert_term(k, p);
  return *this;
}

ExpPoly operator*(const ExpPoly& a, const ExpPoly& b) {
  ExpPoly out;
  for (const auto& [ka, pa] : a.terms_)
    for (const auto& [kb, pb] : b.terms_) out.insert_term(ka + kb, poly_mul(pa, pb));
  return out;
}

ExpPoly ExpPoly::scaled(const BigRational& c) const {
  ExpPoly out;
  if (c.is_zero()) return out;
  for (const auto& [k, p] : terms_) out.terms_[k] = poly_scale(p, c);
  return out;
}

ExpPoly ExpPoly::derivative() const {
  // (p e^{kx})' = (p' + k p) e^{kx}
  ExpPoly out;
  for (const auto& [k, p] : terms_)
    out.insert_term(k, poly_add(poly_derivative(p), poly_scale(p, BigRational(k))));
  return out;
}

BigRational ExpPoly::eval_at_zero() const {
  BigRational acc(0);
  for (const auto& [k, p] : terms_)
    if (!p.empty()) acc += p[0];
  return acc;
}

std::string ExpPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    if (!first) os << " + ";
    first = false;
    os << "(";
    const Poly& p = it->second;
    bool first_coef = true;
    for (size_t j = p.size(); j-- > 0;) {
      if (p[j].is_zero()) continue;
      if (!first_coef) os << " + ";
      first_coef = false;
      os << p[j].to_string();
      if (j > 0) os << "*x^" << j;
    }
    os << ")";
    if (it->first != 0) os << "*e^(" << it->first << "x)";
  }
  return os.str();
}

double ExpPoly::eval(double x) const {
  double acc = 0;
  for (const auto& [k, p] : terms_) {
    double pv = 0;
    for (size_t j = p.size(); j-- > 0;) pv = pv * x + p[j].to_double();
    acc += pv * std::exp(static_cast<double>(k) * x);
  }
  return acc;
}

namespace {

// Q with (e^{ay} Q(y))' = p(y) e^{ay}: Q = p/a - p'/a^2 + p''/a^3 - ...
Poly exp_antiderivative(const Poly& p, long a) {
  Poly q;
  Poly deriv = p;
  BigRational inv_a = BigRational(1) / BigRational(a);
  BigRational factor = inv_a;
  while (!deriv.empty()) {
    q = poly_add(q, poly_scale(deriv, factor));
    deriv = poly_derivative(deriv);
    factor = -(factor * inv_a);
  }
  return q;
}

}  // namespace

ExpPoly kernel_integral(const ExpPoly& f) {
  // e^{2x} * integral_0^x p(y) e^{(k-2)y} dy, term by term
  ExpPoly out;
  for (const auto& [k, p] : f.terms()) {
    if (k == 2) {
      out += ExpPoly::term(2, poly_antiderivative(p));
    } else {
      Poly q = exp_antiderivative(p, k - 2);
      BigRational q0 = q.empty() ? BigRational(0) : q[0];
      out += ExpPoly::term(k, std::move(q));
      out += ExpPoly::term(2, Poly{-q0});
    }
  }
  return out;
}

ExpValue integral01(const ExpPoly& f) {
  ExpValue out;
  for (const auto& [k, p] : f.terms()) {
    if (k == 0) {
      Poly anti = poly_antiderivative(p);
      out.add_term(0, poly_eval(anti, BigRational(1)));
    } else {
      Poly q = exp_antiderivative(p, k);
      out.add_term(k, poly_eval(q, BigRational(1)));
      out.add_term(0, -(q.empty() ? BigRational(0) : q[0]));
    }
  }
  return out;
}

const BigRational& e_power_approx(long k) {
  static std::mutex mu;
  static std::map<long, BigRational> cache;
  if (k < 0) throw std::invalid_argument("e_power_approx: negative exponent");
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(k);
  if (it != cache.end()) return it->second;
  if (cache.find(1) == cache.end()) {
    // e = sum 1/j! to j = 120; tail < 1/120! ~ 1e-199
    BigRational e(0), term(1);
    for (long j = 0; j <= 120; ++j) {
      e += term;
      term /= BigRational(j + 1);
    }
    cache.emplace(0, BigRational(1));
    cache.emplace(1, std::move(e));
  }
  it = cache.find(k);
  if (it == cache.end()) it = cache.emplace(k, cache.at(1).pow(k)).first;
  return it->second;
}

}  // namespace fringe
