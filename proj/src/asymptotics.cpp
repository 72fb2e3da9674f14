#include "fringelab/asymptotics.hpp"

#include <cmath>
#include <stdexcept>

#include "fringelab/gammafn.hpp"

namespace fringe {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kPeriodTol = 1e-12;

long gcd_long(long a, long b) {
  while (b) {
    long t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace

Periodicity detect_period(double p, long max_denominator) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("detect_period: p must lie in (0,1)");
  if (max_denominator < 1) throw std::invalid_argument("detect_period: bad denominator cap");
  // beyond ~1e9 the 1e-12 tolerance is meaningless against double noise
  max_denominator = std::min(max_denominator, 1000000000L);
  double q = 1.0 - p;
  double ratio = std::log(p) / std::log(q);
  // continued-fraction convergents a/b of ratio
  double x = ratio;
  long h0 = 1, h1 = 0;  // numerators
  long k0 = 0, k1 = 1;  // denominators
  for (int iter = 0; iter < 64; ++iter) {
    double fl = std::floor(x);
    // h0 >= 1 throughout, so any partial quotient beyond the cap would push
    // the numerator beyond it too; bailing here also keeps products in range
    if (fl > static_cast<double>(max_denominator)) break;
    long ai = static_cast<long>(fl);
    long h2 = ai * h0 + h1;
    long k2 = ai * k0 + k1;
    if (h2 > max_denominator || k2 > max_denominator) break;
    h1 = h0;
    h0 = h2;
    k1 = k0;
    k0 = k2;
    if (h0 > 0 && k0 > 0 &&
        std::abs(ratio - static_cast<double>(h0) / static_cast<double>(k0)) <= kPeriodTol) {
      long g = gcd_long(h0, k0);
      Periodicity per;
      per.periodic = true;
      per.a = h0 / g;
      per.b = k0 / g;
      per.d = -std::log(p) / static_cast<double>(per.a);
      return per;
    }
    double frac = x - fl;
    if (frac < 1e-18) break;
    x = 1.0 / frac;
  }
  return {};
}

SourceParams SourceParams::make(double p, long max_denominator) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("SourceParams: p must lie in (0,1)");
  SourceParams sp;
  sp.p = p;
  sp.q = 1.0 - p;
  sp.H = -p * std::log(p) - sp.q * std::log(sp.q);
  sp.per = detect_period(p, max_denominator);
  return sp;
}

SourceParams SourceParams::with_period(double p, long a, long b) {
  SourceParams sp = make(p, 1);
  if (a < 1 || b < 1) throw std::invalid_argument("with_period: a, b must be positive");
  long g = gcd_long(a, b);
  sp.per.periodic = true;
  sp.per.a = a / g;
  sp.per.b = b / g;
  sp.per.d = -std::log(p) / static_cast<double>(sp.per.a);
  double d_from_q = -std::log(sp.q) / static_cast<double>(sp.per.b);
  if (std::abs(sp.per.d - d_from_q) > 1e-9 * sp.per.d)
    throw std::invalid_argument("with_period: log p/log q is not a/b for this p");
  return sp;
}

double PeriodicConstant::eval(double x) const {
  double v = constant;
  if (period <= 0) return v;
  for (size_t k = 1; k <= coef.size(); ++k) {
    double arg = 2.0 * kPi * static_cast<double>(k) * x / period;
    v += 2.0 * (coef[k - 1] * std::polar(1.0, arg)).real();
  }
  return v;
}

PeriodicConstant PeriodicConstant::scaled(double f) const {
  PeriodicConstant out(*this);
  out.constant *= f;
  out.tail_bound *= std::abs(f);
  for (auto& c : out.coef) c *= f;
  return out;
}

MellinKernel::MellinKernel(const TreeShape& t, double p) {
  if (!t.is_full() || t.leafcount() < 2)
    throw std::invalid_argument("MellinKernel: need a full tree with at least 2 leaves");
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("MellinKernel: p must lie in (0,1)");
  m_ = t.leafcount();
  pi_t_ = pi_t(t, p);
  p_ = p;
  q_ = 1.0 - p;
  log_m_fact_ = std::lgamma(static_cast<double>(m_) + 1.0);
}

std::complex<double> MellinKernel::mellin_E(std::complex<double> s) const {
  return pi_t_ * std::exp(log_gamma(static_cast<double>(m_) + s) - log_m_fact_);
}

std::complex<double> MellinKernel::mellin_C(std::complex<double> s) const {
  return -s * mellin_E(s);
}

std::complex<double> MellinKernel::mellin_V(std::complex<double> s, double tol) const {
  if (s.real() <= -static_cast<double>(m_))
    throw std::domain_error("mellin_V: need Re s > -m");
  if (2.0 * static_cast<double>(m_) + s.real() > 170.0)
    throw std::domain_error("mellin_V: leaf count too large for direct Gamma evaluation");
  const double md = static_cast<double>(m_);
  const std::complex<double> gamma_2m_s = gamma(2.0 * md + s);
  const double pisq_over_mfact2 = pi_t_ * pi_t_ * std::exp(-2.0 * log_m_fact_);

  std::complex<double> first = mellin_E(s);
  std::complex<double> second =
      pisq_over_mfact2 * std::exp(-(2.0 * md + s) * std::log(2.0)) * gamma_2m_s;

  // alternating series: term_k = (-1)^k Gamma(2m+s+k)/k! * r_{m+k} with
  // r_j = (p^j + q^j)/(1 - p^j - q^j); summed in consecutive pairs
  std::complex<double> sum = 0.0;
  std::complex<double> t_k = gamma_2m_s;  // Gamma(2m+s+k)/k! at k = 0
  double p_pow = std::pow(p_, md);
  double q_pow = std::pow(q_, md);
  const long max_terms = 10000;
  long k = 0;
  int small_streak = 0;
  for (;;) {
    std::complex<double> pair = 0.0;
    for (int half = 0; half < 2; ++half) {
      double sj = p_pow + q_pow;
      double r = sj / (1.0 - sj);
      std::complex<double> term = t_k * r;
      if (k % 2 == 1) term = -term;
      pair += term;
      t_k *= (2.0 * md + s + static_cast<double>(k)) / static_cast<double>(k + 1);
      p_pow *= p_;
      q_pow *= q_;
      ++k;
    }
    sum += pair;
    // consecutive pairs can cancel exactly (p = q), so require two small
    // pairs in a row before stopping
    if (std::abs(pair) < tol * (1.0 + std::abs(sum))) {
      if (++small_streak >= 2) break;
    } else {
      small_streak = 0;
    }
    if (k >= max_terms)
      throw std::runtime_error("mellin_V: series did not converge within 10^4 terms");
  }
  return first - second - 2.0 * pisq_over_mfact2 * sum;
}

PeriodicConstant psi(const MellinKernel& kernel, PsiKind kind, const SourceParams& sp,
                     int k_max) {
  auto transform = [&](std::complex<double> s) {
    switch (kind) {
      case PsiKind::E: return kernel.mellin_E(s);
      case PsiKind::C: return kernel.mellin_C(s);
      case PsiKind::V: return kernel.mellin_V(s);
    }
    throw std::logic_error("psi: unhandled kind");
  };
  PeriodicConstant out;
  std::complex<double> at_minus1 = transform(-1.0);
  out.constant = at_minus1.real();
  if (!sp.per.periodic) return out;
  out.period = sp.per.d;
  double theta = 2.0 * kPi / sp.per.d;
  out.coef.reserve(static_cast<size_t>(k_max));
  for (int k = 1; k <= k_max; ++k)
    out.coef.push_back(transform(std::complex<double>(-1.0, -theta * static_cast<double>(k))));
  // reported truncation estimate: the first dropped coefficient pair
  out.tail_bound =
      2.0 * std::abs(transform(std::complex<double>(-1.0, -theta * (k_max + 1.0))));
  return out;
}

PeriodicConstant patricia_mean_const(const TreeShape& t, const SourceParams& sp, int k_max) {
  MellinKernel kernel(t, sp.p);
  return psi(kernel, PsiKind::E, sp, k_max).scaled(1.0 / sp.H);
}

namespace {

// Fourier square of a truncated series, coefficients kept to the same k_max:
// s_k = sum_{i+j=k, |i|,|j| <= K} c_i c_j with c_0 real and c_{-i} = conj(c_i).
PeriodicConstant fourier_square(const PeriodicConstant& f) {
  PeriodicConstant out;
  out.period = f.period;
  int K = static_cast<int>(f.coef.size());
  auto coef_at = [&](int i) -> std::complex<double> {
    if (i == 0) return f.constant;
    if (i > 0) return f.coef[static_cast<size_t>(i - 1)];
    return std::conj(f.coef[static_cast<size_t>(-i - 1)]);
  };
  // k = 0
  std::complex<double> s0 = 0.0;
  for (int i = -K; i <= K; ++i) s0 += coef_at(i) * coef_at(-i);
  out.constant = s0.real();
  for (int k = 1; k <= K; ++k) {
    std::complex<double> sk = 0.0;
    for (int i = -K; i <= K; ++i) {
      int j = k - i;
      if (j < -K || j > K) continue;
      sk += coef_at(i) * coef_at(j);
    }
    out.coef.push_back(sk);
  }
  return out;
}

}  // namespace

PeriodicConstant patricia_var_const(const TreeShape& t, const SourceParams& sp, int k_max) {
  MellinKernel kernel(t, sp.p);
  PeriodicConstant psi_v = psi(kernel, PsiKind::V, sp, k_max);
  PeriodicConstant psi_c = psi(kernel, PsiKind::C, sp, k_max);
  double inv_h = 1.0 / sp.H;
  if (!sp.per.periodic) {
    PeriodicConstant out;
    out.constant = inv_h * psi_v.constant - inv_h * inv_h * psi_c.constant * psi_c.constant;
    return out;
  }
  PeriodicConstant c2 = fourier_square(psi_c);
  PeriodicConstant out;
  out.period = sp.per.d;
  out.constant = inv_h * psi_v.constant - inv_h * inv_h * c2.constant;
  out.tail_bound = inv_h * psi_v.tail_bound;
  for (size_t k = 0; k < psi_v.coef.size(); ++k)
    out.coef.push_back(inv_h * psi_v.coef[k] - inv_h * inv_h * c2.coef[k]);
  return out;
}

namespace {

LimitValue leaf_limit(bool qsin) {
  LimitValue v;
  v.exact = qsin ? BigRational(1) : BigRational(1, 2);
  v.value = v.exact->to_double();
  v.symbolic = v.exact->to_string();
  return v;
}

LimitValue patricia_limit(const TreeShape& t, const SourceParams* sp, bool qsin) {
  if (sp == nullptr) throw std::invalid_argument("limit: patricia needs source parameters");
  long m = t.leafcount();
  PeriodicConstant mean = patricia_mean_const(t, *sp);
  LimitValue v;
  // fringe: psi_E/(2H); extended: exactly 2m times that
  v.periodic = mean.scaled(qsin ? static_cast<double>(m) : 0.5);
  v.value = v.periodic->constant;
  return v;
}

}  // namespace

LimitValue limit_fringe(Model model, const TreeShape& t, const SourceParams* sp) {
  if (!t.is_full()) throw std::invalid_argument("limit_fringe: t must be full binary");
  if (t.is_leaf()) return leaf_limit(false);
  LimitValue v;
  switch (model) {
    case Model::patricia:
      return patricia_limit(t, sp, false);
    case Model::ebst: {
      v.exact = ebst_beta(t) / BigRational(2);
      v.value = v.exact->to_double();
      v.symbolic = v.exact->to_string();
      return v;
    }
    case Model::cbst: {
      v.exact_exp = beta_hat(t).scaled(BigRational(3, 2));
      v.value = v.exact_exp->to_double();
      v.symbolic = v.exact_exp->to_string();
      return v;
    }
    case Model::beta_split: {
      v.exact_over_pi2 = cb_limit(t).fringe_times_pi2;
      v.value = v.exact_over_pi2->to_double() / (kPi * kPi);
      v.symbolic = "(" + v.exact_over_pi2->to_string() + ")/pi^2";
      return v;
    }
    case Model::uniform_full: {
      v.exact = uniform_limit(t);
      v.value = v.exact->to_double();
      v.symbolic = v.exact->to_string();
      return v;
    }
    default:
      throw std::invalid_argument("limit_fringe: model " + model_name(model) +
                                  " has no fringe-limit dispatch");
  }
}

LimitValue limit_qsin(Model model, const TreeShape& t, const SourceParams* sp) {
  if (!t.is_full()) throw std::invalid_argument("limit_qsin: t must be full binary");
  if (t.is_leaf()) return leaf_limit(true);
  long m = t.leafcount();
  LimitValue v;
  switch (model) {
    case Model::patricia:
      return patricia_limit(t, sp, true);
    case Model::ebst: {
      v.exact = BigRational(m) * ebst_beta(t);
      v.value = v.exact->to_double();
      v.symbolic = v.exact->to_string();
      return v;
    }
    case Model::cbst: {
      v.exact_exp = beta_hat(t).scaled(BigRational(3 * m));
      v.value = v.exact_exp->to_double();
      v.symbolic = v.exact_exp->to_string();
      return v;
    }
    case Model::beta_split: {
      v.exact_over_pi2 = cb_limit(t).qsin_times_pi2;
      v.value = v.exact_over_pi2->to_double() / (kPi * kPi);
      v.symbolic = "(" + v.exact_over_pi2->to_string() + ")/pi^2";
      return v;
    }
    case Model::uniform_full: {
      v.exact = BigRational(m) * BigRational::from_pow2(2 - 2 * m);
      v.value = v.exact->to_double();
      v.symbolic = v.exact->to_string();
      return v;
    }
    default:
      throw std::invalid_argument("limit_qsin: model " + model_name(model) +
                                  " has no fringe-limit dispatch");
  }
}

}  // namespace fringe
