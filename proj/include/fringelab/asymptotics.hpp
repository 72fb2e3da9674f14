#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "fringelab/exact.hpp"
#include "fringelab/model.hpp"
#include "fringelab/tree.hpp"

namespace fringe {

struct Periodicity {
  bool periodic = false;
  long a = 0, b = 0;  // log p / log q = a/b in lowest terms
  double d = 0;       // gcd(-log p, -log q)
};

/// Numeric periodicity detection: searches coprime a, b <= max_denominator
/// with |log p / log q - a/b| <= 1e-12 via continued fractions. The
/// arithmetic property is undecidable from floats, so callers may override
/// with an explicit (a, b).
Periodicity detect_period(double p, long max_denominator = 1000000);

struct SourceParams {
  double p = 0.5, q = 0.5;
  double H = 0;  // entropy in nats
  Periodicity per;

  static SourceParams make(double p, long max_denominator = 1000000);
  /// Explicit periodic override with log p / log q = a/b.
  static SourceParams with_period(double p, long a, long b);
};

/// Constant term plus truncated Fourier expansion of a d-periodic function;
/// coefficient c_{-k} = conj(c_k) is implicit, so evaluations are real.
struct PeriodicConstant {
  double constant = 0;
  double period = 0;  // 0 means aperiodic: the function is constant
  std::vector<std::complex<double>> coef;  // coef[k-1] = c_k, k = 1..K
  double tail_bound = 0;  // magnitude estimate of the first dropped pair

  double eval(double x) const;
  PeriodicConstant scaled(double f) const;
};

/// Mellin transforms of the Poisson-model mean/variance/covariance
/// functionals for the fringe count of t in a Patricia trie.
class MellinKernel {
 public:
  MellinKernel(const TreeShape& t, double p);

  long m() const { return m_; }
  double pi_value() const { return pi_t_; }

  std::complex<double> mellin_E(std::complex<double> s) const;  // pi_t G(m+s)/m!
  std::complex<double> mellin_C(std::complex<double> s) const;  // -s M_E(s)
  /// Three-part variance transform; the alternating k-series is summed in
  /// consecutive pairs with tolerance `tol` and a divergence guard.
  std::complex<double> mellin_V(std::complex<double> s, double tol = 1e-14) const;

 private:
  long m_;
  double pi_t_;
  double p_, q_;
  double log_m_fact_;
};

enum class PsiKind { E, V, C };

/// The psi_X oscillation function: aperiodic -> the constant M_X(-1);
/// periodic -> Fourier coefficients M_X(-1 - 2 pi k i / d), |k| <= k_max.
PeriodicConstant psi(const MellinKernel& kernel, PsiKind kind, const SourceParams& sp,
                     int k_max = 8);

/// x -> H^{-1} psi_E(x), the per-node mean density: E N_t(n)/n is this at
/// log n. Constant part pi_t/(m(m-1)H).
PeriodicConstant patricia_mean_const(const TreeShape& t, const SourceParams& sp, int k_max = 8);

/// x -> H^{-1} psi_V(x) - H^{-2} psi_C(x)^2, the per-node variance density;
/// the square is expanded by coefficient convolution before subtracting.
PeriodicConstant patricia_var_const(const TreeShape& t, const SourceParams& sp, int k_max = 8);

/// A limiting constant in whichever exact form the model admits.
struct LimitValue {
  double value = 0;      // constant part (periodic models: k = 0 term)
  std::string symbolic;  // empty when no exact closed form is carried
  std::optional<PeriodicConstant> periodic;   // patricia
  std::optional<BigRational> exact;           // ebst, uniform
  std::optional<BigRational> exact_over_pi2;  // cb: value = exact / pi^2
  std::optional<ExpValue> exact_exp;          // cbst
};

/// Limiting fringe probability P(T* = t) and extended-fringe probability
/// q(T; t) for the five full-binary-tree models. `sp` is required for
/// patricia and ignored otherwise.
LimitValue limit_fringe(Model model, const TreeShape& t, const SourceParams* sp = nullptr);
LimitValue limit_qsin(Model model, const TreeShape& t, const SourceParams* sp = nullptr);

}  // namespace fringe
