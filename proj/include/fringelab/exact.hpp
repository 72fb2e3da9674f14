#pragma once

#include <vector>

#include "fringelab/exppoly.hpp"
#include "fringelab/rational.hpp"
#include "fringelab/tree.hpp"

namespace fringe {

/// P(BST_{|t|} = t): probability that the random binary search tree on |t|
/// nodes has exactly the shape t. A path of l nodes gets 1/l!.
BigRational bst_shape_prob(const TreeShape& t);

struct ShapeProb {
  TreeShape shape;
  BigRational prob;
};

/// All binary shapes of size n with their exact BST probabilities
/// (sums to 1). Guarded at n <= 12 against Catalan growth.
std::vector<ShapeProb> bst_shape_distribution(long n);

/// P(CB_m = t) for the critical beta-splitting tree, m = leafcount(t).
BigRational cb_shape_prob(const TreeShape& t);

/// pi_t: probability that the trie on m = leafcount(t) strings compresses
/// to t with root degree != 1. Exact for rational p, floating otherwise.
BigRational pi_t(const TreeShape& t, const BigRational& p);
double pi_t(const TreeShape& t, double p);

/// Generating function G_t(x) = F_{C'(t)}(x) over trees contracting to t;
/// memoized by oriented shape code. Satisfies G_t(0) = 0.
ExpPoly g_poly(const TreeShape& t);

/// Limit of N_t(compressed BST_n)/n, exactly: 1/3 for the leaf, otherwise
/// integral_0^1 (1-x)^2 G_{tL}(x) G_{tR}(x) dx.
ExpValue beta_hat(const TreeShape& t);

/// Algebraically equivalent route integral_0^1 2x(1-x) G_t(x) dx,
/// kept separate as a cross-check of the recursion.
ExpValue beta_hat_alt(const TreeShape& t);

/// Per-node density of t-fringes in the extended BST:
/// 2/((k+1)(k+2)) * P(BST_k = t_internal) with k internal nodes.
/// The limiting fringe probability is half of this. Requires leafcount >= 2.
BigRational ebst_beta(const TreeShape& t);

/// Critical beta-splitting limits; both carry an implicit 1/pi^2 factor.
struct CbLimitValue {
  BigRational fringe_times_pi2;  // 3 h_{m-1} / (m(m-1)) * P(CB_m = t)
  BigRational qsin_times_pi2;    // 6 h_{m-1} / (m-1) * P(CB_m = t)
  double fringe() const;
  double qsin() const;
};
CbLimitValue cb_limit(const TreeShape& t);

/// Uniform full binary tree: limiting fringe probability 2^{1-2m}.
BigRational uniform_limit(const TreeShape& t);
/// Limiting Var(N_t)/n: 2^{1-2m} - (2m-1) 2^{3-4m}; requires m >= 2.
BigRational uniform_count_variance(const TreeShape& t);

/// All general binary shapes with n nodes (n <= 12), memoized.
const std::vector<TreeShape>& all_binary_shapes(long n);
/// All full binary shapes with m leaves (m <= 13).
std::vector<TreeShape> all_full_shapes(long m);

}  // namespace fringe
