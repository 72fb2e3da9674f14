#include "fringelab/exact.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>

namespace fringe {

namespace {

constexpr double kPi = 3.14159265358979323846;

// post-order subtree sizes
std::vector<long> subtree_sizes(const TreeShape& t) {
  std::vector<long> sz(static_cast<size_t>(t.size()), 0);
  std::vector<std::pair<int32_t, int>> stack = {{0, 0}};
  while (!stack.empty()) {
    auto& [v, stage] = stack.back();
    const TreeShape::Node& nd = t.node(v);
    if (stage == 0) {
      stage = 1;
      if (nd.left != -1) stack.emplace_back(nd.left, 0);
      if (nd.right != -1) stack.emplace_back(nd.right, 0);
    } else {
      long s = 1;
      if (nd.left != -1) s += sz[static_cast<size_t>(nd.left)];
      if (nd.right != -1) s += sz[static_cast<size_t>(nd.right)];
      sz[static_cast<size_t>(v)] = s;
      stack.pop_back();
    }
  }
  return sz;
}

std::vector<long> subtree_leafcounts(const TreeShape& t) {
  std::vector<long> lf(static_cast<size_t>(t.size()), 0);
  std::vector<std::pair<int32_t, int>> stack = {{0, 0}};
  while (!stack.empty()) {
    auto& [v, stage] = stack.back();
    const TreeShape::Node& nd = t.node(v);
    if (stage == 0) {
      stage = 1;
      if (nd.left != -1) stack.emplace_back(nd.left, 0);
      if (nd.right != -1) stack.emplace_back(nd.right, 0);
    } else {
      long s = 0;
      if (nd.left == -1 && nd.right == -1) s = 1;
      if (nd.left != -1) s += lf[static_cast<size_t>(nd.left)];
      if (nd.right != -1) s += lf[static_cast<size_t>(nd.right)];
      lf[static_cast<size_t>(v)] = s;
      stack.pop_back();
    }
  }
  return lf;
}

}  // namespace

BigRational bst_shape_prob(const TreeShape& t) {
  std::vector<long> sz = subtree_sizes(t);
  BigRational p(1);
  for (long v = 0; v < t.size(); ++v) p /= BigRational(sz[static_cast<size_t>(v)]);
  return p;
}

const std::vector<TreeShape>& all_binary_shapes(long n) {
  if (n < 0 || n > 12)
    throw std::invalid_argument("all_binary_shapes: n out of range (Catalan growth guard)");
  static std::mutex mu;
  static std::map<long, std::vector<TreeShape>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  // build bottom-up so recursion is unnecessary
  for (long k = 0; k <= n; ++k) {
    if (cache.count(k)) continue;
    std::vector<TreeShape> shapes;
    if (k == 0) {
      cache.emplace(k, std::move(shapes));
      continue;
    }
    for (long i = 0; i <= k - 1; ++i) {
      long j = k - 1 - i;
      const auto& lefts = cache.at(i);
      const auto& rights = cache.at(j);
      if (i == 0 && j == 0) {
        shapes.push_back(TreeShape::leaf());
      } else if (i == 0) {
        for (const auto& r : rights) shapes.push_back(TreeShape::join(nullptr, &r));
      } else if (j == 0) {
        for (const auto& l : lefts) shapes.push_back(TreeShape::join(&l, nullptr));
      } else {
        for (const auto& l : lefts)
          for (const auto& r : rights) shapes.push_back(TreeShape::join(&l, &r));
      }
    }
    cache.emplace(k, std::move(shapes));
  }
  return cache.at(n);
}

std::vector<TreeShape> all_full_shapes(long m) {
  if (m < 1 || m > 13) throw std::invalid_argument("all_full_shapes: m out of range");
  if (m == 1) return {TreeShape::leaf()};
  std::vector<TreeShape> out;
  for (const TreeShape& t : all_binary_shapes(m - 1)) out.push_back(extend(t));
  return out;
}

std::vector<ShapeProb> bst_shape_distribution(long n) {
  if (n < 1 || n > 12)
    throw std::invalid_argument("bst_shape_distribution: n out of range (guard n <= 12)");
  std::vector<ShapeProb> out;
  for (const TreeShape& t : all_binary_shapes(n)) out.push_back({t, bst_shape_prob(t)});
  return out;
}

BigRational cb_shape_prob(const TreeShape& t) {
  if (!t.is_full()) throw std::invalid_argument("cb_shape_prob: tree is not full binary");
  std::vector<long> lf = subtree_leafcounts(t);
  BigRational p(1);
  for (long v = 0; v < t.size(); ++v) {
    const TreeShape::Node& nd = t.node(v);
    if (nd.left == -1) continue;
    long m = lf[static_cast<size_t>(v)];
    long i = lf[static_cast<size_t>(nd.left)];
    // split weight (1/i + 1/(m-i)) / (2 h_{m-1})
    p *= (BigRational(1, i) + BigRational(1, m - i)) / (BigRational(2) * harmonic(m - 1));
  }
  return p;
}

namespace {

template <typename Num>
Num pi_t_impl(const TreeShape& t, const Num& p, const Num& one) {
  TreeMetrics mm = metrics(t);
  Num q = one - p;
  Num result = one;
  for (long i = 2; i <= mm.leafcount; ++i) result = result * Num(i);
  Num qp = one;
  for (long i = 0; i < mm.lpl; ++i) qp = qp * q;
  for (long i = 0; i < mm.rpl; ++i) qp = qp * p;
  result = result * qp;
  for (const auto& [k, nu_k] : mm.nu) {
    Num pk = one, qk = one;
    for (long i = 0; i < k; ++i) {
      pk = pk * p;
      qk = qk * q;
    }
    Num factor = one - (qk + pk);
    for (long i = 0; i < nu_k; ++i) result = result / factor;
  }
  return result;
}

}  // namespace

BigRational pi_t(const TreeShape& t, const BigRational& p) {
  return pi_t_impl<BigRational>(t, p, BigRational(1));
}

double pi_t(const TreeShape& t, double p) { return pi_t_impl<double>(t, p, 1.0); }

namespace {

std::mutex g_memo_mutex;
std::map<std::string, ExpPoly> g_memo;

ExpPoly g_poly_at(const TreeShape& t, int32_t v) {
  const TreeShape::Node& nd = t.node(v);
  if ((nd.left == -1) != (nd.right == -1))
    throw std::invalid_argument("g_poly: tree is not full binary");
  std::string key;
  {
    // local preorder code of the subtree
    std::vector<int32_t> stack = {v};
    while (!stack.empty()) {
      int32_t u = stack.back();
      stack.pop_back();
      const TreeShape::Node& un = t.node(u);
      key += (un.left == -1) ? '0' : '1';
      if (un.right != -1) stack.push_back(un.right);
      if (un.left != -1) stack.push_back(un.left);
    }
  }
  {
    std::lock_guard<std::mutex> lock(g_memo_mutex);
    auto it = g_memo.find(key);
    if (it != g_memo.end()) return it->second;
  }
  ExpPoly result;
  if (nd.left == -1) {
    // G_leaf = (e^{2x} - 1)/2
    result = ExpPoly::term(2, Poly{BigRational(1, 2)});
    result += ExpPoly::constant(BigRational(-1, 2));
  } else {
    result = kernel_integral(g_poly_at(t, nd.left) * g_poly_at(t, nd.right));
  }
  // all exponents arising here are even and nonnegative
  for (const auto& term : result.terms())
    if (term.first < 0 || term.first % 2 != 0)
      throw std::logic_error("g_poly: odd exponent in recursion");
  std::lock_guard<std::mutex> lock(g_memo_mutex);
  return g_memo.emplace(std::move(key), std::move(result)).first->second;
}

}  // namespace

ExpPoly g_poly(const TreeShape& t) { return g_poly_at(t, 0); }

ExpValue beta_hat(const TreeShape& t) {
  if (!t.is_full()) throw std::invalid_argument("beta_hat: tree is not full binary");
  if (t.is_leaf()) return ExpValue(BigRational(1, 3));
  const TreeShape::Node& root = t.node(0);
  ExpPoly gl = g_poly_at(t, root.left);
  ExpPoly gr = g_poly_at(t, root.right);
  // (1-x)^2 = 1 - 2x + x^2
  ExpPoly weight = ExpPoly::term(0, Poly{BigRational(1), BigRational(-2), BigRational(1)});
  return integral01(weight * gl * gr);
}

ExpValue beta_hat_alt(const TreeShape& t) {
  if (!t.is_full()) throw std::invalid_argument("beta_hat_alt: tree is not full binary");
  if (t.is_leaf()) return ExpValue(BigRational(1, 3));
  ExpPoly weight = ExpPoly::term(0, Poly{BigRational(0), BigRational(2), BigRational(-2)});
  return integral01(weight * g_poly(t));
}

BigRational ebst_beta(const TreeShape& t) {
  if (!t.is_full() || t.leafcount() < 2)
    throw std::invalid_argument("ebst_beta: need a full tree with at least 2 leaves");
  TreeShape internal = delete_leaves(t);
  long k = internal.size();
  return BigRational(2) / (BigRational(k + 1) * BigRational(k + 2)) * bst_shape_prob(internal);
}

double CbLimitValue::fringe() const { return fringe_times_pi2.to_double() / (kPi * kPi); }

double CbLimitValue::qsin() const { return qsin_times_pi2.to_double() / (kPi * kPi); }

CbLimitValue cb_limit(const TreeShape& t) {
  long m = t.leafcount();
  if (!t.is_full() || m < 2)
    throw std::invalid_argument("cb_limit: need a full tree with at least 2 leaves");
  BigRational p = cb_shape_prob(t);
  BigRational h = harmonic(m - 1);
  CbLimitValue v;
  v.fringe_times_pi2 = BigRational(3) * h / (BigRational(m) * BigRational(m - 1)) * p;
  v.qsin_times_pi2 = BigRational(6) * h / BigRational(m - 1) * p;
  return v;
}

BigRational uniform_limit(const TreeShape& t) {
  if (!t.is_full()) throw std::invalid_argument("uniform_limit: tree is not full binary");
  return BigRational::from_pow2(1 - 2 * t.leafcount());
}

BigRational uniform_count_variance(const TreeShape& t) {
  long m = t.leafcount();
  if (!t.is_full() || m < 2)
    throw std::invalid_argument("uniform_count_variance: need a full tree with m >= 2");
  return BigRational::from_pow2(1 - 2 * m) -
         BigRational(2 * m - 1) * BigRational::from_pow2(3 - 4 * m);
}

}  // namespace fringe
