#include "fringelab/samplers.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace fringe {

Model parse_model(const std::string& name) {
  if (name == "trie") return Model::trie;
  if (name == "patricia") return Model::patricia;
  if (name == "bst") return Model::bst;
  if (name == "ebst") return Model::ebst;
  if (name == "cbst") return Model::cbst;
  if (name == "beta" || name == "cb" || name == "beta_split") return Model::beta_split;
  if (name == "uniform" || name == "uniform_full") return Model::uniform_full;
  throw std::invalid_argument("unknown model '" + name + "'");
}

std::string model_name(Model m) {
  switch (m) {
    case Model::trie: return "trie";
    case Model::patricia: return "patricia";
    case Model::bst: return "bst";
    case Model::ebst: return "ebst";
    case Model::cbst: return "cbst";
    case Model::beta_split: return "cb";
    case Model::uniform_full: return "uniform";
  }
  return "?";
}

void ModelSpec::validate() const {
  if (n < 1) throw std::invalid_argument("ModelSpec: n must be >= 1");
  if (model == Model::trie || model == Model::patricia) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("ModelSpec: p must lie in (0,1)");
  }
  if (model == Model::beta_split) {
    if (!(beta > -2.0)) throw std::invalid_argument("ModelSpec: beta must be > -2");
  }
}

namespace {

uint64_t splitmix64(uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

RandomSource::RandomSource(uint64_t seed) : seed_(seed) {
  uint64_t sm = seed;
  for (auto& s : s_) s = splitmix64(sm);
}

uint64_t RandomSource::next_u64() {
  const uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

uint64_t RandomSource::uniform_below(uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("uniform_below: zero bound");
  if ((bound & (bound - 1)) == 0) return next_u64() & (bound - 1);
  uint64_t mask = ~0ULL >> std::countl_zero(bound - 1);
  for (;;) {
    uint64_t v = next_u64() & mask;
    if (v < bound) return v;
  }
}

double RandomSource::uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

namespace {

// inversion from 0; k < 64 so the pmf recurrence stays well-scaled
long binomial_small(long k, double prob, RandomSource& rng) {
  double u = rng.uniform01();
  double f = std::pow(1.0 - prob, static_cast<double>(k));
  double odds = prob / (1.0 - prob);
  double cum = 0.0;
  for (long j = 0; j <= k; ++j) {
    cum += f;
    if (u < cum) return j;
    f *= odds * static_cast<double>(k - j) / static_cast<double>(j + 1);
  }
  return k;  // guard against accumulated rounding
}

// inversion walking outward from the mode; exact ordering, O(sqrt(k pq))
// expected steps
long binomial_mode_walk(long k, double prob, RandomSource& rng) {
  long mode = static_cast<long>(std::floor((static_cast<double>(k) + 1.0) * prob));
  if (mode > k) mode = k;
  double log_fmode = std::lgamma(static_cast<double>(k) + 1.0) -
                     std::lgamma(static_cast<double>(mode) + 1.0) -
                     std::lgamma(static_cast<double>(k - mode) + 1.0) +
                     static_cast<double>(mode) * std::log(prob) +
                     static_cast<double>(k - mode) * std::log(1.0 - prob);
  double fmode = std::exp(log_fmode);
  double odds = prob / (1.0 - prob);
  double u = rng.uniform01();
  double cum = fmode;
  if (u < cum) return mode;
  double fhi = fmode, flo = fmode;
  long hi = mode, lo = mode;
  long last = mode;
  while (hi < k || lo > 0) {
    if (hi < k) {
      fhi *= odds * static_cast<double>(k - hi) / static_cast<double>(hi + 1);
      ++hi;
      cum += fhi;
      last = hi;
      if (u < cum) return hi;
    }
    if (lo > 0) {
      flo *= static_cast<double>(lo) / (odds * static_cast<double>(k - lo + 1));
      --lo;
      cum += flo;
      last = lo;
      if (u < cum) return lo;
    }
  }
  return last;  // rounding tail, probability ~1e-15
}

}  // namespace

long sample_binomial(long k, double prob, RandomSource& rng) {
  if (k < 0 || !(prob > 0.0 && prob < 1.0))
    throw std::invalid_argument("sample_binomial: bad arguments");
  if (k == 0) return 0;
  if (k < 64) return binomial_small(k, prob, rng);
  return binomial_mode_walk(k, prob, rng);
}

long sample_binomial_nondegenerate(long k, double prob, RandomSource& rng) {
  if (k < 2) throw std::invalid_argument("sample_binomial_nondegenerate: k must be >= 2");
  if (k < 64) {
    // direct inversion over {1,...,k-1}, renormalized
    double f0 = std::pow(1.0 - prob, static_cast<double>(k));
    double fk = std::pow(prob, static_cast<double>(k));
    double total = 1.0 - f0 - fk;
    double u = rng.uniform01() * total;
    double odds = prob / (1.0 - prob);
    double f = f0 * odds * static_cast<double>(k);  // pmf at 1
    double cum = 0.0;
    for (long j = 1; j <= k - 1; ++j) {
      cum += f;
      if (u < cum) return j;
      f *= odds * static_cast<double>(k - j) / static_cast<double>(j + 1);
    }
    return k - 1;
  }
  for (;;) {
    long v = binomial_mode_walk(k, prob, rng);
    if (v != 0 && v != k) return v;
  }
}

namespace {

// shared arena builder: tasks say which slot of which parent to fill
struct BuildSlot {
  long k;           // subproblem size parameter
  int32_t parent;   // -1 for root
  bool as_left;
};

class ArenaBuilder {
 public:
  int32_t emplace(int32_t parent, bool as_left) {
    int32_t idx = static_cast<int32_t>(nodes_.size());
    nodes_.push_back({});
    if (parent != -1) {
      if (as_left)
        nodes_[static_cast<size_t>(parent)].left = idx;
      else
        nodes_[static_cast<size_t>(parent)].right = idx;
    }
    return idx;
  }
  TreeShape take() { return TreeShape::from_nodes(std::move(nodes_)); }

 private:
  std::vector<TreeShape::Node> nodes_;
};

}  // namespace

TreeShape sample_trie(long n, double p, RandomSource& rng) {
  if (n < 1) throw std::invalid_argument("sample_trie: n must be >= 1");
  ArenaBuilder arena;
  std::vector<BuildSlot> stack = {{n, -1, false}};
  while (!stack.empty()) {
    BuildSlot s = stack.back();
    stack.pop_back();
    int32_t idx = arena.emplace(s.parent, s.as_left);
    if (s.k == 1) continue;
    long left = sample_binomial(s.k, 1.0 - p, rng);
    if (left == 0) {
      stack.push_back({s.k, idx, false});
    } else if (left == s.k) {
      stack.push_back({s.k, idx, true});
    } else {
      stack.push_back({s.k - left, idx, false});
      stack.push_back({left, idx, true});
    }
  }
  return arena.take();
}

TreeShape sample_patricia(long n, double p, RandomSource& rng) {
  if (n < 1) throw std::invalid_argument("sample_patricia: n must be >= 1");
  ArenaBuilder arena;
  std::vector<BuildSlot> stack = {{n, -1, false}};
  while (!stack.empty()) {
    BuildSlot s = stack.back();
    stack.pop_back();
    int32_t idx = arena.emplace(s.parent, s.as_left);
    if (s.k == 1) continue;
    long left = sample_binomial_nondegenerate(s.k, 1.0 - p, rng);
    stack.push_back({s.k - left, idx, false});
    stack.push_back({left, idx, true});
  }
  return arena.take();
}

TreeShape sample_bst(long n, RandomSource& rng) {
  if (n < 1) throw std::invalid_argument("sample_bst: n must be >= 1");
  ArenaBuilder arena;
  std::vector<BuildSlot> stack = {{n, -1, false}};
  while (!stack.empty()) {
    BuildSlot s = stack.back();
    stack.pop_back();
    int32_t idx = arena.emplace(s.parent, s.as_left);
    if (s.k == 1) continue;
    long left = static_cast<long>(rng.uniform_below(static_cast<uint64_t>(s.k)));
    long right = s.k - 1 - left;
    if (right > 0) stack.push_back({right, idx, false});
    if (left > 0) stack.push_back({left, idx, true});
  }
  return arena.take();
}

TreeShape sample_ebst(long n, RandomSource& rng) { return extend(sample_bst(n, rng)); }

TreeShape sample_cbst(long n, RandomSource& rng) { return compress(sample_bst(n, rng)); }

namespace {

// left leaf-count for a critical (beta = -1) split of c leaves, via binary
// search on the closed-form prefix sums of 1/i + 1/(c-i)
long critical_split(long c, const std::vector<double>& h, RandomSource& rng) {
  double total = 2.0 * h[static_cast<size_t>(c - 1)];
  double u = rng.uniform01() * total;
  auto prefix = [&](long i) {
    return h[static_cast<size_t>(i)] + h[static_cast<size_t>(c - 1)] -
           h[static_cast<size_t>(c - 1 - i)];
  };
  long lo = 1, hi = c - 1;
  while (lo < hi) {
    long mid = lo + (hi - lo) / 2;
    if (prefix(mid) > u)
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

// general beta > -2: O(c) weight table per node through log-Gamma
long general_beta_split(long c, double beta, RandomSource& rng) {
  std::vector<double> w(static_cast<size_t>(c - 1));
  double maxlog = -1e300;
  for (long i = 1; i <= c - 1; ++i) {
    double lg = std::lgamma(beta + static_cast<double>(i) + 1.0) +
                std::lgamma(beta + static_cast<double>(c - i) + 1.0) -
                std::lgamma(static_cast<double>(i) + 1.0) -
                std::lgamma(static_cast<double>(c - i) + 1.0);
    w[static_cast<size_t>(i - 1)] = lg;
    maxlog = std::max(maxlog, lg);
  }
  double total = 0.0;
  for (auto& x : w) {
    x = std::exp(x - maxlog);
    total += x;
  }
  double u = rng.uniform01() * total;
  double cum = 0.0;
  for (long i = 1; i <= c - 1; ++i) {
    cum += w[static_cast<size_t>(i - 1)];
    if (u < cum) return i;
  }
  return c - 1;
}

}  // namespace

TreeShape sample_beta_split(long n, double beta, RandomSource& rng) {
  if (n < 1) throw std::invalid_argument("sample_beta_split: n must be >= 1");
  if (!(beta > -2.0)) throw std::invalid_argument("sample_beta_split: beta must be > -2");
  bool critical = (beta == -1.0);
  std::vector<double> h;
  if (critical) {
    h.resize(static_cast<size_t>(n), 0.0);
    for (long i = 1; i < n; ++i)
      h[static_cast<size_t>(i)] = h[static_cast<size_t>(i - 1)] + 1.0 / static_cast<double>(i);
  }
  ArenaBuilder arena;
  std::vector<BuildSlot> stack = {{n, -1, false}};
  while (!stack.empty()) {
    BuildSlot s = stack.back();
    stack.pop_back();
    int32_t idx = arena.emplace(s.parent, s.as_left);
    if (s.k == 1) continue;
    long left = critical ? critical_split(s.k, h, rng) : general_beta_split(s.k, beta, rng);
    stack.push_back({s.k - left, idx, false});
    stack.push_back({left, idx, true});
  }
  return arena.take();
}

TreeShape sample_uniform_full(long n, RandomSource& rng) {
  if (n < 1) throw std::invalid_argument("sample_uniform_full: n must be >= 1");
  std::vector<TreeShape::Node> nodes;
  nodes.reserve(static_cast<size_t>(2 * n - 1));
  nodes.push_back({});
  for (long k = 1; k < n; ++k) {
    // pick any of the 2k-1 existing nodes and a side; the picked node moves
    // to a fresh slot so parent links stay valid
    int32_t v = static_cast<int32_t>(rng.uniform_below(static_cast<uint64_t>(2 * k - 1)));
    bool new_leaf_left = (rng.next_u64() & 1) != 0;
    int32_t moved = static_cast<int32_t>(nodes.size());
    nodes.push_back(nodes[static_cast<size_t>(v)]);
    int32_t leaf = static_cast<int32_t>(nodes.size());
    nodes.push_back({});
    nodes[static_cast<size_t>(v)] =
        new_leaf_left ? TreeShape::Node{leaf, moved} : TreeShape::Node{moved, leaf};
  }
  return TreeShape::from_nodes(std::move(nodes));
}

TreeShape sample(const ModelSpec& spec, RandomSource& rng) {
  spec.validate();
  switch (spec.model) {
    case Model::trie: return sample_trie(spec.n, spec.p, rng);
    case Model::patricia: return sample_patricia(spec.n, spec.p, rng);
    case Model::bst: return sample_bst(spec.n, rng);
    case Model::ebst: return sample_ebst(spec.n, rng);
    case Model::cbst: return sample_cbst(spec.n, rng);
    case Model::beta_split: return sample_beta_split(spec.n, spec.beta, rng);
    case Model::uniform_full: return sample_uniform_full(spec.n, rng);
  }
  throw std::logic_error("sample: unhandled model");
}

}  // namespace fringe
