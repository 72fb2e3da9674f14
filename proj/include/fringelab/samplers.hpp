#pragma once

#include <cstdint>

#include "fringelab/model.hpp"
#include "fringelab/tree.hpp"

namespace fringe {

/// Deterministic, platform-independent random stream (xoshiro256**
/// seeded through splitmix64). A fixed seed reproduces the identical tree
/// for a fixed ModelSpec and implementation version.
class RandomSource {
 public:
  explicit RandomSource(uint64_t seed);

  uint64_t next_u64();
  /// Uniform on {0, ..., bound-1}, exact (rejection).
  uint64_t uniform_below(uint64_t bound);
  /// Uniform on [0, 1) with 53 random bits.
  double uniform01();

  uint64_t seed() const { return seed_; }

 private:
  uint64_t seed_;
  uint64_t s_[4];
};

/// Exact Binomial(k, prob) sample: pmf inversion from 0 for k < 64,
/// inversion walking outward from the mode otherwise. Never uses a normal
/// approximation.
long sample_binomial(long k, double prob, RandomSource& rng);

/// Binomial(k, prob) conditioned on the outcome lying in {1,...,k-1}.
long sample_binomial_nondegenerate(long k, double prob, RandomSource& rng);

/// Trie of n i.i.d. Bernoulli(p)-bit strings, by recursive binomial
/// splitting: a node holding k >= 2 strings sends L ~ Binomial(k, 1-p) of
/// them left; L in {0, k} yields an outdegree-1 node. General binary output
/// with exactly n leaves, every leaf's parent of outdegree 2.
TreeShape sample_trie(long n, double p, RandomSource& rng);

/// Patricia trie: distributionally compress(sample_trie(n, p)), realized
/// directly with the split conditioned on {1,...,k-1}. Full binary output.
TreeShape sample_patricia(long n, double p, RandomSource& rng);

/// Binary search tree on n nodes: left subtree size uniform on {0,...,n-1},
/// recursively. General binary output of size n.
TreeShape sample_bst(long n, RandomSource& rng);
TreeShape sample_ebst(long n, RandomSource& rng);  // extend(sample_bst(n))
TreeShape sample_cbst(long n, RandomSource& rng);  // compress(sample_bst(n))

/// Beta-splitting tree with n leaves; beta > -2. beta = -1 uses the
/// closed-form critical weights, other beta goes through log-Gamma weights.
TreeShape sample_beta_split(long n, double beta, RandomSource& rng);

/// Uniform over the Catalan(n-1) full binary trees with n leaves, grown by
/// leaf insertion (Remy).
TreeShape sample_uniform_full(long n, RandomSource& rng);

TreeShape sample(const ModelSpec& spec, RandomSource& rng);

}  // namespace fringe
