#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fringelab/rational.hpp"

namespace fringe {

/// Canonical preorder encoding of a binary tree shape.
/// Full binary trees use only '1' (internal, two children) and '0' (leaf),
/// so a full tree of size s encodes to exactly s characters. General binary
/// trees additionally use '2' (only a left child) and '3' (only a right
/// child). Ordered lexicographically; usable as a map key.
struct ShapeCode {
  std::string bits;

  friend bool operator==(const ShapeCode& a, const ShapeCode& b) { return a.bits == b.bits; }
  friend bool operator!=(const ShapeCode& a, const ShapeCode& b) { return a.bits != b.bits; }
  friend bool operator<(const ShapeCode& a, const ShapeCode& b) { return a.bits < b.bits; }
};

/// An oriented binary tree shape (left != right), immutable after
/// construction. Nodes live in a flat array with the root at index 0, so
/// arbitrarily deep trees carry no destruction or traversal recursion risk.
/// Children may be absent independently; a full binary tree is one where
/// every node has zero or two children.
class TreeShape {
 public:
  struct Node {
    int32_t left = -1;
    int32_t right = -1;
  };

  /// Single-leaf tree.
  TreeShape() : nodes_(1) {}

  /// Adopts `nodes` with the root at index 0. Validates tree-ness.
  static TreeShape from_nodes(std::vector<Node> nodes);

  /// Joins subtrees under a fresh root; pass nullptr for a missing child.
  /// With both absent the result is a single leaf. O(total size).
  static TreeShape join(const TreeShape* left, const TreeShape* right);
  static TreeShape leaf() { return TreeShape(); }

  long size() const { return static_cast<long>(nodes_.size()); }
  const Node& node(long i) const { return nodes_[static_cast<size_t>(i)]; }
  long root() const { return 0; }

  long leafcount() const;
  bool is_full() const;
  bool is_leaf() const { return nodes_.size() == 1; }
  long depth() const;

  /// Subtree rooted at node index v, as a standalone tree. O(subtree size).
  TreeShape subtree(long v) const;
  /// Left/right subtree of the root; empty optional if absent.
  std::optional<TreeShape> left_subtree() const;
  std::optional<TreeShape> right_subtree() const;

  TreeShape mirrored() const;

  friend bool operator==(const TreeShape& a, const TreeShape& b);
  friend bool operator!=(const TreeShape& a, const TreeShape& b) { return !(a == b); }

 private:
  std::vector<Node> nodes_;
};

struct ShapeParseError : std::runtime_error {
  size_t position;
  ShapeParseError(size_t pos, const std::string& what)
      : std::runtime_error(what + " at position " + std::to_string(pos)), position(pos) {}
};

/// Grammar: S ::= "*" | "(" S "," S ")". Either side of the comma may also
/// be empty, which denotes a missing child of a general binary tree, e.g.
/// "(*,)" is a root with a single left leaf child.
TreeShape parse_shape(std::string_view text);
std::string format_shape(const TreeShape& t);

ShapeCode encode(const TreeShape& t);
TreeShape decode(const ShapeCode& code);

/// Orientation-forgetting canonical code: children are ordered by
/// (length, lexicographic) on their subcodes, so mirror images coincide.
/// Requires a full binary tree.
ShapeCode cladogram_code(const TreeShape& t);

/// Deletes all outdegree-1 nodes; result is full binary with the same
/// leaf count.
TreeShape compress(const TreeShape& t);

/// Attaches external leaves at every vacant child slot; a tree with n nodes
/// extends to a full binary tree of size 2n+1.
TreeShape extend(const TreeShape& t);

/// Inverse of extend: deletes all leaves. Requires a full tree of size > 1.
TreeShape delete_leaves(const TreeShape& t);

struct TreeMetrics {
  long leafcount = 0;
  long size = 0;
  long internal_count = 0;
  long lpl = 0;  // left external path length
  long rpl = 0;  // right external path length
  // number of nodes whose fringe subtree has leaf size k, for 2 <= k <= m-1
  std::map<long, long> nu;
};

/// One-pass metrics; rejects non-full trees.
TreeMetrics metrics(const TreeShape& t);

/// Fringe-tree census: counts of each shape with at most `max_leaves`
/// leaves, plus the histogram of fringe leaf sizes up to `hist_cap`
/// (defaults to max_leaves).
struct FringeCensus {
  long tree_size = 0;
  long tree_leafcount = 0;
  long max_leaves = 0;
  long hist_cap = 0;
  bool cladogram = false;
  std::map<ShapeCode, long> counts;
  std::map<long, long> leaf_size_hist;  // N_m for m <= hist_cap

  long count_of(const TreeShape& t) const;
};

FringeCensus census(const TreeShape& t, long max_leaves, long hist_cap = -1,
                    bool cladogram = false);

/// N_t(T) / |T| exactly; throws std::out_of_range if leafcount(t) exceeds
/// the census cutoff.
BigRational quenched_fringe_prob(const FringeCensus& c, const TreeShape& t);

/// N_t(T) * leafcount(t) / leafcount(T) exactly; same cutoff rule.
BigRational quenched_qsin(const FringeCensus& c, const TreeShape& t);

/// Counts, for every full shape with at most max_leaves leaves, the nodes v
/// of T with outdegree != 1 whose fringe subtree compresses to that shape.
/// Equals census(compress(T)).counts — the compression-duality identity.
std::map<ShapeCode, long> phi_counts(const TreeShape& t, long max_leaves);

}  // namespace fringe
