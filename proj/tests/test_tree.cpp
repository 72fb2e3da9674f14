#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "fringelab/exact.hpp"
#include "fringelab/samplers.hpp"
#include "fringelab/tree.hpp"

using namespace fringe;

namespace {

const char* kT2 = "(*,*)";
const char* kT3 = "(*,(*,*))";
const char* kT4a = "(*,(*,(*,*)))";
const char* kT4b = "(*,((*,*),*))";
const char* kT4c = "((*,*),(*,*))";

}  // namespace

TEST_CASE("parse smallest trees") {
  TreeShape leaf = parse_shape("*");
  CHECK(leaf.size() == 1);
  CHECK(leaf.leafcount() == 1);

  TreeShape t2 = parse_shape(kT2);
  CHECK(t2.size() == 3);
  CHECK(t2.leafcount() == 2);
  CHECK(t2.is_full());
}

TEST_CASE("parse caterpillar t4a") {
  TreeShape t = parse_shape(kT4a);
  TreeMetrics m = metrics(t);
  CHECK(m.lpl == 3);
  CHECK(m.rpl == 6);
}

TEST_CASE("parse errors carry positions") {
  CHECK_THROWS_AS(parse_shape(""), ShapeParseError);
  CHECK_THROWS_AS(parse_shape("(*"), ShapeParseError);
  CHECK_THROWS_AS(parse_shape("(*,*"), ShapeParseError);
  CHECK_THROWS_AS(parse_shape("(*,*))"), ShapeParseError);
  CHECK_THROWS_AS(parse_shape("x"), ShapeParseError);
  CHECK_THROWS_AS(parse_shape("(,)"), ShapeParseError);
  try {
    parse_shape("(*;*)");
    FAIL("expected throw");
  } catch (const ShapeParseError& e) {
    CHECK(e.position == 2);
  }
}

TEST_CASE("general binary trees format with empty slots") {
  TreeShape left_only = parse_shape("(*,)");
  CHECK(left_only.size() == 2);
  CHECK(!left_only.is_full());
  CHECK(format_shape(left_only) == "(*,)");
  TreeShape right_only = parse_shape("(,*)");
  CHECK(format_shape(right_only) == "(,*)");
}

TEST_CASE("format round-trips parse") {
  for (const char* text : {"*", kT2, kT3, kT4a, kT4b, kT4c, "((*,(*,*)),*)", "((*,),(,*))"}) {
    TreeShape t = parse_shape(text);
    CHECK(format_shape(t) == text);
    CHECK(parse_shape(format_shape(t)) == t);
  }
}

TEST_CASE("whitespace is not significant") {
  CHECK(parse_shape(" ( * , ( * , * ) ) ") == parse_shape(kT3));
}

TEST_CASE("decode(encode(t)) is the identity, exhaustively") {
  // full trees up to size 15 (8 leaves)
  for (long m = 1; m <= 8; ++m) {
    for (const TreeShape& t : all_full_shapes(m)) {
      CHECK(decode(encode(t)) == t);
      CHECK(encode(t).bits.size() == static_cast<size_t>(t.size()));
      size_t zeros = 0;
      for (char c : encode(t).bits) zeros += (c == '0');
      CHECK(zeros == static_cast<size_t>(t.leafcount()));
    }
  }
  // general binary trees up to 9 nodes
  for (long n = 1; n <= 9; ++n)
    for (const TreeShape& t : all_binary_shapes(n)) CHECK(decode(encode(t)) == t);
}

TEST_CASE("compress examples") {
  CHECK(compress(parse_shape("*")) == parse_shape("*"));
  // a path of 3 nodes ending in a leaf compresses to a single leaf
  CHECK(compress(parse_shape("(,(*,))")) == parse_shape("*"));
  // cherry with each edge subdivided once
  TreeShape subdivided = parse_shape("((*,),(,*))");
  CHECK(compress(subdivided) == parse_shape(kT2));
}

TEST_CASE("compress keeps leaf count and bounds size") {
  RandomSource rng(11);
  for (int i = 0; i < 50; ++i) {
    TreeShape t = sample_trie(30, 0.3, rng);
    TreeShape c = compress(t);
    CHECK(c.is_full());
    CHECK(c.leafcount() == t.leafcount());
    CHECK(c.size() <= t.size());
    CHECK(c.size() >= 1);
  }
}

TEST_CASE("extend examples") {
  CHECK(extend(parse_shape("*")) == parse_shape(kT2));
  // path root -> left child extends to the mirror of t3
  CHECK(extend(parse_shape("(*,)")) == parse_shape("((*,*),*)"));
  TreeShape bst3 = parse_shape("(*,*)");
  CHECK(extend(bst3).size() == 7);
}

TEST_CASE("extend then delete_leaves is the identity (exhaustive to size 9)") {
  for (long n = 1; n <= 9; ++n) {
    for (const TreeShape& t : all_binary_shapes(n)) {
      TreeShape e = extend(t);
      CHECK(e.is_full());
      CHECK(e.size() == 2 * t.size() + 1);
      CHECK(delete_leaves(e) == t);
      CHECK(compress(e).leafcount() == e.leafcount());
    }
  }
}

TEST_CASE("metrics on the named small trees") {
  TreeMetrics m2 = metrics(parse_shape(kT2));
  CHECK(m2.lpl == 1);
  CHECK(m2.rpl == 1);
  CHECK(m2.nu.empty());

  TreeMetrics m3 = metrics(parse_shape(kT3));
  CHECK(m3.lpl == 2);
  CHECK(m3.rpl == 3);
  CHECK(m3.nu == std::map<long, long>{{2, 1}});

  TreeMetrics m4b = metrics(parse_shape(kT4b));
  CHECK(m4b.lpl == 4);
  CHECK(m4b.rpl == 5);

  TreeMetrics m4c = metrics(parse_shape(kT4c));
  CHECK(m4c.lpl == 4);
  CHECK(m4c.rpl == 4);
  CHECK(m4c.nu == std::map<long, long>{{2, 2}});

  CHECK_THROWS(metrics(parse_shape("(*,)")));
}

TEST_CASE("metrics invariants over all full shapes with <= 7 leaves") {
  for (long m = 1; m <= 7; ++m) {
    for (const TreeShape& t : all_full_shapes(m)) {
      TreeMetrics mm = metrics(t);
      CHECK(mm.size == 2 * mm.leafcount - 1);
      CHECK(mm.internal_count == mm.leafcount - 1);
      // nu extended by k=1 (leaves) and k=m (root) accounts for every node
      long nu_total = 0;
      for (auto& [k, c] : mm.nu) nu_total += c;
      if (m == 1)
        CHECK(mm.size == 1);
      else
        CHECK(nu_total + mm.leafcount + 1 == mm.size);
      // lpl + rpl = total external path length
      long epl = 0;
      std::vector<std::pair<int32_t, long>> stack = {{0, 0}};
      while (!stack.empty()) {
        auto [v, d] = stack.back();
        stack.pop_back();
        const TreeShape::Node& nd = t.node(v);
        if (nd.left == -1) {
          epl += d;
          continue;
        }
        stack.emplace_back(nd.left, d + 1);
        stack.emplace_back(nd.right, d + 1);
      }
      CHECK(mm.lpl + mm.rpl == epl);
    }
  }
}

TEST_CASE("census of t2") {
  FringeCensus c = census(parse_shape(kT2), 2);
  CHECK(c.count_of(parse_shape("*")) == 2);
  CHECK(c.count_of(parse_shape(kT2)) == 1);
  CHECK(c.tree_size == 3);
}

TEST_CASE("census of t4a with K = 4") {
  FringeCensus c = census(parse_shape(kT4a), 4);
  CHECK(c.count_of(parse_shape("*")) == 4);
  CHECK(c.count_of(parse_shape(kT2)) == 1);
  CHECK(c.count_of(parse_shape(kT3)) == 1);
  CHECK(c.count_of(parse_shape(kT4a)) == 1);
  CHECK(c.count_of(parse_shape(kT4c)) == 0);
  long total = 0;
  for (auto& [code, cnt] : c.counts) total += cnt;
  CHECK(total == 7);
  CHECK(c.leaf_size_hist.at(1) == 4);
  CHECK(c.leaf_size_hist.at(2) == 1);
  CHECK(c.leaf_size_hist.at(3) == 1);
  CHECK(c.leaf_size_hist.at(4) == 1);
}

TEST_CASE("census conservation for sampler outputs") {
  RandomSource rng(5);
  for (int i = 0; i < 20; ++i) {
    TreeShape t = sample_uniform_full(40, rng);
    FringeCensus c = census(t, t.leafcount());
    long total = 0;
    for (auto& [code, cnt] : c.counts) total += cnt;
    CHECK(total == t.size());
    // per-leafcount histogram agrees with the per-shape counts
    std::map<long, long> by_m;
    for (auto& [code, cnt] : c.counts) by_m[decode(code).leafcount()] += cnt;
    for (auto& [m, cnt] : by_m) CHECK(c.leaf_size_hist.at(m) == cnt);
  }
  // also for a general binary tree (trie)
  TreeShape trie = sample_trie(60, 0.5, rng);
  FringeCensus c = census(trie, trie.leafcount());
  long total = 0;
  for (auto& [code, cnt] : c.counts) total += cnt;
  CHECK(total == trie.size());
}

TEST_CASE("quenched fringe probabilities") {
  FringeCensus c2 = census(parse_shape(kT2), 4);
  CHECK(quenched_fringe_prob(c2, parse_shape("*")) == BigRational(2, 3));

  FringeCensus c4 = census(parse_shape(kT4a), 4);
  CHECK(quenched_fringe_prob(c4, parse_shape(kT3)) == BigRational(1, 7));
  // leaf probability is m/(2m-1) for any full tree
  CHECK(quenched_fringe_prob(c4, parse_shape("*")) == BigRational(4, 7));

  CHECK_THROWS_AS(quenched_fringe_prob(census(parse_shape(kT2), 1), parse_shape(kT2)),
                  std::out_of_range);
}

TEST_CASE("quenched extended-fringe probabilities") {
  FringeCensus c2 = census(parse_shape(kT2), 4);
  CHECK(quenched_qsin(c2, parse_shape("*")) == BigRational(1));
  CHECK(quenched_qsin(c2, parse_shape(kT2)) == BigRational(1));

  FringeCensus c4 = census(parse_shape(kT4a), 4);
  CHECK(quenched_qsin(c4, parse_shape(kT2)) == BigRational(1, 2));
  // q(T; leaf) = 1 always
  RandomSource rng(3);
  TreeShape t = sample_uniform_full(25, rng);
  CHECK(quenched_qsin(census(t, 3), parse_shape("*")) == BigRational(1));
}

TEST_CASE("cladogram codes identify mirror images") {
  TreeShape t3 = parse_shape(kT3);
  CHECK(cladogram_code(t3) == cladogram_code(t3.mirrored()));
  TreeShape t4c = parse_shape(kT4c);
  CHECK(cladogram_code(t4c) == cladogram_code(t4c.mirrored()));
  CHECK(encode(t4c) == encode(t4c.mirrored()));  // self-mirror

  // oriented shapes collapse: 2 -> 1 at three leaves, 5 -> 2 at four leaves
  std::set<std::string> clad3, clad4;
  for (const TreeShape& t : all_full_shapes(3)) clad3.insert(cladogram_code(t).bits);
  for (const TreeShape& t : all_full_shapes(4)) clad4.insert(cladogram_code(t).bits);
  CHECK(all_full_shapes(3).size() == 2);
  CHECK(clad3.size() == 1);
  CHECK(all_full_shapes(4).size() == 5);
  CHECK(clad4.size() == 2);
}

TEST_CASE("compression duality on random tries") {
  // N_t(compress(T)) equals the count of outdegree!=1 nodes of T whose
  // fringe compresses to t, for every t within the cutoff
  RandomSource rng(17);
  for (int i = 0; i < 60; ++i) {
    long n = 2 + static_cast<long>(rng.uniform_below(199));
    double p = 0.2 + 0.6 * rng.uniform01();
    TreeShape trie = sample_trie(n, p, rng);
    TreeShape compressed = compress(trie);
    FringeCensus c = census(compressed, 4);
    std::map<ShapeCode, long> phi = phi_counts(trie, 4);
    CHECK(c.counts == phi);
  }
}

TEST_CASE("full-tree size identity on sampler outputs") {
  RandomSource rng(23);
  for (int i = 0; i < 10; ++i) {
    for (auto model : {Model::patricia, Model::ebst, Model::cbst, Model::beta_split,
                       Model::uniform_full}) {
      ModelSpec spec;
      spec.model = model;
      spec.n = 30;
      TreeShape t = sample(spec, rng);
      CHECK(t.is_full());
      CHECK(t.size() == 2 * t.leafcount() - 1);
    }
  }
}

TEST_CASE("from_nodes validation") {
  using Node = TreeShape::Node;
  CHECK_THROWS(TreeShape::from_nodes({}));
  CHECK_THROWS(TreeShape::from_nodes({Node{5, -1}}));            // out of range
  CHECK_THROWS(TreeShape::from_nodes({Node{1, 1}, Node{}}));     // double reference
  CHECK_THROWS(TreeShape::from_nodes({Node{1, -1}, Node{0, -1}}));  // root referenced
  CHECK_THROWS(TreeShape::from_nodes({Node{}, Node{}}));         // disconnected
}

TEST_CASE("deep degenerate trees do not overflow any traversal") {
  // unary chain of 100k nodes ending in a leaf
  const long chain = 100000;
  ShapeCode code;
  code.bits.assign(static_cast<size_t>(chain), '2');
  code.bits += '0';
  TreeShape t = decode(code);
  CHECK(t.size() == chain + 1);
  CHECK(t.depth() == chain);
  CHECK(t.leafcount() == 1);
  CHECK(encode(t) == code);
  CHECK(compress(t) == parse_shape("*"));
  CHECK(format_shape(t).size() == static_cast<size_t>(3 * chain + 1));

  // full caterpillar with 50001 leaves ("1" + "01" x 49999 + "00")
  std::string cat = "1";
  for (long i = 0; i < 49999; ++i) cat += "01";
  cat += "00";
  TreeShape full = decode(ShapeCode{cat});
  CHECK(full.is_full());
  CHECK(full.leafcount() == 50001);
  TreeMetrics mm = metrics(full);
  CHECK(mm.lpl == 50000);
  FringeCensus c = census(full, 3);
  CHECK(c.count_of(parse_shape("(*,*)")) == 1);
  CHECK(c.counts.at(encode(parse_shape("*"))) == 50001);
  CHECK(delete_leaves(extend(full)) == full);
}

TEST_CASE("subtree and mirrored") {
  TreeShape t = parse_shape(kT3);
  CHECK(*t.right_subtree() == parse_shape(kT2));
  CHECK(*t.left_subtree() == parse_shape("*"));
  CHECK(t.mirrored() == parse_shape("((*,*),*)"));
  CHECK(t.mirrored().mirrored() == t);
}
