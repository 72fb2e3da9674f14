#include "fringelab/tree.hpp"

#include <algorithm>
#include <cctype>

namespace fringe {

namespace {

// (length, lexicographic) order used for cladogram canonicalization
bool code_less(const std::string& a, const std::string& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

}  // namespace

TreeShape TreeShape::from_nodes(std::vector<Node> nodes) {
  if (nodes.empty()) throw std::invalid_argument("TreeShape: empty node list");
  const int32_t n = static_cast<int32_t>(nodes.size());
  std::vector<uint8_t> referenced(nodes.size(), 0);
  for (const Node& nd : nodes) {
    for (int32_t c : {nd.left, nd.right}) {
      if (c == -1) continue;
      if (c < 0 || c >= n) throw std::invalid_argument("TreeShape: child index out of range");
      if (referenced[static_cast<size_t>(c)])
        throw std::invalid_argument("TreeShape: node referenced twice");
      referenced[static_cast<size_t>(c)] = 1;
    }
  }
  if (referenced[0]) throw std::invalid_argument("TreeShape: root must be unreferenced");
  // reachability from the root
  std::vector<int32_t> stack = {0};
  size_t seen = 0;
  while (!stack.empty()) {
    int32_t v = stack.back();
    stack.pop_back();
    ++seen;
    const Node& nd = nodes[static_cast<size_t>(v)];
    if (nd.left != -1) stack.push_back(nd.left);
    if (nd.right != -1) stack.push_back(nd.right);
  }
  if (seen != nodes.size()) throw std::invalid_argument("TreeShape: disconnected nodes");
  TreeShape t;
  t.nodes_ = std::move(nodes);
  return t;
}

TreeShape TreeShape::join(const TreeShape* left, const TreeShape* right) {
  std::vector<Node> nodes(1);
  auto append = [&nodes](const TreeShape& sub) {
    int32_t base = static_cast<int32_t>(nodes.size());
    for (long i = 0; i < sub.size(); ++i) {
      Node nd = sub.node(i);
      if (nd.left != -1) nd.left += base;
      if (nd.right != -1) nd.right += base;
      nodes.push_back(nd);
    }
    return base;
  };
  if (left) nodes[0].left = append(*left);
  if (right) nodes[0].right = append(*right);
  TreeShape t;
  t.nodes_ = std::move(nodes);
  return t;
}

long TreeShape::leafcount() const {
  long m = 0;
  for (const Node& nd : nodes_)
    if (nd.left == -1 && nd.right == -1) ++m;
  return m;
}

bool TreeShape::is_full() const {
  for (const Node& nd : nodes_)
    if ((nd.left == -1) != (nd.right == -1)) return false;
  return true;
}

long TreeShape::depth() const {
  long best = 0;
  std::vector<std::pair<int32_t, long>> stack = {{0, 0}};
  while (!stack.empty()) {
    auto [v, d] = stack.back();
    stack.pop_back();
    best = std::max(best, d);
    const Node& nd = nodes_[static_cast<size_t>(v)];
    if (nd.left != -1) stack.emplace_back(nd.left, d + 1);
    if (nd.right != -1) stack.emplace_back(nd.right, d + 1);
  }
  return best;
}

TreeShape TreeShape::subtree(long v) const {
  std::vector<Node> out;
  // preorder copy; out index assigned at creation, children patched via stack
  struct Slot {
    int32_t old_v;
    int32_t out_parent;  // -1 for root
    bool as_left;
  };
  std::vector<Slot> stack = {{static_cast<int32_t>(v), -1, false}};
  while (!stack.empty()) {
    Slot s = stack.back();
    stack.pop_back();
    int32_t idx = static_cast<int32_t>(out.size());
    out.push_back({});
    if (s.out_parent != -1) {
      if (s.as_left)
        out[static_cast<size_t>(s.out_parent)].left = idx;
      else
        out[static_cast<size_t>(s.out_parent)].right = idx;
    }
    const Node& nd = nodes_[static_cast<size_t>(s.old_v)];
    if (nd.right != -1) stack.push_back({nd.right, idx, false});
    if (nd.left != -1) stack.push_back({nd.left, idx, true});
  }
  TreeShape t;
  t.nodes_ = std::move(out);
  return t;
}

std::optional<TreeShape> TreeShape::left_subtree() const {
  if (nodes_[0].left == -1) return std::nullopt;
  return subtree(nodes_[0].left);
}

std::optional<TreeShape> TreeShape::right_subtree() const {
  if (nodes_[0].right == -1) return std::nullopt;
  return subtree(nodes_[0].right);
}

TreeShape TreeShape::mirrored() const {
  TreeShape t(*this);
  for (Node& nd : t.nodes_) std::swap(nd.left, nd.right);
  return t;
}

bool operator==(const TreeShape& a, const TreeShape& b) {
  if (a.size() != b.size()) return false;
  std::vector<std::pair<int32_t, int32_t>> stack = {{0, 0}};
  while (!stack.empty()) {
    auto [va, vb] = stack.back();
    stack.pop_back();
    const TreeShape::Node& na = a.node(va);
    const TreeShape::Node& nb = b.node(vb);
    if ((na.left == -1) != (nb.left == -1)) return false;
    if ((na.right == -1) != (nb.right == -1)) return false;
    if (na.left != -1) stack.emplace_back(na.left, nb.left);
    if (na.right != -1) stack.emplace_back(na.right, nb.right);
  }
  return true;
}

TreeShape parse_shape(std::string_view text) {
  std::vector<TreeShape::Node> nodes;
  struct Frame {
    int32_t idx;
    int phase;  // 0 = awaiting left subtree, 1 = awaiting right subtree
  };
  std::vector<Frame> frames;
  size_t pos = 0;
  const size_t n = text.size();
  auto skip_ws = [&] {
    while (pos < n && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  for (;;) {
    skip_ws();
    int32_t result;
    if (pos < n && text[pos] == '*') {
      nodes.push_back({});
      result = static_cast<int32_t>(nodes.size()) - 1;
      ++pos;
    } else if (pos < n && text[pos] == '(') {
      nodes.push_back({});
      frames.push_back({static_cast<int32_t>(nodes.size()) - 1, 0});
      ++pos;
      continue;
    } else if (!frames.empty() && pos < n && (text[pos] == ',' || text[pos] == ')')) {
      result = -1;  // absent child
    } else {
      throw ShapeParseError(pos, "expected '*' or '('");
    }
    // deliver the parsed subtree upward, closing frames as they complete
    for (;;) {
      skip_ws();
      if (frames.empty()) {
        if (pos != n) throw ShapeParseError(pos, "trailing characters");
        if (result == -1) throw ShapeParseError(0, "empty tree");
        return TreeShape::from_nodes(std::move(nodes));
      }
      Frame& f = frames.back();
      if (f.phase == 0) {
        nodes[static_cast<size_t>(f.idx)].left = result;
        if (pos >= n || text[pos] != ',') throw ShapeParseError(pos, "expected ','");
        ++pos;
        f.phase = 1;
        break;
      }
      nodes[static_cast<size_t>(f.idx)].right = result;
      if (pos >= n || text[pos] != ')') throw ShapeParseError(pos, "expected ')'");
      ++pos;
      const TreeShape::Node& nd = nodes[static_cast<size_t>(f.idx)];
      if (nd.left == -1 && nd.right == -1)
        throw ShapeParseError(pos, "childless node must be written '*'");
      result = f.idx;
      frames.pop_back();
    }
  }
}

namespace {

// shared preorder emitter for format_shape and encode
template <typename LeafFn, typename OpenFn, typename SepFn, typename CloseFn>
void emit_preorder(const TreeShape& t, LeafFn leaf, OpenFn open, SepFn sep, CloseFn close) {
  struct Item {
    int32_t v;     // node, or -1 for a literal
    char literal;  // used when v == -1
  };
  std::vector<Item> stack = {{0, 0}};
  while (!stack.empty()) {
    Item it = stack.back();
    stack.pop_back();
    if (it.v == -1) {
      if (it.literal == ',')
        sep();
      else
        close();
      continue;
    }
    const TreeShape::Node& nd = t.node(it.v);
    if (nd.left == -1 && nd.right == -1) {
      leaf();
      continue;
    }
    open(nd);
    stack.push_back({-1, ')'});
    if (nd.right != -1) stack.push_back({nd.right, 0});
    stack.push_back({-1, ','});
    if (nd.left != -1) stack.push_back({nd.left, 0});
  }
}

}  // namespace

std::string format_shape(const TreeShape& t) {
  std::string out;
  emit_preorder(
      t, [&] { out += '*'; }, [&](const TreeShape::Node&) { out += '('; }, [&] { out += ','; },
      [&] { out += ')'; });
  return out;
}

ShapeCode encode(const TreeShape& t) {
  std::string out;
  out.reserve(static_cast<size_t>(t.size()));
  std::vector<int32_t> stack = {0};
  while (!stack.empty()) {
    int32_t v = stack.back();
    stack.pop_back();
    const TreeShape::Node& nd = t.node(v);
    if (nd.left != -1 && nd.right != -1)
      out += '1';
    else if (nd.left != -1)
      out += '2';
    else if (nd.right != -1)
      out += '3';
    else
      out += '0';
    if (nd.right != -1) stack.push_back(nd.right);
    if (nd.left != -1) stack.push_back(nd.left);
  }
  return ShapeCode{std::move(out)};
}

TreeShape decode(const ShapeCode& code) {
  const std::string& bits = code.bits;
  if (bits.empty()) throw std::invalid_argument("decode: empty code");
  std::vector<TreeShape::Node> nodes;
  struct Slot {
    int32_t parent;
    bool as_left;
  };
  std::vector<Slot> pending = {{-1, false}};
  for (size_t pos = 0; pos < bits.size(); ++pos) {
    if (pending.empty()) throw std::invalid_argument("decode: trailing characters in code");
    Slot s = pending.back();
    pending.pop_back();
    int32_t idx = static_cast<int32_t>(nodes.size());
    nodes.push_back({});
    if (s.parent != -1) {
      if (s.as_left)
        nodes[static_cast<size_t>(s.parent)].left = idx;
      else
        nodes[static_cast<size_t>(s.parent)].right = idx;
    }
    switch (bits[pos]) {
      case '0':
        break;
      case '1':
        pending.push_back({idx, false});
        pending.push_back({idx, true});
        break;
      case '2':
        pending.push_back({idx, true});
        break;
      case '3':
        pending.push_back({idx, false});
        break;
      default:
        throw std::invalid_argument("decode: invalid code character");
    }
  }
  if (!pending.empty()) throw std::invalid_argument("decode: truncated code");
  return TreeShape::from_nodes(std::move(nodes));
}

namespace {

// post-order leaf counts for every node, explicit stack
std::vector<int32_t> fringe_leafcounts(const TreeShape& t) {
  std::vector<int32_t> lf(static_cast<size_t>(t.size()), 0);
  std::vector<std::pair<int32_t, int>> stack = {{0, 0}};
  while (!stack.empty()) {
    auto& [v, stage] = stack.back();
    const TreeShape::Node& nd = t.node(v);
    if (stage == 0) {
      stage = 1;
      if (nd.left != -1) stack.emplace_back(nd.left, 0);
      if (nd.right != -1) stack.emplace_back(nd.right, 0);
    } else {
      int32_t sum = 0;
      if (nd.left == -1 && nd.right == -1)
        sum = 1;
      else {
        if (nd.left != -1) sum += lf[static_cast<size_t>(nd.left)];
        if (nd.right != -1) sum += lf[static_cast<size_t>(nd.right)];
      }
      lf[static_cast<size_t>(v)] = sum;
      stack.pop_back();
    }
  }
  return lf;
}

// oriented code of the subtree rooted at v (small local walk)
std::string subtree_code(const TreeShape& t, int32_t v) {
  std::string out;
  std::vector<int32_t> stack = {v};
  while (!stack.empty()) {
    int32_t u = stack.back();
    stack.pop_back();
    const TreeShape::Node& nd = t.node(u);
    if (nd.left != -1 && nd.right != -1)
      out += '1';
    else if (nd.left != -1)
      out += '2';
    else if (nd.right != -1)
      out += '3';
    else
      out += '0';
    if (nd.right != -1) stack.push_back(nd.right);
    if (nd.left != -1) stack.push_back(nd.left);
  }
  return out;
}

// canonical (mirror-insensitive) code of the full subtree rooted at v
std::string subtree_cladogram_code(const TreeShape& t, int32_t v) {
  // post-order over the (small) subtree, codes combined children-sorted
  std::vector<std::pair<int32_t, int>> stack = {{v, 0}};
  std::map<int32_t, std::string> codes;
  while (!stack.empty()) {
    auto& [u, stage] = stack.back();
    const TreeShape::Node& nd = t.node(u);
    if ((nd.left == -1) != (nd.right == -1))
      throw std::invalid_argument("cladogram_code: tree is not full binary");
    if (stage == 0) {
      stage = 1;
      if (nd.left != -1) stack.emplace_back(nd.left, 0);
      if (nd.right != -1) stack.emplace_back(nd.right, 0);
    } else {
      if (nd.left == -1) {
        codes[u] = "0";
      } else {
        std::string a = std::move(codes[nd.left]);
        std::string b = std::move(codes[nd.right]);
        codes.erase(nd.left);
        codes.erase(nd.right);
        if (code_less(b, a)) std::swap(a, b);
        codes[u] = "1" + a + b;
      }
      stack.pop_back();
    }
  }
  return codes[v];
}

}  // namespace

ShapeCode cladogram_code(const TreeShape& t) {
  return ShapeCode{subtree_cladogram_code(t, 0)};
}

TreeShape compress(const TreeShape& t) {
  std::vector<TreeShape::Node> out;
  struct Frame {
    int32_t old_v;    // already chased past any unary chain
    int32_t out_idx;  // node created for it in the output
    int phase;        // 0 = left pending, 1 = right pending, 2 = done
  };
  auto chase = [&t](int32_t v) {
    for (;;) {
      const TreeShape::Node& nd = t.node(v);
      if (nd.left != -1 && nd.right == -1)
        v = nd.left;
      else if (nd.left == -1 && nd.right != -1)
        v = nd.right;
      else
        return v;
    }
  };
  std::vector<Frame> frames;
  int32_t start = chase(0);
  if (t.node(start).left == -1) return TreeShape::leaf();
  out.push_back({});
  frames.push_back({start, 0, 0});
  while (!frames.empty()) {
    Frame& f = frames.back();
    if (f.phase == 2) {
      frames.pop_back();
      continue;
    }
    bool left = (f.phase == 0);
    f.phase++;
    int32_t child = left ? t.node(f.old_v).left : t.node(f.old_v).right;
    int32_t cv = chase(child);
    int32_t idx = static_cast<int32_t>(out.size());
    out.push_back({});
    if (left)
      out[static_cast<size_t>(f.out_idx)].left = idx;
    else
      out[static_cast<size_t>(f.out_idx)].right = idx;
    if (t.node(cv).left != -1) frames.push_back({cv, idx, 0});
  }
  return TreeShape::from_nodes(std::move(out));
}

TreeShape extend(const TreeShape& t) {
  std::vector<TreeShape::Node> out;
  struct Slot {
    int32_t old_v;  // -1 means: create a fresh external leaf
    int32_t out_parent;
    bool as_left;
  };
  std::vector<Slot> stack = {{0, -1, false}};
  while (!stack.empty()) {
    Slot s = stack.back();
    stack.pop_back();
    int32_t idx = static_cast<int32_t>(out.size());
    out.push_back({});
    if (s.out_parent != -1) {
      if (s.as_left)
        out[static_cast<size_t>(s.out_parent)].left = idx;
      else
        out[static_cast<size_t>(s.out_parent)].right = idx;
    }
    if (s.old_v == -1) continue;
    const TreeShape::Node& nd = t.node(s.old_v);
    stack.push_back({nd.right, idx, false});
    stack.push_back({nd.left, idx, true});
  }
  return TreeShape::from_nodes(std::move(out));
}

TreeShape delete_leaves(const TreeShape& t) {
  if (!t.is_full()) throw std::invalid_argument("delete_leaves: tree is not full binary");
  if (t.size() == 1) throw std::invalid_argument("delete_leaves: would produce an empty tree");
  std::vector<TreeShape::Node> out;
  struct Slot {
    int32_t old_v;
    int32_t out_parent;
    bool as_left;
  };
  std::vector<Slot> stack = {{0, -1, false}};
  while (!stack.empty()) {
    Slot s = stack.back();
    stack.pop_back();
    int32_t idx = static_cast<int32_t>(out.size());
    out.push_back({});
    if (s.out_parent != -1) {
      if (s.as_left)
        out[static_cast<size_t>(s.out_parent)].left = idx;
      else
        out[static_cast<size_t>(s.out_parent)].right = idx;
    }
    const TreeShape::Node& nd = t.node(s.old_v);
    // keep only internal children
    if (nd.right != -1 && t.node(nd.right).left != -1) stack.push_back({nd.right, idx, false});
    if (nd.left != -1 && t.node(nd.left).left != -1) stack.push_back({nd.left, idx, true});
  }
  return TreeShape::from_nodes(std::move(out));
}

TreeMetrics metrics(const TreeShape& t) {
  if (!t.is_full()) throw std::invalid_argument("metrics: tree is not full binary");
  TreeMetrics m;
  m.size = t.size();
  std::vector<int32_t> lf = fringe_leafcounts(t);
  m.leafcount = lf[0];
  m.internal_count = m.size - m.leafcount;
  // left/right external path lengths: DFS carrying (left depth, right depth)
  struct Item {
    int32_t v;
    long ld, rd;
  };
  std::vector<Item> stack = {{0, 0, 0}};
  while (!stack.empty()) {
    Item it = stack.back();
    stack.pop_back();
    const TreeShape::Node& nd = t.node(it.v);
    if (nd.left == -1) {
      m.lpl += it.ld;
      m.rpl += it.rd;
      continue;
    }
    stack.push_back({nd.left, it.ld + 1, it.rd});
    stack.push_back({nd.right, it.ld, it.rd + 1});
  }
  for (long v = 0; v < m.size; ++v) {
    long k = lf[static_cast<size_t>(v)];
    if (k >= 2 && k <= m.leafcount - 1) m.nu[k]++;
  }
  return m;
}

FringeCensus census(const TreeShape& t, long max_leaves, long hist_cap, bool cladogram) {
  if (max_leaves < 1) throw std::invalid_argument("census: max_leaves must be >= 1");
  if (hist_cap < 0) hist_cap = max_leaves;
  hist_cap = std::max(hist_cap, max_leaves);  // histogram always covers m <= K
  if (cladogram && !t.is_full())
    throw std::invalid_argument("census: cladogram mode requires a full binary tree");
  FringeCensus c;
  c.tree_size = t.size();
  c.max_leaves = max_leaves;
  c.hist_cap = hist_cap;
  c.cladogram = cladogram;
  std::vector<int32_t> lf = fringe_leafcounts(t);
  c.tree_leafcount = lf[0];
  for (long v = 0; v < c.tree_size; ++v) {
    long k = lf[static_cast<size_t>(v)];
    if (k <= hist_cap) c.leaf_size_hist[k]++;
    if (k <= max_leaves) {
      std::string code = cladogram ? subtree_cladogram_code(t, static_cast<int32_t>(v))
                                   : subtree_code(t, static_cast<int32_t>(v));
      c.counts[ShapeCode{std::move(code)}]++;
    }
  }
  return c;
}

long FringeCensus::count_of(const TreeShape& t) const {
  if (t.leafcount() > max_leaves)
    throw std::out_of_range("FringeCensus: shape has more leaves than the census cutoff");
  ShapeCode key = cladogram ? cladogram_code(t) : encode(t);
  auto it = counts.find(key);
  return it == counts.end() ? 0 : it->second;
}

BigRational quenched_fringe_prob(const FringeCensus& c, const TreeShape& t) {
  return BigRational(c.count_of(t)) / BigRational(c.tree_size);
}

BigRational quenched_qsin(const FringeCensus& c, const TreeShape& t) {
  return BigRational(c.count_of(t)) * BigRational(t.leafcount()) / BigRational(c.tree_leafcount);
}

std::map<ShapeCode, long> phi_counts(const TreeShape& t, long max_leaves) {
  std::map<ShapeCode, long> out;
  std::vector<int32_t> lf = fringe_leafcounts(t);
  auto chase = [&t](int32_t v) {
    for (;;) {
      const TreeShape::Node& nd = t.node(v);
      if (nd.left != -1 && nd.right == -1)
        v = nd.left;
      else if (nd.left == -1 && nd.right != -1)
        v = nd.right;
      else
        return v;
    }
  };
  for (long v = 0; v < t.size(); ++v) {
    const TreeShape::Node& nd = t.node(v);
    bool unary = (nd.left == -1) != (nd.right == -1);
    if (unary || lf[static_cast<size_t>(v)] > max_leaves) continue;
    // code of the compressed fringe subtree, built on the fly
    std::string code;
    std::vector<int32_t> stack = {static_cast<int32_t>(v)};
    while (!stack.empty()) {
      int32_t u = chase(stack.back());
      stack.pop_back();
      const TreeShape::Node& un = t.node(u);
      if (un.left == -1) {
        code += '0';
      } else {
        code += '1';
        stack.push_back(un.right);
        stack.push_back(un.left);
      }
    }
    out[ShapeCode{std::move(code)}]++;
  }
  return out;
}

}  // namespace fringe
