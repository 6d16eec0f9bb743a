#include "hyphc/tree.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace hyphc {

Dendrogram Dendrogram::from_merges(int n_leaves, const MergeList& merges) {
  if (n_leaves < 1) throw std::invalid_argument("dendrogram needs at least one leaf");
  if (static_cast<int>(merges.size()) != n_leaves - 1)
    throw std::invalid_argument("merge list must contain exactly n-1 merges");

  Dendrogram t;
  t.n_leaves_ = n_leaves;
  const int total = 2 * n_leaves - 1;
  t.nodes_.assign(total, Node{});

  int next_id = n_leaves;
  for (const auto& [a, b] : merges) {
    if (a < 0 || b < 0 || a >= next_id || b >= next_id)
      throw std::invalid_argument("merge refers to an unknown node id");
    if (a == b) throw std::invalid_argument("merge of a node with itself");
    if (t.nodes_[a].parent != -1 || t.nodes_[b].parent != -1)
      throw std::invalid_argument("node merged twice");
    t.nodes_[next_id].left = a;
    t.nodes_[next_id].right = b;
    t.nodes_[a].parent = next_id;
    t.nodes_[b].parent = next_id;
    ++next_id;
  }
  t.root_ = total - 1;
  for (int v = 0; v < total - 1; ++v)
    if (t.nodes_[v].parent == -1)
      throw std::invalid_argument("merge list leaves a disconnected node");

  t.depth_.assign(total, 0);
  for (int v = total - 2; v >= 0; --v) t.depth_[v] = t.depth_[t.nodes_[v].parent] + 1;
  return t;
}

int Dendrogram::lca(int i, int j) const {
  if (i < 0 || j < 0 || i >= n_leaves_ || j >= n_leaves_)
    throw std::out_of_range("leaf index out of range");
  if (i == j) throw std::invalid_argument("lca requires two distinct leaves");
  while (i != j) {
    if (depth_[i] >= depth_[j])
      i = nodes_[i].parent;
    else
      j = nodes_[j].parent;
  }
  return i;
}

std::vector<int> Dendrogram::subtree_leaf_counts() const {
  std::vector<int> counts(nodes_.size(), 0);
  for (int v = 0; v < n_leaves_; ++v) counts[v] = 1;
  // Internal ids are in bottom-up creation order.
  for (int v = n_leaves_; v < n_nodes(); ++v)
    counts[v] = counts[nodes_[v].left] + counts[nodes_[v].right];
  return counts;
}

std::vector<int> Dendrogram::leaves_below(int v) const {
  std::vector<int> out;
  std::vector<int> stack{v};
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    if (is_leaf(u)) {
      out.push_back(u);
    } else {
      stack.push_back(nodes_[u].right);
      stack.push_back(nodes_[u].left);
    }
  }
  return out;
}

MergeList Dendrogram::to_merges() const {
  MergeList merges;
  merges.reserve(n_leaves_ - 1);
  for (int v = n_leaves_; v < n_nodes(); ++v) merges.emplace_back(nodes_[v].left, nodes_[v].right);
  return merges;
}

namespace {

void write_newick(const Dendrogram& t, int v, const std::vector<std::string>* names,
                  std::string& out) {
  if (t.is_leaf(v)) {
    out += names ? (*names)[v] : std::to_string(v);
    return;
  }
  out += '(';
  write_newick(t, t.left(v), names, out);
  out += ',';
  write_newick(t, t.right(v), names, out);
  out += ')';
}

}  // namespace

std::string to_newick(const Dendrogram& t) {
  std::string out;
  write_newick(t, t.root(), nullptr, out);
  out += ';';
  return out;
}

std::string to_newick(const Dendrogram& t, const std::vector<std::string>& leaf_names) {
  if (static_cast<int>(leaf_names.size()) != t.n_leaves())
    throw std::invalid_argument("leaf name count does not match leaf count");
  std::string out;
  write_newick(t, t.root(), &leaf_names, out);
  out += ';';
  return out;
}

namespace {

struct NewickParser {
  const std::string& text;
  size_t pos = 0;
  int n_seen = 0;

  explicit NewickParser(const std::string& s) : text(s) {}

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  void skip_branch_length() {
    skip_ws();
    if (pos < text.size() && text[pos] == ':') {
      ++pos;
      while (pos < text.size() &&
             (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '.' ||
              text[pos] == '-' || text[pos] == '+' || text[pos] == 'e' || text[pos] == 'E'))
        ++pos;
    }
  }

  // Returns a node tag: leaves carry their parsed index, internal nodes a
  // temporary negative tag (-k for the k-th created merge) resolved once the
  // leaf count is known.
  std::pair<int, bool> parse_node(std::vector<std::pair<int, int>>& raw_merges) {
    skip_ws();
    if (pos >= text.size()) throw std::invalid_argument("unexpected end of newick input");
    if (text[pos] == '(') {
      ++pos;
      auto left = parse_node(raw_merges);
      skip_ws();
      if (pos >= text.size() || text[pos] != ',')
        throw std::invalid_argument("expected ',' in newick input");
      ++pos;
      auto right = parse_node(raw_merges);
      skip_ws();
      if (pos >= text.size() || text[pos] != ')')
        throw std::invalid_argument("expected ')' in newick input");
      ++pos;
      skip_branch_length();
      raw_merges.emplace_back(left.first, right.first);
      return {-static_cast<int>(raw_merges.size()), false};
    }
    size_t start = pos;
    while (pos < text.size() && (std::isdigit(static_cast<unsigned char>(text[pos])))) ++pos;
    if (pos == start) throw std::invalid_argument("expected an integer leaf name");
    const int leaf = std::stoi(text.substr(start, pos - start));
    skip_branch_length();
    ++n_seen;
    return {leaf, true};
  }
};

}  // namespace

Dendrogram from_newick(const std::string& text) {
  NewickParser parser(text);
  std::vector<std::pair<int, int>> raw;
  auto root = parser.parse_node(raw);
  parser.skip_ws();
  if (parser.pos >= text.size() || text[parser.pos] != ';')
    throw std::invalid_argument("newick input must end with ';'");
  if (root.second) throw std::invalid_argument("newick input must contain at least one merge");

  const int n = parser.n_seen;
  // Internal tag -k (k-th created merge) maps to node id n + k - 1.
  auto resolve = [n](int tag) { return tag < 0 ? n - 1 - tag : tag; };
  MergeList merges;
  merges.reserve(raw.size());
  for (const auto& [a, b] : raw) merges.emplace_back(resolve(a), resolve(b));
  for (const auto& [a, b] : merges)
    if (a >= 2 * n - 1 || b >= 2 * n - 1)
      throw std::invalid_argument("newick leaf names must be 0..n-1");
  return Dendrogram::from_merges(n, merges);
}

namespace {

std::string canonical_form(const Dendrogram& t, int v) {
  if (t.is_leaf(v)) return "L" + std::to_string(v);
  std::string a = canonical_form(t, t.left(v));
  std::string b = canonical_form(t, t.right(v));
  if (b < a) std::swap(a, b);
  return "(" + a + "," + b + ")";
}

}  // namespace

bool isomorphic(const Dendrogram& a, const Dendrogram& b) {
  if (a.n_leaves() != b.n_leaves()) return false;
  return canonical_form(a, a.root()) == canonical_form(b, b.root());
}

}  // namespace hyphc
