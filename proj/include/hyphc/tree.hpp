#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

// Rooted binary dendrograms over n leaves. Leaves occupy ids 0..n-1 and the
// n-1 internal nodes occupy ids n..2n-2 in creation order; the root is the
// last created node. Instances are immutable after construction.

namespace hyphc {

using MergeList = std::vector<std::pair<int, int>>;

class Dendrogram {
 public:
  struct Node {
    int left = -1;
    int right = -1;
    int parent = -1;
  };

  // Builds from a merge sequence: the k-th entry merges two existing roots
  // and creates node n_leaves + k. Throws std::invalid_argument if the list
  // does not describe a binary tree over all leaves.
  static Dendrogram from_merges(int n_leaves, const MergeList& merges);

  int n_leaves() const { return n_leaves_; }
  int n_nodes() const { return static_cast<int>(nodes_.size()); }
  int root() const { return root_; }
  bool is_leaf(int v) const { return v < n_leaves_; }
  int left(int v) const { return nodes_[v].left; }
  int right(int v) const { return nodes_[v].right; }
  int parent(int v) const { return nodes_[v].parent; }
  int depth(int v) const { return depth_[v]; }

  // Deepest common ancestor of two distinct leaves.
  int lca(int i, int j) const;

  // Leaf count of the subtree rooted at every node; counts[root] == n.
  std::vector<int> subtree_leaf_counts() const;

  // Leaf ids below node v, in discovery order.
  std::vector<int> leaves_below(int v) const;

  // Merge sequence that reconstructs the tree (internal nodes in id order).
  MergeList to_merges() const;

 private:
  Dendrogram() = default;

  int n_leaves_ = 0;
  int root_ = -1;
  std::vector<Node> nodes_;
  std::vector<int> depth_;
};

// Parenthesized Newick with a trailing semicolon. Leaf names default to
// zero-based indices.
std::string to_newick(const Dendrogram& t);
std::string to_newick(const Dendrogram& t, const std::vector<std::string>& leaf_names);

// Parses the subset of Newick emitted by to_newick: integer leaf names,
// binary nesting, optional branch lengths (ignored).
Dendrogram from_newick(const std::string& text);

// Equality of rooted trees with labeled leaves, up to child order.
bool isomorphic(const Dendrogram& a, const Dendrogram& b);

}  // namespace hyphc
