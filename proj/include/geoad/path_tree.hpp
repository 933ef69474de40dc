#pragma once

#include <vector>

namespace geoad {

// A predicted movement path: a sequence of graph vertices starting at the
// user's current position, weighted by the probability that the user follows it.
struct Path {
  double gamma = 0.0;
  std::vector<int> vertices;
};

struct TreeNode {
  int id = -1;                 // breadth-first index, root == 0
  int vertex = -1;             // graph vertex this node stands on
  int parent = -1;             // -1 for the root
  int depth = 1;               // root has depth 1
  double alpha = 0.0;          // probability mass of paths through this node
  std::vector<int> children;   // child node ids, in path-listing order
};

// A path expressed in tree-node ids, root first.
struct TreePath {
  double gamma = 0.0;
  std::vector<int> nodes;
};

// Prefix-merged tree over a set of weighted paths.  Two paths share nodes
// exactly up to their longest common vertex prefix.
struct PathTree {
  std::vector<TreeNode> nodes;  // indexed by node id (BFS order)
  std::vector<TreePath> paths;  // in input order (duplicates merged)

  int size() const { return static_cast<int>(nodes.size()); }
  bool empty() const { return nodes.empty(); }
  const TreeNode& node(int id) const;

  // True when every node has at most one child (a single-path tree).
  bool is_chain() const;

  // Root-to-leaf chain of node ids when is_chain(); throws otherwise.
  std::vector<int> chain() const;

  // Longest root-to-terminal node count.
  int max_depth() const;

  std::vector<int> nodes_of_path(int path_index) const;
  const std::vector<int>& children(int id) const;
  int depth(int id) const;

  // Ancestor chain of `id`, nearest first, excluding `id` itself.
  std::vector<int> ancestors(int id) const;

  // True when `a` is a strict ancestor of `b`.
  bool is_ancestor(int a, int b) const;
};

// Keeps the k highest-gamma paths (ties broken by input order), drops
// zero-gamma paths, and rescales the survivors so their gammas sum to one.
// The returned paths keep their relative input order.
// Throws std::invalid_argument when k < 1 or no path has positive gamma.
std::vector<Path> normalize_gammas(const std::vector<Path>& paths, int k);

// Builds the prefix-merged tree.  Preconditions: at least one path, all paths
// non-empty and starting at the same vertex, gammas in (0,1] summing to one
// within 1e-9.  Paths with identical vertex sequences are merged by summing
// their gammas.  Node ids are assigned in breadth-first order with children
// ordered by first appearance in the path listing.
PathTree build_tree(const std::vector<Path>& paths);

// Hand-assembles a single-chain tree with explicit per-node probability mass.
// Used for sub-problems restricted to one path of a larger tree; `alphas`
// need not be 1, and the single recorded path carries the given gamma.
PathTree chain_tree(const std::vector<int>& vertices,
                    const std::vector<double>& alphas, double gamma = 1.0);

}  // namespace geoad
