#include "geoad/path_tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <string>

namespace geoad {

const TreeNode& PathTree::node(int id) const {
  if (id < 0 || id >= size()) {
    throw std::out_of_range("PathTree: unknown node id " + std::to_string(id));
  }
  return nodes[static_cast<size_t>(id)];
}

bool PathTree::is_chain() const {
  for (const TreeNode& n : nodes) {
    if (n.children.size() > 1) return false;
  }
  return !nodes.empty();
}

std::vector<int> PathTree::chain() const {
  if (!is_chain()) {
    throw std::invalid_argument("PathTree: tree is not a single chain");
  }
  std::vector<int> order;
  order.reserve(nodes.size());
  int cur = 0;
  while (true) {
    order.push_back(cur);
    const auto& kids = node(cur).children;
    if (kids.empty()) break;
    cur = kids.front();
  }
  return order;
}

int PathTree::max_depth() const {
  int d = 0;
  for (const TreeNode& n : nodes) d = std::max(d, n.depth);
  return d;
}

std::vector<int> PathTree::nodes_of_path(int path_index) const {
  if (path_index < 0 || path_index >= static_cast<int>(paths.size())) {
    throw std::out_of_range("PathTree: unknown path index " +
                            std::to_string(path_index));
  }
  return paths[static_cast<size_t>(path_index)].nodes;
}

const std::vector<int>& PathTree::children(int id) const {
  return node(id).children;
}

int PathTree::depth(int id) const { return node(id).depth; }

std::vector<int> PathTree::ancestors(int id) const {
  std::vector<int> up;
  int cur = node(id).parent;
  while (cur >= 0) {
    up.push_back(cur);
    cur = node(cur).parent;
  }
  return up;
}

bool PathTree::is_ancestor(int a, int b) const {
  int cur = node(b).parent;
  node(a);  // range check
  while (cur >= 0) {
    if (cur == a) return true;
    cur = nodes[static_cast<size_t>(cur)].parent;
  }
  return false;
}

std::vector<Path> normalize_gammas(const std::vector<Path>& paths, int k) {
  if (k < 1) throw std::invalid_argument("normalize_gammas: k must be >= 1");
  std::vector<size_t> idx(paths.size());
  std::iota(idx.begin(), idx.end(), size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
    return paths[a].gamma > paths[b].gamma;
  });
  std::vector<size_t> chosen;
  for (size_t i : idx) {
    if (static_cast<int>(chosen.size()) == k) break;
    if (paths[i].gamma > 0.0) chosen.push_back(i);
  }
  if (chosen.empty()) {
    throw std::invalid_argument("normalize_gammas: no path has positive gamma");
  }
  std::sort(chosen.begin(), chosen.end());
  double total = 0.0;
  for (size_t i : chosen) total += paths[i].gamma;
  std::vector<Path> out;
  out.reserve(chosen.size());
  for (size_t i : chosen) {
    out.push_back(paths[i]);
    out.back().gamma /= total;
  }
  return out;
}

PathTree build_tree(const std::vector<Path>& input) {
  if (input.empty()) throw std::invalid_argument("build_tree: no paths given");

  // Merge duplicate vertex sequences by summing their gammas, keeping the
  // first occurrence's position.
  std::vector<Path> paths;
  for (const Path& p : input) {
    if (p.vertices.empty()) {
      throw std::invalid_argument("build_tree: empty path");
    }
    if (!(p.gamma > 0.0) || p.gamma > 1.0 + 1e-12) {
      throw std::invalid_argument("build_tree: path gamma outside (0,1]");
    }
    auto dup = std::find_if(paths.begin(), paths.end(), [&](const Path& q) {
      return q.vertices == p.vertices;
    });
    if (dup != paths.end()) {
      dup->gamma += p.gamma;
    } else {
      paths.push_back(p);
    }
  }

  double total = 0.0;
  for (const Path& p : paths) total += p.gamma;
  if (std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument(
        "build_tree: gammas must sum to 1 (got " + std::to_string(total) +
        "); run normalize_gammas first");
  }
  const int start = paths.front().vertices.front();
  for (const Path& p : paths) {
    if (p.vertices.front() != start) {
      throw std::invalid_argument(
          "build_tree: all paths must start at the same vertex");
    }
  }

  // Trie insertion in path-listing order.
  struct ProtoNode {
    int vertex = -1;
    int parent = -1;
    double alpha = 0.0;
    std::vector<int> children;  // proto indices, creation order
  };
  std::vector<ProtoNode> proto;
  proto.push_back({start, -1, 0.0, {}});
  std::vector<std::vector<int>> proto_paths(paths.size());
  for (size_t pi = 0; pi < paths.size(); ++pi) {
    int cur = 0;
    proto[0].alpha += paths[pi].gamma;
    proto_paths[pi].push_back(0);
    for (size_t step = 1; step < paths[pi].vertices.size(); ++step) {
      const int v = paths[pi].vertices[step];
      int next = -1;
      for (int c : proto[static_cast<size_t>(cur)].children) {
        if (proto[static_cast<size_t>(c)].vertex == v) {
          next = c;
          break;
        }
      }
      if (next < 0) {
        next = static_cast<int>(proto.size());
        proto.push_back({v, cur, 0.0, {}});
        proto[static_cast<size_t>(cur)].children.push_back(next);
      }
      proto[static_cast<size_t>(next)].alpha += paths[pi].gamma;
      proto_paths[pi].push_back(next);
      cur = next;
    }
  }

  // Breadth-first renumbering, children kept in creation order.
  std::vector<int> bfs_id(proto.size(), -1);
  std::queue<int> queue;
  queue.push(0);
  int next_id = 0;
  std::vector<int> bfs_order;
  while (!queue.empty()) {
    const int p = queue.front();
    queue.pop();
    bfs_id[static_cast<size_t>(p)] = next_id++;
    bfs_order.push_back(p);
    for (int c : proto[static_cast<size_t>(p)].children) queue.push(c);
  }

  PathTree tree;
  tree.nodes.resize(proto.size());
  for (int p : bfs_order) {
    const ProtoNode& src = proto[static_cast<size_t>(p)];
    TreeNode n;
    n.id = bfs_id[static_cast<size_t>(p)];
    n.vertex = src.vertex;
    n.parent = src.parent < 0 ? -1 : bfs_id[static_cast<size_t>(src.parent)];
    n.depth = n.parent < 0 ? 1 : tree.nodes[static_cast<size_t>(n.parent)].depth + 1;
    n.alpha = src.alpha;
    for (int c : src.children) n.children.push_back(bfs_id[static_cast<size_t>(c)]);
    tree.nodes[static_cast<size_t>(n.id)] = std::move(n);
  }
  tree.paths.reserve(paths.size());
  for (size_t pi = 0; pi < paths.size(); ++pi) {
    TreePath tp;
    tp.gamma = paths[pi].gamma;
    for (int p : proto_paths[pi]) tp.nodes.push_back(bfs_id[static_cast<size_t>(p)]);
    tree.paths.push_back(std::move(tp));
  }
  return tree;
}

PathTree chain_tree(const std::vector<int>& vertices,
                    const std::vector<double>& alphas, double gamma) {
  if (vertices.empty() || vertices.size() != alphas.size()) {
    throw std::invalid_argument("chain_tree: vertex/alpha size mismatch");
  }
  PathTree tree;
  tree.nodes.resize(vertices.size());
  TreePath tp;
  tp.gamma = gamma;
  for (size_t i = 0; i < vertices.size(); ++i) {
    TreeNode& n = tree.nodes[i];
    n.id = static_cast<int>(i);
    n.vertex = vertices[i];
    n.parent = static_cast<int>(i) - 1;
    n.depth = static_cast<int>(i) + 1;
    n.alpha = alphas[i];
    if (i + 1 < vertices.size()) n.children.push_back(static_cast<int>(i) + 1);
    tp.nodes.push_back(n.id);
  }
  tree.paths.push_back(std::move(tp));
  return tree;
}

}  // namespace geoad
