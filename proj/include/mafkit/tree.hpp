#pragma once

#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mafkit {

using Vertex = int;
inline constexpr Vertex kNoVertex = -1;

// A set of leaf labels; the unit in which restrictions, embeddings and
// refinement questions are phrased.
using Cluster = std::set<std::string>;

// Rooted tree, possibly multifurcating, with distinct labels on the leaves
// and no labels on internal vertices. A single labelled vertex is a valid
// tree; otherwise the root has outdegree >= 2 and no vertex has indegree 1
// and outdegree 1. Vertex ids are dense ints but are only meaningful for
// the tree object they came from: every mutating operation returns a fresh
// tree with fresh ids.
class PhyloTree {
 public:
  struct Node {
    Vertex parent = kNoVertex;
    std::vector<Vertex> children;
    std::string label;  // empty for internal vertices
  };

  PhyloTree() = default;
  static PhyloTree leaf(std::string label);

  // Assembles a tree from an explicit node table. Normalizes (suppresses
  // indegree-1/outdegree-1 vertices, contracts outdegree-1 roots, drops
  // unreachable nodes), canonicalizes child order and validates.
  static PhyloTree from_nodes(std::vector<Node> nodes, Vertex root);

  int vertex_count() const { return static_cast<int>(nodes_.size()); }
  Vertex root() const { return root_; }
  Vertex parent(Vertex v) const { return nodes_[v].parent; }
  const std::vector<Vertex>& children(Vertex v) const { return nodes_[v].children; }
  bool is_leaf(Vertex v) const { return nodes_[v].children.empty(); }
  const std::string& label(Vertex v) const { return nodes_[v].label; }
  const std::vector<Node>& nodes() const { return nodes_; }

  int leaf_count() const;
  std::vector<Vertex> leaves() const;
  std::vector<std::string> leaf_labels() const;  // sorted
  Cluster label_set() const;
  Vertex find_leaf(std::string_view label) const;  // kNoVertex if absent

  // True when `anc` lies on the path from the root to `v` (inclusive).
  bool is_ancestor(Vertex anc, Vertex v) const;
  Vertex lca(std::span<const Vertex> vs) const;
  Vertex lca2(Vertex a, Vertex b) const;
  int depth(Vertex v) const;  // edges from the root

  Cluster subtree_labels(Vertex v) const;
  // Every internal vertex's leaf set, root included.
  std::vector<Cluster> clusters() const;

  // Children ordered by smallest descendant label, recursively.
  void canonicalize();

  // Throws std::logic_error when a structural invariant is broken.
  void validate() const;

 private:
  std::vector<Node> nodes_;
  Vertex root_ = kNoVertex;

  friend class TreeBuilder;
};

// True when the two trees are equal up to vertex ids (same shape, same
// labels in the same places).
bool label_isomorphic(const PhyloTree& a, const PhyloTree& b);

// T|X': restriction of t to the cluster s, pass-through vertices suppressed.
// Requires a nonempty s that is a subset of t's leaf set.
PhyloTree restrict_to(const PhyloTree& t, const Cluster& s);

// T(X'): the minimal subtree of t spanning s, as edges of t.
struct Embedding {
  Vertex root = kNoVertex;                        // LCA of s in t
  std::vector<std::pair<Vertex, Vertex>> edges;   // (parent, child), sorted
};
Embedding embed(const PhyloTree& t, const Cluster& s);

// True when `coarse` can be obtained from `fine` by contracting edges.
// Both trees must have the same leaf set.
bool is_refinement(const PhyloTree& fine, const PhyloTree& coarse);

// Minimal common refinement of two trees on the same leaf set, or nullopt
// when their clusters are incompatible (the union is not laminar).
std::optional<PhyloTree> common_refinement(const PhyloTree& t1, const PhyloTree& t2);

}  // namespace mafkit
