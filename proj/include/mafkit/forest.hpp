#pragma once

#include <string>
#include <vector>

#include "mafkit/tree.hpp"

namespace mafkit {

// A set of trees; the leaf-label sets of the components are pairwise
// disjoint. A single isolated leaf is a valid component.
struct Forest {
  std::vector<PhyloTree> components;

  int size() const { return static_cast<int>(components.size()); }
  Cluster label_set() const;

  // (component index, vertex) of the leaf carrying `label`, or {-1, kNoVertex}.
  std::pair<int, Vertex> find_leaf(std::string_view label) const;

  // Canonical form: components canonicalized and ordered by smallest leaf label.
  void canonicalize();
};

bool forests_equal(const Forest& a, const Forest& b);

// Outcome of the agreement-forest check; names the first violated condition.
struct ForestCertificate {
  enum class Violation { None, NotPartition, NotRefinement, EmbeddingOverlap };
  Violation violation = Violation::None;
  std::string detail;

  bool ok() const { return violation == Violation::None; }
};

// Checks that f is a forest for t (refinement + edge-disjoint embeddings +
// leaf partition), per tree.
ForestCertificate check_forest_for(const Forest& f, const PhyloTree& t);
bool is_forest_for(const Forest& f, const PhyloTree& t);

// Agreement forest of t1 and t2: a forest for both. Throws when t1 and t2
// have different leaf sets.
ForestCertificate check_agreement_forest(const Forest& f, const PhyloTree& t1,
                                         const PhyloTree& t2);
bool is_agreement_forest(const Forest& f, const PhyloTree& t1, const PhyloTree& t2);

// The cut operation: detaches the subtrees rooted at `child_subset` from v
// as one new component. With two or more children the vertex is first
// refined (a new vertex is inserted above exactly that subset) and the new
// edge removed. Pass-through vertices are suppressed and outdegree-1 roots
// contracted on both sides. The component count grows by exactly one.
// `child_subset` must be a nonempty proper subset of v's children.
Forest cut(const Forest& f, int comp, Vertex v, const std::vector<Vertex>& child_subset);

}  // namespace mafkit
