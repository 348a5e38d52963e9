#include "mafkit/forest.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "mafkit/newick.hpp"

namespace mafkit {

Cluster Forest::label_set() const {
  Cluster out;
  for (const PhyloTree& c : components)
    for (const auto& l : c.leaf_labels()) out.insert(l);
  return out;
}

std::pair<int, Vertex> Forest::find_leaf(std::string_view label) const {
  for (int i = 0; i < size(); ++i) {
    Vertex v = components[i].find_leaf(label);
    if (v != kNoVertex) return {i, v};
  }
  return {-1, kNoVertex};
}

void Forest::canonicalize() {
  for (PhyloTree& c : components) c.canonicalize();
  std::sort(components.begin(), components.end(),
            [](const PhyloTree& a, const PhyloTree& b) {
              return a.leaf_labels() < b.leaf_labels();
            });
}

bool forests_equal(const Forest& a, const Forest& b) {
  if (a.size() != b.size()) return false;
  Forest ca = a, cb = b;
  ca.canonicalize();
  cb.canonicalize();
  for (int i = 0; i < ca.size(); ++i)
    if (!label_isomorphic(ca.components[i], cb.components[i])) return false;
  return true;
}

namespace {

std::string cluster_str(const Cluster& c) {
  std::string out = "{";
  for (auto it = c.begin(); it != c.end(); ++it) {
    if (it != c.begin()) out += ",";
    out += *it;
  }
  return out + "}";
}

}  // namespace

ForestCertificate check_forest_for(const Forest& f, const PhyloTree& t) {
  ForestCertificate cert;
  Cluster expected = t.label_set();

  // Leaf sets must partition L(t).
  std::map<std::string, int> owner;
  for (int i = 0; i < f.size(); ++i) {
    for (const auto& l : f.components[i].leaf_labels()) {
      auto [it, fresh] = owner.emplace(l, i);
      if (!fresh) {
        cert.violation = ForestCertificate::Violation::NotPartition;
        cert.detail = "label '" + l + "' appears in components " +
                      std::to_string(it->second) + " and " + std::to_string(i);
        return cert;
      }
      if (!expected.count(l)) {
        cert.violation = ForestCertificate::Violation::NotPartition;
        cert.detail = "label '" + l + "' is not a leaf of the tree";
        return cert;
      }
    }
  }
  if (owner.size() != expected.size()) {
    for (const auto& l : expected)
      if (!owner.count(l)) {
        cert.violation = ForestCertificate::Violation::NotPartition;
        cert.detail = "label '" + l + "' is covered by no component";
        return cert;
      }
  }

  // Each component refines the restriction of t to its leaves.
  for (int i = 0; i < f.size(); ++i) {
    Cluster li = f.components[i].label_set();
    PhyloTree r = restrict_to(t, li);
    if (!is_refinement(f.components[i], r)) {
      cert.violation = ForestCertificate::Violation::NotRefinement;
      cert.detail = "component " + std::to_string(i) + " " + cluster_str(li) +
                    " does not refine the tree restricted to it";
      return cert;
    }
  }

  // Embeddings must be pairwise edge-disjoint. An edge of t is identified
  // by its child endpoint.
  std::vector<int> used(t.vertex_count(), -1);
  for (int i = 0; i < f.size(); ++i) {
    Embedding e = embed(t, f.components[i].label_set());
    for (const auto& [u, v] : e.edges) {
      if (used[v] != -1) {
        cert.violation = ForestCertificate::Violation::EmbeddingOverlap;
        cert.detail = "components " + std::to_string(used[v]) + " and " +
                      std::to_string(i) + " both use the edge into vertex " +
                      std::to_string(v) + " (subtree " +
                      cluster_str(t.subtree_labels(v)) + ")";
        return cert;
      }
      used[v] = i;
    }
  }
  return cert;
}

bool is_forest_for(const Forest& f, const PhyloTree& t) {
  return check_forest_for(f, t).ok();
}

ForestCertificate check_agreement_forest(const Forest& f, const PhyloTree& t1,
                                         const PhyloTree& t2) {
  if (t1.label_set() != t2.label_set())
    throw std::invalid_argument("check_agreement_forest: trees have different leaf sets");
  ForestCertificate c1 = check_forest_for(f, t1);
  if (!c1.ok()) {
    c1.detail = "in tree 1: " + c1.detail;
    return c1;
  }
  ForestCertificate c2 = check_forest_for(f, t2);
  if (!c2.ok()) c2.detail = "in tree 2: " + c2.detail;
  return c2;
}

bool is_agreement_forest(const Forest& f, const PhyloTree& t1, const PhyloTree& t2) {
  return check_agreement_forest(f, t1, t2).ok();
}

Forest cut(const Forest& f, int comp, Vertex v, const std::vector<Vertex>& child_subset) {
  if (comp < 0 || comp >= f.size()) throw std::invalid_argument("cut: bad component index");
  const PhyloTree& t = f.components[comp];
  if (v < 0 || v >= t.vertex_count() || t.is_leaf(v))
    throw std::invalid_argument("cut: v is not an internal vertex");
  if (child_subset.empty()) throw std::invalid_argument("cut: empty child subset");
  std::vector<Vertex> subset = child_subset;
  std::sort(subset.begin(), subset.end());
  if (std::unique(subset.begin(), subset.end()) != subset.end())
    throw std::invalid_argument("cut: duplicate children in subset");
  for (Vertex c : subset) {
    const auto& ch = t.children(v);
    if (std::find(ch.begin(), ch.end(), c) == ch.end())
      throw std::invalid_argument("cut: vertex in subset is not a child of v");
  }
  if (subset.size() >= t.children(v).size())
    throw std::invalid_argument("cut: subset must be a proper subset of v's children");

  std::vector<PhyloTree::Node> nodes(t.nodes());
  Vertex detached_root;
  if (subset.size() == 1) {
    detached_root = subset[0];
  } else {
    // Refine v: insert a fresh vertex above exactly this subset.
    nodes.push_back({kNoVertex, subset, ""});
    detached_root = static_cast<Vertex>(nodes.size() - 1);
  }
  auto& vc = nodes[v].children;
  vc.erase(std::remove_if(vc.begin(), vc.end(),
                          [&](Vertex c) {
                            return std::binary_search(subset.begin(), subset.end(), c);
                          }),
           vc.end());
  for (Vertex c : subset) nodes[c].parent = subset.size() == 1 ? kNoVertex : detached_root;

  Forest out;
  out.components.reserve(f.size() + 1);
  for (int i = 0; i < f.size(); ++i) {
    if (i == comp) {
      out.components.push_back(PhyloTree::from_nodes(nodes, t.root()));
      out.components.push_back(PhyloTree::from_nodes(nodes, detached_root));
    } else {
      out.components.push_back(f.components[i]);
    }
  }
  return out;
}

}  // namespace mafkit
