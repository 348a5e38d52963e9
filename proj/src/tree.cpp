#include "mafkit/tree.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace mafkit {

namespace {

// Smallest leaf label below each vertex; used for canonical child order.
void min_labels(const std::vector<PhyloTree::Node>& nodes, Vertex v,
                std::vector<const std::string*>& out) {
  const auto& node = nodes[v];
  if (node.children.empty()) {
    out[v] = &node.label;
    return;
  }
  const std::string* best = nullptr;
  for (Vertex c : node.children) {
    min_labels(nodes, c, out);
    if (best == nullptr || *out[c] < *best) best = out[c];
  }
  out[v] = best;
}

}  // namespace

PhyloTree PhyloTree::leaf(std::string label) {
  PhyloTree t;
  t.nodes_.push_back(Node{kNoVertex, {}, std::move(label)});
  t.root_ = 0;
  return t;
}

PhyloTree PhyloTree::from_nodes(std::vector<Node> nodes, Vertex root) {
  if (root == kNoVertex || nodes.empty()) throw std::invalid_argument("empty tree");

  // Normalize in place on the loose node table, then compact.
  auto splice_chains = [&]() {
    bool changed = true;
    while (changed) {
      changed = false;
      // Root with a single child: the child becomes the root.
      while (nodes[root].children.size() == 1 && nodes[root].label.empty()) {
        Vertex c = nodes[root].children[0];
        nodes[c].parent = kNoVertex;
        nodes[root].children.clear();
        root = c;
        changed = true;
      }
      for (Vertex v = 0; v < static_cast<Vertex>(nodes.size()); ++v) {
        if (v == root || nodes[v].parent == kNoVertex) continue;
        if (nodes[v].children.size() == 1 && nodes[v].label.empty()) {
          Vertex p = nodes[v].parent;
          Vertex c = nodes[v].children[0];
          auto& pc = nodes[p].children;
          *std::find(pc.begin(), pc.end(), v) = c;
          nodes[c].parent = p;
          nodes[v].children.clear();
          nodes[v].parent = kNoVertex;
          changed = true;
        }
      }
    }
  };
  splice_chains();

  // Compact to the subtree reachable from the root.
  std::vector<Vertex> order;
  std::vector<Vertex> remap(nodes.size(), kNoVertex);
  std::vector<Vertex> stack{root};
  while (!stack.empty()) {
    Vertex v = stack.back();
    stack.pop_back();
    remap[v] = static_cast<Vertex>(order.size());
    order.push_back(v);
    for (Vertex c : nodes[v].children) stack.push_back(c);
  }
  PhyloTree t;
  t.nodes_.resize(order.size());
  for (size_t i = 0; i < order.size(); ++i) {
    const Node& src = nodes[order[i]];
    Node dst;
    dst.parent = src.parent == kNoVertex ? kNoVertex : remap[src.parent];
    dst.label = src.label;
    dst.children.reserve(src.children.size());
    for (Vertex c : src.children) dst.children.push_back(remap[c]);
    t.nodes_[i] = std::move(dst);
  }
  t.root_ = remap[root];
  t.canonicalize();
  t.validate();
  return t;
}

int PhyloTree::leaf_count() const {
  int n = 0;
  for (const Node& node : nodes_)
    if (node.children.empty()) ++n;
  return n;
}

std::vector<Vertex> PhyloTree::leaves() const {
  std::vector<Vertex> out;
  for (Vertex v = 0; v < vertex_count(); ++v)
    if (is_leaf(v)) out.push_back(v);
  return out;
}

std::vector<std::string> PhyloTree::leaf_labels() const {
  std::vector<std::string> out;
  for (const Node& node : nodes_)
    if (node.children.empty()) out.push_back(node.label);
  std::sort(out.begin(), out.end());
  return out;
}

Cluster PhyloTree::label_set() const {
  Cluster out;
  for (const Node& node : nodes_)
    if (node.children.empty()) out.insert(node.label);
  return out;
}

Vertex PhyloTree::find_leaf(std::string_view label) const {
  for (Vertex v = 0; v < vertex_count(); ++v)
    if (is_leaf(v) && nodes_[v].label == label) return v;
  return kNoVertex;
}

bool PhyloTree::is_ancestor(Vertex anc, Vertex v) const {
  for (Vertex w = v; w != kNoVertex; w = nodes_[w].parent)
    if (w == anc) return true;
  return false;
}

int PhyloTree::depth(Vertex v) const {
  int d = 0;
  for (Vertex w = nodes_[v].parent; w != kNoVertex; w = nodes_[w].parent) ++d;
  return d;
}

Vertex PhyloTree::lca2(Vertex a, Vertex b) const {
  int da = depth(a), db = depth(b);
  while (da > db) { a = nodes_[a].parent; --da; }
  while (db > da) { b = nodes_[b].parent; --db; }
  while (a != b) { a = nodes_[a].parent; b = nodes_[b].parent; }
  return a;
}

Vertex PhyloTree::lca(std::span<const Vertex> vs) const {
  if (vs.empty()) throw std::invalid_argument("lca of empty set");
  Vertex acc = vs[0];
  for (size_t i = 1; i < vs.size(); ++i) acc = lca2(acc, vs[i]);
  return acc;
}

Cluster PhyloTree::subtree_labels(Vertex v) const {
  Cluster out;
  std::vector<Vertex> stack{v};
  while (!stack.empty()) {
    Vertex w = stack.back();
    stack.pop_back();
    if (is_leaf(w)) out.insert(nodes_[w].label);
    for (Vertex c : nodes_[w].children) stack.push_back(c);
  }
  return out;
}

std::vector<Cluster> PhyloTree::clusters() const {
  std::vector<Cluster> out;
  for (Vertex v = 0; v < vertex_count(); ++v)
    if (!is_leaf(v)) out.push_back(subtree_labels(v));
  return out;
}

void PhyloTree::canonicalize() {
  if (root_ == kNoVertex) return;
  std::vector<const std::string*> mins(nodes_.size(), nullptr);
  min_labels(nodes_, root_, mins);
  for (Node& node : nodes_) {
    std::sort(node.children.begin(), node.children.end(),
              [&](Vertex a, Vertex b) { return *mins[a] < *mins[b]; });
  }
}

void PhyloTree::validate() const {
  if (root_ == kNoVertex || nodes_.empty()) throw std::logic_error("tree: no root");
  if (nodes_[root_].parent != kNoVertex) throw std::logic_error("tree: root has a parent");
  int roots = 0;
  std::set<std::string> seen;
  for (Vertex v = 0; v < vertex_count(); ++v) {
    const Node& node = nodes_[v];
    if (node.parent == kNoVertex) {
      ++roots;
      if (v != root_) throw std::logic_error("tree: stray root");
    } else {
      const auto& pc = nodes_[node.parent].children;
      if (std::find(pc.begin(), pc.end(), v) == pc.end())
        throw std::logic_error("tree: broken parent link");
    }
    if (node.children.empty()) {
      if (node.label.empty()) throw std::logic_error("tree: unlabelled leaf");
      if (!seen.insert(node.label).second)
        throw std::logic_error("tree: duplicate leaf label '" + node.label + "'");
    } else {
      if (!node.label.empty()) throw std::logic_error("tree: labelled internal vertex");
      if (node.children.size() == 1) throw std::logic_error("tree: suppressible vertex");
      for (Vertex c : node.children)
        if (nodes_[c].parent != v) throw std::logic_error("tree: broken child link");
    }
  }
  if (roots != 1) throw std::logic_error("tree: multiple roots");
}

bool label_isomorphic(const PhyloTree& a, const PhyloTree& b) {
  // Canonical form makes this a plain recursive comparison.
  PhyloTree ca = a, cb = b;
  ca.canonicalize();
  cb.canonicalize();
  auto eq = [&](auto&& self, Vertex va, Vertex vb) -> bool {
    if (ca.is_leaf(va) != cb.is_leaf(vb)) return false;
    if (ca.is_leaf(va)) return ca.label(va) == cb.label(vb);
    const auto& cha = ca.children(va);
    const auto& chb = cb.children(vb);
    if (cha.size() != chb.size()) return false;
    for (size_t i = 0; i < cha.size(); ++i)
      if (!self(self, cha[i], chb[i])) return false;
    return true;
  };
  return eq(eq, ca.root(), cb.root());
}

PhyloTree restrict_to(const PhyloTree& t, const Cluster& s) {
  if (s.empty()) throw std::invalid_argument("restrict: empty cluster");
  for (const auto& x : s)
    if (t.find_leaf(x) == kNoVertex)
      throw std::invalid_argument("restrict: label '" + x + "' not in tree");

  std::vector<PhyloTree::Node> out;
  // Returns the node id of the restricted subtree below v, or kNoVertex.
  auto build = [&](auto&& self, Vertex v) -> Vertex {
    if (t.is_leaf(v)) {
      if (!s.count(t.label(v))) return kNoVertex;
      out.push_back({kNoVertex, {}, t.label(v)});
      return static_cast<Vertex>(out.size() - 1);
    }
    std::vector<Vertex> kept;
    for (Vertex c : t.children(v)) {
      Vertex r = self(self, c);
      if (r != kNoVertex) kept.push_back(r);
    }
    if (kept.empty()) return kNoVertex;
    if (kept.size() == 1) return kept[0];
    out.push_back({kNoVertex, kept, ""});
    Vertex id = static_cast<Vertex>(out.size() - 1);
    for (Vertex c : kept) out[c].parent = id;
    return id;
  };
  Vertex r = build(build, t.root());
  return PhyloTree::from_nodes(std::move(out), r);
}

Embedding embed(const PhyloTree& t, const Cluster& s) {
  if (s.empty()) throw std::invalid_argument("embed: empty cluster");
  std::vector<int> count(t.vertex_count(), 0);
  for (const auto& x : s) {
    Vertex v = t.find_leaf(x);
    if (v == kNoVertex) throw std::invalid_argument("embed: label '" + x + "' not in tree");
    for (Vertex w = v; w != kNoVertex; w = t.parent(w)) ++count[w];
  }
  Vertex lca = t.root();
  for (;;) {
    Vertex next = kNoVertex;
    for (Vertex c : t.children(lca))
      if (count[c] == static_cast<int>(s.size())) { next = c; break; }
    if (next == kNoVertex) break;
    lca = next;
  }
  Embedding e;
  e.root = lca;
  for (Vertex v = 0; v < t.vertex_count(); ++v) {
    if (v == lca || count[v] == 0) continue;
    if (!t.is_ancestor(lca, v)) continue;
    e.edges.emplace_back(t.parent(v), v);
  }
  std::sort(e.edges.begin(), e.edges.end());
  return e;
}

bool is_refinement(const PhyloTree& fine, const PhyloTree& coarse) {
  if (fine.label_set() != coarse.label_set())
    throw std::invalid_argument("is_refinement: leaf sets differ");
  std::vector<Cluster> fc = fine.clusters();
  std::sort(fc.begin(), fc.end());
  for (const Cluster& c : coarse.clusters())
    if (!std::binary_search(fc.begin(), fc.end(), c)) return false;
  return true;
}

std::optional<PhyloTree> common_refinement(const PhyloTree& t1, const PhyloTree& t2) {
  Cluster xs = t1.label_set();
  if (xs != t2.label_set())
    throw std::invalid_argument("common_refinement: leaf sets differ");

  // Work on bitmasks over the sorted label universe.
  std::vector<std::string> labels(xs.begin(), xs.end());
  const size_t n = labels.size();
  const size_t words = (n + 63) / 64;
  auto index_of = [&](const std::string& l) {
    return std::lower_bound(labels.begin(), labels.end(), l) - labels.begin();
  };
  using Mask = std::vector<uint64_t>;
  auto mask_of = [&](const Cluster& c) {
    Mask m(words, 0);
    for (const auto& l : c) {
      size_t i = index_of(l);
      m[i / 64] |= uint64_t{1} << (i % 64);
    }
    return m;
  };
  auto popcount = [&](const Mask& m) {
    int k = 0;
    for (uint64_t w : m) k += __builtin_popcountll(w);
    return k;
  };

  std::vector<Mask> fam;
  auto add = [&](const Mask& m) {
    if (std::find(fam.begin(), fam.end(), m) == fam.end()) fam.push_back(m);
  };
  for (const auto& t : {std::cref(t1), std::cref(t2)})
    for (const Cluster& c : t.get().clusters()) add(mask_of(c));

  // Laminar check: any two clusters are nested or disjoint.
  for (size_t i = 0; i < fam.size(); ++i)
    for (size_t j = i + 1; j < fam.size(); ++j) {
      bool meet = false, ionly = false, jonly = false;
      for (size_t w = 0; w < words; ++w) {
        uint64_t a = fam[i][w], b = fam[j][w];
        if (a & b) meet = true;
        if (a & ~b) ionly = true;
        if (b & ~a) jonly = true;
      }
      if (meet && ionly && jonly) return std::nullopt;
    }

  // Add the root cluster and the singletons, then hang every cluster under
  // the smallest strict superset: the tree of the laminar family.
  Mask full(words, 0);
  for (size_t i = 0; i < n; ++i) full[i / 64] |= uint64_t{1} << (i % 64);
  add(full);
  std::vector<Mask> singles;
  for (size_t i = 0; i < n; ++i) {
    Mask m(words, 0);
    m[i / 64] |= uint64_t{1} << (i % 64);
    add(m);
  }

  std::vector<size_t> bysize(fam.size());
  for (size_t i = 0; i < fam.size(); ++i) bysize[i] = i;
  std::sort(bysize.begin(), bysize.end(),
            [&](size_t a, size_t b) { return popcount(fam[a]) > popcount(fam[b]); });

  auto subset = [&](const Mask& a, const Mask& b) {
    for (size_t w = 0; w < words; ++w)
      if (a[w] & ~b[w]) return false;
    return true;
  };

  std::vector<PhyloTree::Node> nodes(fam.size());
  std::vector<Vertex> id(fam.size());
  for (size_t i = 0; i < fam.size(); ++i) id[i] = static_cast<Vertex>(i);
  Vertex root = kNoVertex;
  for (size_t oi = 0; oi < bysize.size(); ++oi) {
    size_t i = bysize[oi];
    if (popcount(fam[i]) == 1) {
      for (size_t b = 0; b < n; ++b)
        if (fam[i][b / 64] >> (b % 64) & 1) nodes[i].label = labels[b];
    }
    // Smallest strict superset appears earlier in bysize order; scan back.
    Vertex parent = kNoVertex;
    int best = -1;
    for (size_t oj = 0; oj < oi; ++oj) {
      size_t j = bysize[oj];
      if (popcount(fam[j]) > popcount(fam[i]) && subset(fam[i], fam[j])) {
        if (best == -1 || popcount(fam[j]) < best) {
          best = popcount(fam[j]);
          parent = static_cast<Vertex>(j);
        }
      }
    }
    if (parent == kNoVertex) {
      root = static_cast<Vertex>(i);
    } else {
      nodes[i].parent = parent;
      nodes[parent].children.push_back(static_cast<Vertex>(i));
    }
  }
  return PhyloTree::from_nodes(std::move(nodes), root);
}

}  // namespace mafkit
