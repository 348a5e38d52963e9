#include "mafkit/maf_approx.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <stdexcept>

namespace mafkit::approx {

namespace {

// Removes the leaf carrying `label`, suppressing whatever the removal
// exposes. The tree must have at least two leaves.
void remove_leaf(PhyloTree& t, const std::string& label) {
  Vertex v = t.find_leaf(label);
  if (v == kNoVertex) throw std::logic_error("remove_leaf: no leaf '" + label + "'");
  if (t.leaf_count() < 2) throw std::logic_error("remove_leaf: tree would become empty");
  std::vector<PhyloTree::Node> nodes = t.nodes();
  Vertex p = nodes[v].parent;
  auto& pc = nodes[p].children;
  pc.erase(std::find(pc.begin(), pc.end(), v));
  nodes[v].parent = kNoVertex;
  t = PhyloTree::from_nodes(std::move(nodes), t.root());
}

// The two collapse sub-rules: when the pair has no siblings their parent
// becomes the new leaf, otherwise c1 is deleted and c2 relabelled.
void collapse_pair(PhyloTree& t, const std::string& c1, const std::string& c2,
                   const std::string& fresh) {
  Vertex v1 = t.find_leaf(c1);
  Vertex v2 = t.find_leaf(c2);
  if (v1 == kNoVertex || v2 == kNoVertex || t.parent(v1) != t.parent(v2) ||
      t.parent(v1) == kNoVertex)
    throw std::logic_error("collapse_pair: leaves do not share a parent");
  std::vector<PhyloTree::Node> nodes = t.nodes();
  Vertex p = nodes[v1].parent;
  if (nodes[p].children.size() == 2) {
    nodes[p].children.clear();
    nodes[p].label = fresh;
  } else {
    auto& pc = nodes[p].children;
    pc.erase(std::find(pc.begin(), pc.end(), v1));
    nodes[v1].parent = kNoVertex;
    nodes[v2].label = fresh;
  }
  t = PhyloTree::from_nodes(std::move(nodes), t.root());
}

// Children of select_u's vertex, sorted.
std::vector<std::string> children_of_u(const PhyloTree& t1) {
  Vertex u = select_u(t1);
  std::vector<std::string> out;
  for (Vertex c : t1.children(u)) out.push_back(t1.label(c));
  std::sort(out.begin(), out.end());
  return out;
}

// Detaches the component subtree holding exactly the leaf set `part` as its
// own component (one cut), unless it already is one or `part` is empty.
// `part` must currently span a complete subtree of its component.
void detach_leaf_set(ApproxState& s, const std::vector<std::string>& part) {
  if (part.empty()) return;
  auto [ci, v] = s.work_f2.find_leaf(part.front());
  if (ci < 0) throw std::logic_error("detach_leaf_set: missing leaf");
  const PhyloTree& comp = s.work_f2.components[ci];
  Cluster want(part.begin(), part.end());
  if (comp.label_set() == want) return;  // already separate, no cut needed

  Vertex top = v;
  while (comp.parent(top) != kNoVertex) {
    Cluster above = comp.subtree_labels(comp.parent(top));
    bool inside = std::includes(want.begin(), want.end(), above.begin(), above.end());
    if (!inside) break;
    top = comp.parent(top);
  }
  if (comp.subtree_labels(top) != want)
    throw std::logic_error("detach_leaf_set: set is not a complete subtree");
  s.work_f2 = cut(s.work_f2, ci, comp.parent(top), {top});
  ++s.cut_count;
}

void assert_disjoint_from_c(const ApproxState& s, const Cluster& part, const char* what) {
  std::vector<std::string> c = children_of_u(s.work_t1);
  for (const auto& l : c)
    if (part.count(l))
      throw std::logic_error(std::string("case precondition: ") + what +
                             " contains the C-leaf '" + l + "'");
}

}  // namespace

int ExpansionLog::pending_singletons() const {
  int n = 0;
  for (const auto& r : records)
    if (r.kind == ExpansionRecord::Kind::RemoveSingleton) ++n;
  return n;
}

Forest ExpansionLog::replay(Forest f) const {
  for (auto it = records.rbegin(); it != records.rend(); ++it) {
    if (it->kind == ExpansionRecord::Kind::RemoveSingleton) {
      f.components.push_back(PhyloTree::leaf(it->removed));
      continue;
    }
    auto [ci, v] = f.find_leaf(it->synthetic_label);
    if (ci < 0)
      throw std::logic_error("replay: synthetic leaf '" + it->synthetic_label + "' not found");
    std::vector<PhyloTree::Node> nodes = f.components[ci].nodes();
    Vertex root = f.components[ci].root();
    nodes[v].label.clear();
    Vertex a = static_cast<Vertex>(nodes.size());
    nodes.push_back({v, {}, it->child1});
    Vertex b = static_cast<Vertex>(nodes.size());
    nodes.push_back({v, {}, it->child2});
    nodes[v].children = {a, b};
    f.components[ci] = PhyloTree::from_nodes(std::move(nodes), root);
  }
  f.canonicalize();
  return f;
}

std::string ApproxState::fresh_label() {
  return synth_prefix + std::to_string(++synth_counter);
}

void ApproxState::check_invariants() const {
  if (work_t1.label_set() != work_f2.label_set())
    throw std::logic_error("approx state: label sets of T1 and F2 diverged");
  int expected = work_f2.size() + log.pending_singletons() - 1;
  if (cut_count != expected)
    throw std::logic_error("approx state: cut accounting is off (" +
                           std::to_string(cut_count) + " vs " + std::to_string(expected) + ")");
}

ApproxState make_state(const PhyloTree& t1, const PhyloTree& t2) {
  if (t1.label_set() != t2.label_set())
    throw std::invalid_argument("maf: trees have different leaf sets");
  ApproxState s;
  s.work_t1 = t1;
  s.work_t1.canonicalize();
  s.work_f2.components.push_back(t2);
  s.work_f2.components.back().canonicalize();
  // Synthetic labels must not collide with X: grow a '#' prefix until no
  // original label starts with it.
  s.synth_prefix = "#";
  for (;;) {
    bool clash = false;
    for (const auto& l : t1.leaf_labels())
      if (l.rfind(s.synth_prefix, 0) == 0) { clash = true; break; }
    if (!clash) break;
    s.synth_prefix += '#';
  }
  return s;
}

Vertex select_u(const PhyloTree& t1) {
  if (t1.leaf_count() < 2)
    throw std::invalid_argument("select_u: tree is a single leaf");
  Vertex best = kNoVertex;
  const std::string* best_key = nullptr;
  for (Vertex v = 0; v < t1.vertex_count(); ++v) {
    if (t1.is_leaf(v)) continue;
    const std::string* key = nullptr;
    bool all_leaves = true;
    for (Vertex c : t1.children(v)) {
      if (!t1.is_leaf(c)) { all_leaves = false; break; }
      if (key == nullptr || t1.label(c) < *key) key = &t1.label(c);
    }
    if (!all_leaves) continue;
    if (best == kNoVertex || *key < *best_key) {
      best = v;
      best_key = key;
    }
  }
  assert(best != kNoVertex);
  return best;
}

CaseDecision decide_case(const ApproxState& s) {
  CaseDecision d;
  if (s.work_t1.leaf_count() <= 1) {
    d.kind = CaseDecision::Kind::Done;
    return d;
  }
  std::vector<std::string> c = children_of_u(s.work_t1);

  // Locate every C-leaf in the forest.
  struct Spot { int comp; Vertex v; Vertex parent; };
  std::vector<Spot> spot(c.size());
  for (size_t i = 0; i < c.size(); ++i) {
    auto [ci, v] = s.work_f2.find_leaf(c[i]);
    if (ci < 0) throw std::logic_error("decide_case: C-leaf missing from forest");
    spot[i] = {ci, v, s.work_f2.components[ci].parent(v)};
  }

  // Case 0a: lexicographically first pair with a common forest parent.
  for (size_t i = 0; i < c.size(); ++i) {
    if (spot[i].parent == kNoVertex) continue;
    for (size_t j = i + 1; j < c.size(); ++j) {
      if (spot[i].comp == spot[j].comp && spot[i].parent == spot[j].parent) {
        d.kind = CaseDecision::Kind::Case0a;
        d.c1 = c[i];
        d.c2 = c[j];
        return d;
      }
    }
  }

  // Case 0b: first isolated C-leaf.
  for (size_t i = 0; i < c.size(); ++i) {
    if (spot[i].parent == kNoVertex) {
      d.kind = CaseDecision::Kind::Case0b;
      d.c = c[i];
      return d;
    }
  }

  // Case 0c: all in pairwise distinct components.
  bool shared = false;
  for (size_t i = 0; i < c.size() && !shared; ++i)
    for (size_t j = i + 1; j < c.size(); ++j)
      if (spot[i].comp == spot[j].comp) { shared = true; break; }
  if (!shared) {
    d.kind = CaseDecision::Kind::Case0c;
    d.c1 = c[0];
    d.c2 = c[1];
    return d;
  }

  PairChoice pc = select_pair(s);
  d.kind = pc.neither_child_of_lca ? CaseDecision::Kind::Case1 : CaseDecision::Kind::Case2;
  d.c1 = pc.c1;
  d.c2 = pc.c2;
  return d;
}

PairChoice select_pair(const ApproxState& s) {
  std::vector<std::string> c = children_of_u(s.work_t1);
  bool found = false;
  int best_depth = -1;
  bool best_neither = false;
  PairChoice best;
  for (size_t i = 0; i < c.size(); ++i) {
    auto [ci, vi] = s.work_f2.find_leaf(c[i]);
    for (size_t j = i + 1; j < c.size(); ++j) {
      auto [cj, vj] = s.work_f2.find_leaf(c[j]);
      if (ci != cj) continue;
      const PhyloTree& comp = s.work_f2.components[ci];
      Vertex lca = comp.lca2(vi, vj);
      int depth = comp.depth(lca);
      bool neither = comp.parent(vi) != lca && comp.parent(vj) != lca;
      // Deeper LCA first, then pairs clear of their LCA, then pair order.
      bool better = !found || depth > best_depth ||
                    (depth == best_depth && neither && !best_neither);
      if (!better) continue;
      found = true;
      best_depth = depth;
      best_neither = neither;
      if (neither) {
        best = {c[i], c[j], true};
      } else {
        // Orient so that c1 is the child of the LCA (exactly one is; two
        // would be a 0a situation).
        if (comp.parent(vi) == lca)
          best = {c[i], c[j], false};
        else
          best = {c[j], c[i], false};
      }
    }
  }
  if (!found) throw std::logic_error("select_pair: no component holds two C-leaves");
  return best;
}

void apply_case0a(ApproxState& s, const std::string& c1, const std::string& c2) {
  auto [ci, v1] = s.work_f2.find_leaf(c1);
  auto [cj, v2] = s.work_f2.find_leaf(c2);
  if (ci < 0 || ci != cj) throw std::invalid_argument("case 0a: pair not in one component");
  PhyloTree& comp = s.work_f2.components[ci];
  if (comp.parent(v1) == kNoVertex || comp.parent(v1) != comp.parent(v2))
    throw std::invalid_argument("case 0a: pair has no common parent");
  std::string fresh = s.fresh_label();
  bool had_siblings = comp.children(comp.parent(v1)).size() > 2;
  collapse_pair(comp, c1, c2, fresh);
  collapse_pair(s.work_t1, c1, c2, fresh);
  s.log.records.push_back({ExpansionRecord::Kind::Collapse, fresh, c1, c2, had_siblings, ""});
#ifndef NDEBUG
  s.check_invariants();
#endif
}

void apply_case0b(ApproxState& s, const std::string& c) {
  auto [ci, v] = s.work_f2.find_leaf(c);
  if (ci < 0 || s.work_f2.components[ci].leaf_count() != 1)
    throw std::invalid_argument("case 0b: leaf is not an isolated component");
  s.work_f2.components.erase(s.work_f2.components.begin() + ci);
  remove_leaf(s.work_t1, c);
  s.log.records.push_back(
      {ExpansionRecord::Kind::RemoveSingleton, "", "", "", false, c});
#ifndef NDEBUG
  s.check_invariants();
#endif
}

void remove_leaf_as_singleton(ApproxState& s, const std::string& label) {
  auto [ci, v] = s.work_f2.find_leaf(label);
  if (ci < 0) throw std::invalid_argument("remove as singleton: leaf not found");
  if (s.work_f2.components[ci].leaf_count() < 2)
    throw std::invalid_argument("remove as singleton: leaf is already isolated");
  // Detaching the leaf and dropping the resulting singleton in one step.
  remove_leaf(s.work_f2.components[ci], label);
  ++s.cut_count;
  remove_leaf(s.work_t1, label);
  s.log.records.push_back(
      {ExpansionRecord::Kind::RemoveSingleton, "", "", "", false, label});
#ifndef NDEBUG
  s.check_invariants();
#endif
}

void apply_case0c(ApproxState& s) {
  std::vector<std::string> c = children_of_u(s.work_t1);
  // Preconditions: no shared component, no isolated leaf, no shared parent.
  std::map<int, int> comp_count;
  for (const auto& l : c) {
    auto [ci, v] = s.work_f2.find_leaf(l);
    if (s.work_f2.components[ci].leaf_count() < 2)
      throw std::invalid_argument("case 0c: a C-leaf is isolated (0b applies)");
    if (++comp_count[ci] > 1)
      throw std::invalid_argument("case 0c: two C-leaves share a component");
  }
  for (const auto& l : c) remove_leaf_as_singleton(s, l);
}

void apply_case1(ApproxState& s, const std::string& c1, const std::string& c2) {
  auto [ci, v1] = s.work_f2.find_leaf(c1);
  auto [cj, v2] = s.work_f2.find_leaf(c2);
  if (ci < 0 || ci != cj) throw std::invalid_argument("case 1: pair not in one component");
  const PhyloTree& comp = s.work_f2.components[ci];
  Vertex lca = comp.lca2(v1, v2);
  Vertex p1 = comp.parent(v1);
  Vertex p2 = comp.parent(v2);
  if (p1 == lca || p2 == lca)
    throw std::invalid_argument("case 1: a leaf is a child of the LCA");
  if (p1 == p2 || comp.parent(p1) == kNoVertex || comp.parent(p2) == kNoVertex)
    throw std::invalid_argument("case 1: malformed configuration");

  Cluster s1 = comp.subtree_labels(p1);
  s1.erase(c1);
  Cluster s2 = comp.subtree_labels(p2);
  s2.erase(c2);
  assert_disjoint_from_c(s, s1, "S1");
  assert_disjoint_from_c(s, s2, "S2");

  detach_leaf_set(s, {c1});
  detach_leaf_set(s, {s1.begin(), s1.end()});
  detach_leaf_set(s, {c2});
  detach_leaf_set(s, {s2.begin(), s2.end()});
#ifndef NDEBUG
  s.check_invariants();
#endif
}

void apply_case2(ApproxState& s, const std::string& c1, const std::string& c2) {
  auto [ci, v1] = s.work_f2.find_leaf(c1);
  auto [cj, v2] = s.work_f2.find_leaf(c2);
  if (ci < 0 || ci != cj) throw std::invalid_argument("case 2: pair not in one component");
  const PhyloTree& comp = s.work_f2.components[ci];
  Vertex lca = comp.lca2(v1, v2);
  Vertex p1 = comp.parent(v1);
  Vertex p2 = comp.parent(v2);
  if (p1 != lca) throw std::invalid_argument("case 2: c1 must be a child of the LCA");
  if (p2 == p1) throw std::invalid_argument("case 2: common parent is a 0a situation");

  Cluster s2 = comp.subtree_labels(p2);
  s2.erase(c2);
  Cluster s1 = comp.subtree_labels(p1);
  s1.erase(c1);
  s1.erase(c2);
  for (const auto& l : s2) s1.erase(l);
  assert_disjoint_from_c(s, s1, "S1");
  assert_disjoint_from_c(s, s2, "S2");

  detach_leaf_set(s, {c1});
  detach_leaf_set(s, {c2});
  detach_leaf_set(s, {s2.begin(), s2.end()});
  detach_leaf_set(s, {s1.begin(), s1.end()});
#ifndef NDEBUG
  s.check_invariants();
#endif
}

void cut_single_leaf(ApproxState& s, const std::string& label) {
  auto [ci, v] = s.work_f2.find_leaf(label);
  if (ci < 0 || s.work_f2.components[ci].leaf_count() < 2)
    throw std::invalid_argument("cut_single_leaf: leaf missing or already isolated");
  const PhyloTree& comp = s.work_f2.components[ci];
  s.work_f2 = cut(s.work_f2, ci, comp.parent(v), {v});
  ++s.cut_count;
#ifndef NDEBUG
  s.check_invariants();
#endif
}

void cut_group_excluding(ApproxState& s, const std::string& label) {
  auto [ci, v] = s.work_f2.find_leaf(label);
  if (ci < 0) throw std::invalid_argument("cut_group_excluding: leaf not found");
  const PhyloTree& comp = s.work_f2.components[ci];
  Vertex p = comp.parent(v);
  if (p == kNoVertex) throw std::invalid_argument("cut_group_excluding: isolated leaf");
  std::vector<Vertex> group;
  for (Vertex c : comp.children(p))
    if (c != v) group.push_back(c);
  s.work_f2 = cut(s.work_f2, ci, p, group);
  ++s.cut_count;
#ifndef NDEBUG
  s.check_invariants();
#endif
}

Forest finish(const ApproxState& s, const PhyloTree& t1, const PhyloTree& t2) {
  Forest result = s.log.replay(s.work_f2);
  // Replay resolves collapsed pairs as cherries, which can leave components
  // more refined than the trees warrant; normalize each to the minimal
  // common refinement of the two restrictions.
  for (PhyloTree& comp : result.components) {
    Cluster l = comp.label_set();
    auto minimal = common_refinement(restrict_to(t1, l), restrict_to(t2, l));
    if (!minimal)
      throw std::logic_error("maf: component restrictions are incompatible");
    comp = std::move(*minimal);
  }
  result.canonicalize();
  ForestCertificate cert = check_agreement_forest(result, t1, t2);
  if (!cert.ok())
    throw std::logic_error("maf: produced forest is not an agreement forest: " + cert.detail);
  if (result.size() != s.cut_count + 1)
    throw std::logic_error("maf: component accounting is off");
  return result;
}

}  // namespace mafkit::approx

namespace mafkit {

MafResult approximate_maf(const PhyloTree& t1, const PhyloTree& t2) {
  using namespace approx;
  ApproxState s = make_state(t1, t2);
  // Each iteration either shrinks T1 or cuts the forest; both are bounded.
  long guard = static_cast<long>(t1.leaf_count() + 2) * (t1.leaf_count() + 2);
  while (s.work_t1.leaf_count() > 1) {
    if (--guard < 0) throw std::logic_error("maf: iteration guard tripped");
    CaseDecision d = decide_case(s);
    switch (d.kind) {
      case CaseDecision::Kind::Case0a: apply_case0a(s, d.c1, d.c2); break;
      case CaseDecision::Kind::Case0b: apply_case0b(s, d.c); break;
      case CaseDecision::Kind::Case0c: apply_case0c(s); break;
      case CaseDecision::Kind::Case1: apply_case1(s, d.c1, d.c2); break;
      case CaseDecision::Kind::Case2: apply_case2(s, d.c1, d.c2); break;
      case CaseDecision::Kind::Done: break;
    }
  }
  return {finish(s, t1, t2), s.cut_count};
}

}  // namespace mafkit
