#include "mafkit/maaf.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "mafkit/maf_approx.hpp"
#include "mafkit/maf_fpt.hpp"

namespace mafkit {

namespace {

// Preorder intervals for O(1) weak-descendant tests.
struct SubtreeIndex {
  std::vector<int> tin, tout;

  explicit SubtreeIndex(const PhyloTree& t) : tin(t.vertex_count()), tout(t.vertex_count()) {
    int clock = 0;
    auto dfs = [&](auto&& self, Vertex v) -> void {
      tin[v] = clock++;
      for (Vertex c : t.children(v)) self(self, c);
      tout[v] = clock;
    };
    dfs(dfs, t.root());
  }

  bool contains(Vertex anc, Vertex v) const {
    return tin[anc] <= tin[v] && tin[v] < tout[anc];
  }
};

// Embedding roots and per-vertex leaf counts of every component in t.
struct ComponentTrace {
  std::vector<Vertex> root;                 // image of each component's root
  std::vector<std::vector<int>> leafcount;  // [component][tree vertex]

  ComponentTrace(const PhyloTree& t, const Forest& f) {
    root.resize(f.size());
    leafcount.assign(f.size(), std::vector<int>(t.vertex_count(), 0));
    for (int i = 0; i < f.size(); ++i) {
      std::vector<Vertex> imgs;
      for (const auto& l : f.components[i].leaf_labels()) {
        Vertex v = t.find_leaf(l);
        if (v == kNoVertex) throw std::invalid_argument("forest leaf not in tree");
        imgs.push_back(v);
        for (Vertex w = v; w != kNoVertex; w = t.parent(w)) ++leafcount[i][w];
      }
      root[i] = t.lca(imgs);
    }
  }
};

void add_inheritance_edges(const PhyloTree& t, const Forest& f, WeightedDigraph& g) {
  ComponentTrace trace(t, f);
  SubtreeIndex idx(t);
  for (int i = 0; i < f.size(); ++i) {
    for (int j = 0; j < f.size(); ++j) {
      if (i == j) continue;
      Vertex ri = trace.root[i], rj = trace.root[j];
      if (ri == rj || !idx.contains(ri, rj)) continue;
      // First edge of the path ri -> rj: walk rj up to the child of ri.
      Vertex c = rj;
      while (t.parent(c) != ri) c = t.parent(c);
      if (trace.leafcount[i][c] >= 1) g.add_edge(i, j);
    }
  }
}

}  // namespace

InheritanceGraph inheritance_graph(const PhyloTree& t1, const PhyloTree& t2,
                                   const Forest& f) {
  ForestCertificate cert = check_agreement_forest(f, t1, t2);
  if (!cert.ok())
    throw std::invalid_argument("inheritance_graph: not an agreement forest: " + cert.detail);
  WeightedDigraph g(f.size());
  add_inheritance_edges(t1, f, g);
  add_inheritance_edges(t2, f, g);
  return g;
}

bool is_acyclic_agreement_forest(const PhyloTree& t1, const PhyloTree& t2,
                                 const Forest& f) {
  if (!is_agreement_forest(f, t1, t2)) return false;
  return is_acyclic(inheritance_graph(t1, t2, f));
}

namespace {

// Per-tree bookkeeping for the merge scan: embedding roots and, per tree
// edge (keyed by child endpoint), the component whose embedding uses it.
struct MergeIndex {
  std::vector<Vertex> root;
  std::vector<int> owner;

  MergeIndex(const PhyloTree& t, const std::vector<PhyloTree>& comps) {
    owner.assign(t.vertex_count(), -1);
    root.resize(comps.size());
    for (size_t i = 0; i < comps.size(); ++i) {
      Embedding e = embed(t, comps[i].label_set());
      root[i] = e.root;
      for (auto [u, v] : e.edges) owner[v] = static_cast<int>(i);
    }
  }

  // The merged embedding adds exactly the two root-to-LCA paths; the merge
  // is edge-feasible when every edge on them is free or already owned by
  // the pair.
  bool paths_free(const PhyloTree& t, int i, int j) const {
    Vertex lca = t.lca2(root[i], root[j]);
    for (Vertex w : {root[i], root[j]}) {
      for (Vertex v = w; v != lca; v = t.parent(v)) {
        if (owner[v] != -1 && owner[v] != i && owner[v] != j) return false;
      }
    }
    return true;
  }
};

}  // namespace

Forest maximalize(const PhyloTree& t1, const PhyloTree& t2, const Forest& a) {
  ForestCertificate cert = check_agreement_forest(a, t1, t2);
  if (!cert.ok())
    throw std::invalid_argument("maximalize: not an agreement forest: " + cert.detail);

  // Components carry stable ids so that rejected pairs are never retried:
  // merges only ever consume more tree edges, so a pair that failed the
  // edge test stays infeasible, and restriction compatibility is static.
  std::vector<std::pair<int, PhyloTree>> comps;
  int next_id = 0;
  {
    Forest cur = a;
    cur.canonicalize();
    for (PhyloTree& c : cur.components) comps.emplace_back(next_id++, std::move(c));
  }
  std::set<std::pair<int, int>> rejected;

  bool merged = true;
  while (merged) {
    merged = false;
    std::vector<PhyloTree> plain;
    for (auto& [id, c] : comps) plain.push_back(c);
    MergeIndex m1(t1, plain), m2(t2, plain);

    for (size_t i = 0; i < comps.size() && !merged; ++i) {
      for (size_t j = i + 1; j < comps.size() && !merged; ++j) {
        std::pair<int, int> key{std::min(comps[i].first, comps[j].first),
                                std::max(comps[i].first, comps[j].first)};
        if (rejected.count(key)) continue;
        bool same_roots = m1.root[i] == m1.root[j] && m2.root[i] == m2.root[j];
        if (!same_roots && (!m1.paths_free(t1, static_cast<int>(i), static_cast<int>(j)) ||
                            !m2.paths_free(t2, static_cast<int>(i), static_cast<int>(j)))) {
          rejected.insert(key);
          continue;
        }
        Cluster l = comps[i].second.label_set();
        for (const auto& s : comps[j].second.label_set()) l.insert(s);
        std::optional<PhyloTree> joint =
            common_refinement(restrict_to(t1, l), restrict_to(t2, l));
        if (!joint) {
          rejected.insert(key);
          continue;
        }
        comps.erase(comps.begin() + static_cast<long>(j));
        comps.erase(comps.begin() + static_cast<long>(i));
        comps.emplace_back(next_id++, std::move(*joint));
        std::sort(comps.begin(), comps.end(), [](const auto& x, const auto& y) {
          return x.second.leaf_labels() < y.second.leaf_labels();
        });
        merged = true;
      }
    }
  }
  Forest out;
  for (auto& [id, c] : comps) out.components.push_back(std::move(c));
  out.canonicalize();
  cert = check_agreement_forest(out, t1, t2);
  if (!cert.ok()) throw std::logic_error("maximalize: merge broke the forest: " + cert.detail);
  return out;
}

Forest minimally_refine(const PhyloTree& t1, const PhyloTree& t2, const Forest& a) {
  ForestCertificate cert = check_agreement_forest(a, t1, t2);
  if (!cert.ok())
    throw std::invalid_argument("minimally_refine: not an agreement forest: " + cert.detail);
  Forest out;
  for (const PhyloTree& comp : a.components) {
    Cluster l = comp.label_set();
    std::optional<PhyloTree> r = common_refinement(restrict_to(t1, l), restrict_to(t2, l));
    if (!r)
      throw std::logic_error("minimally_refine: component restrictions are incompatible");
    out.components.push_back(std::move(*r));
  }
  out.canonicalize();
  return out;
}

LabeledEmbedding label_trees(const PhyloTree& t1, const PhyloTree& t2, const Forest& a) {
  LabeledEmbedding emb;
  const PhyloTree* trees[2] = {&t1, &t2};
  for (int ti = 0; ti < 2; ++ti) {
    const PhyloTree& t = *trees[ti];
    emb.vertex_image[ti].resize(a.size());
    emb.edge_path[ti].resize(a.size());
    for (int ci = 0; ci < a.size(); ++ci) {
      const PhyloTree& comp = a.components[ci];
      auto& image = emb.vertex_image[ti][ci];
      image.assign(comp.vertex_count(), kNoVertex);
      for (Vertex v = 0; v < comp.vertex_count(); ++v) {
        if (!comp.is_leaf(v)) continue;
        image[v] = t.find_leaf(comp.label(v));
        if (image[v] == kNoVertex)
          throw std::invalid_argument("label_trees: forest leaf not in tree");
      }
      // Internal images bottom-up: LCA of the children's images.
      auto fill = [&](auto&& self, Vertex v) -> void {
        if (comp.is_leaf(v)) return;
        std::vector<Vertex> kids;
        for (Vertex c : comp.children(v)) {
          self(self, c);
          kids.push_back(image[c]);
        }
        image[v] = t.lca(kids);
      };
      fill(fill, comp.root());

      auto& paths = emb.edge_path[ti][ci];
      paths.assign(comp.vertex_count(), {});
      for (Vertex v = 0; v < comp.vertex_count(); ++v) {
        if (comp.parent(v) == kNoVertex) continue;
        Vertex top = image[comp.parent(v)];
        LabeledEmbedding::Path path;
        Vertex w = image[v];
        while (w != top) {
          if (w == kNoVertex || t.parent(w) == kNoVertex)
            throw std::logic_error("label_trees: endpoint images are not nested");
          path.emplace_back(t.parent(w), w);
          w = t.parent(w);
        }
        std::reverse(path.begin(), path.end());
        paths[v] = std::move(path);
      }
    }
  }
  // Every component edge must label a tree edge somewhere.
  for (int ci = 0; ci < a.size(); ++ci) {
    const PhyloTree& comp = a.components[ci];
    for (Vertex v = 0; v < comp.vertex_count(); ++v) {
      if (comp.parent(v) == kNoVertex) continue;
      if (emb.edge_path[0][ci][v].empty() && emb.edge_path[1][ci][v].empty())
        throw std::invalid_argument(
            "label_trees: a component edge labels no tree edge (forest is over-refined)");
    }
  }
  return emb;
}

WeightedDigraph build_dfvs_instance(const PhyloTree& t1, const PhyloTree& t2,
                                    const Forest& a, const LabeledEmbedding& emb) {
  WeightedDigraph d;
  d.mark_tagged();
  // One vertex per internal component vertex, one per component edge.
  std::vector<std::vector<int>> vv(a.size()), ve(a.size());
  for (int ci = 0; ci < a.size(); ++ci) {
    const PhyloTree& comp = a.components[ci];
    vv[ci].assign(comp.vertex_count(), -1);
    ve[ci].assign(comp.vertex_count(), -1);
    for (Vertex v = 0; v < comp.vertex_count(); ++v) {
      if (!comp.is_leaf(v)) {
        int id = d.add_vertex(static_cast<int64_t>(comp.children(v).size()) - 1);
        d.set_tag(id, {VertexTag::Kind::TreeVertex, ci, v});
        vv[ci][v] = id;
      }
      if (comp.parent(v) != kNoVertex) {
        int id = d.add_vertex(1);
        d.set_tag(id, {VertexTag::Kind::TreeEdge, ci, v});
        ve[ci][v] = id;
      }
    }
    // (v, e) for tail(e) = v.
    for (Vertex v = 0; v < comp.vertex_count(); ++v)
      if (comp.parent(v) != kNoVertex) d.add_edge(vv[ci][comp.parent(v)], ve[ci][v]);
  }

  // (e, v') when v''s image is weakly below the head of the topmost tree
  // edge labelled by e, in either tree.
  const PhyloTree* trees[2] = {&t1, &t2};
  for (int ti = 0; ti < 2; ++ti) {
    SubtreeIndex idx(*trees[ti]);
    for (int ci = 0; ci < a.size(); ++ci) {
      for (Vertex v = 0; v < a.components[ci].vertex_count(); ++v) {
        if (ve[ci][v] == -1) continue;
        const auto& path = emb.edge_path[ti][ci][v];
        if (path.empty()) continue;
        Vertex head = path.front().second;
        for (int cj = 0; cj < a.size(); ++cj) {
          for (Vertex w = 0; w < a.components[cj].vertex_count(); ++w) {
            if (vv[cj][w] == -1) continue;
            if (idx.contains(head, emb.vertex_image[ti][cj][w]))
              d.add_edge(ve[ci][v], vv[cj][w]);
          }
        }
      }
    }
  }
  return d;
}

namespace {

// D-vertex lookup tables recovered from the tags.
struct TagIndex {
  std::vector<std::vector<int>> vv, ve;  // [component][tree vertex] -> D vertex

  TagIndex(const Forest& a, const WeightedDigraph& d) {
    vv.resize(a.size());
    ve.resize(a.size());
    for (int i = 0; i < a.size(); ++i) {
      vv[i].assign(a.components[i].vertex_count(), -1);
      ve[i].assign(a.components[i].vertex_count(), -1);
    }
    for (int v = 0; v < d.vertex_count(); ++v) {
      const VertexTag& tag = d.tag(v);
      (tag.kind == VertexTag::Kind::TreeVertex ? vv : ve)[tag.component][tag.vertex] = v;
    }
  }
};

// Removing a non-root vertex of a component splits one more piece than its
// weight pays for, unless the edge entering it or its parent is removed
// too. The size identity needs every removed vertex anchored in this sense.
bool is_anchored(const Forest& a, const WeightedDigraph& d, const TagIndex& idx,
                 const std::vector<int>& f) {
  std::vector<bool> in_f(d.vertex_count(), false);
  for (int v : f) in_f[v] = true;
  for (int dv : f) {
    const VertexTag& tag = d.tag(dv);
    if (tag.kind != VertexTag::Kind::TreeVertex) continue;
    const PhyloTree& comp = a.components[tag.component];
    Vertex parent = comp.parent(tag.vertex);
    if (parent == kNoVertex) continue;  // component root
    int in_edge = idx.ve[tag.component][tag.vertex];
    int parent_vv = idx.vv[tag.component][parent];
    if (!in_f[in_edge] && !in_f[parent_vv]) return false;
  }
  return true;
}

// Rewrites unanchored vertex removals as child-edge removals of equal
// weight (all children but one; all of them as a last resort, one heavier).
// Each step removes a vertex from F and adds only edges, so it terminates.
FvsSolution anchor_fvs(const Forest& a, const WeightedDigraph& d, const TagIndex& idx,
                       FvsSolution f) {
  int guard = d.vertex_count() + 1;
  for (;;) {
    if (--guard < 0) throw std::logic_error("anchor_fvs: failed to converge");
    std::vector<bool> in_f(d.vertex_count(), false);
    for (int v : f.vertices) in_f[v] = true;
    int bad = -1;
    for (int dv : f.vertices) {
      const VertexTag& tag = d.tag(dv);
      if (tag.kind != VertexTag::Kind::TreeVertex) continue;
      const PhyloTree& comp = a.components[tag.component];
      Vertex parent = comp.parent(tag.vertex);
      if (parent == kNoVertex) continue;
      if (in_f[idx.ve[tag.component][tag.vertex]] || in_f[idx.vv[tag.component][parent]])
        continue;
      bad = dv;
      break;
    }
    if (bad == -1) return f;

    std::vector<int> base;
    for (int v : f.vertices)
      if (v != bad) base.push_back(v);
    bool swapped = false;
    for (int keep : d.out(bad)) {
      std::vector<int> cand = base;
      for (int e : d.out(bad))
        if (e != keep) cand.push_back(e);
      if (!is_fvs(d, cand)) continue;
      int64_t w = 0;
      std::sort(cand.begin(), cand.end());
      cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
      for (int v : cand) w += d.weight(v);
      f = minimalize(d, FvsSolution{cand, w});
      swapped = true;
      break;
    }
    if (!swapped) {
      // All children must go; costs one extra unit but restores the
      // accounting (the vertex then disappears with its subtrees).
      std::vector<int> cand = base;
      for (int e : d.out(bad)) cand.push_back(e);
      std::sort(cand.begin(), cand.end());
      cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
      int64_t w = 0;
      for (int v : cand) w += d.weight(v);
      f = minimalize(d, FvsSolution{cand, w});
    }
  }
}

}  // namespace

Forest split_by_fvs(const Forest& a, const std::vector<int>& d_vertices,
                    const WeightedDigraph& d) {
  if (!d.has_tags()) throw std::invalid_argument("split_by_fvs: untagged instance");
  std::vector<std::vector<bool>> drop_vertex(a.size()), drop_edge(a.size());
  for (int i = 0; i < a.size(); ++i) {
    drop_vertex[i].assign(a.components[i].vertex_count(), false);
    drop_edge[i].assign(a.components[i].vertex_count(), false);
  }
  for (int dv : d_vertices) {
    const VertexTag& tag = d.tag(dv);
    if (tag.kind == VertexTag::Kind::TreeVertex)
      drop_vertex[tag.component][tag.vertex] = true;
    else
      drop_edge[tag.component][tag.vertex] = true;
  }

  Forest out;
  for (int ci = 0; ci < a.size(); ++ci) {
    const PhyloTree& comp = a.components[ci];
    std::vector<PhyloTree::Node> nodes(comp.vertex_count());
    std::vector<bool> alive(comp.vertex_count());
    for (Vertex v = 0; v < comp.vertex_count(); ++v) {
      alive[v] = !drop_vertex[ci][v];
      nodes[v].label = comp.label(v);
    }
    for (Vertex v = 0; v < comp.vertex_count(); ++v) {
      if (!alive[v]) continue;
      Vertex p = comp.parent(v);
      if (p != kNoVertex && alive[p] && !drop_edge[ci][v]) {
        nodes[v].parent = p;
        nodes[p].children.push_back(v);
      }
    }
    // Internal vertices stripped of all their children carry no leaves and
    // go away, cascading upward.
    bool changed = true;
    while (changed) {
      changed = false;
      for (Vertex v = 0; v < comp.vertex_count(); ++v) {
        if (!alive[v] || !nodes[v].label.empty() || !nodes[v].children.empty()) continue;
        alive[v] = false;
        if (nodes[v].parent != kNoVertex) {
          auto& pc = nodes[nodes[v].parent].children;
          pc.erase(std::find(pc.begin(), pc.end(), v));
          nodes[v].parent = kNoVertex;
          changed = true;
        }
      }
    }
    for (Vertex v = 0; v < comp.vertex_count(); ++v) {
      if (!alive[v] || nodes[v].parent != kNoVertex) continue;
      out.components.push_back(PhyloTree::from_nodes(nodes, v));
    }
  }
  out.canonicalize();
  return out;
}

Forest remove_fvs(const Forest& a, const FvsSolution& f, const WeightedDigraph& d) {
  // Requires minimality and anchoredness rather than the child bound: an
  // unanchored non-root vertex splits one component more than its weight
  // pays for, which breaks the size identity even for child-bounded sets.
  if (!is_fvs(d, f.vertices))
    throw std::invalid_argument("remove_fvs: not a feedback vertex set");
  for (size_t i = 0; i < f.vertices.size(); ++i) {
    std::vector<int> trial = f.vertices;
    trial.erase(trial.begin() + static_cast<long>(i));
    if (is_fvs(d, trial))
      throw std::invalid_argument("remove_fvs: feedback vertex set is not minimal");
  }
  TagIndex idx(a, d);
  if (!is_anchored(a, d, idx, f.vertices))
    throw std::invalid_argument("remove_fvs: a removed non-root vertex is unanchored");
  Forest out = split_by_fvs(a, f.vertices, d);
  if (out.size() != a.size() + f.total_weight)
    throw std::logic_error("remove_fvs: splitting size identity |A\\F| = |A| + w(F) failed");
  return out;
}

MaafResult approximate_maaf(const PhyloTree& t1, const PhyloTree& t2,
                            MafMode maf_mode, DfvsMode dfvs_mode, int max_k) {
  Forest base;
  if (maf_mode == MafMode::Exact) {
    // The approximation bounds the deepening, so the default cap always lands.
    MafResult ub = approximate_maf(t1, t2);
    int bound = max_k >= 0 ? std::min(max_k, ub.cut_count) : ub.cut_count;
    auto exact = solve_maf_exact(t1, t2, bound);
    if (!exact) {
      if (max_k >= 0)
        throw InfeasibleError("no agreement forest within max-k=" + std::to_string(max_k));
      throw std::logic_error("approximate_maaf: exact MAF above its upper bound");
    }
    base = std::move(exact->forest);
  } else {
    base = approximate_maf(t1, t2).forest;
  }

  Forest a = minimally_refine(t1, t2, maximalize(t1, t2, base));
  LabeledEmbedding emb = label_trees(t1, t2, a);
  WeightedDigraph d = build_dfvs_instance(t1, t2, a, emb);

  FvsSolution f = dfvs_mode == DfvsMode::Exact ? solve_dfvs_exact(d) : solve_dfvs_greedy(d);
  f = properize(d, minimalize(d, f));
  f = anchor_fvs(a, d, TagIndex(a, d), f);

  Forest out = remove_fvs(a, f, d);

  MaafResult res;
  res.diag.maf_size = a.size();
  res.diag.dfvs_weight = f.total_weight;
  res.diag.proper = is_proper_fvs(d, f);
  res.diag.identity_holds = out.size() == a.size() + static_cast<int>(f.total_weight);
  res.diag.acyclic = is_acyclic_agreement_forest(t1, t2, out);
  if (!res.diag.acyclic)
    throw std::logic_error("approximate_maaf: output is not an acyclic agreement forest");
  InheritanceGraph ig = inheritance_graph(t1, t2, out);
  for (int u = 0; u < ig.vertex_count(); ++u)
    for (int v : ig.out(u)) res.diag.inheritance_edges.emplace_back(u, v);
  res.diag.components = out.size();
  res.diag.k = out.size() - 1;
  res.k = out.size() - 1;
  res.forest = std::move(out);
  res.dfvs_dump = d.dump();
  return res;
}

}  // namespace mafkit
