#include <doctest.h>

#include "mafkit/generator.hpp"
#include "mafkit/maaf.hpp"
#include "mafkit/maf_fpt.hpp"
#include "mafkit/oracle.hpp"
#include "support.hpp"

using namespace mafkit;
using testutil::forest;
using testutil::newicks;
using testutil::tree;

namespace {
const char* kCyclicT1 = "(((a,b),c),d);";
const char* kCyclicT2 = "(((c,d),a),b);";
}  // namespace

TEST_CASE("inheritance graph: singletons give an edgeless graph") {
  PhyloTree t1 = tree("((a,b),(c,d));");
  PhyloTree t2 = tree("((a,c),(b,d));");
  InheritanceGraph g = inheritance_graph(t1, t2, forest({"a;", "b;", "c;", "d;"}));
  CHECK(g.vertex_count() == 4);
  CHECK(g.edge_count() == 0);
}

TEST_CASE("inheritance graph: the two-cycle instance") {
  PhyloTree t1 = tree(kCyclicT1);
  PhyloTree t2 = tree(kCyclicT2);
  Forest f = forest({"(a,b);", "(c,d);"});
  f.canonicalize();  // component 0 = (a,b), 1 = (c,d)
  InheritanceGraph g = inheritance_graph(t1, t2, f);
  CHECK(g.has_edge(0, 1));
  CHECK(g.has_edge(1, 0));
  CHECK_FALSE(is_acyclic(g));
  CHECK_FALSE(is_acyclic_agreement_forest(t1, t2, f));

  // Splitting one pair off restores acyclicity: MAAF = 2 while MAF = 1.
  Forest split = forest({"(a,b);", "c;", "d;"});
  CHECK(is_acyclic_agreement_forest(t1, t2, split));
  CHECK(oracle::brute_maf(t1, t2).k == 1);
  CHECK(oracle::brute_maaf(t1, t2).k == 2);
}

TEST_CASE("inheritance graph rejects invalid forests") {
  PhyloTree t1 = tree("((a,b),c);");
  CHECK_THROWS_AS(inheritance_graph(t1, t1, forest({"(a,b);"})), std::invalid_argument);
}

TEST_CASE("maximalize merges as far as pairs allow") {
  // Identical trees: everything merges back into one component.
  PhyloTree t = tree("((a,b),(c,d));");
  Forest singletons = forest({"a;", "b;", "c;", "d;"});
  Forest m = maximalize(t, t, singletons);
  CHECK(m.size() == 1);
  CHECK(label_isomorphic(m.components[0], t));

  // Crossing cherries: singletons merge into {ab}, {c}, {d} and stop.
  PhyloTree t1 = tree("((a,b),(c,d));");
  PhyloTree t2 = tree("((a,c),(b,d));");
  Forest m2 = maximalize(t1, t2, singletons);
  CHECK(m2.size() == 3);
  CHECK(newicks(m2) == std::vector<std::string>{"(a,b);", "c;", "d;"});

  // An already-maximal forest is unchanged.
  Forest m3 = maximalize(t1, t2, m2);
  CHECK(forests_equal(m2, m3));
  CHECK(m3.size() <= m2.size());
}

TEST_CASE("minimally_refine collapses needless resolution") {
  PhyloTree star = tree("(a,b,c);");
  Forest over = forest({"((a,b),c);"});
  Forest r = minimally_refine(star, star, over);
  CHECK(newicks(r) == std::vector<std::string>{"(a,b,c);"});

  // Already-minimal components are unchanged.
  PhyloTree t = tree("((a,b),c);");
  Forest fine = forest({"((a,b),c);"});
  CHECK(forests_equal(minimally_refine(t, t, fine), fine));
}

TEST_CASE("minimally_refine: contracting any internal edge breaks the forest") {
  PhyloTree t1 = tree("(((a,b),c),(d,e));");
  PhyloTree t2 = tree("((a,b),(c,(d,e)));");
  auto ex = solve_maf_exact(t1, t2, 4);
  REQUIRE(ex.has_value());
  Forest a = minimally_refine(t1, t2, maximalize(t1, t2, ex->forest));
  for (int ci = 0; ci < a.size(); ++ci) {
    const PhyloTree& comp = a.components[ci];
    for (Vertex v = 0; v < comp.vertex_count(); ++v) {
      if (comp.is_leaf(v) || comp.parent(v) == kNoVertex) continue;
      // Contract the edge above v.
      std::vector<PhyloTree::Node> nodes = comp.nodes();
      Vertex p = nodes[v].parent;
      auto& pc = nodes[p].children;
      pc.erase(std::find(pc.begin(), pc.end(), v));
      for (Vertex c : nodes[v].children) {
        nodes[c].parent = p;
        pc.push_back(c);
      }
      nodes[v].children.clear();
      nodes[v].parent = kNoVertex;
      Forest coarser = a;
      coarser.components[ci] = PhyloTree::from_nodes(nodes, comp.root());
      CHECK_FALSE(is_agreement_forest(coarser, t1, t2));
    }
  }
}

TEST_CASE("label_trees: paths, collapsed images, over-refinement guard") {
  // Identical binary trees: every component edge labels one edge per tree.
  {
    PhyloTree t = tree("((a,b),(c,d));");
    Forest a = forest({"((a,b),(c,d));"});
    LabeledEmbedding emb = label_trees(t, t, a);
    for (int ti = 0; ti < 2; ++ti)
      for (Vertex v = 0; v < a.components[0].vertex_count(); ++v)
        if (a.components[0].parent(v) != kNoVertex)
          CHECK(emb.edge_path[ti][0][v].size() == 1);
  }
  // A component edge spanning a pruned region maps to a length-2 path.
  {
    PhyloTree t1 = tree("((a,b),c);");
    PhyloTree t2 = tree("(((a,b),x),c);");
    // Same label set is required; extend t1 with x as a sibling of c.
    t1 = tree("(((a,b),x),c);");
    Forest a = forest({"((a,b),c);", "x;"});
    REQUIRE(is_agreement_forest(a, t1, t2));
    LabeledEmbedding emb = label_trees(t1, t2, a);
    a.canonicalize();
    int comp = a.components[0].leaf_count() == 3 ? 0 : 1;
    Vertex ab = kNoVertex;
    for (Vertex v = 0; v < a.components[comp].vertex_count(); ++v)
      if (!a.components[comp].is_leaf(v) && a.components[comp].parent(v) != kNoVertex) ab = v;
    REQUIRE(ab != kNoVertex);
    CHECK(emb.edge_path[0][comp][ab].size() == 2);
    CHECK(emb.edge_path[1][comp][ab].size() == 2);
  }
  // Multifurcation: two component vertices share an image; the edge between
  // them has an empty path in the star tree.
  {
    PhyloTree t1 = tree("((a,b),(c,d));");
    PhyloTree t2 = tree("(a,b,c,d);");
    Forest a = forest({"((a,b),(c,d));"});
    LabeledEmbedding emb = label_trees(t1, t2, a);
    const PhyloTree& comp = a.components[0];
    int empty_paths = 0;
    for (Vertex v = 0; v < comp.vertex_count(); ++v) {
      if (comp.parent(v) == kNoVertex) continue;
      if (emb.edge_path[1][0][v].empty()) {
        ++empty_paths;
        CHECK(emb.vertex_image[1][0][v] == emb.vertex_image[1][0][comp.parent(v)]);
        CHECK_FALSE(emb.edge_path[0][0][v].empty());
      }
    }
    CHECK(empty_paths == 2);
  }
  // Over-refined input is rejected.
  {
    PhyloTree star = tree("(a,b,c);");
    CHECK_THROWS_AS(label_trees(star, star, forest({"((a,b),c);"})),
                    std::invalid_argument);
  }
}

TEST_CASE("build_dfvs_instance: weights and acyclic base case") {
  {
    PhyloTree t = tree("((a,b),(c,d));");
    Forest a = forest({"((a,b),(c,d));"});
    WeightedDigraph d = build_dfvs_instance(t, t, a, label_trees(t, t, a));
    CHECK(is_acyclic(d));
    CHECK(solve_dfvs_exact(d).total_weight == 0);
    // 3 internal vertices (weight 1 each, binary) + 6 edges (weight 1).
    CHECK(d.vertex_count() == 9);
    for (int v = 0; v < d.vertex_count(); ++v) CHECK(d.weight(v) == 1);
  }
  {
    PhyloTree big = tree("(a,b,c,d,e);");
    Forest a = forest({"(a,b,c,d,e);"});
    WeightedDigraph d = build_dfvs_instance(big, big, a, label_trees(big, big, a));
    int64_t mx = 0;
    for (int v = 0; v < d.vertex_count(); ++v) mx = std::max(mx, d.weight(v));
    CHECK(mx == 4);  // the outdegree-5 root
  }
}

TEST_CASE("build_dfvs_instance: the cyclic instance has a weight-1 FVS") {
  PhyloTree t1 = tree(kCyclicT1);
  PhyloTree t2 = tree(kCyclicT2);
  Forest a = minimally_refine(t1, t2, maximalize(t1, t2, forest({"(a,b);", "(c,d);"})));
  CHECK(a.size() == 2);
  WeightedDigraph d = build_dfvs_instance(t1, t2, a, label_trees(t1, t2, a));
  CHECK_FALSE(is_acyclic(d));
  FvsSolution f = solve_dfvs_exact(d);
  CHECK(f.total_weight == 1);
  f = properize(d, minimalize(d, f));
  Forest out = remove_fvs(a, f, d);
  CHECK(out.size() == 3);  // |A| + w(F)
  CHECK(is_acyclic_agreement_forest(t1, t2, out));
}

TEST_CASE("split_by_fvs: single removals behave like the size formula") {
  PhyloTree t = tree("((a,b),c);");
  Forest a = forest({"((a,b),c);"});
  WeightedDigraph d = build_dfvs_instance(t, t, a, label_trees(t, t, a));

  // Find the V_E vertex for the edge into the (a,b) vertex and the V_V root.
  int ve_ab = -1, vv_root = -1, root_w = 0;
  for (int v = 0; v < d.vertex_count(); ++v) {
    const VertexTag& tag = d.tag(v);
    const PhyloTree& comp = a.components[0];
    if (tag.kind == VertexTag::Kind::TreeEdge && !comp.is_leaf(tag.vertex)) ve_ab = v;
    if (tag.kind == VertexTag::Kind::TreeVertex && comp.parent(tag.vertex) == kNoVertex) {
      vv_root = v;
      root_w = static_cast<int>(d.weight(v));
    }
  }
  REQUIRE(ve_ab >= 0);
  REQUIRE(vv_root >= 0);

  CHECK(forests_equal(split_by_fvs(a, {}, d), a));
  CHECK(forests_equal(remove_fvs(a, FvsSolution{}, d), a));
  Forest cut_edge = split_by_fvs(a, {ve_ab}, d);
  CHECK(cut_edge.size() == a.size() + 1);
  CHECK(newicks(cut_edge) == std::vector<std::string>{"(a,b);", "c;"});
  Forest cut_root = split_by_fvs(a, {vv_root}, d);
  CHECK(cut_root.size() == a.size() + root_w);
}

TEST_CASE("remove_fvs rejects non-proper sets") {
  PhyloTree t1 = tree(kCyclicT1);
  PhyloTree t2 = tree(kCyclicT2);
  Forest a = minimally_refine(t1, t2, maximalize(t1, t2, forest({"(a,b);", "(c,d);"})));
  WeightedDigraph d = build_dfvs_instance(t1, t2, a, label_trees(t1, t2, a));
  // Everything is an FVS but certainly not minimal.
  std::vector<int> all;
  int64_t w = 0;
  for (int v = 0; v < d.vertex_count(); ++v) {
    all.push_back(v);
    w += d.weight(v);
  }
  CHECK_THROWS_AS(remove_fvs(a, FvsSolution{all, w}, d), std::invalid_argument);
}

TEST_CASE("FVS -> splitting, and the optima correspond, exhaustively") {
  PhyloTree t1 = tree(kCyclicT1);
  PhyloTree t2 = tree(kCyclicT2);
  Forest a = minimally_refine(t1, t2, maximalize(t1, t2, forest({"(a,b);", "(c,d);"})));
  WeightedDigraph d = build_dfvs_instance(t1, t2, a, label_trees(t1, t2, a));
  REQUIRE(d.vertex_count() <= 12);
  int64_t best_fvs = -1;
  int best_split = -1;
  for (uint32_t mask = 0; mask < (1u << d.vertex_count()); ++mask) {
    std::vector<int> subset;
    int64_t w = 0;
    for (int v = 0; v < d.vertex_count(); ++v)
      if (mask >> v & 1) {
        subset.push_back(v);
        w += d.weight(v);
      }
    bool fvs = is_fvs(d, subset);
    Forest split = split_by_fvs(a, subset, d);
    bool splitting = is_acyclic_agreement_forest(t1, t2, split);
    // Every feedback vertex set yields an acyclic splitting.
    if (fvs) CHECK(splitting);
    if (fvs && (best_fvs < 0 || w < best_fvs)) best_fvs = w;
    if (splitting && (best_split < 0 || split.size() < best_split)) best_split = split.size();
  }
  // Optimal FVS weight equals the optimal splitting's added component count.
  CHECK(best_fvs == best_split - a.size());
  CHECK(best_fvs == 1);
}

TEST_CASE("splitting without the matching FVS: the cascade edge case") {
  // Removing one pendant edge of a cherry component cascades: the root
  // turns indegree-0/outdegree-1 and takes the sibling edge with it, so the
  // result is an acyclic splitting although the removed set is no FVS.
  PhyloTree t1 = tree(kCyclicT1);
  PhyloTree t2 = tree(kCyclicT2);
  Forest a = minimally_refine(t1, t2, maximalize(t1, t2, forest({"(a,b);", "(c,d);"})));
  WeightedDigraph d = build_dfvs_instance(t1, t2, a, label_trees(t1, t2, a));
  int eb = -1;
  for (int v = 0; v < d.vertex_count(); ++v) {
    const VertexTag& tag = d.tag(v);
    if (tag.kind != VertexTag::Kind::TreeEdge) continue;
    const PhyloTree& comp = a.components[tag.component];
    if (comp.is_leaf(tag.vertex) && comp.label(tag.vertex) == "b") eb = v;
  }
  REQUIRE(eb >= 0);
  CHECK_FALSE(is_fvs(d, {eb}));
  Forest split = split_by_fvs(a, {eb}, d);
  CHECK(split.size() == 3);
  CHECK(is_acyclic_agreement_forest(t1, t2, split));
}

TEST_CASE("approximate_maaf: identical trees across all modes") {
  for (const char* s : {"((a,(b,c)),d);", "only;"}) {
    PhyloTree t = tree(s);
    for (MafMode mm : {MafMode::Approx, MafMode::Exact}) {
      for (DfvsMode dm : {DfvsMode::Exact, DfvsMode::Greedy}) {
        MaafResult r = approximate_maaf(t, t, mm, dm);
        CHECK(r.k == 0);
        CHECK(r.diag.components == 1);
        CHECK(r.diag.acyclic);
        CHECK(r.diag.identity_holds);
        CHECK(r.diag.proper);
      }
    }
  }
}

TEST_CASE("approximate_maaf: max_k caps the exact stage") {
  PhyloTree t1 = tree(kCyclicT1);
  PhyloTree t2 = tree(kCyclicT2);
  CHECK_THROWS_AS(approximate_maaf(t1, t2, MafMode::Exact, DfvsMode::Exact, 0),
                  InfeasibleError);
  MaafResult r = approximate_maaf(t1, t2, MafMode::Exact, DfvsMode::Exact, 3);
  CHECK(r.k == 2);
}

TEST_CASE("approximate_maaf: the cyclic instance lands on the optimum") {
  PhyloTree t1 = tree(kCyclicT1);
  PhyloTree t2 = tree(kCyclicT2);
  MaafResult r = approximate_maaf(t1, t2, MafMode::Exact, DfvsMode::Exact);
  int opt = oracle::brute_maaf(t1, t2).k;
  CHECK(opt == 2);
  CHECK(r.k <= 4 * opt);
  CHECK(r.k == 2);
  CHECK(r.diag.maf_size == 2);
  CHECK(r.diag.dfvs_weight == 1);
  CHECK(r.diag.inheritance_edges.size() == 2);
}

TEST_CASE("approximate_maaf ratios on every 4-leaf pair") {
  std::vector<PhyloTree> all = oracle::enumerate_trees({"a", "b", "c", "d"});
  for (const PhyloTree& t1 : all) {
    for (const PhyloTree& t2 : all) {
      int opt = oracle::brute_maaf(t1, t2).k;
      MaafResult exact = approximate_maaf(t1, t2, MafMode::Exact, DfvsMode::Exact);
      CHECK(exact.k <= 4 * opt);
      MaafResult approx = approximate_maaf(t1, t2, MafMode::Approx, DfvsMode::Exact);
      CHECK(approx.k <= 7 * opt);
      CHECK(exact.diag.identity_holds);
      CHECK(approx.diag.identity_holds);
    }
  }
}

TEST_CASE("pipeline stages preserve the leaf partition") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 15; ++i) {
    GeneratedPair p = generate_pair(8, 3, 300 + i);
    MafResult base = approximate_maf(p.t1, p.t2);
    Forest a = maximalize(p.t1, p.t2, base.forest);
    CHECK(a.label_set() == p.t1.label_set());
    CHECK(a.size() <= base.forest.size());
    Forest m = minimally_refine(p.t1, p.t2, a);
    CHECK(m.label_set() == p.t1.label_set());
    CHECK(m.size() == a.size());
    CHECK(is_agreement_forest(m, p.t1, p.t2));
  }
}
