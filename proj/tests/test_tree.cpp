#include <doctest.h>

#include <algorithm>
#include <map>

#include "mafkit/oracle.hpp"
#include "mafkit/tree.hpp"
#include "support.hpp"

using namespace mafkit;
using testutil::tree;

TEST_CASE("restrict: forced suppression") {
  PhyloTree t = tree("((a,b),(c,d));");
  CHECK(write_newick(restrict_to(t, {"a", "c"})) == "(a,c);");
}

TEST_CASE("restrict: multifurcation subset") {
  PhyloTree t = tree("(a,b,c);");
  CHECK(write_newick(restrict_to(t, {"a", "b"})) == "(a,b);");
}

TEST_CASE("restrict: whole leaf set is the identity") {
  for (const char* s : {"((a,b),c);", "(a,(b,(c,d)),e);", "x;"}) {
    PhyloTree t = tree(s);
    CHECK(label_isomorphic(restrict_to(t, t.label_set()), t));
  }
}

TEST_CASE("restrict: idempotent and errors") {
  PhyloTree t = tree("((a,(b,e)),(c,d));");
  Cluster s{"a", "b", "c"};
  PhyloTree once = restrict_to(t, s);
  CHECK(label_isomorphic(restrict_to(once, s), once));
  CHECK_THROWS_AS(restrict_to(t, Cluster{"a", "zz"}), std::invalid_argument);
  CHECK_THROWS_AS(restrict_to(t, Cluster{}), std::invalid_argument);
}

TEST_CASE("restrict is displayed by the original tree") {
  // Restriction clusters are traces of original clusters.
  PhyloTree t = tree("(((a,b),c,(d,e)),(f,g));");
  for (Cluster s : {Cluster{"a", "c", "d"}, Cluster{"b", "f"}, Cluster{"a", "b", "g", "e"}}) {
    PhyloTree r = restrict_to(t, s);
    for (const Cluster& c : r.clusters()) {
      bool found = false;
      for (const Cluster& orig : t.clusters()) {
        Cluster trace;
        for (const auto& l : orig)
          if (s.count(l)) trace.insert(l);
        if (trace == c) { found = true; break; }
      }
      CHECK(found);
    }
  }
}

TEST_CASE("embed: cherry edges") {
  PhyloTree t = tree("((a,b),c);");
  Embedding e = embed(t, {"a", "b"});
  REQUIRE(e.edges.size() == 2);
  Vertex cherry = t.parent(t.find_leaf("a"));
  CHECK(e.root == cherry);
  for (auto [u, v] : e.edges) CHECK(u == cherry);
}

TEST_CASE("embed: singleton is degenerate") {
  PhyloTree t = tree("((a,b),c);");
  Embedding e = embed(t, {"a"});
  CHECK(e.edges.empty());
  CHECK(e.root == t.find_leaf("a"));
}

TEST_CASE("embed: spanning subtree of {c,d} in (((a,b),c),d)") {
  PhyloTree t = tree("(((a,b),c),d);");
  Embedding e = embed(t, {"c", "d"});
  CHECK(e.root == t.root());
  REQUIRE(e.edges.size() == 3);
  Vertex d = t.find_leaf("d");
  Vertex c = t.find_leaf("c");
  Vertex v1 = t.parent(c);  // the ((a,b),c) vertex
  std::vector<std::pair<Vertex, Vertex>> want{{t.root(), d}, {t.root(), v1}, {v1, c}};
  std::sort(want.begin(), want.end());
  CHECK(e.edges == want);
}

TEST_CASE("is_refinement basics") {
  CHECK(is_refinement(tree("((a,b),c);"), tree("(a,b,c);")));
  CHECK_FALSE(is_refinement(tree("((a,b),c);"), tree("((a,c),b);")));
  PhyloTree t = tree("((a,b),(c,d));");
  CHECK(is_refinement(t, t));
  CHECK_THROWS_AS(is_refinement(tree("(a,b);"), tree("(a,c);")), std::invalid_argument);
}

TEST_CASE("common_refinement examples") {
  CHECK(write_newick(*common_refinement(tree("(a,b,c);"), tree("((a,b),c);"))) ==
        "((a,b),c);");
  CHECK(!common_refinement(tree("((a,b),c);"), tree("((a,c),b);")).has_value());
  CHECK(write_newick(*common_refinement(tree("(a,b,c,d);"), tree("((a,b),(c,d));"))) ==
        "((a,b),(c,d));");
}

TEST_CASE("common_refinement: minimal over all trees on <= 4 leaves") {
  std::vector<std::string> labels{"a", "b", "c", "d"};
  std::vector<PhyloTree> all = oracle::enumerate_trees(labels);
  REQUIRE(all.size() == 26);
  for (const PhyloTree& t1 : all) {
    for (const PhyloTree& t2 : all) {
      auto r = common_refinement(t1, t2);
      if (!r) continue;
      CHECK(is_refinement(*r, t1));
      CHECK(is_refinement(*r, t2));
      // Minimality: every common refinement refines the result.
      for (const PhyloTree& cand : all)
        if (is_refinement(cand, t1) && is_refinement(cand, t2))
          CHECK(is_refinement(cand, *r));
    }
  }
}

TEST_CASE("common_refinement: minimal over all trees on 5 leaves") {
  std::vector<std::string> labels{"a", "b", "c", "d", "e"};
  std::vector<PhyloTree> all = oracle::enumerate_trees(labels);
  REQUIRE(all.size() == 236);

  // Cluster sets as sorted bitmask lists make the triple loop cheap.
  auto mask_clusters = [&](const PhyloTree& t) {
    std::vector<uint32_t> out;
    for (const Cluster& c : t.clusters()) {
      uint32_t m = 0;
      for (const auto& l : c) m |= 1u << (l[0] - 'a');
      out.push_back(m);
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  auto contains_all = [](const std::vector<uint32_t>& big, const std::vector<uint32_t>& small) {
    return std::includes(big.begin(), big.end(), small.begin(), small.end());
  };
  std::vector<std::vector<uint32_t>> masks;
  for (const PhyloTree& t : all) masks.push_back(mask_clusters(t));

  int compatible = 0;
  for (size_t i = 0; i < all.size(); ++i) {
    for (size_t j = 0; j < all.size(); ++j) {
      auto r = common_refinement(all[i], all[j]);
      if (!r) continue;
      ++compatible;
      auto rm = mask_clusters(*r);
      CHECK(contains_all(rm, masks[i]));
      CHECK(contains_all(rm, masks[j]));
      for (size_t k = 0; k < all.size(); ++k)
        if (contains_all(masks[k], masks[i]) && contains_all(masks[k], masks[j]))
          CHECK(contains_all(masks[k], rm));
    }
  }
  CHECK(compatible > 236);  // at least every tree with itself and with the star
}

TEST_CASE("single-leaf tree is legal") {
  PhyloTree t = tree("only;");
  CHECK(t.leaf_count() == 1);
  CHECK(t.vertex_count() == 1);
  CHECK(write_newick(restrict_to(t, {"only"})) == "only;");
}

TEST_CASE("clusters and lca") {
  PhyloTree t = tree("(((a,b),c),d);");
  auto cs = t.clusters();
  CHECK(cs.size() == 3);
  Vertex a = t.find_leaf("a");
  Vertex c = t.find_leaf("c");
  Vertex d = t.find_leaf("d");
  CHECK(t.lca2(a, c) == t.parent(c));
  CHECK(t.lca2(a, d) == t.root());
  CHECK(t.depth(a) == 3);
  CHECK(t.is_ancestor(t.root(), a));
  CHECK_FALSE(t.is_ancestor(a, t.root()));
}
