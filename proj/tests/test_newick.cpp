#include <doctest.h>

#include "mafkit/generator.hpp"
#include "mafkit/newick.hpp"
#include "support.hpp"

using namespace mafkit;
using testutil::tree;

TEST_CASE("parse: basic shapes") {
  PhyloTree t = tree("((a,b),c);");
  CHECK(t.leaf_count() == 3);
  CHECK(t.children(t.root()).size() == 2);
  Vertex a = t.find_leaf("a");
  Vertex b = t.find_leaf("b");
  CHECK(t.parent(a) == t.parent(b));
  CHECK(t.parent(t.parent(a)) == t.root());

  PhyloTree star = tree("(a,b,c,d);");
  CHECK(star.children(star.root()).size() == 4);
}

TEST_CASE("parse: duplicate label is an error") {
  CHECK_THROWS_AS(tree("((a,a),b);"), NewickError);
}

TEST_CASE("parse: grammar-made unary vertices are suppressed") {
  CHECK(write_newick(tree("((a));")) == "a;");
  CHECK(write_newick(tree("(a);")) == "a;");
  CHECK(write_newick(tree("(((a,b)));")) == "(a,b);");
}

TEST_CASE("parse: branch lengths and internal names are discarded") {
  CHECK(write_newick(tree("((a:1.5,b:2e-3)anc:0.3,c:1)root;")) == "((a,b),c);");
}

TEST_CASE("parse: quoted labels") {
  PhyloTree t = tree("('sp one','it''s',c);");
  CHECK(t.find_leaf("sp one") != kNoVertex);
  CHECK(t.find_leaf("it's") != kNoVertex);
  PhyloTree back = tree(write_newick(t));
  CHECK(label_isomorphic(t, back));
}

TEST_CASE("parse: errors carry a position") {
  CHECK_THROWS_AS(tree(""), NewickError);
  CHECK_THROWS_AS(tree("();"), NewickError);
  CHECK_THROWS_AS(tree("((a,b);"), NewickError);
  CHECK_THROWS_AS(tree("(a,b)"), NewickError);
  CHECK_THROWS_AS(tree("(a,b);junk"), NewickError);
  try {
    tree("((a,b),);");
    CHECK(false);
  } catch (const NewickError& e) {
    CHECK(e.position == 7);
  }
}

TEST_CASE("write: canonical forms") {
  CHECK(write_newick(tree("x;")) == "x;");
  CHECK(write_newick(tree("(c,a,b);")) == "(a,b,c);");
  CHECK(write_newick(tree("((d,c),(b,a));")) == "((a,b),(c,d));");
}

TEST_CASE("write/parse round trip on random trees") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    PhyloTree t = random_tree(2 + static_cast<int>(draw(rng, 30)), rng, 0.3);
    PhyloTree back = tree(write_newick(t));
    CHECK(label_isomorphic(t, back));
    CHECK(write_newick(back) == write_newick(t));
  }
}
