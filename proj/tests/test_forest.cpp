#include <doctest.h>

#include "mafkit/forest.hpp"
#include "mafkit/generator.hpp"
#include "support.hpp"

using namespace mafkit;
using testutil::forest;
using testutil::newicks;
using testutil::tree;

TEST_CASE("agreement forest: the crossing 4-leaf instances") {
  PhyloTree t1 = tree("((a,b),(c,d));");
  PhyloTree t2 = tree("((a,c),(b,d));");

  CHECK(is_agreement_forest(forest({"(a,b);", "c;", "d;"}), t1, t2));

  ForestCertificate cert = check_agreement_forest(forest({"(a,b);", "(c,d);"}), t1, t2);
  CHECK_FALSE(cert.ok());
  CHECK(cert.violation == ForestCertificate::Violation::EmbeddingOverlap);

  CHECK(is_agreement_forest(forest({"((a,b),(c,d));"}), t1, t1));
}

TEST_CASE("agreement forest: partition and refinement violations") {
  PhyloTree t1 = tree("((a,b),c);");
  ForestCertificate missing = check_forest_for(forest({"(a,b);"}), t1);
  CHECK(missing.violation == ForestCertificate::Violation::NotPartition);

  ForestCertificate dup = check_forest_for(forest({"(a,b);", "(b,c);"}), t1);
  CHECK(dup.violation == ForestCertificate::Violation::NotPartition);

  ForestCertificate shape = check_forest_for(forest({"((a,c),b);"}), t1);
  CHECK(shape.violation == ForestCertificate::Violation::NotRefinement);

  CHECK_THROWS_AS(check_agreement_forest(forest({"(a,b);"}), t1, tree("(a,b);")),
                  std::invalid_argument);
}

TEST_CASE("cut: plain edge removal, refine-then-remove, root suppression") {
  Forest f = forest({"(a,b,c);"});
  Vertex root = f.components[0].root();

  Forest one = cut(f, 0, root, {f.components[0].find_leaf("a")});
  CHECK(newicks(one) == std::vector<std::string>{"a;", "(b,c);"});

  Forest two = cut(f, 0, root,
                   {f.components[0].find_leaf("a"), f.components[0].find_leaf("b")});
  CHECK(newicks(two) == std::vector<std::string>{"(a,b);", "c;"});

  Forest g = forest({"((a,b),c);"});
  Forest three = cut(g, 0, g.components[0].root(), {g.components[0].find_leaf("c")});
  CHECK(newicks(three) == std::vector<std::string>{"(a,b);", "c;"});
}

TEST_CASE("cut: errors") {
  Forest f = forest({"(a,b,c);"});
  Vertex root = f.components[0].root();
  std::vector<Vertex> all = f.components[0].children(root);
  CHECK_THROWS_AS(cut(f, 0, root, all), std::invalid_argument);
  CHECK_THROWS_AS(cut(f, 0, root, {}), std::invalid_argument);
  CHECK_THROWS_AS(cut(f, 0, f.components[0].find_leaf("a"), {root}), std::invalid_argument);
}

TEST_CASE("cut: grows the forest by one and preserves forest-for status") {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 60; ++rep) {
    PhyloTree t2 = random_tree(4 + static_cast<int>(draw(rng, 10)), rng, 0.25);
    Forest f;
    f.components.push_back(t2);
    for (int step = 0; step < 5; ++step) {
      // A random legal cut: any internal vertex, any proper child subset.
      std::vector<std::pair<int, Vertex>> internals;
      for (int ci = 0; ci < f.size(); ++ci)
        for (Vertex v = 0; v < f.components[ci].vertex_count(); ++v)
          if (!f.components[ci].is_leaf(v)) internals.emplace_back(ci, v);
      if (internals.empty()) break;
      auto [ci, v] = internals[draw(rng, internals.size())];
      const auto& ch = f.components[ci].children(v);
      uint64_t take = 1 + draw(rng, ch.size() - 1);
      std::vector<Vertex> subset(ch.begin(), ch.begin() + take);
      int before = f.size();
      f = cut(f, ci, v, subset);
      CHECK(f.size() == before + 1);
      CHECK(is_forest_for(f, t2));
    }
  }
}

TEST_CASE("forests_equal ignores order and vertex ids") {
  CHECK(forests_equal(forest({"(a,b);", "c;"}), forest({"c;", "(b,a);"})));
  CHECK_FALSE(forests_equal(forest({"(a,b);", "c;"}), forest({"(a,c);", "b;"})));
}
