#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mafkit/generator.hpp"
#include "mafkit/maaf.hpp"
#include "mafkit/maf_approx.hpp"
#include "mafkit/maf_fpt.hpp"
#include "mafkit/newick.hpp"
#include "mafkit/oracle.hpp"

namespace py = pybind11;
using namespace mafkit;

namespace {

Cluster to_cluster(const std::vector<std::string>& labels) {
  return Cluster(labels.begin(), labels.end());
}

Forest forest_from_newicks(const std::vector<std::string>& lines) {
  Forest f;
  for (const auto& line : lines) f.components.push_back(parse_newick(line));
  return f;
}

std::vector<std::string> forest_to_newicks(const Forest& f) {
  Forest c = f;
  c.canonicalize();
  std::vector<std::string> out;
  for (const auto& comp : c.components) out.push_back(write_newick(comp));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Agreement forests for rooted multifurcating phylogenetic trees";

  py::class_<PhyloTree>(m, "Tree")
      .def_static("leaf", &PhyloTree::leaf, py::arg("label"))
      .def("newick", [](const PhyloTree& t) { return write_newick(t); })
      .def("leaf_labels", &PhyloTree::leaf_labels)
      .def("leaf_count", &PhyloTree::leaf_count)
      .def("vertex_count", &PhyloTree::vertex_count)
      .def("__eq__", [](const PhyloTree& a, const PhyloTree& b) {
        return label_isomorphic(a, b);
      })
      .def("__repr__", [](const PhyloTree& t) { return "Tree('" + write_newick(t) + "')"; });

  py::class_<Forest>(m, "Forest")
      .def(py::init(&forest_from_newicks), py::arg("newicks"))
      .def("newicks", &forest_to_newicks)
      .def("size", &Forest::size)
      .def("__len__", &Forest::size)
      .def("__repr__", [](const Forest& f) {
        return "Forest(" + std::to_string(f.size()) + " components)";
      });

  py::class_<WeightedDigraph>(m, "Digraph")
      .def(py::init<int>(), py::arg("n"))
      .def("add_vertex", &WeightedDigraph::add_vertex, py::arg("weight"))
      .def("add_edge", &WeightedDigraph::add_edge, py::arg("u"), py::arg("v"))
      .def("set_weight", &WeightedDigraph::set_weight, py::arg("v"), py::arg("weight"))
      .def("vertex_count", &WeightedDigraph::vertex_count)
      .def("edge_count", &WeightedDigraph::edge_count)
      .def("is_acyclic", [](const WeightedDigraph& g) { return is_acyclic(g); })
      .def("dump", &WeightedDigraph::dump);

  py::class_<FvsSolution>(m, "FvsSolution")
      .def_readonly("vertices", &FvsSolution::vertices)
      .def_readonly("total_weight", &FvsSolution::total_weight)
      .def("__repr__", [](const FvsSolution& f) {
        return "FvsSolution(weight=" + std::to_string(f.total_weight) + ")";
      });

  py::class_<MafResult>(m, "MafResult")
      .def_readonly("forest", &MafResult::forest)
      .def_readonly("cut_count", &MafResult::cut_count);

  py::class_<ExactMafResult>(m, "ExactMafResult")
      .def_readonly("forest", &ExactMafResult::forest)
      .def_readonly("k", &ExactMafResult::k)
      .def_property_readonly("total_nodes",
                             [](const ExactMafResult& r) { return r.stats.total_nodes; })
      .def_property_readonly("nodes_per_depth",
                             [](const ExactMafResult& r) { return r.stats.nodes_per_depth; })
      .def_property_readonly("node_bound_ok",
                             [](const ExactMafResult& r) { return r.stats.node_bound_ok; });

  py::class_<MaafDiagnostics>(m, "MaafDiagnostics")
      .def_readonly("components", &MaafDiagnostics::components)
      .def_readonly("k", &MaafDiagnostics::k)
      .def_readonly("maf_size", &MaafDiagnostics::maf_size)
      .def_readonly("dfvs_weight", &MaafDiagnostics::dfvs_weight)
      .def_readonly("proper", &MaafDiagnostics::proper)
      .def_readonly("acyclic", &MaafDiagnostics::acyclic)
      .def_readonly("identity_holds", &MaafDiagnostics::identity_holds)
      .def_readonly("inheritance_edges", &MaafDiagnostics::inheritance_edges);

  py::class_<MaafResult>(m, "MaafResult")
      .def_readonly("forest", &MaafResult::forest)
      .def_readonly("k", &MaafResult::k)
      .def_readonly("diagnostics", &MaafResult::diag)
      .def_readonly("dfvs_dump", &MaafResult::dfvs_dump);

  m.def("parse_newick", [](const std::string& s) { return parse_newick(s); }, py::arg("text"));
  m.def("write_newick", &write_newick, py::arg("tree"));
  m.def(
      "restrict",
      [](const PhyloTree& t, const std::vector<std::string>& labels) {
        return restrict_to(t, to_cluster(labels));
      },
      py::arg("tree"), py::arg("labels"));
  m.def(
      "embed",
      [](const PhyloTree& t, const std::vector<std::string>& labels) {
        Embedding e = embed(t, to_cluster(labels));
        return py::make_tuple(e.root, e.edges);
      },
      py::arg("tree"), py::arg("labels"),
      "Returns (lca vertex, [(parent, child), ...]) of the minimal spanning subtree.");
  m.def("is_refinement", &is_refinement, py::arg("fine"), py::arg("coarse"));
  m.def("common_refinement", &common_refinement, py::arg("t1"), py::arg("t2"));
  m.def("is_agreement_forest", &is_agreement_forest, py::arg("forest"), py::arg("t1"),
        py::arg("t2"));
  m.def(
      "check_agreement_forest",
      [](const Forest& f, const PhyloTree& t1, const PhyloTree& t2) {
        ForestCertificate c = check_agreement_forest(f, t1, t2);
        return py::make_tuple(c.ok(), c.detail);
      },
      py::arg("forest"), py::arg("t1"), py::arg("t2"));
  m.def("cut", &cut, py::arg("forest"), py::arg("component"), py::arg("vertex"),
        py::arg("child_subset"));
  m.def(
      "inheritance_graph",
      [](const PhyloTree& t1, const PhyloTree& t2, const Forest& f) {
        InheritanceGraph g = inheritance_graph(t1, t2, f);
        std::vector<std::pair<int, int>> edges;
        for (int u = 0; u < g.vertex_count(); ++u)
          for (int v : g.out(u)) edges.emplace_back(u, v);
        return edges;
      },
      py::arg("t1"), py::arg("t2"), py::arg("forest"),
      "Edge list over component indices, in the forest's own order.");
  m.def("is_acyclic_agreement_forest", &is_acyclic_agreement_forest, py::arg("t1"),
        py::arg("t2"), py::arg("forest"));
  m.def("maximalize", &maximalize, py::arg("t1"), py::arg("t2"), py::arg("forest"));
  m.def("minimally_refine", &minimally_refine, py::arg("t1"), py::arg("t2"),
        py::arg("forest"));
  m.def("approximate_maf", &approximate_maf, py::arg("t1"), py::arg("t2"));
  m.def("solve_maf_exact", &solve_maf_exact, py::arg("t1"), py::arg("t2"), py::arg("max_k"));
  m.def(
      "approximate_maaf",
      [](const PhyloTree& t1, const PhyloTree& t2, const std::string& maf_mode,
         const std::string& dfvs_mode, int max_k) {
        return approximate_maaf(t1, t2,
                                maf_mode == "exact" ? MafMode::Exact : MafMode::Approx,
                                dfvs_mode == "greedy" ? DfvsMode::Greedy : DfvsMode::Exact,
                                max_k);
      },
      py::arg("t1"), py::arg("t2"), py::arg("maf_mode") = "exact",
      py::arg("dfvs_mode") = "exact", py::arg("max_k") = -1);
  m.def("solve_dfvs_exact", &solve_dfvs_exact, py::arg("graph"));
  m.def("solve_dfvs_greedy", &solve_dfvs_greedy, py::arg("graph"));
  m.def(
      "brute_maf",
      [](const PhyloTree& t1, const PhyloTree& t2) {
        auto r = oracle::brute_maf(t1, t2);
        return py::make_tuple(r.k, r.forest);
      },
      py::arg("t1"), py::arg("t2"));
  m.def(
      "brute_maaf",
      [](const PhyloTree& t1, const PhyloTree& t2) {
        auto r = oracle::brute_maaf(t1, t2);
        return py::make_tuple(r.k, r.forest);
      },
      py::arg("t1"), py::arg("t2"));
  m.def("brute_dfvs", &oracle::brute_dfvs, py::arg("graph"));
  m.def(
      "generate_pair",
      [](int n, int moves, uint64_t seed) {
        GeneratedPair p = generate_pair(n, moves, seed);
        return py::make_tuple(p.t1, p.t2);
      },
      py::arg("n"), py::arg("moves"), py::arg("seed") = 20240601);
}
