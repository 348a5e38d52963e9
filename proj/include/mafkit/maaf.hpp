#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mafkit/dfvs.hpp"
#include "mafkit/digraph.hpp"
#include "mafkit/forest.hpp"

namespace mafkit {

// Digraph on the component indices of a forest. Edge (F, F') when, in
// either tree, the root of F's embedding reaches the root of F''s embedding
// by a path whose first edge belongs to F's embedding.
using InheritanceGraph = WeightedDigraph;

InheritanceGraph inheritance_graph(const PhyloTree& t1, const PhyloTree& t2,
                                   const Forest& f);

bool is_acyclic_agreement_forest(const PhyloTree& t1, const PhyloTree& t2,
                                 const Forest& f);

// Merges component pairs (merged topology: minimal common refinement of the
// two restrictions; same-root pairs merge directly) until no pair can merge.
Forest maximalize(const PhyloTree& t1, const PhyloTree& t2, const Forest& a);

// Replaces every component by the minimal common refinement of the two
// restrictions to its leaves.
Forest minimally_refine(const PhyloTree& t1, const PhyloTree& t2, const Forest& a);

// Labels of the trees by the vertices and edges of the forest: per tree,
// each component vertex maps to the LCA of its cluster, and each component
// edge (identified by its child endpoint) maps to the tree path between its
// endpoint images, possibly empty in one tree.
struct LabeledEmbedding {
  using Path = std::vector<std::pair<Vertex, Vertex>>;
  // [tree][component][component vertex]
  std::array<std::vector<std::vector<Vertex>>, 2> vertex_image;
  // [tree][component][child endpoint of the component edge]
  std::array<std::vector<std::vector<Path>>, 2> edge_path;
};

// Requires a maximal, minimally refined forest; throws when some component
// edge labels no tree edge in either tree (the forest was over-refined).
LabeledEmbedding label_trees(const PhyloTree& t1, const PhyloTree& t2, const Forest& a);

// The weighted DFVS instance: a vertex per internal component vertex
// (weight outdegree-1) and per component edge (weight 1); edges (v,e) when
// v is e's tail and (e,v) when v's image is reachable, possibly by an empty
// path, from the head of some tree edge labelled e. Vertices carry tags
// linking them back to the forest.
WeightedDigraph build_dfvs_instance(const PhyloTree& t1, const PhyloTree& t2,
                                    const Forest& a, const LabeledEmbedding& emb);

// A \ F for an arbitrary vertex subset of the instance: removes the tagged
// vertices and edges from the forest and normalizes. Used directly by the
// FVS <-> splitting equivalence checks.
Forest split_by_fvs(const Forest& a, const std::vector<int>& d_vertices,
                    const WeightedDigraph& d);

// The pipeline-facing removal: requires a proper FVS and checks the size
// identity |A \ F| == |A| + w(F).
Forest remove_fvs(const Forest& a, const FvsSolution& f, const WeightedDigraph& d);

enum class MafMode { Approx, Exact };
enum class DfvsMode { Exact, Greedy };

struct MaafDiagnostics {
  int components = 0;
  int k = 0;
  int maf_size = 0;          // |A| entering the splitting stage
  int64_t dfvs_weight = 0;   // w(F) of the properized FVS
  bool proper = false;
  bool acyclic = false;
  bool identity_holds = false;
  std::vector<std::pair<int, int>> inheritance_edges;  // of the final forest
};

struct MaafResult {
  Forest forest;
  int k = 0;
  MaafDiagnostics diag;
  std::string dfvs_dump;  // the instance in edge-list text form
};

// Raised when a cut budget rules out every agreement forest.
struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// MAF -> maximalize -> minimally refine -> label -> DFVS -> minimalize ->
// properize -> remove. The output is always verified to be an acyclic
// agreement forest. With exact MAF and exact DFVS the size is within 4x of
// the optimum; with approximate MAF and exact DFVS within 7x. max_k caps
// the exact MAF stage (default: the approximation's cut count, which is
// always feasible); an unreachable cap raises InfeasibleError.
MaafResult approximate_maaf(const PhyloTree& t1, const PhyloTree& t2,
                            MafMode maf_mode, DfvsMode dfvs_mode, int max_k = -1);

}  // namespace mafkit
