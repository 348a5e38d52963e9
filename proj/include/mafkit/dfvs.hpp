#pragma once

#include <vector>

#include "mafkit/digraph.hpp"

namespace mafkit {

// A feedback vertex set: removing `vertices` leaves the graph acyclic.
struct FvsSolution {
  std::vector<int> vertices;  // sorted
  int64_t total_weight = 0;
};

bool is_fvs(const WeightedDigraph& g, const std::vector<int>& vertices);

// Minimum-weight feedback vertex set by branch and bound: sources/sinks are
// stripped, self-loop vertices are forced, branching follows a shortest
// directed cycle, and a vertex-disjoint cycle packing gives the lower
// bound. Deterministic: ties resolved in vertex order.
FvsSolution solve_dfvs_exact(const WeightedDigraph& g);

// Heuristic solver with no factor guarantee: repeatedly removes the vertex
// with the best (cycle pressure / weight) score until acyclic, then
// minimalizes.
FvsSolution solve_dfvs_greedy(const WeightedDigraph& g);

// Drops redundant vertices (in vertex order) until no single vertex can be
// removed. Throws when f is not an FVS.
FvsSolution minimalize(const WeightedDigraph& g, const FvsSolution& f);

// Turns a minimal FVS into a proper one: while some V_V vertex has at least
// outdegree-1 of its V_E children selected, those children are swapped for
// the vertex itself and the set re-minimalized. Never increases the weight.
// Requires a tagged graph.
FvsSolution properize(const WeightedDigraph& g, const FvsSolution& f);

// Both properness conditions: minimality and the per-vertex child bound.
bool is_proper_fvs(const WeightedDigraph& g, const FvsSolution& f);

}  // namespace mafkit
