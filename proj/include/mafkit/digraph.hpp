#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mafkit/tree.hpp"

namespace mafkit {

// Tag linking a digraph vertex back to the agreement-forest element it
// represents: an internal vertex of a component (class V_V) or an edge,
// identified by its child endpoint (class V_E).
struct VertexTag {
  enum class Kind { TreeVertex, TreeEdge };
  Kind kind = Kind::TreeVertex;
  int component = -1;
  Vertex vertex = kNoVertex;
};

// Directed graph with nonnegative integer vertex weights. Edges have set
// semantics (no parallel edges); self-loops are allowed.
class WeightedDigraph {
 public:
  WeightedDigraph() = default;
  explicit WeightedDigraph(int n) : weight_(n, 1), out_(n), in_(n) {}

  int vertex_count() const { return static_cast<int>(out_.size()); }
  int add_vertex(int64_t weight);
  void add_edge(int u, int v);
  bool has_edge(int u, int v) const;

  int64_t weight(int v) const { return weight_[v]; }
  void set_weight(int v, int64_t w) { weight_[v] = w; }
  const std::vector<int>& out(int v) const { return out_[v]; }
  const std::vector<int>& in(int v) const { return in_[v]; }
  int edge_count() const;

  bool has_tags() const { return tagged_; }
  const VertexTag& tag(int v) const { return tags_[v]; }
  void set_tag(int v, VertexTag t);
  void mark_tagged();

  // Simple text form for external-solver interop: one "v <id> <class>
  // <weight>" line per vertex, one "e <u> <v>" line per edge.
  std::string dump() const;

 private:
  std::vector<int64_t> weight_;
  std::vector<std::vector<int>> out_;
  std::vector<std::vector<int>> in_;
  std::vector<VertexTag> tags_;
  bool tagged_ = false;
};

// True when the graph restricted to vertices with alive[v] (alive may be
// empty, meaning all) has no directed cycle.
bool is_acyclic(const WeightedDigraph& g, const std::vector<bool>& alive = {});

// A shortest directed cycle among alive vertices, empty when acyclic.
std::vector<int> shortest_cycle(const WeightedDigraph& g, const std::vector<bool>& alive = {});

}  // namespace mafkit
