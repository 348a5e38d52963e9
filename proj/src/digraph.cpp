#include "mafkit/digraph.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <stdexcept>

namespace mafkit {

int WeightedDigraph::add_vertex(int64_t weight) {
  if (weight < 0) throw std::invalid_argument("digraph: negative weight");
  weight_.push_back(weight);
  out_.emplace_back();
  in_.emplace_back();
  if (tagged_) tags_.emplace_back();
  return vertex_count() - 1;
}

void WeightedDigraph::add_edge(int u, int v) {
  if (u < 0 || v < 0 || u >= vertex_count() || v >= vertex_count())
    throw std::invalid_argument("digraph: edge endpoint out of range");
  if (has_edge(u, v)) return;
  out_[u].insert(std::lower_bound(out_[u].begin(), out_[u].end(), v), v);
  in_[v].insert(std::lower_bound(in_[v].begin(), in_[v].end(), u), u);
}

bool WeightedDigraph::has_edge(int u, int v) const {
  return std::binary_search(out_[u].begin(), out_[u].end(), v);
}

int WeightedDigraph::edge_count() const {
  int m = 0;
  for (const auto& adj : out_) m += static_cast<int>(adj.size());
  return m;
}

void WeightedDigraph::set_tag(int v, VertexTag t) {
  mark_tagged();
  tags_[v] = t;
}

void WeightedDigraph::mark_tagged() {
  tagged_ = true;
  if (tags_.size() != static_cast<size_t>(vertex_count())) tags_.resize(vertex_count());
}

std::string WeightedDigraph::dump() const {
  std::ostringstream os;
  os << "p dfvs " << vertex_count() << " " << edge_count() << "\n";
  for (int v = 0; v < vertex_count(); ++v) {
    os << "v " << v;
    if (has_tags())
      os << " " << (tag(v).kind == VertexTag::Kind::TreeVertex ? "VV" : "VE");
    else
      os << " -";
    os << " " << weight(v) << "\n";
  }
  for (int u = 0; u < vertex_count(); ++u)
    for (int v : out_[u]) os << "e " << u << " " << v << "\n";
  return os.str();
}

bool is_acyclic(const WeightedDigraph& g, const std::vector<bool>& alive) {
  const int n = g.vertex_count();
  auto live = [&](int v) { return alive.empty() || alive[v]; };
  std::vector<int> indeg(n, 0);
  std::deque<int> ready;
  int total = 0;
  for (int v = 0; v < n; ++v) {
    if (!live(v)) continue;
    ++total;
    for (int u : g.in(v))
      if (live(u)) ++indeg[v];
    if (indeg[v] == 0) ready.push_back(v);
  }
  int seen = 0;
  while (!ready.empty()) {
    int v = ready.front();
    ready.pop_front();
    ++seen;
    for (int w : g.out(v)) {
      if (!live(w)) continue;
      if (--indeg[w] == 0) ready.push_back(w);
    }
  }
  return seen == total;
}

std::vector<int> shortest_cycle(const WeightedDigraph& g, const std::vector<bool>& alive) {
  const int n = g.vertex_count();
  auto live = [&](int v) { return alive.empty() || alive[v]; };
  std::vector<int> best;
  for (int s = 0; s < n; ++s) {
    if (!live(s)) continue;
    if (g.has_edge(s, s)) return {s};
    // BFS back to s; stop early once the frontier cannot beat `best`.
    std::vector<int> pred(n, -2);
    std::deque<int> q{s};
    pred[s] = -1;
    std::vector<int> dist(n, 0);
    bool closed = false;
    while (!q.empty() && !closed) {
      int v = q.front();
      q.pop_front();
      if (!best.empty() && dist[v] + 1 >= static_cast<int>(best.size())) break;
      for (int w : g.out(v)) {
        if (!live(w)) continue;
        if (w == s) {
          std::vector<int> cycle;
          for (int x = v; x != -1; x = pred[x]) cycle.push_back(x);
          std::reverse(cycle.begin(), cycle.end());
          if (best.empty() || cycle.size() < best.size()) best = cycle;
          closed = true;
          break;
        }
        if (pred[w] == -2) {
          pred[w] = v;
          dist[w] = dist[v] + 1;
          q.push_back(w);
        }
      }
    }
    if (best.size() == 2) break;  // nothing shorter than a 2-cycle remains possible
  }
  return best;
}

}  // namespace mafkit
