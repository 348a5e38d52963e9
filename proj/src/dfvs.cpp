#include "mafkit/dfvs.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace mafkit {

namespace {

std::vector<bool> alive_without(int n, const std::vector<int>& removed) {
  std::vector<bool> alive(n, true);
  for (int v : removed) alive[v] = false;
  return alive;
}

int64_t weight_of(const WeightedDigraph& g, const std::vector<int>& vs) {
  int64_t w = 0;
  for (int v : vs) w += g.weight(v);
  return w;
}

FvsSolution make_solution(const WeightedDigraph& g, std::vector<int> vs) {
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  return FvsSolution{vs, weight_of(g, vs)};
}

// Weight of a greedy vertex-disjoint cycle packing; a lower bound on any
// FVS of the alive subgraph.
int64_t packing_bound(const WeightedDigraph& g, std::vector<bool> alive) {
  int64_t bound = 0;
  for (;;) {
    std::vector<int> cycle = shortest_cycle(g, alive);
    if (cycle.empty()) return bound;
    int64_t mn = std::numeric_limits<int64_t>::max();
    for (int v : cycle) {
      mn = std::min(mn, g.weight(v));
      alive[v] = false;
    }
    bound += mn;
  }
}

// Strip vertices with no alive in- or out-neighbours; they are on no cycle.
void strip_sources_sinks(const WeightedDigraph& g, std::vector<bool>& alive) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (int v = 0; v < g.vertex_count(); ++v) {
      if (!alive[v]) continue;
      bool has_in = false, has_out = false;
      for (int u : g.in(v))
        if (alive[u] && u != v) { has_in = true; break; }
      for (int u : g.out(v))
        if (alive[u] && u != v) { has_out = true; break; }
      if (g.has_edge(v, v)) continue;  // handled by the self-loop reduction
      if (!has_in || !has_out) {
        alive[v] = false;
        changed = true;
      }
    }
  }
}

struct ExactSearch {
  const WeightedDigraph& g;
  int64_t best_weight = std::numeric_limits<int64_t>::max();
  std::vector<int> best;

  void run(std::vector<bool> alive, std::vector<int>& chosen, int64_t chosen_weight) {
    const size_t entry = chosen.size();
    // Reductions: forced self-loops, then acyclic fringe removal.
    for (int v = 0; v < g.vertex_count(); ++v) {
      if (alive[v] && g.has_edge(v, v)) {
        alive[v] = false;
        chosen.push_back(v);
        chosen_weight += g.weight(v);
      }
    }
    strip_sources_sinks(g, alive);

    if (chosen_weight + packing_bound(g, alive) >= best_weight) {
      chosen.resize(entry);
      return;
    }
    std::vector<int> cycle = shortest_cycle(g, alive);
    if (cycle.empty()) {
      if (chosen_weight < best_weight) {
        best_weight = chosen_weight;
        best = chosen;
      }
      chosen.resize(entry);
      return;
    }
    std::sort(cycle.begin(), cycle.end());
    for (int v : cycle) {
      auto next = alive;
      next[v] = false;
      chosen.push_back(v);
      run(std::move(next), chosen, chosen_weight + g.weight(v));
      chosen.pop_back();
    }
    chosen.resize(entry);
  }
};

}  // namespace

bool is_fvs(const WeightedDigraph& g, const std::vector<int>& vertices) {
  return is_acyclic(g, alive_without(g.vertex_count(), vertices));
}

FvsSolution solve_dfvs_exact(const WeightedDigraph& g) {
  const int n = g.vertex_count();
  // Fallback seed: everything on some cycle.
  std::vector<int> all;
  for (int v = 0; v < n; ++v) all.push_back(v);

  ExactSearch search{g, weight_of(g, all) + 1, all};
  std::vector<int> chosen;
  search.run(std::vector<bool>(n, true), chosen, 0);
  FvsSolution sol = make_solution(g, search.best);
  // The branch and bound may keep vertices that a cheaper subset covers;
  // minimality does not affect optimal weight but keeps the output tidy.
  return minimalize(g, sol);
}

FvsSolution solve_dfvs_greedy(const WeightedDigraph& g) {
  const int n = g.vertex_count();
  std::vector<bool> alive(n, true);
  std::vector<int> chosen;
  for (int v = 0; v < n; ++v)
    if (g.has_edge(v, v)) {
      alive[v] = false;
      chosen.push_back(v);
    }
  strip_sources_sinks(g, alive);
  while (!is_acyclic(g, alive)) {
    // Cycle pressure: alive in-degree times alive out-degree.
    int pick = -1;
    double pick_score = -1.0;
    for (int v = 0; v < n; ++v) {
      if (!alive[v]) continue;
      int din = 0, dout = 0;
      for (int u : g.in(v))
        if (alive[u]) ++din;
      for (int u : g.out(v))
        if (alive[u]) ++dout;
      if (din == 0 || dout == 0) continue;
      double score = g.weight(v) == 0
                         ? std::numeric_limits<double>::infinity()
                         : static_cast<double>(din) * dout / static_cast<double>(g.weight(v));
      if (score > pick_score) {
        pick_score = score;
        pick = v;
      }
    }
    if (pick == -1) break;  // unreachable: a cycle implies pressure somewhere
    alive[pick] = false;
    chosen.push_back(pick);
    strip_sources_sinks(g, alive);
  }
  return minimalize(g, make_solution(g, chosen));
}

FvsSolution minimalize(const WeightedDigraph& g, const FvsSolution& f) {
  if (!is_fvs(g, f.vertices)) throw std::invalid_argument("minimalize: not a feedback vertex set");
  std::vector<int> keep = f.vertices;
  std::sort(keep.begin(), keep.end());
  for (size_t i = 0; i < keep.size();) {
    std::vector<int> trial = keep;
    trial.erase(trial.begin() + static_cast<long>(i));
    if (is_fvs(g, trial)) {
      keep = std::move(trial);
    } else {
      ++i;
    }
  }
  return make_solution(g, keep);
}

bool is_proper_fvs(const WeightedDigraph& g, const FvsSolution& f) {
  if (!g.has_tags()) throw std::invalid_argument("is_proper_fvs: untagged graph");
  if (!is_fvs(g, f.vertices)) return false;
  for (size_t i = 0; i < f.vertices.size(); ++i) {
    std::vector<int> trial = f.vertices;
    trial.erase(trial.begin() + static_cast<long>(i));
    if (is_fvs(g, trial)) return false;  // not minimal
  }
  std::vector<bool> in_f(g.vertex_count(), false);
  for (int v : f.vertices) in_f[v] = true;
  for (int v = 0; v < g.vertex_count(); ++v) {
    if (g.tag(v).kind != VertexTag::Kind::TreeVertex) continue;
    int deg = static_cast<int>(g.out(v).size());
    int picked = 0;
    for (int e : g.out(v))
      if (in_f[e]) ++picked;
    if (picked > deg - 2) return false;
  }
  return true;
}

FvsSolution properize(const WeightedDigraph& g, const FvsSolution& f) {
  if (!g.has_tags()) throw std::invalid_argument("properize: untagged graph");
  FvsSolution cur = minimalize(g, f);
  int guard = g.vertex_count() + 1;
  for (;;) {
    if (--guard < 0) throw std::logic_error("properize: failed to converge");
    std::vector<bool> in_f(g.vertex_count(), false);
    for (int v : cur.vertices) in_f[v] = true;
    int swap_v = -1;
    for (int v = 0; v < g.vertex_count(); ++v) {
      if (g.tag(v).kind != VertexTag::Kind::TreeVertex || in_f[v]) continue;
      int deg = static_cast<int>(g.out(v).size());
      int picked = 0;
      for (int e : g.out(v))
        if (in_f[e]) ++picked;
      if (deg >= 1 && picked >= deg - 1 && picked >= 1) {
        swap_v = v;
        break;
      }
    }
    if (swap_v == -1) break;
    std::vector<int> next;
    for (int v : cur.vertices)
      if (!g.has_edge(swap_v, v)) next.push_back(v);
    next.push_back(swap_v);
    FvsSolution swapped = make_solution(g, next);
    if (swapped.total_weight > cur.total_weight)
      throw std::logic_error("properize: swap increased the weight");
    cur = minimalize(g, swapped);
  }
  return cur;
}

}  // namespace mafkit
