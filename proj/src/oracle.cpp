#include "mafkit/oracle.hpp"

#include <algorithm>
#include <stdexcept>

#include "mafkit/maaf.hpp"

namespace mafkit::oracle {

namespace {

// Joins subtrees under a fresh root.
PhyloTree join_as_root(const std::vector<PhyloTree>& subs) {
  std::vector<PhyloTree::Node> nodes;
  nodes.push_back({kNoVertex, {}, ""});
  for (const PhyloTree& s : subs) {
    Vertex off = static_cast<Vertex>(nodes.size());
    for (const PhyloTree::Node& n : s.nodes()) {
      PhyloTree::Node copy = n;
      copy.parent = n.parent == kNoVertex ? 0 : n.parent + off;
      for (Vertex& c : copy.children) c += off;
      nodes.push_back(std::move(copy));
    }
    nodes[0].children.push_back(s.root() + off);
  }
  return PhyloTree::from_nodes(std::move(nodes), 0);
}

// Builds a forest from a leaf partition, one component per block with the
// minimal common refinement of the two restrictions as its topology.
// Nullopt when some block's restrictions are incompatible.
std::optional<Forest> forest_from_partition(const std::vector<Cluster>& blocks,
                                            const PhyloTree& t1, const PhyloTree& t2) {
  Forest f;
  for (const Cluster& b : blocks) {
    auto topo = common_refinement(restrict_to(t1, b), restrict_to(t2, b));
    if (!topo) return std::nullopt;
    f.components.push_back(std::move(*topo));
  }
  f.canonicalize();
  return f;
}

OracleResult brute_forest(const PhyloTree& t1, const PhyloTree& t2, bool acyclic_only) {
  if (t1.label_set() != t2.label_set())
    throw std::invalid_argument("oracle: trees have different leaf sets");
  std::vector<std::string> labels = t1.leaf_labels();
  if (labels.size() > 8) throw std::invalid_argument("oracle: more than 8 leaves");

  std::optional<OracleResult> best;
  for_each_partition(labels, [&](const std::vector<Cluster>& blocks) {
    if (best && static_cast<int>(blocks.size()) >= best->forest.size()) return;
    auto f = forest_from_partition(blocks, t1, t2);
    if (!f || !is_agreement_forest(*f, t1, t2)) return;
    if (acyclic_only && !is_acyclic(inheritance_graph(t1, t2, *f))) return;
    best = OracleResult{f->size() - 1, std::move(*f)};
  });
  if (!best) throw std::logic_error("oracle: no agreement forest found");  // unreachable
  return std::move(*best);
}

}  // namespace

void for_each_partition(const std::vector<std::string>& labels,
                        const std::function<void(const std::vector<Cluster>&)>& fn) {
  const size_t n = labels.size();
  if (n == 0) return;
  std::vector<int> assign(n, 0);
  auto emit = [&]() {
    int blocks = *std::max_element(assign.begin(), assign.end()) + 1;
    std::vector<Cluster> out(blocks);
    for (size_t i = 0; i < n; ++i) out[assign[i]].insert(labels[i]);
    fn(out);
  };
  // Restricted growth strings: assign[0] = 0, assign[i] <= 1 + max(prefix).
  auto rec = [&](auto&& self, size_t i, int maxv) -> void {
    if (i == n) {
      emit();
      return;
    }
    for (int v = 0; v <= maxv + 1; ++v) {
      assign[i] = v;
      self(self, i + 1, std::max(maxv, v));
    }
  };
  rec(rec, 1, 0);
}

std::vector<PhyloTree> enumerate_trees(const std::vector<std::string>& labels) {
  if (labels.empty()) throw std::invalid_argument("enumerate_trees: no labels");
  if (labels.size() == 1) return {PhyloTree::leaf(labels[0])};
  std::vector<PhyloTree> out;
  for_each_partition(labels, [&](const std::vector<Cluster>& blocks) {
    if (blocks.size() < 2) return;
    std::vector<std::vector<PhyloTree>> choices;
    for (const Cluster& b : blocks)
      choices.push_back(enumerate_trees({b.begin(), b.end()}));
    std::vector<size_t> pick(blocks.size(), 0);
    for (;;) {
      std::vector<PhyloTree> subs;
      for (size_t i = 0; i < blocks.size(); ++i) subs.push_back(choices[i][pick[i]]);
      out.push_back(join_as_root(subs));
      size_t i = 0;
      while (i < pick.size() && ++pick[i] == choices[i].size()) pick[i++] = 0;
      if (i == pick.size()) break;
    }
  });
  return out;
}

OracleResult brute_maf(const PhyloTree& t1, const PhyloTree& t2) {
  return brute_forest(t1, t2, false);
}

OracleResult brute_maaf(const PhyloTree& t1, const PhyloTree& t2) {
  return brute_forest(t1, t2, true);
}

FvsSolution brute_dfvs(const WeightedDigraph& g) {
  const int n = g.vertex_count();
  if (n > 12) throw std::invalid_argument("brute_dfvs: more than 12 vertices");
  FvsSolution best;
  bool found = false;
  for (uint32_t mask = 0; mask < (uint32_t{1} << n); ++mask) {
    std::vector<bool> alive(n);
    std::vector<int> removed;
    int64_t w = 0;
    for (int v = 0; v < n; ++v) {
      if (mask >> v & 1) {
        removed.push_back(v);
        w += g.weight(v);
      } else {
        alive[v] = true;
      }
    }
    if (found && w >= best.total_weight) continue;
    if (!is_acyclic(g, alive)) continue;
    best = {removed, w};
    found = true;
  }
  return best;
}

}  // namespace mafkit::oracle
