#include "mafkit/generator.hpp"

#include <stdexcept>
#include <string>

namespace mafkit {

namespace {

std::string padded_label(int i, int n) {
  std::string num = std::to_string(i);
  std::string width = std::to_string(n);
  return "t" + std::string(width.size() - num.size(), '0') + num;
}

// Merges `guest` into `host`'s node table; returns (nodes, guest root id).
std::pair<std::vector<PhyloTree::Node>, Vertex> splice_tables(const PhyloTree& host,
                                                              const PhyloTree& guest) {
  std::vector<PhyloTree::Node> nodes = host.nodes();
  Vertex off = static_cast<Vertex>(nodes.size());
  for (const PhyloTree::Node& n : guest.nodes()) {
    PhyloTree::Node copy = n;
    if (copy.parent != kNoVertex) copy.parent += off;
    for (Vertex& c : copy.children) c += off;
    nodes.push_back(std::move(copy));
  }
  return {std::move(nodes), guest.root() + off};
}

// Attachment slots: one per non-root vertex (the edge above it), plus one
// for "above the root".
PhyloTree attach_at_slot(const PhyloTree& host, const PhyloTree& guest, uint64_t slot) {
  auto [nodes, groot] = splice_tables(host, guest);
  std::vector<Vertex> edge_slots;
  for (Vertex v = 0; v < host.vertex_count(); ++v)
    if (host.parent(v) != kNoVertex) edge_slots.push_back(v);

  if (slot == edge_slots.size()) {  // above the root
    Vertex nr = static_cast<Vertex>(nodes.size());
    nodes.push_back({kNoVertex, {host.root(), groot}, ""});
    nodes[host.root()].parent = nr;
    nodes[groot].parent = nr;
    return PhyloTree::from_nodes(std::move(nodes), nr);
  }
  Vertex w = edge_slots[slot];
  Vertex p = nodes[w].parent;
  Vertex m = static_cast<Vertex>(nodes.size());
  nodes.push_back({p, {w, groot}, ""});
  auto& pc = nodes[p].children;
  *std::find(pc.begin(), pc.end(), w) = m;
  nodes[w].parent = m;
  nodes[groot].parent = m;
  return PhyloTree::from_nodes(std::move(nodes), host.root());
}

}  // namespace

uint64_t draw(std::mt19937_64& rng, uint64_t k) {
  if (k == 0) throw std::invalid_argument("draw: empty range");
  uint64_t limit = UINT64_MAX - UINT64_MAX % k;
  uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % k;
}

PhyloTree random_tree(int n, std::mt19937_64& rng, double polytomy_prob) {
  if (n < 1) throw std::invalid_argument("random_tree: need at least one leaf");
  PhyloTree t = PhyloTree::leaf(padded_label(1, n));
  for (int i = 2; i <= n; ++i) {
    PhyloTree leaf = PhyloTree::leaf(padded_label(i, n));
    uint64_t slots = static_cast<uint64_t>(t.vertex_count() - 1) + 1;
    t = attach_at_slot(t, leaf, draw(rng, slots));
  }
  if (polytomy_prob > 0 && n > 2) {
    const uint64_t kScale = 1u << 20;
    const uint64_t threshold = static_cast<uint64_t>(polytomy_prob * kScale);
    std::vector<PhyloTree::Node> nodes = t.nodes();
    // Contract internal non-root edges chosen up front, then rebuild once.
    std::vector<Vertex> contract;
    for (Vertex v = 0; v < t.vertex_count(); ++v) {
      if (t.is_leaf(v) || t.parent(v) == kNoVertex) continue;
      if (draw(rng, kScale) < threshold) contract.push_back(v);
    }
    for (Vertex v : contract) {
      Vertex p = nodes[v].parent;
      auto& pc = nodes[p].children;
      pc.erase(std::find(pc.begin(), pc.end(), v));
      for (Vertex c : nodes[v].children) {
        nodes[c].parent = p;
        pc.push_back(c);
      }
      nodes[v].children.clear();
      nodes[v].parent = kNoVertex;
    }
    t = PhyloTree::from_nodes(std::move(nodes), t.root());
  }
  return t;
}

PhyloTree random_spr_move(const PhyloTree& t, std::mt19937_64& rng) {
  if (t.leaf_count() < 3) return t;  // no meaningful move exists
  for (int attempt = 0; attempt < 16; ++attempt) {
    std::vector<Vertex> cands;
    for (Vertex v = 0; v < t.vertex_count(); ++v)
      if (t.parent(v) != kNoVertex) cands.push_back(v);
    Vertex v = cands[draw(rng, cands.size())];
    if (t.subtree_labels(v).size() + 1 >= static_cast<size_t>(t.leaf_count()))
      continue;  // keep at least two leaves behind

    std::vector<PhyloTree::Node> nodes = t.nodes();
    Vertex p = nodes[v].parent;
    auto& pc = nodes[p].children;
    pc.erase(std::find(pc.begin(), pc.end(), v));
    nodes[v].parent = kNoVertex;
    PhyloTree rest = PhyloTree::from_nodes(nodes, t.root());
    PhyloTree pruned = PhyloTree::from_nodes(nodes, v);

    uint64_t slots = static_cast<uint64_t>(rest.vertex_count() - 1) + 1;
    PhyloTree moved = attach_at_slot(rest, pruned, draw(rng, slots));
    if (!label_isomorphic(moved, t)) return moved;
  }
  return t;
}

GeneratedPair generate_pair(int n, int moves, uint64_t seed) {
  if (n < 2) throw std::invalid_argument("generate_pair: need at least two leaves");
  if (moves < 0) throw std::invalid_argument("generate_pair: negative move count");
  std::mt19937_64 rng(seed);
  GeneratedPair out;
  out.t1 = random_tree(n, rng);
  out.t2 = out.t1;
  for (int i = 0; i < moves; ++i) out.t2 = random_spr_move(out.t2, rng);
  return out;
}

}  // namespace mafkit
