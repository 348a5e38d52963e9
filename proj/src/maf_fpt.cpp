#include "mafkit/maf_fpt.hpp"

#include <stdexcept>

namespace mafkit {

namespace {

using approx::ApproxState;
using approx::CaseDecision;

struct RoundStats {
  std::vector<int64_t> nodes_per_depth;
  int64_t total = 0;
  bool bound_ok = true;

  void count(int depth) {
    if (depth >= static_cast<int>(nodes_per_depth.size()))
      nodes_per_depth.resize(depth + 1, 0);
    ++nodes_per_depth[depth];
    ++total;
    // 4^d, saturating well above any reachable count.
    int64_t cap = depth >= 31 ? INT64_MAX : (int64_t{1} << (2 * depth));
    if (nodes_per_depth[depth] > cap) bound_ok = false;
  }
};

// Depth-first search with a cut budget. Returns the solved state of the
// first solution in deterministic branch order.
std::optional<ApproxState> search(ApproxState state, int budget, int depth, RoundStats& rs) {
  rs.count(depth);
  // Free reductions to a fixpoint.
  for (;;) {
    if (state.work_t1.leaf_count() <= 1) return state;
    CaseDecision d = decide_case(state);
    if (d.kind == CaseDecision::Kind::Case0a) {
      apply_case0a(state, d.c1, d.c2);
      continue;
    }
    if (d.kind == CaseDecision::Kind::Case0b) {
      apply_case0b(state, d.c);
      continue;
    }
    break;
  }
  for (ApproxState& child : branch_case(state, budget))
    if (auto r = search(std::move(child), budget - 1, depth + 1, rs)) return r;
  return std::nullopt;
}

}  // namespace

std::vector<approx::ApproxState> branch_case(const ApproxState& state, int budget) {
  if (budget <= 0 || state.work_t1.leaf_count() <= 1) return {};
  CaseDecision d = decide_case(state);
  std::vector<ApproxState> children;
  if (d.kind == CaseDecision::Kind::Case0c) {
    // Two subproblems: one of c1, c2 must end up isolated.
    for (const std::string& c : {d.c1, d.c2}) {
      ApproxState child = state;
      approx::remove_leaf_as_singleton(child, c);
      children.push_back(std::move(child));
    }
    return children;
  }
  if (d.kind != CaseDecision::Kind::Case1 && d.kind != CaseDecision::Kind::Case2)
    throw std::invalid_argument("branch_case: state still has pending reductions");

  // Cases 1 and 2: one subproblem per cut.
  enum class Move { LeafC1, LeafC2, GroupAtP1, GroupAtP2 };
  for (Move m : {Move::LeafC1, Move::LeafC2, Move::GroupAtP1, Move::GroupAtP2}) {
    ApproxState child = state;
    switch (m) {
      case Move::LeafC1: approx::cut_single_leaf(child, d.c1); break;
      case Move::LeafC2: approx::cut_single_leaf(child, d.c2); break;
      case Move::GroupAtP1: approx::cut_group_excluding(child, d.c1); break;
      case Move::GroupAtP2: approx::cut_group_excluding(child, d.c2); break;
    }
    children.push_back(std::move(child));
  }
  return children;
}

std::optional<ExactMafResult> solve_maf_exact(const PhyloTree& t1, const PhyloTree& t2,
                                              int max_k) {
  if (max_k < 0) throw std::invalid_argument("solve_maf_exact: negative max_k");
  if (t1.label_set() != t2.label_set())
    throw std::invalid_argument("solve_maf_exact: trees have different leaf sets");

  SearchStats stats;
  for (int k = 0; k <= max_k; ++k) {
    RoundStats rs;
    auto solved = search(approx::make_state(t1, t2), k, 0, rs);
    stats.total_nodes += rs.total;
    stats.node_bound_ok = stats.node_bound_ok && rs.bound_ok;
    if (!solved) continue;
    if (solved->cut_count != k)
      throw std::logic_error("solve_maf_exact: deepening found a non-tight solution");
    stats.nodes_per_depth = rs.nodes_per_depth;
    ExactMafResult out{approx::finish(*solved, t1, t2), solved->cut_count, stats};
    return out;
  }
  return std::nullopt;
}

}  // namespace mafkit
