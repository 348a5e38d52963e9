#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mafkit/maf_approx.hpp"

namespace mafkit {

// Branching instrumentation for one solve. nodes_per_depth counts search
// nodes by the number of charged cuts on their path; within any single
// deepening round the count at depth d never exceeds 4^d.
struct SearchStats {
  std::vector<int64_t> nodes_per_depth;  // successful round
  int64_t total_nodes = 0;               // all rounds together
  bool node_bound_ok = true;             // 4^d bound held in every round
};

struct ExactMafResult {
  Forest forest;
  int k = 0;  // |forest| - 1 == number of cuts
  SearchStats stats;
};

// The subproblems of one branching step, for a state with cases 0a/0b
// already reduced away: two children for case 0c (remove c1 | remove c2),
// four for cases 1/2 (cut c1 | cut c2 | the group at p1 excluding c1 | the
// group at p2 excluding c2). Each child has exactly one more charged cut;
// a solved state or an exhausted budget yields no children.
std::vector<approx::ApproxState> branch_case(const approx::ApproxState& state, int budget);

// Exact nonbinary MAF by iterative-deepening bounded search, O(4^k poly n).
// Cases 0a/0b run as free reductions to a fixpoint; the other cases branch
// via branch_case. Returns nullopt when MAF(t1, t2) > max_k.
std::optional<ExactMafResult> solve_maf_exact(const PhyloTree& t1, const PhyloTree& t2,
                                              int max_k);

}  // namespace mafkit
