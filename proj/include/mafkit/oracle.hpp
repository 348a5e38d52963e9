#pragma once

#include <functional>
#include <vector>

#include "mafkit/dfvs.hpp"
#include "mafkit/forest.hpp"

namespace mafkit::oracle {

// Ground-truth solvers by exhaustive enumeration, for testing and debugging.
// The size guards are hard errors, not silent truncation.

struct OracleResult {
  int k = 0;  // |forest| - 1
  Forest forest;
};

// All set partitions of `labels`, in restricted-growth-string order.
void for_each_partition(const std::vector<std::string>& labels,
                        const std::function<void(const std::vector<Cluster>&)>& fn);

// Every rooted multifurcating tree on the given distinct labels
// (1, 1, 4, 26, 236, ... trees for 1..5 labels).
std::vector<PhyloTree> enumerate_trees(const std::vector<std::string>& labels);

// Minimum agreement forest via partition enumeration; |X| <= 8.
OracleResult brute_maf(const PhyloTree& t1, const PhyloTree& t2);

// Minimum acyclic agreement forest; |X| <= 8.
OracleResult brute_maaf(const PhyloTree& t1, const PhyloTree& t2);

// Minimum-weight feedback vertex set by subset enumeration; |V| <= 12.
FvsSolution brute_dfvs(const WeightedDigraph& g);

}  // namespace mafkit::oracle
