#pragma once

#include <cstdint>
#include <random>

#include "mafkit/tree.hpp"

namespace mafkit {

// Uniform draw from [0, k) consuming the engine in a fixed, portable way.
uint64_t draw(std::mt19937_64& rng, uint64_t k);

// Random multifurcating tree on labels t1..tn (zero-padded): leaves attach
// one by one to a uniformly chosen edge (or above the root), then each
// internal edge contracts with probability `polytomy_prob`.
PhyloTree random_tree(int n, std::mt19937_64& rng, double polytomy_prob = 0.2);

// One random rSPR move: prune a non-root subtree, regraft it onto a
// uniformly chosen edge of the remainder or above its root. Redraws a few
// times if the move reproduces the input tree.
PhyloTree random_spr_move(const PhyloTree& t, std::mt19937_64& rng);

// T1 random, T2 = T1 after `moves` rSPR moves; MAF(T1,T2) <= moves.
struct GeneratedPair {
  PhyloTree t1, t2;
};
GeneratedPair generate_pair(int n, int moves, uint64_t seed);

}  // namespace mafkit
