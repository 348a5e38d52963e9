#pragma once

#include <string>
#include <vector>

#include "mafkit/forest.hpp"

namespace mafkit {

struct MafResult {
  Forest forest;
  int cut_count = 0;  // |forest| - 1
};

namespace approx {

// Reversible record of the label-collapsing reductions. Replayed backwards
// it turns a forest on the collapsed label set into a forest on the
// original leaf set: removed leaves come back as isolated components and
// synthetic leaves expand into cherries.
struct ExpansionRecord {
  enum class Kind { Collapse, RemoveSingleton };
  Kind kind = Kind::Collapse;
  std::string synthetic_label;        // Collapse
  std::string child1, child2;         // Collapse: the replaced pair
  bool had_siblings = false;          // Collapse: siblings in the forest at the time
  std::string removed;                // RemoveSingleton
};

struct ExpansionLog {
  std::vector<ExpansionRecord> records;
  int pending_singletons() const;
  Forest replay(Forest f) const;
};

// Working state of one solve: a shrinking copy of T1, the forest being cut
// out of T2, and the log that undoes the label surgery.
struct ApproxState {
  PhyloTree work_t1;
  Forest work_f2;
  ExpansionLog log;
  int cut_count = 0;

  std::string synth_prefix;  // no original label starts with it
  int synth_counter = 0;
  std::string fresh_label();

  // cut_count == |work_f2| + pending singletons - 1, and the two label sets
  // agree. Throws std::logic_error otherwise.
  void check_invariants() const;
};

ApproxState make_state(const PhyloTree& t1, const PhyloTree& t2);

// An internal vertex of t1 all of whose children are leaves, the one whose
// smallest child label is lexicographically least. t1 must have >= 2 leaves.
Vertex select_u(const PhyloTree& t1);

struct CaseDecision {
  enum class Kind { Done, Case0a, Case0b, Case0c, Case1, Case2 };
  Kind kind = Kind::Done;
  std::string c1, c2;  // 0a and 1/2; for 0c the two smallest children of u
  std::string c;       // 0b
};
CaseDecision decide_case(const ApproxState& s);

// The pair of C-leaves sharing a component whose LCA is deepest, preferring
// pairs where neither is a child of the LCA; ties lexicographic. For the
// child-of-LCA case the child is returned as c1.
struct PairChoice {
  std::string c1, c2;
  bool neither_child_of_lca = false;
};
PairChoice select_pair(const ApproxState& s);

// Case 0a: c1, c2 share a parent in the forest; collapse them to one leaf
// in both trees. No cut is charged.
void apply_case0a(ApproxState& s, const std::string& c1, const std::string& c2);

// Case 0b: c is an isolated component; drop it from both sides and log it
// for re-addition. No cut is charged.
void apply_case0b(ApproxState& s, const std::string& c);

// Case 0c: every child of u sits in a distinct non-singleton component;
// detach them all, one charged cut per leaf.
void apply_case0c(ApproxState& s);

// Cases 1/2: the four detachments of the approximation, empty targets
// skipped, one charged cut per detachment actually made.
void apply_case1(ApproxState& s, const std::string& c1, const std::string& c2);
void apply_case2(ApproxState& s, const std::string& c1, const std::string& c2);

// Single charged cuts, the branching moves of the exact solver.
void cut_single_leaf(ApproxState& s, const std::string& label);
void cut_group_excluding(ApproxState& s, const std::string& label);
void remove_leaf_as_singleton(ApproxState& s, const std::string& label);

// Replay + final validation against the original trees.
Forest finish(const ApproxState& s, const PhyloTree& t1, const PhyloTree& t2);

}  // namespace approx

// Polynomial-time 4-approximation for nonbinary MAF: cuts T2 until it is a
// forest for T1, guided by cases 0a/0b/0c/1/2. The result is verified to be
// an agreement forest and |forest| == cut_count + 1.
MafResult approximate_maf(const PhyloTree& t1, const PhyloTree& t2);

}  // namespace mafkit
