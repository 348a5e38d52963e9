#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mafkit/tree.hpp"

namespace mafkit {

struct Forest;

struct NewickError : std::runtime_error {
  NewickError(const std::string& what, size_t position)
      : std::runtime_error(what + " (at position " + std::to_string(position) + ")"),
        position(position) {}
  size_t position;
};

// Parses one Newick expression. Multifurcations are allowed; branch lengths
// and internal vertex names are accepted and discarded. Vertices with both
// indegree and outdegree 1 produced by the grammar (e.g. "((a))") are
// suppressed. Throws NewickError on syntax problems, duplicate leaf labels
// or an empty tree.
PhyloTree parse_newick(std::string_view text);

// Canonical Newick: children ordered by smallest descendant label,
// ';'-terminated, no branch lengths. parse_newick(write_newick(t)) is
// label-isomorphic to t.
std::string write_newick(const PhyloTree& t);

// File helpers: one tree per line, ';'-terminated, UTF-8. Blank lines are
// skipped. A forest file holds one component per line.
std::vector<PhyloTree> read_newick_file(const std::string& path);
Forest read_forest_file(const std::string& path);
std::string write_forest(const Forest& f);

}  // namespace mafkit
