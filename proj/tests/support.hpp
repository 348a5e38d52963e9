#pragma once

#include <string>
#include <vector>

#include "mafkit/forest.hpp"
#include "mafkit/newick.hpp"

namespace testutil {

inline mafkit::PhyloTree tree(const std::string& newick) {
  return mafkit::parse_newick(newick);
}

inline mafkit::Forest forest(const std::vector<std::string>& newicks) {
  mafkit::Forest f;
  for (const auto& s : newicks) f.components.push_back(mafkit::parse_newick(s));
  return f;
}

inline std::vector<std::string> newicks(const mafkit::Forest& f) {
  mafkit::Forest c = f;
  c.canonicalize();
  std::vector<std::string> out;
  for (const auto& comp : c.components) out.push_back(mafkit::write_newick(comp));
  return out;
}

}  // namespace testutil
