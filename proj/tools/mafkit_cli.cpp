#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "mafkit/generator.hpp"
#include "mafkit/maaf.hpp"
#include "mafkit/maf_approx.hpp"
#include "mafkit/maf_fpt.hpp"
#include "mafkit/newick.hpp"
#include "mafkit/oracle.hpp"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 1;  // invalid forest / exact search over budget
constexpr int kExitInput = 2;       // unreadable or malformed input

constexpr uint64_t kDefaultSeed = 20240601;

struct Options {
  std::string t1_path, t2_path, forest_path;
  std::string mode = "approx";
  std::string dfvs = "exact";
  int max_k = -1;  // exact mode: cap on the deepening; -1 = use the approx bound
  int n = 20;
  int moves = 5;
  uint64_t seed = kDefaultSeed;
  bool as_json = false;
  std::string dump_dfvs_path;
  bool oracle_maaf = false;
};

mafkit::PhyloTree read_tree(const std::string& path) {
  auto trees = mafkit::read_newick_file(path);
  if (trees.size() != 1)
    throw std::runtime_error("'" + path + "' must contain exactly one tree");
  return trees[0];
}

json forest_json(const mafkit::Forest& f) {
  json lines = json::array();
  for (const auto& c : f.components) lines.push_back(mafkit::write_newick(c));
  return lines;
}

void print_forest(const mafkit::Forest& f) { std::cout << mafkit::write_forest(f); }

int run_maf(const Options& opt) {
  mafkit::PhyloTree t1 = read_tree(opt.t1_path);
  mafkit::PhyloTree t2 = read_tree(opt.t2_path);

  mafkit::Forest forest;
  int k = 0;
  json extra;
  if (opt.mode == "approx") {
    mafkit::MafResult r = mafkit::approximate_maf(t1, t2);
    forest = std::move(r.forest);
    k = r.cut_count;
  } else {
    int bound = opt.max_k >= 0 ? opt.max_k : mafkit::approximate_maf(t1, t2).cut_count;
    auto r = mafkit::solve_maf_exact(t1, t2, bound);
    if (!r) {
      if (opt.as_json) {
        json out{{"mode", "exact"}, {"feasible", false}, {"maxK", bound}};
        std::cout << out.dump(2) << "\n";
      } else {
        std::cout << "no agreement forest within max-k=" << bound << "\n";
      }
      return kExitInfeasible;
    }
    forest = std::move(r->forest);
    k = r->k;
    extra["nodesExplored"] = r->stats.total_nodes;
    extra["nodesPerDepth"] = r->stats.nodes_per_depth;
    extra["nodeBoundOk"] = r->stats.node_bound_ok;
  }
  bool valid = mafkit::is_agreement_forest(forest, t1, t2);
  if (opt.as_json) {
    json out{{"mode", opt.mode},
             {"k", k},
             {"cutCount", k},
             {"components", forest.size()},
             {"valid", valid},
             {"forest", forest_json(forest)}};
    for (auto& [key, val] : extra.items()) out[key] = val;
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "k: " << k << "\ncuts: " << k << "\ncomponents: " << forest.size()
              << "\nvalid: " << (valid ? "yes" : "no") << "\n";
    print_forest(forest);
  }
  return valid ? kExitOk : kExitInfeasible;
}

int run_maaf(const Options& opt) {
  mafkit::PhyloTree t1 = read_tree(opt.t1_path);
  mafkit::PhyloTree t2 = read_tree(opt.t2_path);
  mafkit::MafMode mm = opt.mode == "exact" ? mafkit::MafMode::Exact : mafkit::MafMode::Approx;
  mafkit::DfvsMode dm =
      opt.dfvs == "greedy" ? mafkit::DfvsMode::Greedy : mafkit::DfvsMode::Exact;
  mafkit::MaafResult r = mafkit::approximate_maaf(t1, t2, mm, dm, opt.max_k);

  if (!opt.dump_dfvs_path.empty()) {
    std::ofstream out(opt.dump_dfvs_path);
    if (!out) throw std::runtime_error("cannot write '" + opt.dump_dfvs_path + "'");
    out << r.dfvs_dump;
  }

  if (opt.as_json) {
    json ig = json::array();
    for (auto [u, v] : r.diag.inheritance_edges) ig.push_back(json::array({u, v}));
    json out{{"diagnostics",
              {{"components", r.diag.components},
               {"k", r.diag.k},
               {"mafSize", r.diag.maf_size},
               {"dfvsWeight", r.diag.dfvs_weight},
               {"proper", r.diag.proper},
               {"acyclic", r.diag.acyclic},
               {"identityHolds", r.diag.identity_holds}}},
             {"forest", forest_json(r.forest)},
             {"inheritanceGraph", ig}};
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "k: " << r.k << " (hybridization number upper bound)\ncomponents: "
              << r.diag.components << "\nmaf size: " << r.diag.maf_size
              << "\ndfvs weight: " << r.diag.dfvs_weight
              << "\nproper: " << (r.diag.proper ? "yes" : "no")
              << "\nacyclic: " << (r.diag.acyclic ? "yes" : "no")
              << "\nidentity |A\\F| = |A| + w(F): "
              << (r.diag.identity_holds ? "holds" : "violated") << "\n";
    print_forest(r.forest);
  }
  return kExitOk;
}

int run_validate(const Options& opt) {
  mafkit::PhyloTree t1 = read_tree(opt.t1_path);
  mafkit::PhyloTree t2 = read_tree(opt.t2_path);
  mafkit::Forest f = mafkit::read_forest_file(opt.forest_path);

  mafkit::ForestCertificate cert = mafkit::check_agreement_forest(f, t1, t2);
  std::optional<bool> acyclic;
  if (cert.ok()) acyclic = mafkit::is_acyclic(mafkit::inheritance_graph(t1, t2, f));

  if (opt.as_json) {
    json out{{"agreementForest", cert.ok()}};
    out["detail"] = cert.detail;
    if (acyclic) out["acyclic"] = *acyclic;
    std::cout << out.dump(2) << "\n";
  } else {
    if (cert.ok()) {
      std::cout << "agreement forest: yes\nacyclic: " << (*acyclic ? "yes" : "no") << "\n";
    } else {
      std::cout << "agreement forest: no\n" << cert.detail << "\n";
    }
  }
  return cert.ok() ? kExitOk : kExitInfeasible;
}

int run_gen(const Options& opt) {
  mafkit::GeneratedPair pair = mafkit::generate_pair(opt.n, opt.moves, opt.seed);
  std::ofstream o1(opt.t1_path), o2(opt.t2_path);
  if (!o1 || !o2) throw std::runtime_error("cannot write output trees");
  o1 << mafkit::write_newick(pair.t1) << "\n";
  o2 << mafkit::write_newick(pair.t2) << "\n";
  if (opt.as_json) {
    json out{{"n", opt.n}, {"moves", opt.moves}, {"seed", opt.seed},
             {"mafUpperBound", opt.moves}};
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "n: " << opt.n << "\nmoves: " << opt.moves << "\nseed: " << opt.seed
              << "\nMAF upper bound: " << opt.moves << "\n";
  }
  return kExitOk;
}

int run_oracle(const Options& opt) {
  mafkit::PhyloTree t1 = read_tree(opt.t1_path);
  mafkit::PhyloTree t2 = read_tree(opt.t2_path);
  mafkit::oracle::OracleResult r =
      opt.oracle_maaf ? mafkit::oracle::brute_maaf(t1, t2) : mafkit::oracle::brute_maf(t1, t2);
  if (opt.as_json) {
    json out{{"problem", opt.oracle_maaf ? "maaf" : "maf"},
             {"k", r.k},
             {"components", r.forest.size()},
             {"forest", forest_json(r.forest)}};
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "k: " << r.k << "\n";
    print_forest(r.forest);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"agreement forests and hybridization bounds for rooted multifurcating trees"};
  app.require_subcommand(1);
  Options opt;

  CLI::App* maf = app.add_subcommand("maf", "maximum agreement forest (4-approx or exact)");
  maf->add_option("--t1", opt.t1_path, "first tree (Newick file)")->required();
  maf->add_option("--t2", opt.t2_path, "second tree (Newick file)")->required();
  maf->add_option("--mode", opt.mode, "approx|exact")
      ->check(CLI::IsMember({"approx", "exact"}));
  maf->add_option("--max-k", opt.max_k, "exact mode: cap on the number of cuts");
  maf->add_flag("--json", opt.as_json, "JSON output");

  CLI::App* maaf = app.add_subcommand("maaf", "acyclic agreement forest via the DFVS pipeline");
  maaf->add_option("--t1", opt.t1_path)->required();
  maaf->add_option("--t2", opt.t2_path)->required();
  maaf->add_option("--mode", opt.mode, "MAF stage: approx|exact")
      ->check(CLI::IsMember({"approx", "exact"}));
  maaf->add_option("--dfvs", opt.dfvs, "DFVS stage: exact|greedy")
      ->check(CLI::IsMember({"exact", "greedy"}));
  maaf->add_option("--max-k", opt.max_k, "exact MAF stage: cap on the number of cuts");
  maaf->add_option("--dump-dfvs", opt.dump_dfvs_path,
                   "write the DFVS instance to this path (edge-list text)");
  maaf->add_flag("--json", opt.as_json);

  CLI::App* validate = app.add_subcommand("validate", "check a forest against two trees");
  validate->add_option("--t1", opt.t1_path)->required();
  validate->add_option("--t2", opt.t2_path)->required();
  validate->add_option("--forest", opt.forest_path, "forest file, one component per line")
      ->required();
  validate->add_flag("--json", opt.as_json);

  CLI::App* gen = app.add_subcommand("gen", "generate a random tree pair related by rSPR moves");
  gen->add_option("--t1", opt.t1_path, "output path for T1")->required();
  gen->add_option("--t2", opt.t2_path, "output path for T2")->required();
  gen->add_option("--n", opt.n, "number of leaves (>= 2)");
  gen->add_option("--moves", opt.moves, "number of rSPR moves");
  gen->add_option("--seed", opt.seed, "RNG seed");
  gen->add_flag("--json", opt.as_json);

  CLI::App* oracle = app.add_subcommand("oracle", "brute-force MAF/MAAF (small inputs only)");
  oracle->add_option("--t1", opt.t1_path)->required();
  oracle->add_option("--t2", opt.t2_path)->required();
  oracle->add_flag("--maaf", opt.oracle_maaf, "solve MAAF instead of MAF");
  oracle->add_flag("--json", opt.as_json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (maf->parsed()) return run_maf(opt);
    if (maaf->parsed()) return run_maaf(opt);
    if (validate->parsed()) return run_validate(opt);
    if (gen->parsed()) return run_gen(opt);
    if (oracle->parsed()) return run_oracle(opt);
  } catch (const mafkit::NewickError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitInput;
  } catch (const mafkit::InfeasibleError& e) {
    std::cerr << e.what() << "\n";
    return kExitInfeasible;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
