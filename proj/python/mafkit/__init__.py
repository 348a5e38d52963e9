"""Agreement forests for rooted multifurcating phylogenetic trees.

Thin wrapper over the C++ core: Newick parsing, agreement-forest
validation, the MAF 4-approximation and exact solver, and the MAAF
pipeline built on a weighted directed feedback vertex set reduction.
"""

from ._core import (
    Tree,
    Forest,
    Digraph,
    FvsSolution,
    MafResult,
    ExactMafResult,
    MaafResult,
    MaafDiagnostics,
    parse_newick,
    write_newick,
    restrict,
    embed,
    is_refinement,
    common_refinement,
    is_agreement_forest,
    check_agreement_forest,
    cut,
    inheritance_graph,
    is_acyclic_agreement_forest,
    maximalize,
    minimally_refine,
    approximate_maf,
    solve_maf_exact,
    approximate_maaf,
    solve_dfvs_exact,
    solve_dfvs_greedy,
    brute_maf,
    brute_maaf,
    brute_dfvs,
    generate_pair,
)

__all__ = [
    "Tree",
    "Forest",
    "Digraph",
    "FvsSolution",
    "MafResult",
    "ExactMafResult",
    "MaafResult",
    "MaafDiagnostics",
    "parse_newick",
    "write_newick",
    "restrict",
    "embed",
    "is_refinement",
    "common_refinement",
    "is_agreement_forest",
    "check_agreement_forest",
    "cut",
    "inheritance_graph",
    "is_acyclic_agreement_forest",
    "maximalize",
    "minimally_refine",
    "approximate_maf",
    "solve_maf_exact",
    "approximate_maaf",
    "solve_dfvs_exact",
    "solve_dfvs_greedy",
    "brute_maf",
    "brute_maaf",
    "brute_dfvs",
    "generate_pair",
]

__version__ = "0.1.0"
