"""Smoke tests for the python bindings."""

import pytest

import mafkit


def test_parse_and_write():
    t = mafkit.parse_newick("((a,b),c);")
    assert t.leaf_labels() == ["a", "b", "c"]
    assert t.newick() == "((a,b),c);"
    assert mafkit.parse_newick("(c,(b,a));") == mafkit.parse_newick("((a,b),c);")


def test_parse_error_position():
    with pytest.raises(RuntimeError):
        mafkit.parse_newick("((a,a),b);")


def test_restrict_embed_refinement():
    t = mafkit.parse_newick("((a,b),(c,d));")
    assert mafkit.restrict(t, ["a", "c"]).newick() == "(a,c);"
    root, edges = mafkit.embed(t, ["a", "b"])
    assert len(edges) == 2
    assert mafkit.is_refinement(t, mafkit.parse_newick("(a,b,c,d);"))
    joint = mafkit.common_refinement(
        mafkit.parse_newick("(a,b,c,d);"), mafkit.parse_newick("((a,b),(c,d));")
    )
    assert joint.newick() == "((a,b),(c,d));"
    assert (
        mafkit.common_refinement(
            mafkit.parse_newick("((a,b),c);"), mafkit.parse_newick("((a,c),b);")
        )
        is None
    )


def test_agreement_forest_checks():
    t1 = mafkit.parse_newick("((a,b),(c,d));")
    t2 = mafkit.parse_newick("((a,c),(b,d));")
    good = mafkit.Forest(["(a,b);", "c;", "d;"])
    bad = mafkit.Forest(["(a,b);", "(c,d);"])
    assert mafkit.is_agreement_forest(good, t1, t2)
    ok, detail = mafkit.check_agreement_forest(bad, t1, t2)
    assert not ok
    assert "edge" in detail


def test_maf_approx_and_exact():
    t1 = mafkit.parse_newick("((a,b),(c,d));")
    t2 = mafkit.parse_newick("((a,c),(b,d));")
    approx = mafkit.approximate_maf(t1, t2)
    assert approx.cut_count == 3
    exact = mafkit.solve_maf_exact(t1, t2, 5)
    assert exact.k == 2
    assert exact.node_bound_ok
    assert mafkit.solve_maf_exact(t1, t2, 1) is None
    k, forest = mafkit.brute_maf(t1, t2)
    assert k == exact.k


def test_maaf_pipeline():
    t1 = mafkit.parse_newick("(((a,b),c),d);")
    t2 = mafkit.parse_newick("(((c,d),a),b);")
    res = mafkit.approximate_maaf(t1, t2, "exact", "exact")
    assert res.k == 2
    d = res.diagnostics
    assert d.acyclic and d.identity_holds
    assert d.maf_size == 2 and d.dfvs_weight == 1
    assert not mafkit.is_acyclic_agreement_forest(
        t1, t2, mafkit.Forest(["(a,b);", "(c,d);"])
    )
    k, _ = mafkit.brute_maaf(t1, t2)
    assert k == 2


def test_dfvs():
    g = mafkit.Digraph(2)
    g.set_weight(0, 1)
    g.set_weight(1, 2)
    g.add_edge(0, 1)
    g.add_edge(1, 0)
    assert not g.is_acyclic()
    assert mafkit.solve_dfvs_exact(g).total_weight == 1
    assert mafkit.solve_dfvs_greedy(g).total_weight >= 1
    assert mafkit.brute_dfvs(g).total_weight == 1


def test_generator_roundtrip():
    t1, t2 = mafkit.generate_pair(12, 3, seed=7)
    again1, again2 = mafkit.generate_pair(12, 3, seed=7)
    assert t1 == again1 and t2 == again2
    res = mafkit.approximate_maf(t1, t2)
    assert res.forest.size() == res.cut_count + 1
