import itertools
import random

import networkx as nx
import pytest

from graphs import BOWTIE, C4, C5, K2, K3, K4, K5, P3, P4
from minorrecon.errors import HypothesisNotMet, NotAnHEdge, ShapeMismatch, StateSpaceExceeded
from minorrecon.families import enumerate_small_graphs, gen_squared_cycle
from minorrecon.graph_core import Graph
from minorrecon.models import (
    HModel,
    branch_block_tree,
    check_structural_lemmas,
    confined_reachable,
    crucial_vertices,
    enumerate_labelings,
    enumerate_models,
    essential_edges,
    essential_vertices,
    hits_leaf_crucial,
    hits_leaf_l_crucial,
    is_b_crucial,
    is_leaf_crucial_model,
    is_leaf_l_crucial_model,
    leaf_crucial_vertices,
    lynchpin_designations,
    restricted_block_subtree,
    validate_labels,
    validate_model,
    weak_connections,
)
from oracles import all_models, essential_oracle, is_model_oracle, to_nx

K4_TARGET = Graph(4, [(u, v) for u in range(4) for v in range(u + 1, 4)])


# ---------------------------------------------------------------------------
# independent oracles for crucial / leaf-interior / confined reachability

def crucial_oracle(g, h, labels):
    out = set()
    for v in range(g.n):
        a = labels[v]
        ess = [b for b in range(h.n) if h.has_edge(a, b) and essential_oracle(g, labels, a, b) == {v}]
        if len(ess) >= 2:
            out.add(v)
    return out


def leaf_interior_oracle(g, labels, a):
    vs = [v for v in range(g.n) if labels[v] == a]
    sub = to_nx(g).subgraph(vs)
    if len(vs) == 1:
        return set(vs)
    blocks = [set(c) for c in nx.biconnected_components(sub)]
    cuts = set(nx.articulation_points(sub))
    out = set()
    for b in blocks:
        if len(blocks) == 1 or len(b & cuts) == 1:
            out |= b - cuts
    return out


def confined_oracle(g, h, labels, subset):
    seen = {tuple(labels)}
    todo = [tuple(labels)]
    while todo:
        cur = todo.pop()
        for v in subset:
            for b in range(h.n):
                nxt = cur[:v] + (b,) + cur[v + 1 :]
                if b != cur[v] and nxt not in seen and is_model_oracle(g, h, nxt):
                    seen.add(nxt)
                    todo.append(nxt)
    return seen


# ---------------------------------------------------------------------------

class TestValidate:
    def test_k3_valid(self):
        assert validate_model(HModel(K3, K2, (0, 1, 1))).valid

    def test_c4_antipodal_pair(self):
        r = validate_model(HModel(C4, K2, (0, 1, 0, 1)))
        assert not r.valid and r.condition == "connected" and r.label == 0

    def test_p3_disconnected(self):
        r = validate_labels(P3, K2, (0, 1, 0))
        assert not r and r.detail == "branch set 0 disconnected"

    def test_empty_branch(self):
        r = validate_labels(K3, K3, (0, 0, 1))
        assert r.condition == "nonempty" and r.label == 2

    def test_missing_edge(self):
        g = Graph(4, [(0, 1), (1, 2), (2, 3)])
        r = validate_labels(g, K3, (0, 1, 1, 2))
        assert r.condition == "edges" and r.edge == (0, 2)

    def test_shape(self):
        with pytest.raises(ShapeMismatch):
            HModel(K3, K2, (0, 1))
        with pytest.raises(ShapeMismatch):
            HModel(K3, K2, (0, 1, 2))


class TestEnumerate:
    @pytest.mark.parametrize(
        "g,h", [(K3, K2), (P3, K2), (K4, K3), (C5, K3), (BOWTIE, K3), (gen_squared_cycle(6), K4_TARGET)]
    )
    def test_matches_filter_oracle(self, g, h):
        assert enumerate_labelings(g, h) == all_models(g, h)

    def test_counts(self):
        assert len(enumerate_models(K3, K2)) == 6
        assert [m.labels for m in enumerate_models(P3, K2)] == sorted([(0, 0, 1), (1, 1, 0), (0, 1, 1), (1, 0, 0)])
        assert len(enumerate_models(K4, K3)) == 36

    def test_budget(self):
        with pytest.raises(StateSpaceExceeded):
            enumerate_labelings(K5, K3, budget=10)

    def test_c62_branch_size_types(self):
        types = {tuple(sorted((lab.count(a) for a in range(4)), reverse=True))
                 for lab in enumerate_labelings(gen_squared_cycle(6), K4_TARGET)}
        assert types == {(3, 1, 1, 1), (2, 2, 1, 1)}


class TestEssential:
    def test_triangle_all_essential(self):
        m = HModel(K3, K3, (0, 1, 2))
        assert {pair for pair, _ in essential_edges(m)} == {(0, 1), (0, 2), (1, 2)}
        assert essential_vertices(m, 0, 1) == {0}

    def test_k4_pair_01_not_essential(self):
        m = HModel(K4, K3, (0, 0, 1, 2))
        assert (0, 1) not in {pair for pair, _ in essential_edges(m)}
        assert essential_vertices(m, 0, 1) == frozenset()

    def test_same_label_is_not_an_h_edge(self):
        with pytest.raises(NotAnHEdge):
            essential_vertices(HModel(P4, K2, (0, 0, 1, 1)), 0, 0)

    def test_c62_essential_edges_match_edge_census(self):
        g = gen_squared_cycle(6)
        for lab in enumerate_labelings(g, K4_TARGET):
            m = HModel(g, K4_TARGET, lab)
            census = {}
            for u, v in g.edges():
                if lab[u] != lab[v]:
                    census.setdefault(tuple(sorted((lab[u], lab[v]))), []).append((u, v))
            expected = {pair for pair, es in census.items() if len(es) == 1}
            assert {pair for pair, _ in essential_edges(m)} == expected

    def test_essential_vertices_match_oracle(self):
        for g in enumerate_small_graphs(5, "connected"):
            for lab in enumerate_labelings(g, K3):
                m = HModel(g, K3, lab)
                for a, b in itertools.permutations(range(3), 2):
                    assert set(essential_vertices(m, a, b)) == essential_oracle(g, lab, a, b)


class TestCrucial:
    def test_triangle(self):
        assert crucial_vertices(HModel(K3, K3, (0, 1, 2))) == {0, 1, 2}

    def test_k4_branch_of_size_two_has_none(self):
        m = HModel(K4, K3, (0, 0, 1, 2))
        assert not crucial_vertices(m) & m.branch(0)

    def test_c5_vertex_4(self):
        m = HModel(C5, K3, (0, 0, 1, 1, 2))
        assert 4 in crucial_vertices(m)
        assert crucial_vertices(m) == crucial_oracle(C5, K3, m.labels)

    def test_b_crucial(self):
        m = HModel(C5, K3, (0, 0, 1, 1, 2))
        # vertex 1 is essential for label 1 (edge 1-2) and has a neighbour labeled 1
        assert essential_vertices(m, 0, 1) == {1}
        assert not is_b_crucial(m, 1, 1)
        assert is_b_crucial(m, 4, 0)

    def test_crucial_matches_oracle_on_small_graphs(self):
        for n in (4, 5):
            for g in enumerate_small_graphs(n, "connected"):
                for lab in enumerate_labelings(g, K3):
                    assert crucial_vertices(HModel(g, K3, lab)) == crucial_oracle(g, K3, lab)


class TestWeak:
    def test_triangle_designations(self):
        m = HModel(K3, K3, (0, 1, 2))
        assert len(weak_connections(m)) == 3
        assert all(w.essential_edge is not None for w in weak_connections(m))
        assert len(list(lynchpin_designations(m))) == 8

    def test_k4_pair_01_weak_only_through_singleton(self):
        m = HModel(K4, K3, (0, 0, 1, 2))
        by_pair = {(w.label_a, w.label_b): w for w in weak_connections(m)}
        # branch 0 has no essential vertex for 1; the singleton branch 1 does
        assert essential_vertices(m, 0, 1) == frozenset()
        assert by_pair[(0, 1)].witnesses == {2} and by_pair[(0, 1)].essential_edge is None
        assert by_pair[(1, 2)].essential_edge == (2, 3)

    def test_k5_singletons(self):
        m = HModel(K5, K4_TARGET, (0, 1, 2, 3, 3))
        by_pair = {(w.label_a, w.label_b): w for w in weak_connections(m)}
        for pair in [(0, 1), (0, 2), (1, 2)]:
            assert by_pair[pair].essential_edge is not None
        # the singleton side is essential for label 3; the two-vertex side is not
        for a in range(3):
            w = by_pair[(a, 3)]
            assert w.essential_edge is None and w.witnesses == {a}
            assert essential_vertices(m, 3, a) == frozenset()


class TestBlocks:
    def test_path_branch(self):
        m = HModel(C5, K2, (0, 0, 0, 1, 1))
        bt = branch_block_tree(m, 0)
        assert len(bt.blocks) == 2 and bt.cut_vertices == {1}

    def test_two_connected_branch(self):
        g = Graph(5, [(0, 1), (1, 2), (2, 3), (0, 3), (3, 4), (4, 0)])
        m = HModel(g, K2, (0, 0, 0, 0, 1))
        bt = branch_block_tree(m, 0)
        assert bt.blocks == (frozenset(range(4)),) and bt.is_leaf(0)

    def test_bowtie_restricted(self):
        g = Graph(6, list(BOWTIE.edges()) + [(5, 0), (5, 4)])
        m = HModel(g, K2, (0, 0, 0, 0, 0, 1))
        sub = restricted_block_subtree(m, 0, {0, 1})
        assert sub.blocks == (frozenset({0, 1, 2}),)


class TestLeafCrucial:
    def test_triangle(self):
        m = HModel(K3, K3, (0, 1, 2))
        assert leaf_crucial_vertices(m) == {0, 1, 2}
        assert is_leaf_crucial_model(m)

    def test_k4_singletons_are_leaf_crucial(self):
        m = HModel(K4, K3, (0, 0, 1, 2))
        assert leaf_crucial_vertices(m) == {2, 3} == crucial_oracle(K4, K3, m.labels)

    def test_c5(self):
        m = HModel(C5, K3, (0, 0, 1, 1, 2))
        assert 4 in leaf_crucial_vertices(m)

    def test_leaf_crucial_matches_oracle(self):
        for g in enumerate_small_graphs(5, "2-connected"):
            for lab in enumerate_labelings(g, K3):
                m = HModel(g, K3, lab)
                interior = set().union(*(leaf_interior_oracle(g, lab, a) for a in range(3)))
                assert leaf_crucial_vertices(m) == crucial_oracle(g, K3, lab) & interior


class TestHits:
    def test_empty_subset(self):
        for lab in enumerate_labelings(C5, K3):
            m = HModel(C5, K3, lab)
            assert hits_leaf_crucial(m, set()) == is_leaf_crucial_model(m)
            assert hits_leaf_l_crucial(m, set(), 0) == is_leaf_l_crucial_model(m, 0)

    def test_already_leaf_crucial_in_branch(self):
        m = HModel(K3, K3, (0, 1, 2))
        assert hits_leaf_crucial(m, {0})

    def test_k4_drain_reaches_singleton(self):
        m = HModel(K4, K3, (0, 0, 1, 2))
        assert hits_leaf_crucial(m, {1})

    def test_confined_reachable_matches_oracle(self):
        rng = random.Random(5)
        for g in enumerate_small_graphs(5, "2-connected"):
            labs = enumerate_labelings(g, K3)
            for lab in rng.sample(labs, min(6, len(labs))):
                for a in range(3):
                    sub = sorted(v for v in range(g.n) if lab[v] == a)
                    got = {x.labels for x in confined_reachable(HModel(g, K3, lab), sub)}
                    assert got == confined_oracle(g, K3, lab, sub)

    def test_hits_matches_oracle(self):
        rng = random.Random(9)
        for g in enumerate_small_graphs(5, "2-connected"):
            labs = enumerate_labelings(g, K3)
            for lab in rng.sample(labs, min(6, len(labs))):
                for a in range(3):
                    sub = [v for v in range(g.n) if lab[v] == a]
                    want = any(
                        crucial_oracle(g, K3, x) & leaf_interior_oracle(g, x, a)
                        for x in confined_oracle(g, K3, lab, sub)
                    )
                    assert hits_leaf_crucial(HModel(g, K3, lab), sub) == want


class TestStructural:
    def test_k4_k3_all_models(self):
        for lab in enumerate_labelings(K4, K3):
            rep = check_structural_lemmas(HModel(K4, K3, lab), 3)
            assert rep.ok, rep.violations

    def test_c62_k4_all_models(self):
        g = gen_squared_cycle(6)
        for lab in enumerate_labelings(g, K4_TARGET):
            assert check_structural_lemmas(HModel(g, K4_TARGET, lab), 4).ok

    def test_hypothesis_not_met(self):
        with pytest.raises(HypothesisNotMet):
            check_structural_lemmas(HModel(P3, K2, (0, 1, 1)), 2)

    def test_reports_which_checks_ran(self):
        rep = check_structural_lemmas(HModel(K4, K3, (0, 0, 1, 2)), 3)
        assert "leafblock" in rep.checks and "no-crucial" in rep.checks
