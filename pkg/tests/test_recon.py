import math

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graphs import BOWTIE, C4, K2, K3, K4, K5, K13, P3
from minorrecon.errors import IllegalStep, NotAMinor, SameLabel, UnknownModel, Unreachable
from minorrecon.families import enumerate_small_graphs
from minorrecon.graph_core import Graph
from minorrecon.models import HModel, enumerate_labelings, validate_labels
from minorrecon.recon import (
    ReconSequence,
    build_recon_graph,
    diameter,
    disconnection_witness,
    encode,
    find_path,
    frozen_models,
    host_components,
    is_host,
    legal_step,
    legal_step_universal,
    neighbors,
    replay,
)
from oracles import recon_graph_oracle

K4_TARGET = Graph(4, [(u, v) for u in range(4) for v in range(u + 1, 4)])


def oracle_neighbours(m):
    out = []
    for v in range(m.host.n):
        for b in range(m.target.n):
            if b != m.labels[v]:
                nxt = m.labels[:v] + (b,) + m.labels[v + 1 :]
                if validate_labels(m.host, m.target, nxt).valid:
                    out.append(nxt)
    return sorted(out)


class TestLegalStep:
    def test_c4_endpoint_of_path(self):
        m = HModel(C4, K2, (0, 1, 1, 1))
        assert legal_step(m, 1, 0).legal
        assert validate_labels(C4, K2, (0, 0, 1, 1)).valid

    def test_c4_middle_of_path_reports_first_failure(self):
        m = HModel(C4, K2, (0, 1, 1, 1))
        verdict = legal_step(m, 2, 0)
        assert not verdict.legal
        # vertex 2 is both a cut vertex of its branch and lacks a 0-neighbour;
        # conditions are reported in order, so the cut-vertex condition wins
        assert verdict.failed_condition == "notcut"
        assert HModel(C4, K2, (0, 1, 1, 1)).nbr_label_counts[2][0] == 0

    def test_star_singleton_branch(self):
        m = HModel(K13, K2, (1, 0, 1, 1))
        assert legal_step(m, 1, 1).failed_condition == "nonempty"
        with pytest.raises(SameLabel):
            legal_step(m, 0, 1)

    def test_nbr_condition(self):
        m = HModel(Graph(4, [(0, 1), (1, 2), (2, 3)]), K2, (0, 0, 0, 1))
        assert legal_step(m, 0, 1).failed_condition == "nbr"

    def test_edges_condition(self):
        # vertex 0 of branch {0,1} is the only endpoint towards label 2
        g = Graph(4, [(0, 1), (0, 2), (0, 3), (1, 2), (2, 3)])
        m = HModel(g, K3, (0, 0, 1, 2))
        assert legal_step(m, 0, 1).failed_condition == "edges"

    def test_matches_oracle_on_k4_k3(self):
        for lab in enumerate_labelings(K4, K3):
            m = HModel(K4, K3, lab)
            assert sorted(x.labels for x in neighbors(m)) == oracle_neighbours(m)

    def test_neighbours_of_k3(self):
        assert sorted(x.labels for x in neighbors(HModel(K3, K2, (0, 1, 1)))) == [(0, 0, 1), (0, 1, 0)]

    def test_frozen_star_model(self):
        assert neighbors(HModel(K13, K2, (1, 0, 1, 1))) == []


class TestUniversal:
    def test_complete_host(self):
        m = HModel(K5, K4_TARGET, (0, 0, 1, 2, 3))
        assert legal_step_universal(m, 1, 2).legal
        assert legal_step(m, 1, 2).legal

    def test_no_universal_vertex(self):
        m = HModel(C4, K2, (0, 1, 1, 1))
        for v in range(4):
            b = 1 - m.labels[v]
            assert not legal_step_universal(m, v, b).legal

    def test_never_contradicts_legal_step(self):
        for n in (4, 5):
            for g in enumerate_small_graphs(n, "connected"):
                for h in (K2, K3):
                    for lab in enumerate_labelings(g, h):
                        m = HModel(g, h, lab)
                        for v in range(n):
                            for b in range(h.n):
                                if b != lab[v] and legal_step_universal(m, v, b).legal:
                                    assert legal_step(m, v, b).legal


class TestReconGraph:
    def test_p3(self):
        rg = build_recon_graph(P3, K2)
        assert (rg.node_count, rg.edge_count, rg.component_count) == (4, 2, 2)
        assert diameter(rg) == math.inf

    def test_k3_six_cycle(self):
        rg = build_recon_graph(K3, K2)
        assert (rg.node_count, rg.edge_count, rg.component_count) == (6, 6, 1)
        assert all(len(a) == 2 for a in rg.adjacency)
        assert diameter(rg) == 3
        assert frozen_models(rg) == []

    def test_star_all_frozen(self):
        rg = build_recon_graph(K13, K2)
        assert (rg.node_count, rg.edge_count, rg.component_count) == (6, 0, 6)
        assert len(frozen_models(rg)) == 6

    def test_c4_nothing_frozen(self):
        assert frozen_models(build_recon_graph(C4, K2)) == []

    def test_single_model_space(self):
        rg = build_recon_graph(K2, K2)
        assert rg.node_count == 2 and len(frozen_models(rg)) == 2
        rg1 = build_recon_graph(Graph(1), Graph(1))
        assert rg1.node_count == 1 and diameter(rg1) == 0

    def test_summary_and_dot(self):
        rg = build_recon_graph(P3, K2)
        assert rg.summary() == {"nodes": 4, "edges": 2, "components": 2, "diameter": "Infinite", "frozen_count": 0}
        dot = rg.to_dot()
        assert dot.startswith("graph recon {") and dot.count("--") == 2

    @pytest.mark.parametrize("g,h", [(K4, K3), (BOWTIE, K2), (BOWTIE, K3), (C4, K2), (K5, K4_TARGET)])
    def test_matches_networkx_oracle(self, g, h):
        rg = build_recon_graph(g, h)
        ref = recon_graph_oracle(g, h)
        assert rg.node_count == ref.number_of_nodes()
        assert rg.edge_count == ref.number_of_edges()
        assert rg.component_count == nx.number_connected_components(ref)
        if nx.is_connected(ref):
            assert diameter(rg) == nx.diameter(ref)

    def test_workers_give_identical_graph(self):
        g = enumerate_small_graphs(6, "3-connected")[0]
        a = build_recon_graph(g, K3)
        b = build_recon_graph(g, K3, workers=2)
        assert a == b

    def test_unknown_model(self):
        with pytest.raises(UnknownModel):
            build_recon_graph(P3, K2).index_of((0, 1, 0))

    def test_encode(self):
        assert encode((1, 0, 2), 3) == 11


class TestHost:
    def test_examples(self):
        assert is_host(C4, K2)
        assert not is_host(P3, K2)
        assert is_host(K5, K4_TARGET)

    def test_not_a_minor(self):
        with pytest.raises(NotAMinor):
            is_host(P3, K3)

    def test_component_sizes(self):
        assert host_components(P3, K2) == [2, 2]


class TestPaths:
    def test_same_model(self):
        rg = build_recon_graph(K3, K2)
        assert len(find_path(rg, (0, 1, 1), (0, 1, 1))) == 0

    def test_unreachable(self):
        with pytest.raises(Unreachable):
            find_path(build_recon_graph(P3, K2), (0, 0, 1), (1, 1, 0))

    def test_k3_path(self):
        rg = build_recon_graph(K3, K2)
        seq = find_path(rg, (0, 1, 1), (1, 1, 0))
        assert len(seq) <= 3
        assert replay(seq).labels == (1, 1, 0)

    def test_replay_rejects_illegal(self):
        seq = ReconSequence(HModel(C4, K2, (0, 1, 1, 1)), ((2, 0),))
        with pytest.raises(IllegalStep) as exc:
            replay(seq)
        assert exc.value.index == 0 and exc.value.condition == "notcut"

    @settings(max_examples=40, deadline=None)
    @given(st.data())
    def test_reversed_sequence_returns_to_start(self, data):
        rg = build_recon_graph(K4, K3)
        i = data.draw(st.integers(0, rg.node_count - 1))
        j = data.draw(st.integers(0, rg.node_count - 1))
        seq = find_path(rg, rg.models[i], rg.models[j])
        back = seq.reversed()
        assert back.start.labels == rg.models[j]
        assert replay(back).labels == rg.models[i]


class TestWitness:
    def test_p3(self):
        f, g = disconnection_witness(P3)
        assert f.labels == (0, 0, 1) and g.labels == (1, 1, 0)
        rg = build_recon_graph(P3, K2)
        assert rg.component_id[rg.index_of(f.labels)] != rg.component_id[rg.index_of(g.labels)]

    def test_c4(self):
        assert disconnection_witness(C4) is None

    def test_bowtie(self):
        f, g = disconnection_witness(BOWTIE)
        rg = build_recon_graph(BOWTIE, K2)
        assert rg.component_id[rg.index_of(f.labels)] != rg.component_id[rg.index_of(g.labels)]

    def test_all_small_non_2_connected(self):
        for n in (4, 5):
            for g in enumerate_small_graphs(n, "connected"):
                w = disconnection_witness(g)
                if w is None:
                    continue
                rg = build_recon_graph(g, K2)
                a, b = (rg.index_of(m.labels) for m in w)
                assert rg.component_id[a] != rg.component_id[b]
