import networkx as nx
import pytest

from graphs import K3, K4, K5
from minorrecon.errors import BadParameter, HypothesisNotMet, ParseError, PartDisconnected, PartSizeMismatch
from minorrecon.families import (
    FamilySpec,
    GenWheelLayout,
    enumerate_small_graphs,
    find_chain,
    gen_complete,
    gen_generalized_wheel,
    gen_path,
    gen_random_3connected,
    gen_squared_cycle,
    gen_wheel,
    parse_family_spec,
)
from minorrecon.graph_core import Graph, canonical_form, is_isomorphic, is_k_connected
from minorrecon.models import validate_labels
from oracles import all_graphs, k_connected_by_subsets, nonisomorphic, to_nx


def nx_classes(n, k):
    """Isomorphism classes of k-connected graphs on n vertices, computed with networkx."""
    reps = []
    for g in all_graphs(n):
        x = to_nx(g)
        if n <= k or not nx.is_connected(x) or nx.node_connectivity(x) < k:
            continue
        if not any(nx.is_isomorphic(x, r) for r in reps):
            reps.append(x)
    return len(reps)


class TestWheel:
    def test_w3_is_k4(self):
        assert is_isomorphic(gen_wheel(3), K4)

    def test_w4_counts(self):
        w = gen_wheel(4)
        assert (w.n, w.m) == (5, 8)

    def test_w5_three_connected(self):
        assert is_k_connected(gen_wheel(5), 3)
        assert k_connected_by_subsets(gen_wheel(5), 3)

    @pytest.mark.parametrize("k", range(3, 10))
    def test_wheels_three_connected(self, k):
        assert k_connected_by_subsets(gen_wheel(k), 3)

    def test_too_small(self):
        with pytest.raises(BadParameter):
            gen_wheel(2)


class TestSquaredCycle:
    def test_c5_squared_is_k5(self):
        assert is_isomorphic(gen_squared_cycle(5), K5)

    def test_c6_squared(self):
        g = gen_squared_cycle(6)
        assert (g.n, g.m) == (6, 12)
        assert all(g.degree(v) == 4 for v in range(6))
        assert k_connected_by_subsets(g, 4)

    @pytest.mark.parametrize("k", range(6, 10))
    def test_four_connected(self, k):
        g = gen_squared_cycle(k)
        assert g.m == 2 * k
        assert k_connected_by_subsets(g, 4) and is_k_connected(g, 4)

    def test_too_small(self):
        with pytest.raises(BadParameter):
            gen_squared_cycle(4)


class TestGeneralizedWheel:
    def test_single_vertex_parts_give_w3(self):
        assert is_isomorphic(gen_generalized_wheel([Graph(1)] * 3, 1, 1, 3), K4)

    def test_triangle_parts(self):
        g = gen_generalized_wheel([K3] * 3, 3, 1, 3)
        assert g.n == 10 and g.degree(0) == 9

    def test_unequal_parts(self):
        with pytest.raises(PartSizeMismatch):
            gen_generalized_wheel([K3, K3, Graph(2, [(0, 1)])], 3, 1, 3)

    def test_disconnected_part(self):
        with pytest.raises(PartDisconnected):
            gen_generalized_wheel([Graph(2)] * 3, 2, 1, 3)

    def test_too_few_parts(self):
        with pytest.raises(BadParameter):
            gen_generalized_wheel([K3] * 2, 3, 1, 2)

    @pytest.mark.parametrize("n,l,m", [(1, 1, 3), (2, 1, 4), (3, 2, 3), (2, 3, 5)])
    def test_has_clique_minor(self, n, l, m):
        g = gen_generalized_wheel([gen_path(n)] * m, n, l, m)
        lay = GenWheelLayout(n, l, m)
        labels = [l + 1] * g.n
        for i in lay.hubs():
            labels[i] = i
        labels[lay.special] = l
        assert validate_labels(g, gen_complete(l + 2), labels).valid

    def test_layout_indices(self):
        lay = GenWheelLayout(3, 2, 3)
        assert list(lay.hubs()) == [0, 1]
        assert lay.special == 2 and lay.special_plus == 5
        assert len(lay.subgraph_vertices()) == 9


class TestRandom3Connected:
    def test_n4_is_k4(self):
        assert is_isomorphic(gen_random_3connected(4, 0), K4)

    def test_deterministic(self):
        a, b = gen_random_3connected(7, 1), gen_random_3connected(7, 1)
        assert a == b and a.n == 7
        assert k_connected_by_subsets(a, 3)

    def test_too_small(self):
        with pytest.raises(BadParameter):
            gen_random_3connected(3)

    def test_many_seeds(self):
        for seed in range(1000):
            g = gen_random_3connected(4 + seed % 5, seed)
            assert g.n == 4 + seed % 5 and is_k_connected(g, 3)


class TestChain:
    def test_k5_and_c6_squared_are_targets(self):
        assert len(find_chain(K5)) == 1
        assert len(find_chain(gen_squared_cycle(6))) == 1

    def test_k6_contraction(self):
        chain = find_chain(gen_complete(6), "contraction")
        assert is_isomorphic(chain[-1], K5)
        assert all(k_connected_by_subsets(g, 4) for g in chain)

    def test_removal_keeps_vertex_count(self):
        chain = find_chain(gen_complete(6), "removal")
        if chain is not None:
            assert all(g.n == 6 for g in chain)
            assert is_isomorphic(chain[-1], gen_squared_cycle(6))

    def test_hypothesis(self):
        with pytest.raises(HypothesisNotMet):
            find_chain(K4)

    def test_bad_operation(self):
        with pytest.raises(BadParameter):
            find_chain(K5, "flip")


class TestEnumeration:
    def test_n3_two_connected(self):
        gs = enumerate_small_graphs(3, "2-connected")
        assert len(gs) == 1 and is_isomorphic(gs[0], K3)

    def test_n4_two_connected(self):
        assert len(enumerate_small_graphs(4, "2-connected")) == 3

    @pytest.mark.parametrize("n", [3, 4, 5])
    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_matches_brute_force(self, n, k):
        ours = enumerate_small_graphs(n, k)
        ref = nonisomorphic(n, lambda g: k_connected_by_subsets(g, k))
        assert len(ours) == len(ref)
        assert len({canonical_form(g) for g in ours}) == len(ours)

    @pytest.mark.parametrize("k,count", [(2, 56), (3, 17)])
    def test_n6_matches_networkx(self, k, count):
        assert len(enumerate_small_graphs(6, k)) == nx_classes(6, k) == count

    def test_bad_size(self):
        with pytest.raises(BadParameter):
            enumerate_small_graphs(9)


class TestFamilySpec:
    @pytest.mark.parametrize(
        "text,n",
        [("wheel:5", 6), ("c2:6", 6), ("k:5", 5), ("genwheel:l=2,m=3,n=3,part=triangle", 11), ("rand3:n=8,seed=42", 8)],
    )
    def test_parse_and_build(self, text, n):
        spec = parse_family_spec(text)
        assert spec.build().n == n
        assert parse_family_spec(str(spec)) == spec

    def test_layout(self):
        assert parse_family_spec("wheel:4").layout() == GenWheelLayout(1, 1, 4)
        assert parse_family_spec("k:4").layout() is None

    @pytest.mark.parametrize("text", ["wheel", "nope:3", "wheel:x", "genwheel:l="])
    def test_parse_errors(self, text):
        with pytest.raises(ParseError):
            parse_family_spec(text)

    def test_missing_parameter(self):
        with pytest.raises(BadParameter):
            FamilySpec("generalized_wheel", {"n": 1}).build()
