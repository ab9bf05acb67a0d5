"""H-models of a host graph and their structural predicates.

A model is a total labeling of the host vertices by target vertices; the
vertices carrying label ``i`` form the branch set of ``i``.  Everything here
is read-only analysis; single-step moves live in :mod:`minorrecon.recon`.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import permutations, product
from typing import Iterable, Iterator, Sequence

from .errors import HypothesisNotMet, NotAnHEdge, ShapeMismatch, StateSpaceExceeded
from .graph_core import BlockTree, Graph, block_tree_of, cut_vertices_of, is_connected_subset, is_k_connected

DEFAULT_BUDGET = 10**8

Labels = tuple[int, ...]


@dataclass(frozen=True, eq=False)
class HModel:
    host: Graph
    target: Graph
    labels: Labels

    def __post_init__(self) -> None:
        object.__setattr__(self, "labels", tuple(int(x) for x in self.labels))
        _check_shape(self.host, self.target, self.labels)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HModel):
            return NotImplemented
        return self.labels == other.labels and self.host == other.host and self.target == other.target

    def __hash__(self) -> int:
        return hash(self.labels)

    def __repr__(self) -> str:
        return f"HModel({list(self.labels)})"

    def label(self, v: int) -> int:
        return self.labels[v]

    def relabel(self, v: int, b: int) -> HModel:
        labels = list(self.labels)
        labels[v] = b
        return HModel(self.host, self.target, tuple(labels))

    @cached_property
    def branches(self) -> tuple[frozenset[int], ...]:
        sets: list[set[int]] = [set() for _ in range(self.target.n)]
        for v, a in enumerate(self.labels):
            sets[a].add(v)
        return tuple(frozenset(s) for s in sets)

    def branch(self, a: int) -> frozenset[int]:
        return self.branches[a]

    @cached_property
    def nbr_label_counts(self) -> tuple[tuple[int, ...], ...]:
        """For each vertex, the number of its neighbours carrying each label."""
        k = self.target.n
        rows = []
        for v in range(self.host.n):
            row = [0] * k
            for w in self.host.adj[v]:
                row[self.labels[w]] += 1
            rows.append(tuple(row))
        return tuple(rows)

    @cached_property
    def _endpoints(self) -> dict[tuple[int, int], frozenset[int]]:
        """(a, b) -> vertices of branch a incident to some a-b connecting edge."""
        found: dict[tuple[int, int], set[int]] = {}
        for u, v in self.host.edges():
            a, b = self.labels[u], self.labels[v]
            if a != b:
                found.setdefault((a, b), set()).add(u)
                found.setdefault((b, a), set()).add(v)
        return {key: frozenset(vs) for key, vs in found.items()}

    @cached_property
    def _edge_counts(self) -> dict[tuple[int, int], int]:
        counts: dict[tuple[int, int], int] = {}
        for u, v in self.host.edges():
            a, b = self.labels[u], self.labels[v]
            if a != b:
                key = (min(a, b), max(a, b))
                counts[key] = counts.get(key, 0) + 1
        return counts

    def connecting_edge_count(self, a: int, b: int) -> int:
        return self._edge_counts.get((min(a, b), max(a, b)), 0)

    def endpoints(self, a: int, b: int) -> frozenset[int]:
        return self._endpoints.get((a, b), frozenset())

    @cached_property
    def _essential(self) -> dict[tuple[int, int], int]:
        """(a, b) -> the essential vertex of branch a for b, for target edges ab."""
        out = {}
        for a, b in self.target.edges():
            for x, y in ((a, b), (b, a)):
                ends = self._endpoints.get((x, y))
                if ends is not None and len(ends) == 1:
                    out[(x, y)] = next(iter(ends))
        return out

    def essential_for(self, v: int) -> frozenset[int]:
        """Labels c for which ``v`` is an essential vertex."""
        a = self.labels[v]
        return frozenset(c for c in self.target.adj[a] if self._essential.get((a, c)) == v)

    @cached_property
    def _branch_cuts(self) -> tuple[frozenset[int], ...]:
        return tuple(cut_vertices_of(self.host, b) if b else frozenset() for b in self.branches)

    def is_cut_in_branch(self, v: int) -> bool:
        return v in self._branch_cuts[self.labels[v]]

    @cached_property
    def _block_trees(self) -> dict[int, BlockTree]:
        return {}

    def block_tree(self, a: int) -> BlockTree:
        cache = self._block_trees
        if a not in cache:
            cache[a] = block_tree_of(self.host, self.branches[a])
        return cache[a]

    @cached_property
    def leaf_interior(self) -> frozenset[int]:
        """Vertices that are interior vertices of a leaf block of their branch set."""
        out: set[int] = set()
        for a, b in enumerate(self.branches):
            if not b:
                continue
            bt = self.block_tree(a)
            for i in bt.leaf_blocks():
                out |= bt.interior(i)
        return frozenset(out)


# ---------------------------------------------------------------------------
# validation

@dataclass(frozen=True)
class Validation:
    valid: bool
    condition: str | None = None
    label: int | None = None
    edge: tuple[int, int] | None = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.valid


def _check_shape(host: Graph, target: Graph, labels: Sequence[int]) -> None:
    if len(labels) != host.n:
        raise ShapeMismatch(f"expected {host.n} labels, got {len(labels)}")
    for v, a in enumerate(labels):
        if not 0 <= a < target.n:
            raise ShapeMismatch(f"label {a} of vertex {v} outside 0..{target.n - 1}")


def validate_labels(host: Graph, target: Graph, labels: Sequence[int]) -> Validation:
    _check_shape(host, target, labels)
    branches: list[list[int]] = [[] for _ in range(target.n)]
    for v, a in enumerate(labels):
        branches[a].append(v)
    for a, vs in enumerate(branches):
        if not vs:
            return Validation(False, "nonempty", a, detail=f"branch set {a} empty")
        if not is_connected_subset(host, vs):
            return Validation(False, "connected", a, detail=f"branch set {a} disconnected")
    linked = {(min(labels[u], labels[v]), max(labels[u], labels[v])) for u, v in host.edges()}
    for a, b in target.edges():
        if (a, b) not in linked:
            return Validation(False, "edges", edge=(a, b), detail=f"no edge connects branch sets {a} and {b}")
    return Validation(True)


def validate_model(m: HModel) -> Validation:
    return validate_labels(m.host, m.target, m.labels)


def is_model(host: Graph, target: Graph, labels: Sequence[int]) -> bool:
    return validate_labels(host, target, labels).valid


def enumerate_labelings(g: Graph, h: Graph, budget: int = DEFAULT_BUDGET) -> list[Labels]:
    """All valid H-model label arrays of ``g`` in lexicographic order.

    Backtracking over vertices in index order; the only pruning is that the
    remaining vertices must be able to cover the labels not yet used.
    """
    k, n = h.n, g.n
    if k < 1:
        raise ValueError("target must have at least one vertex")
    out: list[Labels] = []
    if n < k:
        return out
    labels = [0] * n
    used = [0] * k
    visited = 0
    missing = k

    def rec(v: int) -> None:
        nonlocal visited, missing
        visited += 1
        if visited > budget:
            raise StateSpaceExceeded(budget, "assignments")
        if v == n:
            if validate_labels(g, h, labels).valid:
                out.append(tuple(labels))
            return
        for a in range(k):
            if used[a] == 0:
                missing -= 1
            used[a] += 1
            if missing <= n - v - 1:
                labels[v] = a
                rec(v + 1)
            used[a] -= 1
            if used[a] == 0:
                missing += 1

    rec(0)
    return out


def enumerate_models(g: Graph, h: Graph, budget: int = DEFAULT_BUDGET) -> list[HModel]:
    return [HModel(g, h, labels) for labels in enumerate_labelings(g, h, budget)]


# ---------------------------------------------------------------------------
# essential edges, essential and crucial vertices

def _require_h_edge(m: HModel, a: int, b: int) -> None:
    if a == b or not m.target.has_edge(a, b):
        raise NotAnHEdge(f"{a}{b} is not an edge of the target graph")


def connecting_edges(m: HModel, a: int, b: int) -> list[tuple[int, int]]:
    lab = m.labels
    return [(u, v) for u, v in m.host.edges() if {lab[u], lab[v]} == {a, b}]


def essential_edges(m: HModel) -> list[tuple[tuple[int, int], tuple[int, int]]]:
    out = []
    for a, b in m.target.edges():
        if m.connecting_edge_count(a, b) == 1:
            out.append(((a, b), connecting_edges(m, a, b)[0]))
    return out


def essential_vertices(m: HModel, a: int, b: int) -> frozenset[int]:
    _require_h_edge(m, a, b)
    v = m._essential.get((a, b))
    return frozenset() if v is None else frozenset([v])


def crucial_vertices(m: HModel) -> frozenset[int]:
    return frozenset(v for v in range(m.host.n) if len(m.essential_for(v)) >= 2)


def is_b_crucial(m: HModel, v: int, b: int) -> bool:
    """``v`` is essential for some label other than ``b`` and has a neighbour labeled ``b``."""
    if b == m.labels[v]:
        raise ValueError("b must differ from the label of v")
    if m.nbr_label_counts[v][b] == 0:
        return False
    return any(c != b for c in m.essential_for(v))


# ---------------------------------------------------------------------------
# weak connections and lynchpins

@dataclass(frozen=True)
class WeakConnection:
    label_a: int
    label_b: int
    witnesses: frozenset[int]
    essential_edge: tuple[int, int] | None = None

    def lynchpin_choices(self) -> tuple[int, ...]:
        if self.essential_edge is not None:
            return tuple(self.essential_edge)
        return tuple(sorted(self.witnesses))


@dataclass(frozen=True)
class LynchpinDesignation:
    connections: tuple[WeakConnection, ...]
    lynchpins: tuple[int, ...]

    def vertices(self) -> frozenset[int]:
        return frozenset(self.lynchpins)

    def lynchpin_of(self, a: int, b: int) -> int:
        for wc, p in zip(self.connections, self.lynchpins):
            if {wc.label_a, wc.label_b} == {a, b}:
                return p
        raise KeyError((a, b))


def weak_connections(m: HModel) -> list[WeakConnection]:
    out = []
    for a, b in m.target.edges():
        wit = set(essential_vertices(m, a, b)) | set(essential_vertices(m, b, a))
        if not wit:
            continue
        edge = None
        if m.connecting_edge_count(a, b) == 1:
            edge = connecting_edges(m, a, b)[0]
        out.append(WeakConnection(a, b, frozenset(wit), edge))
    return out


def lynchpin_designations(
    m: HModel, connections: Sequence[WeakConnection] | None = None, cap_exponent: int = 20
) -> Iterator[LynchpinDesignation]:
    conns = tuple(weak_connections(m) if connections is None else connections)
    w = sum(1 for c in conns if c.essential_edge is not None)
    if w > cap_exponent:
        raise StateSpaceExceeded(2**cap_exponent, "designations")
    for choice in product(*(c.lynchpin_choices() for c in conns)):
        yield LynchpinDesignation(conns, tuple(choice))


# ---------------------------------------------------------------------------
# block trees of branch sets

def branch_block_tree(m: HModel, a: int) -> BlockTree:
    return m.block_tree(a)


def restricted_block_subtree(m: HModel, a: int, subset: Iterable[int]) -> BlockTree:
    sub = set(subset)
    if not sub <= m.branch(a):
        raise ValueError("subset must lie inside branch set a")
    bt = m.block_tree(a)
    keep = [i for i, b in enumerate(bt.blocks) if b & sub]
    blocks = tuple(bt.blocks[i] for i in keep)
    pos = {i: j for j, i in enumerate(keep)}
    edges = tuple((pos[i], pos[j]) for i, j in bt.edges if i in pos and j in pos)
    cuts = frozenset(c for c in bt.cut_vertices if any(c in b for b in blocks))
    return BlockTree(blocks, cuts, edges)


def interior_leaf_vertices(m: HModel, a: int) -> frozenset[int]:
    return m.leaf_interior & m.branch(a)


# ---------------------------------------------------------------------------
# leaf-crucial predicates

def leaf_crucial_vertices(m: HModel) -> frozenset[int]:
    return crucial_vertices(m) & m.leaf_interior


def is_leaf_crucial_model(m: HModel) -> bool:
    return any(len(m.essential_for(v)) >= 2 for v in m.leaf_interior)


def leaf_l_crucial_vertices(m: HModel, ell: int) -> frozenset[int]:
    return frozenset(
        v for v in m.leaf_interior if m.labels[v] != ell and is_b_crucial(m, v, ell)
    )


def is_leaf_l_crucial_model(m: HModel, ell: int) -> bool:
    return bool(leaf_l_crucial_vertices(m, ell))


def confined_reachable(m: HModel, subset: Iterable[int], budget: int = DEFAULT_BUDGET) -> Iterator[HModel]:
    """Models reachable from ``m`` by legal single steps that relabel only ``subset``."""
    from .recon import legal_moves

    allowed = sorted(set(subset))
    seen = {m.labels}
    queue = deque([m])
    while queue:
        cur = queue.popleft()
        yield cur
        for v, b in legal_moves(cur, allowed):
            nxt = cur.relabel(v, b)
            if nxt.labels not in seen:
                if len(seen) >= budget:
                    raise StateSpaceExceeded(budget)
                seen.add(nxt.labels)
                queue.append(nxt)


def _hit_scope(m: HModel, subset: set[int], label: int | None) -> int | None:
    labels_in = {m.labels[v] for v in subset}
    if len(labels_in) > 1:
        raise ValueError("subset must lie within one branch set")
    if label is None and labels_in:
        label = labels_in.pop()
    return label


def _leaf_crucial_in(m: HModel, a: int | None) -> bool:
    scope = m.leaf_interior if a is None else m.leaf_interior & m.branch(a)
    return any(len(m.essential_for(v)) >= 2 for v in scope)


def _leaf_l_crucial_in(m: HModel, a: int | None, ell: int) -> bool:
    scope = m.leaf_interior if a is None else m.leaf_interior & m.branch(a)
    return any(m.labels[v] != ell and is_b_crucial(m, v, ell) for v in scope)


def hits_leaf_crucial(
    m: HModel, subset: Iterable[int], label: int | None = None, budget: int = DEFAULT_BUDGET
) -> bool:
    """True iff relabeling only ``subset`` can reach a leaf-crucial vertex of branch ``label``.

    ``label`` defaults to the label of ``subset``; with an empty subset and no
    label the whole model is inspected.  Confined reachability is symmetric,
    so "some reachable model is bad" equals "every reachable model can be
    extended to a bad one".
    """
    sub = set(subset)
    a = _hit_scope(m, sub, label)
    return any(_leaf_crucial_in(x, a) for x in confined_reachable(m, sub, budget))


def hits_leaf_l_crucial(
    m: HModel, subset: Iterable[int], ell: int, label: int | None = None, budget: int = DEFAULT_BUDGET
) -> bool:
    sub = set(subset)
    a = _hit_scope(m, sub, label)
    return any(_leaf_l_crucial_in(x, a, ell) for x in confined_reachable(m, sub, budget))


# ---------------------------------------------------------------------------
# structural lemmas on k-connected hosts

@dataclass
class StructuralReport:
    k: int
    checks: list[str] = field(default_factory=list)
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def _is_complete(h: Graph) -> bool:
    return h.m == h.n * (h.n - 1) // 2


def _weak_pairs(m: HModel) -> dict[frozenset[int], WeakConnection]:
    return {frozenset((w.label_a, w.label_b)): w for w in weak_connections(m)}


def _check_leafblock(m: HModel, k: int, rep: StructuralReport) -> None:
    # Every leaf block has k-1 interior connecting vertices, unless all of its
    # interior vertices already are connecting (singletons, short pendant blocks).
    rep.checks.append("leafblock")
    for a, br in enumerate(m.branches):
        bt = m.block_tree(a)
        for i in bt.leaf_blocks():
            interior = bt.interior(i)
            connecting = [v for v in interior if m.nbr_label_counts[v][a] < m.host.degree(v)]
            if len(connecting) < min(k - 1, len(interior)):
                rep.violations.append(
                    f"leafblock: branch {a} block {sorted(bt.blocks[i])} has "
                    f"{len(connecting)} interior connecting vertices, needs {k - 1}"
                )


def _leaf_blocks_touch(m: HModel, a: int, b: int) -> bool:
    bt = m.block_tree(a)
    for i in bt.leaf_blocks():
        if not any(m.nbr_label_counts[v][b] for v in bt.interior(i)):
            return False
    return True


def _check_two_weak(m: HModel, k: int, rep: StructuralReport) -> None:
    if m.target.n != k:
        return
    rep.checks.append("two-weak")
    weak = _weak_pairs(m)
    for ell, mm in permutations(range(k), 2):
        if not m.target.has_edge(ell, mm):
            continue
        others = [c for c in range(k) if c not in (ell, mm)]
        if not all(frozenset((ell, c)) in weak for c in others):
            continue
        if not _leaf_blocks_touch(m, ell, mm):
            rep.violations.append(f"two-weak(1): a leaf block of branch {ell} has no interior neighbour of {mm}")
        conns = [weak[frozenset((ell, c))] for c in others]
        has_free = any(
            m.branch(ell) - d.vertices() for d in lynchpin_designations(m, conns)
        )
        if has_free and not _leaf_blocks_touch(m, mm, ell):
            rep.violations.append(f"two-weak(2): a leaf block of branch {mm} has no interior neighbour of {ell}")


def _check_all_weak(m: HModel, k: int, rep: StructuralReport) -> None:
    if m.target.n != k or not _is_complete(m.target):
        return
    rep.checks.append("all-weak")
    weak = _weak_pairs(m)
    for a in range(k):
        others = [c for c in range(k) if c != a]
        if not all(frozenset((a, c)) in weak for c in others):
            continue
        conns = [weak[frozenset((a, c))] for c in others]
        for d in lynchpin_designations(m, conns):
            pins = d.vertices()
            if m.branch(a) - pins and any(m.branch(c) - pins for c in others):
                rep.violations.append(f"all-weak: branch {a} admits designation {d.lynchpins} with free vertices")
                return


def _check_four_weak(m: HModel, k: int, rep: StructuralReport) -> None:
    if k != 4 or m.target.n != 4 or not _is_complete(m.target):
        return
    rep.checks.append("four-weak")
    weak = _weak_pairs(m)
    for a, b, c, d in permutations(range(4)):
        cycle = [(a, b), (b, c), (c, d), (d, a)]
        if not all(frozenset(p) in weak for p in cycle):
            continue
        conns = [weak[frozenset(p)] for p in cycle]
        for des in lynchpin_designations(m, conns):
            pins = des.vertices()
            if m.branch(a) - pins and m.branch(d) - pins:
                rep.violations.append(
                    f"four-weak: cycle {a}-{b}-{c}-{d} admits designation {des.lynchpins} with free vertices in {a} and {d}"
                )
                return


def _check_no_crucial(m: HModel, k: int, rep: StructuralReport) -> None:
    if m.target.n != 3 or not _is_complete(m.target) or k < 2:
        return
    rep.checks.append("no-crucial")
    for v in crucial_vertices(m):
        if len(m.branch(m.labels[v])) >= 2:
            rep.violations.append(f"no-crucial: vertex {v} is crucial in a branch set of size >= 2")


def check_structural_lemmas(m: HModel, k: int) -> StructuralReport:
    if not is_k_connected(m.host, k):
        raise HypothesisNotMet(f"host is not {k}-connected")
    if not validate_model(m).valid:
        raise ValueError("model is not valid")
    rep = StructuralReport(k)
    _check_leafblock(m, k, rep)
    _check_two_weak(m, k, rep)
    _check_all_weak(m, k, rep)
    _check_four_weak(m, k, rep)
    _check_no_crucial(m, k, rep)
    return rep
