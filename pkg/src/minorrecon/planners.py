"""Constructive reconfiguration planners.

Each planner returns a :class:`ReconSequence` built step by step; every
step is checked with :func:`legal_step` as it is recorded, so an emitted
sequence always replays.  A violated hypothesis raises
:class:`PreconditionFailed` naming the hypothesis; an illegal step despite
satisfied hypotheses raises :class:`PlannerInvariantError`.

Tie-breaking everywhere: lowest vertex index, then lowest label.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .errors import (
    LiftFailed,
    NotAGeneralizedWheel,
    NotComplete,
    NotTwoConnected,
    PlannerInvariantError,
    PreconditionFailed,
    SizeMismatch,
)
from .families import GenWheelLayout
from .graph_core import Graph, components, is_connected_subset, is_k_connected, split_vertex
from .models import HModel, hits_leaf_crucial, hits_leaf_l_crucial, validate_model
from .recon import ReconSequence, legal_step


class _Plan:
    def __init__(self, start: HModel) -> None:
        self.start = start
        self.cur = start
        self.steps: list[tuple[int, int]] = []

    def step(self, v: int, b: int) -> None:
        verdict = legal_step(self.cur, v, b)
        if not verdict.legal:
            raise PlannerInvariantError(
                f"step {len(self.steps)}: vertex {v} -> {b} fails {verdict.failed_condition} on {list(self.cur.labels)}"
            )
        self.cur = self.cur.relabel(v, b)
        self.steps.append((v, b))

    def can(self, v: int, b: int) -> bool:
        return b != self.cur.labels[v] and legal_step(self.cur, v, b).legal

    def sequence(self) -> ReconSequence:
        return ReconSequence(self.start, tuple(self.steps))


def _require_valid(m: HModel, lemma: str) -> None:
    check = validate_model(m)
    if not check.valid:
        raise PreconditionFailed(lemma, f"model is not valid ({check.detail})")


def _is_complete(g: Graph) -> bool:
    return g.m == g.n * (g.n - 1) // 2


def _first_legal_label(plan: _Plan, v: int, exclude: Iterable[int] = ()) -> int | None:
    skip = set(exclude)
    counts = plan.cur.nbr_label_counts[v]
    for b, cnt in enumerate(counts):
        if cnt and b not in skip and plan.can(v, b):
            return b
    return None


# ---------------------------------------------------------------------------
# leaf blocks and components

def _drain_leafblock(plan: _Plan, a: int, interior: Iterable[int]) -> None:
    """Relabel every vertex of ``interior`` away from ``a``, one neighbour after another."""
    remaining = set(interior)
    last: int | None = None
    while remaining:
        near = sorted(v for v in remaining if last is not None and v in plan.cur.host.adj[last])
        order = near + sorted(remaining - set(near))
        for v in order:
            b = _first_legal_label(plan, v, exclude=(a,))
            if b is not None:
                plan.step(v, b)
                remaining.discard(v)
                last = v
                break
        else:
            raise PlannerInvariantError(f"no interior vertex of {sorted(remaining)} can leave label {a}")


def _leaf_block_index(m: HModel, a: int, block: Iterable[int]) -> int:
    target = frozenset(block)
    bt = m.block_tree(a)
    for i, b in enumerate(bt.blocks):
        if b == target:
            if not bt.is_leaf(i):
                break
            return i
    raise PreconditionFailed("relabel-leafblock", "L is not a leaf block of the branch set")


def plan_relabel_leafblock(m: HModel, a: int, block: Iterable[int]) -> ReconSequence:
    """Relabel every interior vertex of leaf block ``block`` of branch ``a``."""
    lemma = "relabel-leafblock"
    _require_valid(m, lemma)
    i = _leaf_block_index(m, a, block)
    bt = m.block_tree(a)
    if not m.branch(a) - bt.blocks[i]:
        raise PreconditionFailed(lemma, "|V(G(f,a)) - V(L)| >= 1")
    interior = bt.interior(i)
    if not any(m.nbr_label_counts[v][a] < m.host.degree(v) for v in interior):
        raise PreconditionFailed(lemma, "L has an interior vertex with a connecting edge")
    if hits_leaf_crucial(m, interior, label=a):
        raise PreconditionFailed(lemma, "f does not hit a leaf-crucial model on relabeling L")
    plan = _Plan(m)
    _drain_leafblock(plan, a, interior)
    return plan.sequence()


def _slurp(plan: _Plan, a: int, b: int, x: int, comp: frozenset[int]) -> None:
    while True:
        cur = plan.cur
        left = comp & cur.branch(a)
        if not left:
            break
        bt = cur.block_tree(a)
        leaves = [
            i for i in bt.leaf_blocks()
            if bt.blocks[i] <= left | {x} and bt.interior(i) and bt.interior(i) <= left
        ]
        if not leaves:
            raise PlannerInvariantError(f"no leaf block left inside component {sorted(comp)}")
        i = min(leaves, key=lambda j: min(bt.blocks[j]))
        interior = set(bt.interior(i))
        if any(cur.nbr_label_counts[v][b] for v in interior):
            while interior:
                movable = [v for v in sorted(interior) if plan.cur.nbr_label_counts[v][b] and plan.can(v, b)]
                if not movable:
                    raise PlannerInvariantError(f"cannot move interior of {sorted(bt.blocks[i])} to {b}")
                plan.step(movable[0], b)
                interior.discard(movable[0])
        else:
            _drain_leafblock(plan, a, interior)
    if not plan.cur.nbr_label_counts[x][b]:
        raise PlannerInvariantError(f"vertex {x} ended without a neighbour labeled {b}")


def plan_slurp_component(m: HModel, a: int, b: int, x: int, comp: Iterable[int]) -> ReconSequence:
    """Siphon the component ``comp`` of G(f,a) - x out of label ``a``; ``x`` gains a ``b``-neighbour."""
    lemma = "slurp-component"
    _require_valid(m, lemma)
    C = frozenset(comp)
    if not is_k_connected(m.host, 2):
        raise PreconditionFailed(lemma, "host is 2-connected")
    if a == b or not m.target.has_edge(a, b):
        raise PreconditionFailed(lemma, "ab is an edge of H")
    if m.labels[x] != a or not m.is_cut_in_branch(x):
        raise PreconditionFailed(lemma, "x is a cut vertex of G(f,a)")
    if [sorted(C)] != [c for c in components(m.host, m.branch(a) - {x}) if set(c) == C]:
        raise PreconditionFailed(lemma, "C is a component of G(f,a) - x")
    if not any(m.nbr_label_counts[v][b] for v in C):
        raise PreconditionFailed(lemma, "C has a vertex with a neighbour in G(f,b)")
    if hits_leaf_crucial(m, C, label=a):
        raise PreconditionFailed(lemma, "f does not hit a leaf-crucial model on relabeling C")
    if hits_leaf_l_crucial(m, C, b, label=a):
        raise PreconditionFailed(lemma, "f does not hit a leaf-b-crucial model on relabeling C")
    plan = _Plan(m)
    _slurp(plan, a, b, x, C)
    return plan.sequence()


def plan_slurp_siphon(m: HModel, a: int, b: int, x: int) -> ReconSequence:
    """K3-models of 3-connected hosts: keep one component D of G(f,a) - x, siphon
    the others into ``b`` or the third label, then move ``x`` to ``b``."""
    lemma = "slurp-siphon"
    _require_valid(m, lemma)
    if m.target.n != 3 or not _is_complete(m.target):
        raise PreconditionFailed(lemma, "H is K3")
    if not is_k_connected(m.host, 3):
        raise PreconditionFailed(lemma, "host is 3-connected")
    if m.labels[x] != a or a == b:
        raise PreconditionFailed(lemma, "x lies in G(f,a) and b != a")
    c = 3 - a - b
    if not m.nbr_label_counts[x][b]:
        raise PreconditionFailed(lemma, "x has a neighbour in G(f,b)")
    if c in m.essential_for(x):
        raise PreconditionFailed(lemma, "x is not essential for c")
    comps = [frozenset(cc) for cc in components(m.host, m.branch(a) - {x})]
    touching = [cc for cc in comps if any(m.nbr_label_counts[v][c] for v in cc)]
    if not touching:
        raise PreconditionFailed(lemma, "some component of G(f,a) - x has a neighbour in G(f,c)")
    keep = touching[0]
    plan = _Plan(m)
    for comp in comps:
        if comp == keep:
            continue
        t = min(lab for lab in (b, c) if any(plan.cur.nbr_label_counts[v][lab] for v in comp))
        _slurp(plan, a, t, x, comp)
    plan.step(x, b)
    return plan.sequence()


# ---------------------------------------------------------------------------
# two labels on a 2-connected vertex set

def _k2_reduce(plan: _Plan, verts: Sequence[int], special: int) -> None:
    """Move every vertex of ``verts`` except ``special`` off special's label."""
    a = plan.cur.labels[special]
    pool = sorted(verts)
    while True:
        others = [u for u in pool if u != special and plan.cur.labels[u] == a]
        if not others:
            return
        inside = {plan.cur.labels[w] for w in pool}
        outside = set(range(plan.cur.target.n)) - inside
        for u in others:
            b = _first_legal_label(plan, u, exclude=outside | {a})
            if b is not None:
                plan.step(u, b)
                break
        else:
            raise PlannerInvariantError(f"no vertex can leave label {a}: {list(plan.cur.labels)}")


def _k2_cross(plan: _Plan, verts: Sequence[int], special: int) -> None:
    """From a canonical model (special alone on its label among ``verts``)
    to the opposite canonical model: neighbour w joins special's label,
    special moves, then the rest drains."""
    a = plan.cur.labels[special]
    pool = set(verts)
    b = next(plan.cur.labels[u] for u in sorted(pool) if u != special)
    for w in sorted(plan.cur.host.adj[special] & pool):
        if plan.cur.labels[w] == b and plan.can(w, a) and legal_step(plan.cur.relabel(w, a), special, b).legal:
            plan.step(w, a)
            plan.step(special, b)
            _k2_reduce(plan, verts, special)
            return
    raise PlannerInvariantError("no neighbour of the special vertex allows the crossing")


def plan_k2(m_from: HModel, m_to: HModel, special: int = 0) -> ReconSequence:
    """Reconfigure between two K2-models of a 2-connected host through canonical models."""
    g = m_from.host
    if not is_k_connected(g, 2):
        raise NotTwoConnected()
    if m_from.target.n != 2 or m_from.target.m != 1 or m_to.host != g or m_to.target != m_from.target:
        raise PreconditionFailed("k2", "both models are K2-models of the same host")
    _require_valid(m_from, "k2")
    _require_valid(m_to, "k2")
    verts = range(g.n)
    head = _Plan(m_from)
    _k2_reduce(head, verts, special)
    tail = _Plan(m_to)
    _k2_reduce(tail, verts, special)
    if head.cur.labels[special] != tail.cur.labels[special]:
        _k2_cross(head, verts, special)
    return head.sequence().then(tail.sequence().reversed())


# ---------------------------------------------------------------------------
# complete hosts

def _clique_canonicalize(plan: _Plan, ell: int) -> None:
    n = plan.cur.host.n
    last = ell - 1
    for i in range(ell, n):
        if plan.cur.labels[i] == last:
            continue
        own = plan.cur.labels[i]
        if len(plan.cur.branch(own)) == 1:
            normalized = set(range(ell, i))
            donor = next(
                u for u in range(n)
                if u != i and u not in normalized and len(plan.cur.branch(plan.cur.labels[u])) >= 2
            )
            plan.step(donor, own)
        plan.step(i, last)
    while True:
        prefix = [plan.cur.labels[i] for i in range(ell)]
        dup = next((i for i in range(ell) if prefix.count(prefix[i]) > 1), None)
        if dup is None:
            break
        plan.step(dup, last)
    spare = ell
    for i in range(ell):
        li = plan.cur.labels[i]
        if li == i:
            continue
        j = next(j for j in range(ell) if plan.cur.labels[j] == i)
        if li == last:
            plan.step(i, i)
            plan.step(j, last)
        else:
            plan.step(spare, li)
            plan.step(i, i)
            plan.step(j, li)
            plan.step(spare, last)


def plan_clique(m_from: HModel, m_to: HModel) -> ReconSequence:
    """K_m host, K_l target, m > l: both ends go to the canonical model
    (vertex i labeled i for i < l, the tail labeled l-1)."""
    g, h = m_from.host, m_from.target
    if not _is_complete(g):
        raise NotComplete()
    if not _is_complete(h):
        raise PreconditionFailed("clique", "target is a complete graph")
    if g.n <= h.n:
        raise SizeMismatch(f"host K{g.n} must be larger than target K{h.n}")
    if m_to.host != g or m_to.target != h:
        raise PreconditionFailed("clique", "both models share host and target")
    _require_valid(m_from, "clique")
    _require_valid(m_to, "clique")
    head = _Plan(m_from)
    _clique_canonicalize(head, h.n)
    tail = _Plan(m_to)
    _clique_canonicalize(tail, h.n)
    return head.sequence().then(tail.sequence().reversed())


def clique_canonical(host_n: int, ell: int) -> tuple[int, ...]:
    return tuple(range(ell)) + (ell - 1,) * (host_n - ell)


# ---------------------------------------------------------------------------
# generalized wheels

def check_generalized_wheel(g: Graph, layout: GenWheelLayout) -> None:
    n, l, m = layout.n, layout.l, layout.m
    if m < 3:
        raise NotAGeneralizedWheel("m >= 3")
    if g.n != l + m * n:
        raise NotAGeneralizedWheel("vertex count is l + m*n")
    for hub in layout.hubs():
        if g.degree(hub) != g.n - 1:
            raise NotAGeneralizedWheel(f"hub {hub} is universal")
    part_of = {layout.s(i, j): i for i in range(m) for j in range(n)}
    for u, v in g.edges():
        if u in part_of and v in part_of:
            pu, pv = part_of[u], part_of[v]
            if pu != pv:
                ju, jv = (u - l) % n, (v - l) % n
                if ju != jv or (pu - pv) % m not in (1, m - 1):
                    raise NotAGeneralizedWheel(f"edge {u}-{v} is not a rim edge")
    for i in range(m):
        part = [layout.s(i, j) for j in range(n)]
        if not is_connected_subset(g, part):
            raise NotAGeneralizedWheel(f"part {i} is connected")
        for j in range(n):
            if not g.has_edge(layout.s(i, j), layout.s((i + 1) % m, j)):
                raise NotAGeneralizedWheel(f"rim edge at part {i}, position {j}")


def _genwheel_canonicalize(plan: _Plan, layout: GenWheelLayout) -> None:
    hubs = list(layout.hubs())
    subs = list(layout.subgraph_vertices())
    k = plan.cur.target.n
    while True:
        labels = plan.cur.labels
        dup = next((j for j in hubs if labels[j] in {labels[i] for i in hubs if i < j}), None)
        if dup is None:
            break
        free = min(set(range(k)) - {labels[i] for i in hubs})
        plan.step(dup, free)
    hub_labels = {plan.cur.labels[i] for i in hubs}
    while True:
        labels = plan.cur.labels
        move = None
        for v in subs:
            if labels[v] not in hub_labels:
                continue
            opts = sorted(labels[w] for w in plan.cur.host.adj[v] if w in set(subs) and labels[w] not in hub_labels)
            if opts:
                move = (v, opts[0])
                break
        if move is None:
            break
        plan.step(*move)
    _k2_reduce(plan, subs, layout.special)


def _genwheel_permute(plan: _Plan, layout: GenWheelLayout, goal: Sequence[int]) -> None:
    hubs = list(layout.hubs())
    subs = list(layout.subgraph_vertices())
    s, sp = layout.special, layout.special_plus
    rim = next(v for v in subs if v != s)

    def holder(pos: object) -> int:
        return pos if isinstance(pos, int) else (s if pos == "S" else rim)

    def swap_hubs(i: int, j: int) -> None:
        fi, fj, fsp = plan.cur.labels[i], plan.cur.labels[j], plan.cur.labels[sp]
        plan.step(sp, fi)
        plan.step(i, fj)
        plan.step(j, fi)
        plan.step(sp, fsp)

    def swap_hub_special(i: int) -> None:
        fi, fs, fsp = plan.cur.labels[i], plan.cur.labels[s], plan.cur.labels[sp]
        plan.step(sp, fi)
        plan.step(i, fs)
        plan.step(s, fi)
        plan.step(sp, fsp)

    def swap(p: object, q: object) -> None:
        if isinstance(p, int) and isinstance(q, int):
            swap_hubs(p, q)
        elif {p, q} == {"S", "R"}:
            _k2_cross(plan, subs, s)
        elif "R" in (p, q):
            hub = p if isinstance(p, int) else q
            _k2_cross(plan, subs, s)
            swap_hub_special(hub)  # type: ignore[arg-type]
            _k2_cross(plan, subs, s)
        else:
            swap_hub_special(p if isinstance(p, int) else q)  # type: ignore[arg-type]

    positions: list[object] = hubs + ["S", "R"]
    for p in positions[:-1]:
        want = goal[holder(p)]
        if plan.cur.labels[holder(p)] == want:
            continue
        q = next(q for q in positions if plan.cur.labels[holder(q)] == want)
        swap(p, q)


def plan_genwheel(m_from: HModel, m_to: HModel, layout: GenWheelLayout) -> ReconSequence:
    """Generalized wheel host, K_{l+2} target: both ends to canonical models,
    then hub/special/rim label exchanges between the two canonical models."""
    g = m_from.host
    check_generalized_wheel(g, layout)
    if m_from.target.n != layout.l + 2 or not _is_complete(m_from.target):
        raise PreconditionFailed("genwheel", "target is K_{l+2}")
    if m_to.host != g or m_to.target != m_from.target:
        raise PreconditionFailed("genwheel", "both models share host and target")
    _require_valid(m_from, "genwheel")
    _require_valid(m_to, "genwheel")
    head = _Plan(m_from)
    _genwheel_canonicalize(head, layout)
    tail = _Plan(m_to)
    _genwheel_canonicalize(tail, layout)
    _genwheel_permute(head, layout, tail.cur.labels)
    if head.cur.labels != tail.cur.labels:
        raise PlannerInvariantError("canonical permutation did not reach the goal model")
    return head.sequence().then(tail.sequence().reversed())


def genwheel_canonical(m: HModel, layout: GenWheelLayout) -> HModel:
    plan = _Plan(m)
    _genwheel_canonicalize(plan, layout)
    return plan.cur


# ---------------------------------------------------------------------------
# lifting through a vertex split

def lift_sequence_through_split(
    seq: ReconSequence, v: int, part1: Iterable[int], part2: Iterable[int]
) -> ReconSequence:
    """Replay ``seq`` on the graph where ``v`` is split into ``v`` (keeping part1)
    and a new vertex ``n`` (taking part2); both copies always share v's label."""
    start = seq.start
    g = start.host
    if not is_k_connected(g, 2):
        raise PreconditionFailed("split-samelabel", "host is 2-connected")
    g2 = split_vertex(g, v, part1, part2)
    x, y = v, g.n
    plan = _Plan(HModel(g2, start.target, start.labels + (start.labels[v],)))
    for idx, (u, b) in enumerate(seq.steps):
        try:
            if u != v:
                plan.step(u, b)
            else:
                _lift_step(plan, x, y, b)
        except PlannerInvariantError as exc:
            raise LiftFailed(idx, str(exc)) from None
    return plan.sequence()


def _lift_step(plan: _Plan, x: int, y: int, b: int) -> None:
    cur = plan.cur
    a = cur.labels[x]
    p, q = (x, y) if cur.nbr_label_counts[x][b] else (y, x)
    if not cur.is_cut_in_branch(p):
        plan.step(p, b)
        plan.step(q, b)
        return
    if cur.nbr_label_counts[q][b]:
        plan.step(q, b)
        plan.step(p, b)
        return
    c = _first_legal_label(plan, q, exclude=(a, b))
    if c is None:
        raise PlannerInvariantError(f"vertex {q} has no auxiliary label")
    plan.step(q, c)
    plan.step(p, b)
    plan.step(q, b)
