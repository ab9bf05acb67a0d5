"""Single-step relabeling rules and the reconfiguration graph of H-models.

Two models are adjacent when they differ in the label of exactly one vertex.
``legal_step`` decides adjacency locally from four conditions on the moving
vertex; the explicit graph is built by enumerating all models.
"""

from __future__ import annotations

import math
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import DisconnectedInput, IllegalStep, NotAMinor, SameLabel, UnknownModel, Unreachable
from .graph_core import Graph, components, cut_vertices, is_connected
from .models import DEFAULT_BUDGET, HModel, Labels, enumerate_labelings

CONDITIONS = ("nonempty", "notcut", "nbr", "edges")

K2 = Graph(2, [(0, 1)])


@dataclass(frozen=True)
class StepVerdict:
    legal: bool
    failed_condition: str | None = None

    def __bool__(self) -> bool:
        return self.legal


def _check_step_args(m: HModel, v: int, b: int) -> int:
    a = m.labels[v]
    if b == a:
        raise SameLabel(f"vertex {v} already has label {b}")
    if not 0 <= b < m.target.n:
        raise ValueError(f"label {b} out of range")
    return a


def legal_step(m: HModel, v: int, b: int) -> StepVerdict:
    """Can ``v`` move to label ``b`` in one step?  Reports the first failing condition."""
    a = _check_step_args(m, v, b)
    if len(m.branch(a)) <= 1:
        return StepVerdict(False, "nonempty")
    if m.is_cut_in_branch(v):
        return StepVerdict(False, "notcut")
    if m.nbr_label_counts[v][b] == 0:
        return StepVerdict(False, "nbr")
    if any(c != b for c in m.essential_for(v)):
        return StepVerdict(False, "edges")
    return StepVerdict(True)


def legal_step_universal(m: HModel, v: int, b: int) -> StepVerdict:
    """Sufficient test: another vertex of v's branch set is universal in the host,
    and v has a neighbour labeled ``b``.  Never legal where ``legal_step`` is not."""
    a = _check_step_args(m, v, b)
    full = m.host.n - 1
    if not any(u != v and m.host.degree(u) == full for u in m.branch(a)):
        return StepVerdict(False, "nonempty")
    if m.nbr_label_counts[v][b] == 0:
        return StepVerdict(False, "nbr")
    return StepVerdict(True)


def legal_moves(m: HModel, vertices: Iterable[int] | None = None) -> Iterator[tuple[int, int]]:
    """All legal (vertex, new label) pairs, by vertex then label."""
    vs = range(m.host.n) if vertices is None else sorted(vertices)
    counts = m.nbr_label_counts
    for v in vs:
        a = m.labels[v]
        if len(m.branch(a)) <= 1 or m.is_cut_in_branch(v):
            continue
        ess = m.essential_for(v)
        for b, cnt in enumerate(counts[v]):
            if cnt and b != a and not (ess - {b}):
                yield v, b


def neighbors(m: HModel) -> list[HModel]:
    return [m.relabel(v, b) for v, b in legal_moves(m)]


# ---------------------------------------------------------------------------
# sequences

@dataclass(frozen=True)
class ReconSequence:
    start: HModel
    steps: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "steps", tuple((int(v), int(b)) for v, b in self.steps))

    def __len__(self) -> int:
        return len(self.steps)

    def states(self, check: bool = True) -> list[HModel]:
        """Every intermediate model, starting with ``start``; raises IllegalStep."""
        out = [self.start]
        cur = self.start
        for i, (v, b) in enumerate(self.steps):
            if check:
                if b == cur.labels[v]:
                    raise IllegalStep(i, v, b, "same label")
                verdict = legal_step(cur, v, b)
                if not verdict.legal:
                    raise IllegalStep(i, v, b, verdict.failed_condition)
            cur = cur.relabel(v, b)
            out.append(cur)
        return out

    def end(self, check: bool = True) -> HModel:
        return self.states(check)[-1]

    def then(self, other: ReconSequence) -> ReconSequence:
        return ReconSequence(self.start, self.steps + other.steps)

    def reversed(self) -> ReconSequence:
        states = self.states(check=False)
        back = tuple((v, states[i].labels[v]) for i, (v, _) in reversed(list(enumerate(self.steps))))
        return ReconSequence(states[-1], back)


def replay(seq: ReconSequence) -> HModel:
    return seq.end(check=True)


# ---------------------------------------------------------------------------
# reconfiguration graph

def encode(labels: Sequence[int], k: int) -> int:
    """Label array read as a base-k integer, first vertex most significant."""
    code = 0
    for a in labels:
        code = code * k + a
    return code


@dataclass(frozen=True)
class ReconGraph:
    host: Graph
    target: Graph
    models: tuple[Labels, ...]
    adjacency: tuple[tuple[int, ...], ...]
    component_id: tuple[int, ...]

    def __post_init__(self) -> None:
        k = self.target.n
        object.__setattr__(self, "_index", {encode(lab, k): i for i, lab in enumerate(self.models)})

    def index_of(self, labels: Sequence[int]) -> int:
        try:
            return self._index[encode(labels, self.target.n)]  # type: ignore[attr-defined]
        except KeyError:
            raise UnknownModel(f"{list(labels)} is not a model of this reconfiguration graph") from None

    def model(self, i: int) -> HModel:
        return HModel(self.host, self.target, self.models[i])

    @property
    def node_count(self) -> int:
        return len(self.models)

    @property
    def edge_count(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    @property
    def component_count(self) -> int:
        return len(set(self.component_id))

    def component_sizes(self) -> list[int]:
        sizes: dict[int, int] = {}
        for c in self.component_id:
            sizes[c] = sizes.get(c, 0) + 1
        return [sizes[c] for c in sorted(sizes)]

    def is_connected(self) -> bool:
        return self.component_count <= 1

    def summary(self) -> dict[str, object]:
        d = diameter(self)
        return {
            "nodes": self.node_count,
            "edges": self.edge_count,
            "components": self.component_count,
            "diameter": "Infinite" if d == math.inf else d,
            "frozen_count": len(frozen_models(self)),
        }

    def to_dot(self) -> str:
        lines = ["graph recon {"]
        for i, lab in enumerate(self.models):
            lines.append(f'  n{i} [label="{"".join(map(str, lab)) if self.target.n <= 10 else list(lab)}"];')
        for i, nbrs in enumerate(self.adjacency):
            for j in nbrs:
                if i < j:
                    lines.append(f"  n{i} -- n{j};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _neighbor_codes(args: tuple[Graph, Graph, list[Labels]]) -> list[list[int]]:
    g, h, chunk = args
    k = h.n
    out = []
    for lab in chunk:
        m = HModel(g, h, lab)
        codes = []
        for v, b in legal_moves(m):
            nxt = list(lab)
            nxt[v] = b
            codes.append(encode(nxt, k))
        out.append(codes)
    return out


def build_recon_graph(g: Graph, h: Graph, budget: int = DEFAULT_BUDGET, workers: int = 1) -> ReconGraph:
    models = enumerate_labelings(g, h, budget)
    k = h.n
    index = {encode(lab, k): i for i, lab in enumerate(models)}
    if workers > 1 and len(models) > 1000:
        size = max(1, len(models) // (workers * 4))
        chunks = [(g, h, models[i : i + size]) for i in range(0, len(models), size)]
        with ProcessPoolExecutor(workers) as pool:
            codes = [c for part in pool.map(_neighbor_codes, chunks) for c in part]
    else:
        codes = _neighbor_codes((g, h, models))
    adjacency = tuple(tuple(sorted(index[c] for c in row)) for row in codes)
    comp = [-1] * len(models)
    cid = 0
    for s in range(len(models)):
        if comp[s] >= 0:
            continue
        comp[s] = cid
        todo = [s]
        while todo:
            u = todo.pop()
            for w in adjacency[u]:
                if comp[w] < 0:
                    comp[w] = cid
                    todo.append(w)
        cid += 1
    return ReconGraph(g, h, tuple(models), adjacency, tuple(comp))


def is_host(g: Graph, h: Graph, budget: int = DEFAULT_BUDGET) -> bool:
    """True iff the reconfiguration graph of H-models of ``g`` is connected."""
    models = enumerate_labelings(g, h, budget)
    if not models:
        raise NotAMinor("target is not a minor of the host")
    return len(_reach_from(g, h, models[0])) == len(models)


def _reach_from(g: Graph, h: Graph, start: Labels) -> set[Labels]:
    seen = {start}
    todo = [start]
    while todo:
        lab = todo.pop()
        m = HModel(g, h, lab)
        for v, b in legal_moves(m):
            nxt = lab[:v] + (b,) + lab[v + 1 :]
            if nxt not in seen:
                seen.add(nxt)
                todo.append(nxt)
    return seen


def host_components(g: Graph, h: Graph, budget: int = DEFAULT_BUDGET) -> list[int]:
    """Sizes of the components of the reconfiguration graph, largest first."""
    models = enumerate_labelings(g, h, budget)
    if not models:
        raise NotAMinor("target is not a minor of the host")
    left = set(models)
    sizes = []
    for lab in models:
        if lab in left:
            comp = _reach_from(g, h, lab)
            left -= comp
            sizes.append(len(comp))
    return sorted(sizes, reverse=True)


def _bfs_dist(rg: ReconGraph, s: int) -> list[int]:
    dist = [-1] * rg.node_count
    dist[s] = 0
    q = deque([s])
    while q:
        u = q.popleft()
        for w in rg.adjacency[u]:
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                q.append(w)
    return dist


def diameter(rg: ReconGraph) -> float | int:
    """Largest shortest-path distance; ``math.inf`` when the graph is disconnected."""
    if rg.node_count == 0:
        return 0
    if rg.component_count > 1:
        return math.inf
    return max(max(_bfs_dist(rg, s)) for s in range(rg.node_count))


def frozen_models(rg: ReconGraph) -> list[int]:
    return [i for i, nbrs in enumerate(rg.adjacency) if not nbrs]


def find_path(rg: ReconGraph, f: HModel | Sequence[int], g2: HModel | Sequence[int]) -> ReconSequence:
    """A shortest reconfiguration sequence from ``f`` to ``g2``."""
    src = rg.index_of(f.labels if isinstance(f, HModel) else f)
    dst = rg.index_of(g2.labels if isinstance(g2, HModel) else g2)
    start = rg.model(src)
    if rg.component_id[src] != rg.component_id[dst]:
        raise Unreachable("models lie in different components")
    prev = {src: src}
    q = deque([src])
    while q and dst not in prev:
        u = q.popleft()
        for w in rg.adjacency[u]:
            if w not in prev:
                prev[w] = u
                q.append(w)
    path = [dst]
    while path[-1] != src:
        path.append(prev[path[-1]])
    path.reverse()
    steps = []
    for i, j in zip(path, path[1:]):
        a, b = rg.models[i], rg.models[j]
        v = next(x for x in range(len(a)) if a[x] != b[x])
        steps.append((v, b[v]))
    return ReconSequence(start, tuple(steps))


def disconnection_witness(g: Graph) -> tuple[HModel, HModel] | None:
    """Two K2-models in different reconfiguration components, built at a cut vertex.

    With ``x`` the smallest cut vertex and ``C1``, ``C2`` the first two
    components of ``g - x``: the first model labels ``C2`` with 1 and the rest
    with 0; the second swaps the two labels.  None if ``g`` is 2-connected.
    """
    if not is_connected(g):
        raise DisconnectedInput("disconnection_witness requires a connected graph")
    cuts = cut_vertices(g)
    if not cuts:
        return None
    x = min(cuts)
    comps = components(g, set(range(g.n)) - {x})
    c2 = set(comps[1])
    f = tuple(1 if v in c2 else 0 for v in range(g.n))
    swapped = tuple(1 - a for a in f)
    return HModel(g, K2, f), HModel(g, K2, swapped)
