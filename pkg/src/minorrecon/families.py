"""Graph family generators, small-graph enumeration and 4-connected chain search.

Vertex layouts
--------------
* wheel ``W_k``: hub 0, rim 1..k in cyclic order.
* generalized wheel: hubs ``0..l-1``, then subgraph vertex ``s(i, j)`` at
  index ``l + i*n + j`` for part ``i`` in ``0..m-1`` and ``j`` in ``0..n-1``.
  With single-vertex parts and one hub this is exactly ``gen_wheel(m)``.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Sequence

from .errors import BadParameter, HypothesisNotMet, PartDisconnected, PartSizeMismatch
from .graph_core import (
    Graph,
    add_edge,
    canonical_form,
    contract_edge,
    is_connected,
    is_k_connected,
    split_vertex,
    valid_splits,
)


def gen_complete(n: int) -> Graph:
    if n < 1:
        raise BadParameter("complete graph needs n >= 1")
    return Graph(n, combinations(range(n), 2))


def gen_path(n: int) -> Graph:
    if n < 1:
        raise BadParameter("path needs n >= 1")
    return Graph(n, ((i, i + 1) for i in range(n - 1)))


def gen_cycle(n: int) -> Graph:
    if n < 3:
        raise BadParameter("cycle needs n >= 3")
    return Graph(n, ((i, (i + 1) % n) for i in range(n)))


def gen_star(k: int) -> Graph:
    """K_{1,k} with centre 0."""
    if k < 1:
        raise BadParameter("star needs k >= 1")
    return Graph(k + 1, ((0, i) for i in range(1, k + 1)))


def gen_wheel(k: int) -> Graph:
    if k < 3:
        raise BadParameter("wheel needs k >= 3 rim vertices")
    rim = [(i, i % k + 1) for i in range(1, k + 1)]
    return Graph(k + 1, rim + [(0, i) for i in range(1, k + 1)])


def gen_squared_cycle(k: int) -> Graph:
    if k < 5:
        raise BadParameter("squared cycle needs k >= 5")
    return Graph(k, [(i, (i + 1) % k) for i in range(k)] + [(i, (i + 2) % k) for i in range(k)])


def gen_generalized_wheel(parts: Sequence[Graph], n: int, l: int, m: int) -> Graph:
    if m != len(parts) or m < 3:
        raise BadParameter("need m == len(parts) >= 3")
    if l < 1 or n < 1:
        raise BadParameter("need l >= 1 and n >= 1")
    for p in parts:
        if p.n != n:
            raise PartSizeMismatch(f"part has {p.n} vertices, expected {n}")
        if not is_connected(p):
            raise PartDisconnected("every part must be connected")

    def s(i: int, j: int) -> int:
        return l + i * n + j

    edges = list(combinations(range(l), 2))
    for i, p in enumerate(parts):
        edges += [(s(i, a), s(i, b)) for a, b in p.edges()]
        edges += [(s(i, j), s((i + 1) % m, j)) for j in range(n)]
        edges += [(h, s(i, j)) for h in range(l) for j in range(n)]
    return Graph(l + m * n, edges)


@dataclass(frozen=True)
class GenWheelLayout:
    n: int
    l: int
    m: int

    def hubs(self) -> range:
        return range(self.l)

    def s(self, i: int, j: int) -> int:
        return self.l + i * self.n + j

    def subgraph_vertices(self) -> range:
        return range(self.l, self.l + self.m * self.n)

    @property
    def special(self) -> int:
        return self.s(0, 0)

    @property
    def special_plus(self) -> int:
        return self.s(1, 0)


def random_wheel(rng: random.Random, max_n: int) -> Graph:
    return gen_wheel(rng.randint(3, max(3, max_n - 1)))


def gen_random_3connected(target_n: int, seed: int = 0, max_retries: int = 50) -> Graph:
    """Seeded random walk of add-edge / split-vertex moves from a random wheel."""
    if target_n < 4:
        raise BadParameter("3-connected graphs need at least 4 vertices")
    rng = random.Random(seed)
    g = random_wheel(rng, target_n)
    assert is_k_connected(g, 3)
    retries = 0
    while g.n < target_n or rng.random() < 0.3:
        if g.n == target_n and g.m == g.n * (g.n - 1) // 2:
            break
        moved = _random_move(g, rng, allow_split=g.n < target_n)
        if moved is None or not is_k_connected(moved, 3):
            retries += 1
            if retries > max_retries:
                rng = random.Random(rng.random())
                g = random_wheel(rng, target_n)
                retries = 0
            continue
        g = moved
    return g


def _random_move(g: Graph, rng: random.Random, allow_split: bool) -> Graph | None:
    non_edges = [(u, v) for u, v in combinations(range(g.n), 2) if not g.has_edge(u, v)]
    splittable = [v for v in range(g.n) if g.degree(v) >= 4] if allow_split else []
    if splittable and (not non_edges or rng.random() < 0.6):
        v = rng.choice(splittable)
        options = list(valid_splits(g, v))
        p1, p2 = rng.choice(options)
        return split_vertex(g, v, p1, p2)
    if non_edges:
        u, v = rng.choice(non_edges)
        return add_edge(g, u, v)
    return None


# ---------------------------------------------------------------------------
# small graph enumeration

CONNECTIVITY_LEVELS = {"any": 0, "connected": 1, "2-connected": 2, "3-connected": 3, "4-connected": 4}


def _level(require: int | str) -> int:
    if isinstance(require, str):
        if require not in CONNECTIVITY_LEVELS:
            raise BadParameter(f"unknown connectivity requirement {require!r}")
        return CONNECTIVITY_LEVELS[require]
    return int(require)


def enumerate_small_graphs(n: int, require: int | str = "connected") -> list[Graph]:
    """All graphs on ``n`` vertices up to isomorphism meeting the connectivity level.

    Grown one edge at a time from the empty graph; each level is deduplicated
    by canonical form, so every isomorphism class appears exactly once.
    """
    if not 1 <= n <= 8:
        raise BadParameter("enumeration supports 1 <= n <= 8")
    k = _level(require)
    level = {canonical_form(Graph(n)): Graph(n)}
    found: list[Graph] = []
    while level:
        for g in level.values():
            if k == 0 or is_k_connected(g, k):
                found.append(g)
        nxt: dict[tuple[int, int], Graph] = {}
        for g in level.values():
            for u, v in combinations(range(n), 2):
                if not g.has_edge(u, v):
                    h = add_edge(g, u, v)
                    key = canonical_form(h)
                    if key not in nxt:
                        nxt[key] = h
        level = nxt
    found.sort(key=lambda g: (g.m, canonical_form(g)))
    return found


# ---------------------------------------------------------------------------
# chain search

CHAIN_OPERATIONS = ("contraction", "removal")


def _chain_targets() -> set[tuple[int, int]]:
    return {canonical_form(gen_complete(5)), canonical_form(gen_squared_cycle(6))}


def _successors(g: Graph, operation: str) -> list[Graph]:
    out = []
    for u, v in g.edges():
        out.append(contract_edge(g, u, v) if operation == "contraction" else g.without_edge(u, v))
    return out


def find_chain(g: Graph, operation: str = "contraction", max_nodes: int = 100_000) -> list[Graph] | None:
    """Depth-first search for a chain of 4-connected graphs from ``g`` to K5 or C6^2.

    Each graph is obtained from its predecessor by contracting (or removing) one
    edge.  Returns None when the search space is exhausted without success.
    """
    if operation not in CHAIN_OPERATIONS:
        raise BadParameter(f"operation must be one of {CHAIN_OPERATIONS}")
    if not is_k_connected(g, 4):
        raise HypothesisNotMet("chain search needs a 4-connected graph")
    targets = _chain_targets()
    seen: set[tuple[int, int]] = set()
    stack: list[list[Graph]] = [[g]]
    while stack:
        path = stack.pop()
        cur = path[-1]
        key = canonical_form(cur)
        if key in targets:
            return path
        if key in seen:
            continue
        seen.add(key)
        if len(seen) > max_nodes:
            return None
        nxt = []
        for h in _successors(cur, operation):
            hk = canonical_form(h)
            if hk not in seen and is_k_connected(h, 4):
                nxt.append(h)
        for h in reversed(nxt):
            stack.append(path + [h])
    return None


# ---------------------------------------------------------------------------
# family specs

def _part_graph(kind: str, n: int) -> Graph:
    builders: dict[str, Callable[[int], Graph]] = {
        "single": lambda k: Graph(1) if k == 1 else _bad(f"single part needs n=1, got {k}"),
        "path": gen_path,
        "cycle": gen_cycle,
        "complete": gen_complete,
        "triangle": lambda k: gen_complete(3) if k == 3 else _bad(f"triangle part needs n=3, got {k}"),
    }
    if kind not in builders:
        raise BadParameter(f"unknown part kind {kind!r}")
    return builders[kind](n)


def _bad(msg: str) -> Graph:
    raise BadParameter(msg)


@dataclass(frozen=True)
class FamilySpec:
    family: str
    params: dict[str, int | str] = field(default_factory=dict)

    def __hash__(self) -> int:
        return hash((self.family, tuple(sorted(self.params.items()))))

    def build(self) -> Graph:
        p = self.params
        f = self.family
        try:
            if f == "wheel":
                return gen_wheel(int(p["k"]))
            if f == "squared_cycle":
                return gen_squared_cycle(int(p["k"]))
            if f == "clique":
                return gen_complete(int(p["k"]))
            if f == "cycle":
                return gen_cycle(int(p["k"]))
            if f == "path":
                return gen_path(int(p["k"]))
            if f == "star":
                return gen_star(int(p["k"]))
            if f == "generalized_wheel":
                n, l, m = int(p["n"]), int(p["l"]), int(p["m"])
                part = _part_graph(str(p.get("part", "single")), n)
                return gen_generalized_wheel([part] * m, n, l, m)
            if f == "random_3conn":
                return gen_random_3connected(int(p["n"]), int(p.get("seed", 0)))
        except KeyError as exc:
            raise BadParameter(f"family {f} is missing parameter {exc.args[0]}") from None
        raise BadParameter(f"unknown family {f!r}")

    def layout(self) -> GenWheelLayout | None:
        """Hub/part layout when the family is a (generalized) wheel."""
        if self.family == "wheel":
            return GenWheelLayout(1, 1, int(self.params["k"]))
        if self.family == "generalized_wheel":
            return GenWheelLayout(int(self.params["n"]), int(self.params["l"]), int(self.params["m"]))
        return None

    def __str__(self) -> str:
        tag = _SHORT_TAGS.get(self.family, self.family)
        if set(self.params) == {"k"}:
            return f"{tag}:{self.params['k']}"
        return tag + ":" + ",".join(f"{k}={v}" for k, v in sorted(self.params.items()))


_ALIASES = {
    "wheel": "wheel",
    "w": "wheel",
    "c2": "squared_cycle",
    "squared_cycle": "squared_cycle",
    "k": "clique",
    "clique": "clique",
    "cycle": "cycle",
    "c": "cycle",
    "path": "path",
    "p": "path",
    "star": "star",
    "genwheel": "generalized_wheel",
    "generalized_wheel": "generalized_wheel",
    "rand3": "random_3conn",
    "random_3conn": "random_3conn",
}
_SHORT_TAGS = {
    "wheel": "wheel",
    "squared_cycle": "c2",
    "clique": "k",
    "cycle": "cycle",
    "path": "path",
    "star": "star",
    "generalized_wheel": "genwheel",
    "random_3conn": "rand3",
}

_SPEC_RE = re.compile(r"^\s*([A-Za-z_0-9]+?)\s*:\s*(.+?)\s*$")


def parse_family_spec(text: str) -> FamilySpec:
    """Parse ``"wheel:5"``, ``"c2:6"``, ``"genwheel:l=2,m=3,n=3,part=triangle"``, ..."""
    from .errors import ParseError

    match = _SPEC_RE.match(text)
    if not match:
        raise ParseError(f"bad family spec {text!r}")
    tag, body = match.groups()
    family = _ALIASES.get(tag.lower())
    if family is None:
        raise ParseError(f"unknown family {tag!r}")
    params: dict[str, int | str] = {}
    if "=" not in body:
        try:
            params["k"] = int(body)
        except ValueError:
            raise ParseError(f"bad size in {text!r}") from None
    else:
        for item in body.split(","):
            key, _, value = item.partition("=")
            key, value = key.strip(), value.strip()
            if not key or not value:
                raise ParseError(f"bad parameter {item!r} in {text!r}")
            params[key] = int(value) if re.fullmatch(r"-?\d+", value) else value
    return FamilySpec(family, params)
