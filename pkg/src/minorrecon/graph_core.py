"""Simple undirected graphs on dense vertex sets ``0..n-1``.

Connectivity, block decomposition, vertex connectivity by unit-capacity
max flow, the split / add-edge / contract operations, line graphs, and an
individualization-refinement canonical form used for isomorphism dedup.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from .errors import (
    DisconnectedInput,
    EdgeExists,
    InvalidPartition,
    NoSuchEdge,
    SelfLoop,
)

Edge = tuple[int, int]


class Graph:
    """Immutable simple undirected graph over vertices ``0..n-1``."""

    __slots__ = ("n", "adj", "_edges", "_hash")

    def __init__(self, n: int, edges: Iterable[Sequence[int]] = ()) -> None:
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise SelfLoop(f"self-loop at {u}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        self.n = n
        self.adj: tuple[frozenset[int], ...] = tuple(frozenset(s) for s in nbrs)
        self._edges: tuple[Edge, ...] = tuple(
            sorted((u, v) for u in range(n) for v in nbrs[u] if u < v)
        )
        self._hash = hash((n, self._edges))

    @classmethod
    def from_adjacency(cls, adj: Sequence[Iterable[int]]) -> Graph:
        return cls(len(adj), ((u, v) for u, row in enumerate(adj) for v in row if u < v))

    def edges(self) -> tuple[Edge, ...]:
        return self._edges

    @property
    def m(self) -> int:
        return len(self._edges)

    def vertices(self) -> range:
        return range(self.n)

    def neighbors(self, v: int) -> frozenset[int]:
        return self.adj[v]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return 0 <= u < self.n and v in self.adj[u]

    def without_edge(self, u: int, v: int) -> Graph:
        if not self.has_edge(u, v):
            raise NoSuchEdge(f"no edge {u}-{v}")
        drop = (min(u, v), max(u, v))
        return Graph(self.n, (e for e in self._edges if e != drop))

    def induced(self, vertices: Iterable[int]) -> tuple[Graph, list[int]]:
        """Induced subgraph, relabeled densely; returns (subgraph, old index per new index)."""
        order = sorted(set(vertices))
        pos = {v: i for i, v in enumerate(order)}
        edges = [(pos[u], pos[v]) for u, v in self._edges if u in pos and v in pos]
        return Graph(len(order), edges), order

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self._edges == other._edges

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={list(self._edges)})"


# ---------------------------------------------------------------------------
# connectivity on vertex subsets

def _reach(adj: Sequence[Iterable[int]], start: int, allowed: set[int] | frozenset[int]) -> set[int]:
    seen = {start}
    todo = [start]
    while todo:
        u = todo.pop()
        for w in adj[u]:
            if w in allowed and w not in seen:
                seen.add(w)
                todo.append(w)
    return seen


def components(g: Graph, vertices: Iterable[int] | None = None) -> list[list[int]]:
    """Connected components of ``g`` (or of the subgraph induced by ``vertices``),
    each sorted, ordered by smallest member."""
    allowed = set(range(g.n)) if vertices is None else set(vertices)
    out = []
    left = set(allowed)
    for v in sorted(allowed):
        if v in left:
            comp = _reach(g.adj, v, allowed)
            left -= comp
            out.append(sorted(comp))
    return out


def is_connected(g: Graph) -> bool:
    if g.n == 0:
        return False
    return len(_reach(g.adj, 0, frozenset(range(g.n)))) == g.n


def is_connected_subset(g: Graph, vertices: Iterable[int]) -> bool:
    vs = set(vertices)
    if not vs:
        return False
    return len(_reach(g.adj, next(iter(vs)), vs)) == len(vs)


# ---------------------------------------------------------------------------
# blocks

@dataclass(frozen=True)
class BlockTree:
    """Blocks of a connected graph joined at cut vertices.

    ``edges`` lists block-index pairs that share a cut vertex.  A cut vertex
    lying in three or more blocks makes those blocks pairwise adjacent, so
    ``edges`` is a tree only when every cut vertex joins exactly two blocks;
    :meth:`is_tree` checks the bipartite block/cut-vertex tree instead.
    """

    blocks: tuple[frozenset[int], ...]
    cut_vertices: frozenset[int]
    edges: tuple[tuple[int, int], ...] = field(default=())

    def vertices(self) -> frozenset[int]:
        return frozenset().union(*self.blocks) if self.blocks else frozenset()

    def joining(self, i: int) -> frozenset[int]:
        return self.blocks[i] & self.cut_vertices

    def interior(self, i: int) -> frozenset[int]:
        return self.blocks[i] - self.cut_vertices

    def is_leaf(self, i: int) -> bool:
        return len(self.blocks) == 1 or len(self.joining(i)) == 1

    def leaf_blocks(self) -> list[int]:
        return [i for i in range(len(self.blocks)) if self.is_leaf(i)]

    def blocks_containing(self, v: int) -> list[int]:
        return [i for i, b in enumerate(self.blocks) if v in b]

    def is_tree(self) -> bool:
        """True iff the bipartite block/cut-vertex incidence graph is a tree."""
        nodes = len(self.blocks) + len(self.cut_vertices)
        links = sum(len(self.joining(i)) for i in range(len(self.blocks)))
        if links != nodes - 1:
            return False
        cut_index = {c: len(self.blocks) + k for k, c in enumerate(sorted(self.cut_vertices))}
        adj: list[list[int]] = [[] for _ in range(nodes)]
        for i, b in enumerate(self.blocks):
            for c in b & self.cut_vertices:
                adj[i].append(cut_index[c])
                adj[cut_index[c]].append(i)
        return nodes == 0 or len(_reach(adj, 0, frozenset(range(nodes)))) == nodes


def _biconnected(adj: Sequence[Iterable[int]], vertices: Iterable[int]) -> tuple[list[frozenset[int]], set[int]]:
    """Iterative Hopcroft-Tarjan on the subgraph induced by ``vertices``."""
    allowed = set(vertices)
    disc: dict[int, int] = {}
    low: dict[int, int] = {}
    blocks: list[frozenset[int]] = []
    cuts: set[int] = set()
    counter = 0
    for root in sorted(allowed):
        if root in disc:
            continue
        disc[root] = low[root] = counter
        counter += 1
        root_children = 0
        edge_stack: list[tuple[int, int]] = []
        stack = [(root, -1, iter(sorted(w for w in adj[root] if w in allowed)))]
        if not any(w in allowed for w in adj[root]):
            blocks.append(frozenset([root]))
        while stack:
            u, parent, it = stack[-1]
            advanced = False
            for w in it:
                if w == parent:
                    continue
                if w not in disc:
                    disc[w] = low[w] = counter
                    counter += 1
                    edge_stack.append((u, w))
                    if u == root:
                        root_children += 1
                    stack.append((w, u, iter(sorted(x for x in adj[w] if x in allowed))))
                    advanced = True
                    break
                if disc[w] < disc[u]:
                    low[u] = min(low[u], disc[w])
                    edge_stack.append((u, w))
            if advanced:
                continue
            stack.pop()
            if parent == -1:
                continue
            low[parent] = min(low[parent], low[u])
            if low[u] >= disc[parent]:
                if parent != root:
                    cuts.add(parent)
                block: set[int] = set()
                while edge_stack:
                    a, b = edge_stack.pop()
                    block.update((a, b))
                    if (a, b) == (parent, u):
                        break
                blocks.append(frozenset(block))
        if root_children > 1:
            cuts.add(root)
    return blocks, cuts


def _assemble(blocks: list[frozenset[int]], cuts: set[int]) -> BlockTree:
    blocks = sorted(blocks, key=lambda b: sorted(b))
    edges = []
    for i, j in combinations(range(len(blocks)), 2):
        if blocks[i] & blocks[j] & cuts:
            edges.append((i, j))
    return BlockTree(tuple(blocks), frozenset(cuts), tuple(edges))


def block_tree_of(g: Graph, vertices: Iterable[int]) -> BlockTree:
    """Block tree of the subgraph induced by ``vertices`` (which must be connected)."""
    vs = set(vertices)
    if not vs or not is_connected_subset(g, vs):
        raise DisconnectedInput("vertex set does not induce a connected subgraph")
    blocks, cuts = _biconnected(g.adj, vs)
    return _assemble(blocks, cuts)


def block_tree(g: Graph) -> BlockTree:
    if not is_connected(g):
        raise DisconnectedInput("block_tree requires a connected graph")
    return block_tree_of(g, range(g.n))


def cut_vertices(g: Graph) -> frozenset[int]:
    if not is_connected(g):
        raise DisconnectedInput("cut_vertices requires a connected graph")
    return frozenset(_biconnected(g.adj, range(g.n))[1])


def cut_vertices_of(g: Graph, vertices: Iterable[int]) -> frozenset[int]:
    """Cut vertices of the induced subgraph on ``vertices`` (assumed connected)."""
    return frozenset(_biconnected(g.adj, vertices)[1])


# ---------------------------------------------------------------------------
# vertex connectivity

def local_vertex_connectivity(g: Graph, s: int, t: int, limit: int | None = None) -> int:
    """Maximum number of internally vertex-disjoint s-t paths (capped at ``limit``).

    Unit vertex capacities via the in/out split; an edge s-t counts as one path.
    """
    if s == t:
        raise ValueError("s and t must differ")
    direct = 1 if g.has_edge(s, t) else 0
    cap: dict[tuple[int, int], int] = {}
    out: list[list[int]] = [[] for _ in range(2 * g.n)]

    def arc(a: int, b: int, c: int) -> None:
        if (a, b) not in cap:
            out[a].append(b)
            out[b].append(a)
            cap[(a, b)] = 0
            cap.setdefault((b, a), 0)
        cap[(a, b)] += c

    big = g.n
    for v in range(g.n):
        arc(2 * v, 2 * v + 1, big if v in (s, t) else 1)
    for u, v in g.edges():
        if {u, v} == {s, t}:
            continue
        arc(2 * u + 1, 2 * v, big)
        arc(2 * v + 1, 2 * u, big)
    source, sink = 2 * s + 1, 2 * t
    flow = 0
    cap_limit = None if limit is None else limit - direct
    while cap_limit is None or flow < cap_limit:
        prev = {source: source}
        queue = deque([source])
        while queue and sink not in prev:
            a = queue.popleft()
            for b in out[a]:
                if b not in prev and cap[(a, b)] > 0:
                    prev[b] = a
                    queue.append(b)
        if sink not in prev:
            break
        b = sink
        while b != source:
            a = prev[b]
            cap[(a, b)] -= 1
            cap[(b, a)] += 1
            b = a
        flow += 1
    return flow + direct


def is_k_connected(g: Graph, k: int) -> bool:
    """True iff ``g`` has more than ``k`` vertices and no cut set of size < k."""
    if k < 1:
        raise ValueError("k must be positive")
    if g.n < k + 1 or not is_connected(g):
        return False
    if k == 1:
        return True
    for u, v in combinations(range(g.n), 2):
        if not g.has_edge(u, v) and local_vertex_connectivity(g, u, v, limit=k) < k:
            return False
    return True


def vertex_connectivity(g: Graph) -> int:
    if not is_connected(g):
        return 0
    k = 0
    while k + 1 <= g.n - 1 and is_k_connected(g, k + 1):
        k += 1
    return k


# ---------------------------------------------------------------------------
# operations

def split_vertex(g: Graph, v: int, part1: Iterable[int], part2: Iterable[int]) -> Graph:
    """Replace ``v`` by adjacent ``v`` (keeping part1) and new vertex ``n`` (taking part2)."""
    p1, p2 = set(part1), set(part2)
    if p1 & p2 or p1 | p2 != set(g.adj[v]):
        raise InvalidPartition("parts must partition the neighbourhood of v")
    if len(p1) + 1 < 3 or len(p2) + 1 < 3:
        raise InvalidPartition("both split vertices need degree at least 3")
    new = g.n
    edges = [e for e in g.edges() if v not in e]
    edges += [(v, w) for w in p1] + [(new, w) for w in p2] + [(v, new)]
    return Graph(g.n + 1, edges)


def valid_splits(g: Graph, v: int) -> Iterator[tuple[frozenset[int], frozenset[int]]]:
    """Each unordered neighbour partition of ``v`` that split_vertex accepts, once."""
    nbrs = sorted(g.adj[v])
    first, rest = nbrs[0], nbrs[1:]
    for r in range(0, len(rest) + 1):
        for combo in combinations(rest, r):
            p1 = frozenset((first,) + combo)
            p2 = frozenset(nbrs) - p1
            if len(p1) >= 2 and len(p2) >= 2:
                yield p1, p2


def add_edge(g: Graph, u: int, v: int) -> Graph:
    if u == v:
        raise SelfLoop(f"self-loop at {u}")
    if g.has_edge(u, v):
        raise EdgeExists(f"edge {u}-{v} already present")
    return Graph(g.n, list(g.edges()) + [(u, v)])


def contract_edge(g: Graph, u: int, v: int) -> Graph:
    """Contract ``uv``; the merged vertex takes index min(u, v) and indices above
    max(u, v) shift down by one.  Loops and parallel edges are dropped."""
    if not g.has_edge(u, v):
        raise NoSuchEdge(f"no edge {u}-{v}")
    keep, gone = min(u, v), max(u, v)

    def remap(x: int) -> int:
        if x == gone:
            return keep
        return x - 1 if x > gone else x

    edges = {tuple(sorted((remap(a), remap(b)))) for a, b in g.edges()}
    return Graph(g.n - 1, [e for e in edges if e[0] != e[1]])


def line_graph(g: Graph) -> Graph:
    """Vertex i of the result is the i-th edge of ``g.edges()``."""
    es = g.edges()
    edges = [(i, j) for i, j in combinations(range(len(es)), 2) if set(es[i]) & set(es[j])]
    return Graph(len(es), edges)


def is_internally_4_connected_cubic(g: Graph) -> bool:
    if g.n < 6 or any(g.degree(v) != 3 for v in range(g.n)):
        return False
    return is_k_connected(line_graph(g), 4)


# ---------------------------------------------------------------------------
# canonical form

def _refine(g: Graph, colors: list[int]) -> list[int]:
    while True:
        sigs = [(colors[v], tuple(sorted(colors[w] for w in g.adj[v]))) for v in range(g.n)]
        ranks = {s: i for i, s in enumerate(sorted(set(sigs)))}
        new = [ranks[s] for s in sigs]
        if len(set(new)) == len(set(colors)):
            return new
        colors = new


def _code(g: Graph, order: Sequence[int]) -> int:
    pos = {v: i for i, v in enumerate(order)}
    code = 0
    n = g.n
    for a, b in g.edges():
        i, j = sorted((pos[a], pos[b]))
        code |= 1 << (i * n + j)
    return code


def canonical_form(g: Graph) -> tuple[int, int]:
    """Isomorphism-invariant code: the maximum adjacency code over all leaves of an
    exhaustive individualization-refinement search (no automorphism pruning)."""
    if g.n == 0:
        return (0, 0)
    best = -1
    stack = [_refine(g, [g.degree(v) for v in range(g.n)])]
    while stack:
        colors = stack.pop()
        classes: dict[int, list[int]] = {}
        for v, c in enumerate(colors):
            classes.setdefault(c, []).append(v)
        if len(classes) == g.n:
            order = sorted(range(g.n), key=lambda v: colors[v])
            best = max(best, _code(g, order))
            continue
        target = min(c for c, vs in classes.items() if len(vs) > 1)
        for v in classes[target]:
            split = [2 * c + (1 if c > target or (c == target and w != v) else 0) for w, c in enumerate(colors)]
            stack.append(_refine(g, split))
    return (g.n, best)


def is_isomorphic(g1: Graph, g2: Graph) -> bool:
    if g1.n != g2.n or g1.m != g2.m:
        return False
    if sorted(map(len, g1.adj)) != sorted(map(len, g2.adj)):
        return False
    return canonical_form(g1) == canonical_form(g2)


def canonical_graph(g: Graph) -> Graph:
    """Representative graph rebuilt from the canonical code."""
    n, code = canonical_form(g)
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if code >> (i * n + j) & 1]
    return Graph(n, edges)
