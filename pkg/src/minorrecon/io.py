"""Text formats: edge lists, graph6, model files, sequence files, target specs."""

from __future__ import annotations

import json
import re
from pathlib import Path
from typing import Sequence

from .errors import BadParameter, ParseError
from .families import FamilySpec, gen_complete, parse_family_spec
from .graph_core import Graph
from .models import HModel
from .recon import ReconSequence

_TARGET_SHORT = re.compile(r"^[kK](\d+)$")


# ---------------------------------------------------------------------------
# graphs

def _ints(text: str, what: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split()]
    except ValueError:
        raise ParseError(f"{what}: expected integers") from None


def parse_edge_list(text: str) -> Graph:
    """``n m`` on the first line, then ``m`` lines ``u v``; ``#`` starts a comment."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ParseError("edge list is empty")
    head = _ints(lines[0], "edge-list header")
    if len(head) != 2:
        raise ParseError("edge-list header must be 'n m'")
    n, m = head
    if n < 0 or m < 0:
        raise ParseError("edge-list header values must be non-negative")
    if len(lines) - 1 != m:
        raise ParseError(f"header promises {m} edges, found {len(lines) - 1}")
    edges = []
    for i, ln in enumerate(lines[1:], start=2):
        pair = _ints(ln, f"edge line {i}")
        if len(pair) != 2:
            raise ParseError(f"edge line {i} must hold two vertices")
        u, v = pair
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(f"edge line {i}: vertex out of range 0..{n - 1}")
        if u == v:
            raise ParseError(f"edge line {i}: self-loop at {u}")
        edges.append((u, v))
    return Graph(n, edges)


def format_edge_list(g: Graph) -> str:
    edges = g.edges()
    return "\n".join([f"{g.n} {len(edges)}"] + [f"{u} {v}" for u, v in edges]) + "\n"


def parse_graph6(text: str) -> Graph:
    """Decode one graph6 string (graphs with fewer than 63 vertices)."""
    s = text.strip()
    if s.startswith(">>graph6<<"):
        s = s[10:]
    if not s or any(not 63 <= ord(ch) <= 126 for ch in s):
        raise ParseError("not a graph6 string")
    data = [ord(ch) - 63 for ch in s]
    n = data[0]
    if n == 63:
        raise ParseError("graph6 strings with n >= 63 are not supported")
    bits = []
    for x in data[1:]:
        bits.extend((x >> k) & 1 for k in range(5, -1, -1))
    need = n * (n - 1) // 2
    if len(bits) < need or len(data) - 1 != (need + 5) // 6:
        raise ParseError("graph6 string has the wrong length")
    edges = []
    k = 0
    for v in range(1, n):
        for u in range(v):
            if bits[k]:
                edges.append((u, v))
            k += 1
    return Graph(n, edges)


def format_graph6(g: Graph) -> str:
    if g.n >= 63:
        raise BadParameter("graph6 encoding here is limited to n < 63")
    bits = [1 if g.has_edge(u, v) else 0 for v in range(1, g.n) for u in range(v)]
    bits += [0] * (-len(bits) % 6)
    chars = [g.n + 63]
    for i in range(0, len(bits), 6):
        chars.append(63 + int("".join(map(str, bits[i : i + 6])), 2))
    return "".join(map(chr, chars))


def load_graph(ref: str) -> tuple[Graph, FamilySpec | None]:
    """A file (edge list or graph6) or a family spec string."""
    path = Path(ref)
    if path.is_file():
        text = path.read_text()
        stripped = text.strip()
        if stripped and "\n" not in stripped and " " not in stripped:
            return parse_graph6(stripped), None
        return parse_edge_list(text), None
    try:
        spec = parse_family_spec(ref)
        return spec.build(), spec
    except (ParseError, BadParameter) as exc:
        raise ParseError(f"{ref!r} is neither a readable graph file nor a family spec ({exc})") from None


def load_target(ref: str) -> Graph:
    """``k2``, ``k3``, ``k4`` (any ``kN``), an edge-list file, or a family spec."""
    hit = _TARGET_SHORT.match(ref.strip())
    if hit:
        n = int(hit.group(1))
        if n < 1:
            raise ParseError("target kN needs N >= 1")
        return gen_complete(n)
    return load_graph(ref)[0]


# ---------------------------------------------------------------------------
# models

def parse_labels(text: str) -> list[int]:
    """Labels as a JSON array, a JSON record with a ``labels`` field, or bare integers."""
    s = text.strip()
    if s.startswith("{"):
        try:
            doc = json.loads(s)
        except json.JSONDecodeError as exc:
            raise ParseError(f"model record is not valid JSON: {exc.msg}") from None
        if "labels" not in doc:
            raise ParseError("model record lacks a 'labels' field")
        raw = doc["labels"]
    elif s.startswith("["):
        try:
            raw = json.loads(s)
        except json.JSONDecodeError as exc:
            raise ParseError(f"label array is not valid JSON: {exc.msg}") from None
    else:
        raw = _ints(s.replace(",", " "), "labels")
    if not isinstance(raw, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in raw):
        raise ParseError("labels must be a list of integers")
    return raw


def read_model_doc(text: str) -> dict:
    """The raw model record; bare label lists become ``{"labels": [...]}``."""
    s = text.strip()
    if s.startswith("{"):
        try:
            doc = json.loads(s)
        except json.JSONDecodeError as exc:
            raise ParseError(f"model record is not valid JSON: {exc.msg}") from None
        if not isinstance(doc, dict):
            raise ParseError("model record must be an object")
        doc["labels"] = parse_labels(s)
        return doc
    return {"labels": parse_labels(s)}


def load_model(ref: str, host: Graph | None = None, target: Graph | None = None) -> HModel:
    """Model from a file path or inline text; host/target in the record fill gaps."""
    path = Path(ref)
    text = path.read_text() if path.is_file() else ref
    doc = read_model_doc(text)
    if host is None:
        if "host" not in doc:
            raise ParseError("no host graph given")
        host = _graph_field(doc["host"])
    if target is None:
        if "target" not in doc:
            raise ParseError("no target given")
        target = _graph_field(doc["target"], target=True)
    labels = doc["labels"]
    if len(labels) != host.n:
        raise ParseError(f"model has {len(labels)} labels, host has {host.n} vertices")
    if any(not 0 <= a < target.n for a in labels):
        raise ParseError(f"labels must lie in 0..{target.n - 1}")
    return HModel(host, target, tuple(labels))


def _graph_field(value: object, target: bool = False) -> Graph:
    if isinstance(value, str):
        if "\n" in value.strip():
            return parse_edge_list(value)
        return load_target(value) if target else load_graph(value)[0]
    if isinstance(value, dict) and "n" in value:
        try:
            return Graph(int(value["n"]), [tuple(e) for e in value.get("edges", [])])
        except (TypeError, ValueError) as exc:
            raise ParseError(f"bad inline graph: {exc}") from None
    raise ParseError("graph field must be a reference string or {n, edges}")


def format_model(m: HModel) -> str:
    doc = {
        "host": {"n": m.host.n, "edges": [list(e) for e in m.host.edges()]},
        "target": {"n": m.target.n, "edges": [list(e) for e in m.target.edges()]},
        "labels": list(m.labels),
    }
    return json.dumps(doc) + "\n"


# ---------------------------------------------------------------------------
# sequences

def format_sequence(seq: ReconSequence) -> str:
    lines = [f"{seq.start.host.n} {len(seq.steps)}"] + [f"{v} {b}" for v, b in seq.steps]
    return "\n".join(lines) + "\n"


def parse_sequence(text: str, start: HModel) -> ReconSequence:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise ParseError("sequence file is empty")
    head = _ints(lines[0], "sequence header")
    if len(head) != 2:
        raise ParseError("sequence header must be 'n steps'")
    n, count = head
    if n != start.host.n:
        raise ParseError(f"sequence is for {n} vertices, host has {start.host.n}")
    if len(lines) - 1 != count:
        raise ParseError(f"header promises {count} steps, found {len(lines) - 1}")
    steps = []
    for i, ln in enumerate(lines[1:], start=2):
        pair = _ints(ln, f"step line {i}")
        if len(pair) != 2:
            raise ParseError(f"step line {i} must be 'vertex new_label'")
        v, b = pair
        if not 0 <= v < n or not 0 <= b < start.target.n:
            raise ParseError(f"step line {i} is out of range")
        steps.append((v, b))
    return ReconSequence(start, tuple(steps))


def labels_text(labels: Sequence[int]) -> str:
    return "[" + ",".join(map(str, labels)) + "]"
