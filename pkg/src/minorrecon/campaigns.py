"""Verification campaigns: exhaustive sweeps and seeded fuzzing at desk scale.

A campaign is a list of independent tasks.  Each task returns a verdict
(``pass``, ``fail`` or ``skipped``) with a reason; results are merged in
task order, so a report depends only on its parameters and seed.
"""

from __future__ import annotations

import json
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

from .errors import LiftFailed, PlannerInvariantError, PreconditionFailed, StateSpaceExceeded
from .families import (
    GenWheelLayout,
    enumerate_small_graphs,
    find_chain,
    gen_complete,
    gen_random_3connected,
    gen_squared_cycle,
    gen_wheel,
)
from .graph_core import (
    Graph,
    add_edge,
    canonical_form,
    components,
    is_k_connected,
    valid_splits,
    split_vertex,
)
from .io import format_graph6
from .models import DEFAULT_BUDGET, HModel, check_structural_lemmas, enumerate_labelings
from .planners import (
    genwheel_canonical,
    lift_sequence_through_split,
    plan_clique,
    plan_k2,
    plan_relabel_leafblock,
    plan_slurp_component,
    plan_slurp_siphon,
)
from .recon import K2, build_recon_graph, find_path, is_host, replay

PASS, FAIL, SKIPPED = "pass", "fail", "skipped"
K3 = gen_complete(3)
K4 = gen_complete(4)


@dataclass(frozen=True)
class InstanceResult:
    descriptor: str
    verdict: str
    reason: str = ""


@dataclass
class CampaignReport:
    name: str
    seed: int
    params: dict[str, object]
    results: list[InstanceResult] = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def counts(self) -> dict[str, int]:
        out = {PASS: 0, FAIL: 0, SKIPPED: 0}
        for r in self.results:
            out[r.verdict] += 1
        return out

    @property
    def ok(self) -> bool:
        return self.counts[FAIL] == 0

    def failures(self) -> list[InstanceResult]:
        return [r for r in self.results if r.verdict == FAIL]

    def to_dict(self, include_time: bool = False) -> dict[str, object]:
        doc: dict[str, object] = {
            "campaign": self.name,
            "seed": self.seed,
            "params": self.params,
            "counts": self.counts,
            "instances": [
                {"instance": r.descriptor, "verdict": r.verdict, "reason": r.reason} for r in self.results
            ],
        }
        if include_time:
            doc["wall_time"] = round(self.wall_time, 3)
        return doc

    def to_json(self, include_time: bool = False) -> str:
        return json.dumps(self.to_dict(include_time), indent=2, sort_keys=False) + "\n"

    def render(self) -> str:
        c = self.counts
        lines = [f"# campaign {self.name} seed={self.seed} params={json.dumps(self.params, sort_keys=True)}"]
        for r in self.results:
            lines.append(f"{r.verdict:7s} {r.descriptor}" + (f"  ({r.reason})" if r.reason else ""))
        lines.append(f"# pass={c[PASS]} fail={c[FAIL]} skipped={c[SKIPPED]}")
        return "\n".join(lines) + "\n"


Task = tuple[str, Callable[..., tuple[str, str]], tuple]


def _call(task: Task) -> InstanceResult:
    desc, fn, args = task
    try:
        verdict, reason = fn(*args)
    except StateSpaceExceeded as exc:
        verdict, reason = SKIPPED, str(exc)
    return InstanceResult(desc, verdict, reason)


def _run(name: str, seed: int, params: dict[str, object], tasks: list[Task], workers: int) -> CampaignReport:
    t0 = time.perf_counter()
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_call, tasks))
    else:
        results = [_call(t) for t in tasks]
    return CampaignReport(name, seed, params, results, time.perf_counter() - t0)


def _g6(g: Graph) -> str:
    return format_graph6(g)


# ---------------------------------------------------------------------------
# k2-characterization

def _k2_instance(g: Graph, budget: int) -> tuple[str, str]:
    member = is_host(g, K2, budget)
    conn2 = is_k_connected(g, 2)
    if member == conn2:
        return PASS, f"host={member}"
    return FAIL, f"is_host={member} but 2-connected={conn2}"


def k2_characterization(max_n: int = 6, budget: int = DEFAULT_BUDGET, workers: int = 1, seed: int = 0) -> CampaignReport:
    tasks: list[Task] = []
    for n in range(3, max_n + 1):
        for g in enumerate_small_graphs(n, "connected"):
            tasks.append((f"n={n} g6={_g6(g)}", _k2_instance, (g, budget)))
    return _run("k2-characterization", seed, {"max_n": max_n}, tasks, workers)


# ---------------------------------------------------------------------------
# k3-3connected (with wheels)

def _host_instance(g: Graph, h: Graph, budget: int) -> tuple[str, str]:
    if is_host(g, h, budget):
        return PASS, ""
    return FAIL, "reconfiguration graph is disconnected"


def is_genwheel_canonical(labels: tuple[int, ...], layout: GenWheelLayout) -> bool:
    hub_labels = [labels[i] for i in layout.hubs()]
    rest = [labels[v] for v in layout.subgraph_vertices() if v != layout.special]
    s_label = labels[layout.special]
    return (
        len(set(hub_labels)) == len(hub_labels)
        and len(set(rest)) == 1
        and len({*hub_labels, s_label, rest[0]}) == len(hub_labels) + 2
    )


def _wheel_instance(k: int, budget: int) -> tuple[str, str]:
    g = gen_wheel(k)
    if not is_host(g, K3, budget):
        return FAIL, "reconfiguration graph is disconnected"
    layout = GenWheelLayout(1, 1, k)
    models = enumerate_labelings(g, K3, budget)
    for lab in models:
        canon = genwheel_canonical(HModel(g, K3, lab), layout)
        if not is_genwheel_canonical(canon.labels, layout):
            return FAIL, f"{list(lab)} reduced to non-canonical {list(canon.labels)}"
    return PASS, f"{len(models)} models reach canonical form"


def k3_3connected(max_n: int = 7, budget: int = DEFAULT_BUDGET, workers: int = 1, seed: int = 0,
                  wheels: range = range(3, 8)) -> CampaignReport:
    tasks: list[Task] = []
    for n in range(4, max_n + 1):
        for g in enumerate_small_graphs(n, "3-connected"):
            tasks.append((f"n={n} g6={_g6(g)}", _host_instance, (g, K3, budget)))
    for k in wheels:
        tasks.append((f"wheel:{k}", _wheel_instance, (k, budget)))
    return _run("k3-3connected", seed, {"max_n": max_n, "wheels": [wheels.start, wheels.stop - 1]}, tasks, workers)


# ---------------------------------------------------------------------------
# k4-bases

K4_BASES: list[tuple[str, Callable[[], Graph], int]] = [
    ("c2:6 / K4", lambda: gen_squared_cycle(6), 4),
    ("k:5 / K4", lambda: gen_complete(5), 4),
    ("k:6 / K4", lambda: gen_complete(6), 4),
    ("k:5 / K3", lambda: gen_complete(5), 3),
    ("k:4 / K3", lambda: gen_complete(4), 3),
]


def _base_instance(idx: int, budget: int) -> tuple[str, str]:
    _, build, t = K4_BASES[idx]
    return _host_instance(build(), gen_complete(t), budget)


def _chain_instance(operation: str) -> tuple[str, str]:
    chain = find_chain(gen_complete(6), operation)
    if chain is None:
        if operation == "contraction":
            return FAIL, "no chain found"
        return SKIPPED, "no chain under edge removal (reported, not failed)"
    return PASS, "vertex counts " + ",".join(str(g.n) for g in chain)


def k4_bases(budget: int = DEFAULT_BUDGET, workers: int = 1, seed: int = 0) -> CampaignReport:
    tasks: list[Task] = [(desc, _base_instance, (i, budget)) for i, (desc, _, _) in enumerate(K4_BASES)]
    tasks.append(("chain k:6 contraction", _chain_instance, ("contraction",)))
    tasks.append(("chain k:6 removal", _chain_instance, ("removal",)))
    return _run("k4-bases", seed, {}, tasks, workers)


# ---------------------------------------------------------------------------
# structural-lemmas

def structural_fixtures(max_n: int = 6) -> list[tuple[str, Graph, Graph, int]]:
    out = [
        ("k:4 / K3 k=3", gen_complete(4), K3, 3),
        ("c2:6 / K4 k=4", gen_squared_cycle(6), K4, 4),
        ("k:5 / K4 k=4", gen_complete(5), K4, 4),
    ]
    for n in range(3, max_n + 1):
        for g in enumerate_small_graphs(n, "2-connected"):
            out.append((f"g6={_g6(g)} / K3 k=2", g, K3, 2))
    return out


def _structural_instance(g: Graph, h: Graph, k: int, budget: int) -> tuple[str, str]:
    models = enumerate_labelings(g, h, budget)
    for lab in models:
        rep = check_structural_lemmas(HModel(g, h, lab), k)
        if not rep.ok:
            return FAIL, f"{list(lab)}: {rep.violations[0]}"
    return PASS, f"{len(models)} models"


def structural_lemmas(max_n: int = 6, budget: int = DEFAULT_BUDGET, workers: int = 1, seed: int = 0) -> CampaignReport:
    tasks: list[Task] = [
        (desc, _structural_instance, (g, h, k, budget)) for desc, g, h, k in structural_fixtures(max_n)
    ]
    return _run("structural-lemmas", seed, {"max_n": max_n}, tasks, workers)


# ---------------------------------------------------------------------------
# planner-fuzz

@lru_cache(maxsize=None)
def _two_connected_pool() -> tuple[Graph, ...]:
    return tuple(g for n in range(3, 7) for g in enumerate_small_graphs(n, "2-connected"))


@lru_cache(maxsize=None)
def _three_connected_pool() -> tuple[Graph, ...]:
    return tuple(g for n in range(4, 7) for g in enumerate_small_graphs(n, "3-connected")) + (
        gen_wheel(6), gen_squared_cycle(7)
    )


@lru_cache(maxsize=None)
def _models(g: Graph, h: Graph) -> tuple[tuple[int, ...], ...]:
    return tuple(enumerate_labelings(g, h))


def _random_model(rng: random.Random, g: Graph, h: Graph) -> HModel | None:
    models = _models(g, h)
    return HModel(g, h, rng.choice(models)) if models else None


def _fuzz_k2(rng: random.Random) -> str | None:
    g = rng.choice(_two_connected_pool())
    f, t = _random_model(rng, g, K2), _random_model(rng, g, K2)
    end = replay(plan_k2(f, t))
    return None if end.labels == t.labels else f"ended at {list(end.labels)} not {list(t.labels)}"


def _fuzz_clique(rng: random.Random) -> str | None:
    m = rng.randint(3, 8)
    ell = rng.randint(2, m - 1)
    g, h = gen_complete(m), gen_complete(ell)

    def surj() -> HModel:
        labs = list(range(ell)) + [rng.randrange(ell) for _ in range(m - ell)]
        rng.shuffle(labs)
        return HModel(g, h, tuple(labs))

    f, t = surj(), surj()
    end = replay(plan_clique(f, t))
    return None if end.labels == t.labels else f"ended at {list(end.labels)} not {list(t.labels)}"


def _fuzz_leafblock(rng: random.Random) -> str | None:
    g = rng.choice(_two_connected_pool())
    h = rng.choice((K2, K3))
    m = _random_model(rng, g, h)
    if m is None:
        raise PreconditionFailed("fuzz", "no model")
    a = rng.randrange(h.n)
    bt = m.block_tree(a)
    i = rng.choice(bt.leaf_blocks())
    end = replay(plan_relabel_leafblock(m, a, bt.blocks[i]))
    moved = [v for v in bt.interior(i) if end.labels[v] == a]
    return None if not moved else f"interior vertices {moved} kept label {a}"


def _fuzz_slurp(rng: random.Random) -> str | None:
    g = rng.choice(_two_connected_pool())
    h = rng.choice((K2, K3))
    m = _random_model(rng, g, h)
    if m is None:
        raise PreconditionFailed("fuzz", "no model")
    a = rng.randrange(h.n)
    cuts = sorted(x for x in m.branch(a) if m.is_cut_in_branch(x))
    if not cuts:
        raise PreconditionFailed("fuzz", "branch has no cut vertex")
    x = rng.choice(cuts)
    comp = rng.choice(components(g, m.branch(a) - {x}))
    b = rng.choice([c for c in range(h.n) if c != a])
    end = replay(plan_slurp_component(m, a, b, x, comp))
    if any(end.labels[v] == a for v in comp):
        return "component kept label a"
    if end.labels[x] != a or not end.nbr_label_counts[x][b]:
        return "x does not end with a b-neighbour"
    return None


def _fuzz_siphon(rng: random.Random) -> str | None:
    g = rng.choice(_three_connected_pool())
    m = _random_model(rng, g, K3)
    x = rng.randrange(g.n)
    a = m.labels[x]
    b = rng.choice([c for c in range(3) if c != a])
    end = replay(plan_slurp_siphon(m, a, b, x))
    return None if end.labels[x] == b else f"x ended with label {end.labels[x]}"


_LIFT_HOSTS: tuple[tuple[str, Callable[[], Graph], Graph], ...] = (
    ("k:5/K3", lambda: gen_complete(5), K3),
    ("k:5/K4", lambda: gen_complete(5), K4),
    ("k:6/K4", lambda: gen_complete(6), K4),
    ("wheel:5/K3", lambda: gen_wheel(5), K3),
    ("wheel:4/K2", lambda: gen_wheel(4), K2),
    ("c2:6/K4", lambda: gen_squared_cycle(6), K4),
    ("c2:6/K3", lambda: gen_squared_cycle(6), K3),
)


@lru_cache(maxsize=None)
def _lift_recon(i: int):
    _, build, h = _LIFT_HOSTS[i]
    return build_recon_graph(build(), h)


def _fuzz_lift(rng: random.Random) -> str | None:
    rg = _lift_recon(rng.randrange(len(_LIFT_HOSTS)))
    i, j = rng.randrange(rg.node_count), rng.randrange(rg.node_count)
    if rg.component_id[i] != rg.component_id[j]:
        raise PreconditionFailed("fuzz", "models in different components")
    seq = find_path(rg, rg.models[i], rg.models[j])
    g = rg.host
    v = rng.choice([u for u in range(g.n) if g.degree(u) >= 4])
    p1, p2 = rng.choice(list(valid_splits(g, v)))
    end = replay(lift_sequence_through_split(seq, v, p1, p2))
    want = rg.models[j] + (rg.models[j][v],)
    return None if end.labels == want else f"ended at {list(end.labels)} not {list(want)}"


FUZZERS: dict[str, Callable[[random.Random], str | None]] = {
    "plan_k2": _fuzz_k2,
    "plan_clique": _fuzz_clique,
    "plan_relabel_leafblock": _fuzz_leafblock,
    "plan_slurp_component": _fuzz_slurp,
    "plan_slurp_siphon": _fuzz_siphon,
    "lift_sequence_through_split": _fuzz_lift,
}


def fuzz_planner(name: str, runs: int, seed: int, max_attempts: int | None = None) -> tuple[str, str]:
    """``runs`` invocations whose hypotheses hold; draws violating a hypothesis are redrawn."""
    rng = random.Random(f"{name}:{seed}")
    fn = FUZZERS[name]
    limit = max_attempts if max_attempts is not None else 200 * runs
    done = attempts = 0
    while done < runs and attempts < limit:
        attempts += 1
        try:
            problem = fn(rng)
        except PreconditionFailed:
            continue
        except (PlannerInvariantError, LiftFailed) as exc:
            return FAIL, f"run {done}: {exc}"
        if problem is not None:
            return FAIL, f"run {done}: {problem}"
        done += 1
    if done < runs:
        return FAIL, f"only {done} of {runs} runs met the hypotheses in {attempts} draws"
    return PASS, f"{done} runs, {attempts} draws"


def planner_fuzz(runs: int = 1000, seed: int = 0, workers: int = 1) -> CampaignReport:
    tasks: list[Task] = [(name, fuzz_planner, (name, runs, seed)) for name in FUZZERS]
    return _run("planner-fuzz", seed, {"runs": runs}, tasks, workers)


# ---------------------------------------------------------------------------
# split-addedge-closure

def _closure_instance(g: Graph, h: Graph, budget: int, require_base: bool = True) -> tuple[str, str]:
    base = is_host(g, h, budget)
    if require_base and not base:
        return SKIPPED, "host itself is not in host(H)"
    seen: dict[tuple[int, int], bool] = {}
    checked = 0
    derived: list[tuple[str, Graph]] = []
    edges = set(g.edges())
    for u in range(g.n):
        for v in range(u + 1, g.n):
            if (u, v) not in edges:
                derived.append((f"+{u}{v}", add_edge(g, u, v)))
    if h.n == 3:
        for v in range(g.n):
            for p1, p2 in valid_splits(g, v):
                derived.append((f"split {v}", split_vertex(g, v, p1, p2)))
    for what, g2 in derived:
        key = canonical_form(g2)
        if key not in seen:
            seen[key] = is_host(g2, h, budget)
        checked += 1
        if not seen[key]:
            return FAIL, f"{what} leaves host(K{h.n}): {_g6(g2)}"
    note = "" if base else "; base graph itself is not a member"
    return PASS, f"{checked} results, {len(seen)} up to isomorphism{note}"


def closure_hosts(count: int, max_n: int, seed: int, patience: int = 200) -> list[Graph]:
    """``count`` pairwise non-isomorphic seeded 3-connected hosts with 5 <= n <= max_n.

    Sizes are tried round-robin; a size is dropped once ``patience`` draws in a
    row produce only graphs already seen.
    """
    sizes = list(range(5, max_n + 1))
    misses = {n: 0 for n in sizes}
    seen: set[tuple[int, int]] = set()
    out: list[Graph] = []
    i = 0
    while len(out) < count and sizes:
        n = sizes[i % len(sizes)]
        g = gen_random_3connected(n, seed * 100_003 + i)
        i += 1
        key = canonical_form(g)
        if key in seen:
            misses[n] += 1
            if misses[n] >= patience:
                sizes.remove(n)
            continue
        misses[n] = 0
        seen.add(key)
        out.append(g)
    return out


def split_addedge_closure(count: int = 50, max_n: int = 7, seed: int = 0, budget: int = DEFAULT_BUDGET,
                          workers: int = 1) -> CampaignReport:
    tasks: list[Task] = []
    for i, g in enumerate(closure_hosts(count, max_n, seed)):
        tasks.append((f"host {i} n={g.n} g6={_g6(g)} / K3", _closure_instance, (g, K3, budget)))
    tasks.append(("c2:6 / K4", _closure_instance, (gen_squared_cycle(6), K4, budget, False)))
    tasks.append(("k:5 / K4", _closure_instance, (gen_complete(5), K4, budget, False)))
    return _run("split-addedge-closure", seed, {"count": count, "max_n": max_n}, tasks, workers)


CAMPAIGNS = {
    "k2-characterization": k2_characterization,
    "k3-3connected": k3_3connected,
    "k4-bases": k4_bases,
    "structural-lemmas": structural_lemmas,
    "planner-fuzz": planner_fuzz,
    "split-addedge-closure": split_addedge_closure,
}
