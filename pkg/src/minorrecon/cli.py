"""Command-line entry point: ``minorrecon <command> ...``.

Exit codes: 0 ok, 1 domain-negative, 2 parse error, 3 budget exceeded,
4 target is not a minor, 5 unreachable, 6 planner precondition failed.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Callable, Sequence

from . import campaigns
from .errors import (
    IllegalStep,
    NotAMinor,
    ParseError,
    PreconditionFailed,
    ShapeMismatch,
    StateSpaceExceeded,
    Unreachable,
)
from .families import FamilySpec, GenWheelLayout
from .graph_core import Graph, is_k_connected
from .io import format_sequence, labels_text, load_graph, load_model, load_target, parse_sequence
from .models import DEFAULT_BUDGET, HModel, validate_model
from .planners import plan_clique, plan_genwheel, plan_k2
from .recon import ReconSequence, build_recon_graph, find_path, host_components, replay

EXIT_OK, EXIT_NEGATIVE, EXIT_PARSE, EXIT_BUDGET, EXIT_NOT_MINOR, EXIT_UNREACHABLE, EXIT_PRECONDITION = range(7)


def _write(path: str | None, text: str) -> None:
    if path:
        Path(path).write_text(text)


def _emit(args: argparse.Namespace, record: dict) -> None:
    _write(args.json, json.dumps(record, indent=2) + "\n")


# ---------------------------------------------------------------------------
# commands

def cmd_validate(args: argparse.Namespace) -> int:
    g, _ = load_graph(args.graph)
    h = load_target(args.target)
    m = load_model(args.model, g, h)
    check = validate_model(m)
    record = {"valid": check.valid, "labels": list(m.labels)}
    if check.valid:
        print(f"valid {labels_text(m.labels)}")
    else:
        record.update(condition=check.condition, detail=check.detail)
        print(f"invalid: {check.detail}")
    _emit(args, record)
    return EXIT_OK if check.valid else EXIT_NEGATIVE


def cmd_reconstats(args: argparse.Namespace) -> int:
    g, _ = load_graph(args.graph)
    h = load_target(args.target)
    rg = build_recon_graph(g, h, args.budget, args.workers)
    summary = rg.summary()
    print(" ".join(f"{k}={v}" for k, v in summary.items()))
    _write(args.dot, rg.to_dot())
    _emit(args, summary)
    return EXIT_OK


def cmd_hostcheck(args: argparse.Namespace) -> int:
    g, _ = load_graph(args.graph)
    h = load_target(args.target)
    sizes = host_components(g, h, args.budget)
    member = len(sizes) == 1
    if member:
        print(f"member ({sizes[0]} models)")
    else:
        print("non-member; component sizes " + ",".join(map(str, sizes)))
    _emit(args, {"member": member, "component_sizes": sizes})
    return EXIT_OK if member else EXIT_NEGATIVE


def _parse_layout(text: str | None, spec: FamilySpec | None) -> GenWheelLayout | None:
    if text:
        try:
            n, l, m = (int(x) for x in text.split(","))
        except ValueError:
            raise ParseError("--layout expects 'n,l,m'") from None
        return GenWheelLayout(n, l, m)
    return spec.layout() if spec is not None else None


def _complete(g: Graph) -> bool:
    return g.m == g.n * (g.n - 1) // 2


def _auto_planner(f: HModel, layout: GenWheelLayout | None) -> Callable[[HModel, HModel], ReconSequence] | None:
    g, h = f.host, f.target
    if h.n == 2 and h.m == 1 and is_k_connected(g, 2):
        return plan_k2
    if _complete(g) and _complete(h) and g.n > h.n:
        return plan_clique
    if layout is not None and _complete(h) and h.n == layout.l + 2:
        return lambda a, b: plan_genwheel(a, b, layout)
    return None


def cmd_plan(args: argparse.Namespace) -> int:
    g, spec = load_graph(args.graph)
    h = load_target(args.target)
    f = load_model(args.source, g, h)
    t = load_model(args.dest, g, h)
    for label, m in (("from", f), ("to", t)):
        check = validate_model(m)
        if not check.valid:
            print(f"{label}-model invalid: {check.detail}", file=sys.stderr)
            return EXIT_NEGATIVE
    layout = _parse_layout(args.layout, spec)
    strategy = args.strategy
    seq: ReconSequence | None = None
    if strategy == "auto":
        planner = _auto_planner(f, layout)
        if planner is not None:
            try:
                seq = planner(f, t)
                strategy = "constructive"
            except PreconditionFailed:
                seq = None
        if seq is None:
            strategy = "bfs"
    elif strategy == "k2":
        seq = plan_k2(f, t)
    elif strategy == "clique":
        seq = plan_clique(f, t)
    elif strategy == "genwheel":
        if layout is None:
            raise PreconditionFailed("genwheel", "layout unknown; pass --layout n,l,m or a wheel family spec")
        seq = plan_genwheel(f, t, layout)
    if seq is None:
        rg = build_recon_graph(g, h, args.budget, args.workers)
        seq = find_path(rg, f, t)
    replay(seq)
    text = format_sequence(seq)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    print(f"# {len(seq)} steps via {strategy}", file=sys.stderr)
    _emit(args, {"strategy": strategy, "length": len(seq), "steps": [list(s) for s in seq.steps]})
    return EXIT_OK


def cmd_replay(args: argparse.Namespace) -> int:
    g, _ = load_graph(args.graph)
    h = load_target(args.target)
    start = load_model(args.model, g, h)
    check = validate_model(start)
    if not check.valid:
        print(f"start model invalid: {check.detail}")
        return EXIT_NEGATIVE
    seq = parse_sequence(Path(args.sequence).read_text(), start)
    try:
        end = replay(seq)
    except IllegalStep as exc:
        print(f"illegal: {exc}")
        _emit(args, {"legal": False, "step": exc.index, "condition": exc.condition})
        return EXIT_NEGATIVE
    print(f"legal; {len(seq)} steps; end {labels_text(end.labels)}")
    _emit(args, {"legal": True, "length": len(seq), "end": list(end.labels)})
    return EXIT_OK


def cmd_campaign(args: argparse.Namespace) -> int:
    name = args.name
    common = {"workers": args.workers, "seed": args.seed}
    if name == "planner-fuzz":
        report = campaigns.planner_fuzz(runs=args.runs, **common)
    elif name == "split-addedge-closure":
        report = campaigns.split_addedge_closure(count=args.count, max_n=args.max_n or 7, budget=args.budget, **common)
    elif name == "k4-bases":
        report = campaigns.k4_bases(budget=args.budget, **common)
    else:
        default_n = {"k2-characterization": 6, "k3-3connected": 7, "structural-lemmas": 6}[name]
        report = campaigns.CAMPAIGNS[name](max_n=args.max_n or default_n, budget=args.budget, **common)
    sys.stdout.write(report.render())
    print(f"# wall time {report.wall_time:.1f}s", file=sys.stderr)
    _write(args.json, report.to_json())
    return EXIT_OK if report.ok else EXIT_NEGATIVE


# ---------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="minorrecon", description="Reconfiguration of graph minor models.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, helptext: str, graph: bool = True) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=helptext)
        if graph:
            p.add_argument("-g", "--graph", required=True, help="edge-list or graph6 file, or a family spec")
            p.add_argument("-H", "--target", required=True, help="k2/k3/k4 (any kN) or an edge-list file")
        p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="state budget")
        p.add_argument("--json", help="write a JSON record here")
        p.add_argument("--workers", type=int, default=1)
        return p

    p = add("validate", "check that a labeling is an H-model")
    p.add_argument("-m", "--model", required=True, help="model file or inline labels")
    p.set_defaults(func=cmd_validate)

    p = add("reconstats", "summarize the reconfiguration graph")
    p.add_argument("--dot", help="write the reconfiguration graph as DOT")
    p.set_defaults(func=cmd_reconstats)

    p = add("hostcheck", "decide whether the reconfiguration graph is connected")
    p.set_defaults(func=cmd_hostcheck)

    p = add("plan", "produce a reconfiguration sequence between two models")
    p.add_argument("--from", dest="source", required=True, help="start model file or inline labels")
    p.add_argument("--to", dest="dest", required=True, help="goal model file or inline labels")
    p.add_argument("--strategy", choices=("auto", "bfs", "k2", "clique", "genwheel"), default="auto")
    p.add_argument("--layout", help="generalized wheel layout n,l,m")
    p.add_argument("-o", "--output", help="sequence file (default stdout)")
    p.set_defaults(func=cmd_plan)

    p = add("replay", "check a sequence file step by step")
    p.add_argument("-m", "--model", required=True, help="start model")
    p.add_argument("sequence", help="sequence file")
    p.set_defaults(func=cmd_replay)

    p = add("campaign", "run a verification campaign", graph=False)
    p.add_argument("name", choices=sorted(campaigns.CAMPAIGNS))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-n", type=int, default=None)
    p.add_argument("--runs", type=int, default=1000, help="planner-fuzz invocations per planner")
    p.add_argument("--count", type=int, default=50, help="closure hosts")
    p.set_defaults(func=cmd_campaign)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (ParseError, ShapeMismatch, OSError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except StateSpaceExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except NotAMinor as exc:
        print(f"not a minor: {exc}", file=sys.stderr)
        return EXIT_NOT_MINOR
    except Unreachable as exc:
        print(f"unreachable: {exc}", file=sys.stderr)
        return EXIT_UNREACHABLE
    except PreconditionFailed as exc:
        print(f"precondition failed [{exc.lemma}]: {exc.condition}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
