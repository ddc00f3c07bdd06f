"""Command-line front end.

Exit codes: 0 success, 1 usage or parse error, 2 validation failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import replace
from pathlib import Path

from . import stats
from .ghtree import (SCHEMA, GhTree, TreeValidationError, format_tree, ghtree_fast,
                     gomory_hu_classic, gusfield, parse_tree, tree_from_json, tree_matrix,
                     tree_query, tree_to_json)
from .graph import GraphError, random_graph
from .io import read_graph
from .oracles import steiner_mincut
from .packing import mwu_pack
from .ssmc import PIPELINE_CONFIG
from .verify import validate_ghtree

EXIT_OK, EXIT_USAGE, EXIT_INVALID = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("GHCUT_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"GHCUT_SEED must be an integer, got {env!r}") from None


def _config(args):
    cfg = replace(PIPELINE_CONFIG, seed=_seed(args))
    if args.k is not None:
        cfg = replace(cfg, k=args.k)
    if args.trials_factor is not None:
        cfg = replace(cfg, sampling_trials_factor=args.trials_factor)
    return cfg


def build_tree(g, algo: str, cfg, *, validate: bool) -> GhTree:
    if algo == "classic":
        return gomory_hu_classic(g)
    if algo == "gusfield":
        return gusfield(g)
    return ghtree_fast(g, cfg=cfg, validate=validate)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_ghtree(args) -> int:
    g = read_graph(args.input)
    cfg = _config(args)
    with stats.track() as st:
        try:
            t = build_tree(g, args.algo, cfg, validate=args.validate)
        except TreeValidationError as err:
            print(f"validation failed after retries: {err.violation}", file=sys.stderr)
            return EXIT_INVALID
    # the fast constructor validates (and retries) internally
    violation = validate_ghtree(g, t) if args.validate and args.algo != "fast" else None
    if args.json:
        doc = tree_to_json(t)
        doc["algo"] = args.algo
        doc["seed"] = cfg.seed
        doc["counters"] = st.as_dict()
        if args.validate:
            doc["valid"] = violation is None
        _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", args.out)
    else:
        _emit(format_tree(t), args.out)
    if violation is not None:
        print(f"validation failed: {violation}", file=sys.stderr)
        return EXIT_INVALID
    if args.validate:
        print("validation passed", file=sys.stderr)
    return EXIT_OK


def _load_tree(path: str) -> GhTree:
    text = Path(path).read_text()
    if text.lstrip().startswith("{"):
        return tree_from_json(text)
    return parse_tree(text)


def _pair(token: str) -> tuple[int, int]:
    try:
        a, b = (int(x) for x in token.split(","))
    except ValueError:
        raise UsageError(f"pairs are written a,b; got {token!r}") from None
    return a, b


def cmd_query(args) -> int:
    t = _load_tree(args.tree)
    if args.all:
        ids, mat = tree_matrix(t)
        if args.json:
            doc = {"schema": SCHEMA, "vertices": ids, "matrix": mat.tolist()}
            print(json.dumps(doc, indent=2))
        else:
            for row in mat.tolist():
                print(" ".join(str(x) for x in row))
        return EXIT_OK
    if not args.pairs:
        raise UsageError("give pairs a,b or --all")
    rows = []
    for token in args.pairs:
        a, b = _pair(token)
        if a == b:
            raise UsageError(f"pair ({a}, {b}) repeats a vertex")
        for v in (a, b):
            if v not in t.terminals:
                raise UsageError(f"unknown vertex {v}")
        rows.append((a, b, tree_query(t, a, b)[0]))
    if args.json:
        print(json.dumps({"schema": SCHEMA,
                          "pairs": [{"a": a, "b": b, "lambda": w} for a, b, w in rows]}, indent=2))
    else:
        for a, b, w in rows:
            print(f"{a} {b} {w}")
    return EXIT_OK


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def cmd_bench(args) -> int:
    sizes = _int_list(args.sizes)
    seeds = _int_list(args.seeds)
    try:
        densities = [float(x) for x in args.densities.split(",") if x]
    except ValueError:
        raise UsageError(f"bad --densities {args.densities!r}") from None
    algos = [a for a in args.algos.split(",") if a]
    for a in algos:
        if a not in ("classic", "gusfield", "fast"):
            raise UsageError(f"unknown algorithm {a!r}")
    base = _config(args)
    rows = []
    for n in sizes:
        for d in densities:
            for seed in seeds:
                g = random_graph(n, round(d * n), (1, args.w_max), seed)
                for algo in algos:
                    cfg = replace(base, seed=seed)
                    t0 = time.perf_counter()
                    with stats.track() as st:
                        t = build_tree(g, algo, cfg, validate=args.validate)
                    wall = time.perf_counter() - t0
                    counters = st.as_dict()
                    rows.append({
                        "algo": algo, "n": g.n, "m": g.m, "density": d, "seed": seed,
                        "wall_time": wall,
                        "flow_calls": counters["flow_calls"],
                        "flow_solved": counters["flow_solved"],
                        "flow_vertices": counters["flow_vertices"],
                        "flow_edges": counters["flow_edges"],
                        "recursion_depth": counters.get("max_ghtree_depth", 0),
                        "retries": counters.get("ghtree_retries", 0),
                        "tree_edges": len(t.edges),
                        "counters": counters,
                    })
    _emit(json.dumps({"schema": SCHEMA, "rows": rows}, indent=2) + "\n", args.out)
    return EXIT_OK


def _terminals(spec: str, n: int) -> list[int]:
    if spec == "all":
        return list(range(n))
    path = Path(spec)
    if not path.exists():
        raise UsageError(f"terminal file {spec!r} not found")
    try:
        U = sorted({int(x) for x in path.read_text().split()})
    except ValueError:
        raise UsageError(f"terminal file {spec!r} must hold integers") from None
    if any(not 0 <= u < n for u in U):
        raise UsageError("terminal id out of range")
    return U


def cmd_pack(args) -> int:
    g = read_graph(args.input)
    U = _terminals(args.terminals, g.n)
    if len(U) < 2:
        raise UsageError("packing needs at least two terminals")
    lam = steiner_mincut(g, U)
    if lam == 0:
        raise GraphError("terminals are disconnected")
    p = mwu_pack(g, U, args.epsilon)
    report = {
        "schema": SCHEMA,
        "terminals": len(U),
        "epsilon": args.epsilon,
        "total_value": p.total_value,
        "steiner_mincut": lam,
        "ratio": p.total_value / lam,
        "feasible": p.is_feasible(g),
        "augmentations": p.augmentations,
        "trees": len(p.entries),
    }
    if args.json:
        print(json.dumps(report, indent=2))
    else:
        for k, v in report.items():
            if k != "schema":
                print(f"{k}: {v}")
    return EXIT_OK if report["feasible"] else EXIT_INVALID


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=None, help="RNG seed (default: $GHCUT_SEED or 0)")
    p.add_argument("--k", type=int, default=None, help="tree-respecting parameter for the fast constructor")
    p.add_argument("--trials-factor", type=float, default=None, dest="trials_factor",
                   help="sampling trials per recursion level, as a multiple of ln n")
    p.add_argument("--threads", type=int, default=1,
                   help="accepted for compatibility; work runs sequentially and deterministically")


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ghcut", description="Gomory-Hu trees and all-pairs max-flow.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("ghtree", help="build a Gomory-Hu tree")
    p.add_argument("input")
    p.add_argument("--algo", choices=("classic", "gusfield", "fast"), default="fast")
    p.add_argument("--validate", action="store_true")
    p.add_argument("--json", action="store_true")
    p.add_argument("--out", "-o")
    _common(p)
    p.set_defaults(func=cmd_ghtree)

    p = sub.add_parser("query", help="answer max-flow queries from a tree")
    p.add_argument("tree")
    p.add_argument("pairs", nargs="*", help="vertex pairs written a,b")
    p.add_argument("--all", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("bench", help="time constructors on seeded random graphs")
    p.add_argument("--sizes", default="64")
    p.add_argument("--densities", default="3", help="edges per vertex")
    p.add_argument("--seeds", default="0")
    p.add_argument("--algos", default="classic,gusfield,fast")
    p.add_argument("--w-max", type=int, default=20, dest="w_max")
    p.add_argument("--validate", action="store_true")
    p.add_argument("--out", "-o")
    _common(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("pack", help="fractional Steiner tree packing report")
    p.add_argument("input")
    p.add_argument("--terminals", default="all", help="'all' or a file of vertex ids")
    p.add_argument("--epsilon", type=float, default=0.1)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_pack)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, GraphError, ValueError, OSError) as err:
        print(f"ghcut: error: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
