"""Command-line front end.

Structured JSON goes to stdout, human-readable summaries to stderr.  Exit
codes: 0 success, 1 negative/infeasible answer, 2 usage or input error,
3 internal consistency failure.  Randomized subcommands accept --rng-seed
and always echo the seed actually used.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
from dataclasses import asdict
from pathlib import Path

from .deg3 import ConsistencyError, min_i2cs_maxdeg3
from .exact import SearchBudgetExceeded, has_conversion_set_of_size, min_conversion_set
from .graph import Graph, GraphError, ParseError, parse_edge_list
from .percolation import is_conversion_set, run, stuck_certificate
from .polymatroid import (
    NU_BRUTE_MAX_LINES,
    PolymatroidInstance,
    max_matching,
    min_spanning_set,
    nu_algebraic,
    nu_bruteforce,
)
from .satred import DimacsError, build_reduction, check_equivalence, parse_dimacs
from .torus import TorusError, construct_3cs, render_cells

__all__ = ["main"]

AUTO_CROSSCHECK_MAX = 12


class UsageError(ValueError):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _load_graph(path: str) -> Graph:
    return parse_edge_list(_read(path))


def _parse_seed_list(text: str) -> frozenset[int]:
    if not text.strip():
        return frozenset()
    try:
        return frozenset(int(t) for t in text.split(","))
    except ValueError:
        raise UsageError(f"bad seed list {text!r}, expected comma-separated ints") from None


def _edge_list_text(g: Graph) -> str:
    lines = [f"p {g.n} {g.m}"]
    lines.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def _graph_payload(g: Graph) -> dict:
    return {"n": g.n, "edges": [list(e) for e in g.edges]}


def _cmd_simulate(args, rng) -> tuple[int, dict, str]:
    g = _load_graph(args.graph)
    seed = _parse_seed_list(args.seed)
    trace = run(g, seed, args.k)
    payload = {
        "k": args.k,
        "graph": _graph_payload(g),
        "trace": trace.to_json_dict(),
    }
    if trace.converted_all:
        return 0, payload, (
            f"seed of {len(seed)} converts all {g.n} vertices "
            f"in {len(trace.rounds)} rounds"
        )
    payload["stuck_certificate"] = sorted(stuck_certificate(g, seed, args.k))
    return 1, payload, (
        f"stuck: {len(trace.final_black)}/{g.n} black after "
        f"{len(trace.rounds)} rounds"
    )


def _cmd_min_set(args, rng) -> tuple[int, dict, str]:
    g = _load_graph(args.graph)
    engine = args.engine
    if engine == "auto":
        engine = "deg3" if args.k == 2 and g.max_degree() <= 3 else "brute"
    if engine == "deg3" and (args.k != 2 or g.max_degree() > 3):
        raise UsageError("engine deg3 needs --k 2 and maximum degree <= 3")
    if engine == "deg3":
        size, witness = min_i2cs_maxdeg3(g, rng=rng)
    else:
        size, wl = min_conversion_set(
            g, args.k, budget_vertices=args.budget, workers=args.workers
        )
        witness = frozenset(wl)
    crosschecked = False
    if args.engine == "auto" and engine == "deg3" and g.n <= AUTO_CROSSCHECK_MAX:
        ref, _ = min_conversion_set(g, args.k, budget_vertices=args.budget)
        if ref != size:
            raise ConsistencyError(f"deg3 size {size} != brute size {ref}")
        crosschecked = True
    if not is_conversion_set(g, witness, args.k):
        raise ConsistencyError("reported witness does not convert the graph")
    payload = {
        "k": args.k,
        "engine": engine,
        "size": size,
        "witness": sorted(witness),
        "crosschecked": crosschecked,
        "graph": _graph_payload(g),
    }
    return 0, payload, f"minimum {args.k}-conversion set: {size} vertices ({engine})"


def _cmd_reduce_sat(args, rng) -> tuple[int, dict, str]:
    formula = parse_dimacs(_read(args.cnf))
    out = build_reduction(formula)
    payload = out.to_json_dict()
    if args.out:
        Path(args.out).write_text(_edge_list_text(out.graph))
    return 0, payload, (
        f"{formula.n} vars / {formula.m} clauses -> graph on "
        f"{out.graph.n} vertices, target size s = {out.s}"
    )


def _cmd_check_sat_equiv(args, rng) -> tuple[int, dict, str]:
    formula = parse_dimacs(_read(args.cnf))
    report = check_equivalence(
        formula, budget_vertices=args.budget, workers=args.workers
    )
    ok = report["match"] and report["forward_seed_ok"] is not False
    if not ok:
        return 3, report, "MISMATCH between satisfiability and seed search"
    verdict = "satisfiable" if report["satisfiable"] else "unsatisfiable"
    return 0, report, f"equivalence holds ({verdict}, s = {report['s']})"


def _cmd_torus_construct(args, rng) -> tuple[int, dict, str]:
    c = construct_3cs(args.m, args.n)
    payload = {
        "m": args.m,
        "n": args.n,
        "case": c.params.tag,
        "size": c.params.size,
        "bound": c.params.bound,
        "params": asdict(c.params),
        "cells": sorted(list(p) for p in c.cells),
        "vertices": sorted(c.vertices),
    }
    if args.verify:
        payload["verified"] = is_conversion_set(c.grid.graph(), c.vertices, 3)
        if not payload["verified"]:
            raise ConsistencyError("constructed seed failed verification")
    art = render_cells(args.m, args.n, c.cells)
    if args.emit_grid:
        payload["grid"] = art
    summary = (
        f"T({args.m},{args.n}) case {c.params.tag}: "
        f"{c.params.size} black cells (bound {c.params.bound})"
    )
    if args.emit_grid:
        summary += "\n" + art
    return 0, payload, summary


def _cmd_polymatroid_debug(args, rng) -> tuple[int, dict, str]:
    try:
        obj = json.loads(_read(args.instance))
    except json.JSONDecodeError as exc:
        raise UsageError(f"bad instance JSON: {exc}") from None
    inst = PolymatroidInstance.from_json_dict(obj)
    full = inst.rank()
    nu = nu_algebraic(inst, rng=rng)
    brute = None
    if len(inst.lines) <= NU_BRUTE_MAX_LINES:
        brute = nu_bruteforce(inst)
        if brute != nu:
            raise ConsistencyError(f"algebraic nu {nu} != brute nu {brute}")
    matching = max_matching(inst, rng=rng)
    span = min_spanning_set(inst, rng=rng)
    gallai_ok = len(span) + nu == full
    payload = {
        "lines": len(inst.lines),
        "dim": inst.dim,
        "field_bits": inst.field.w,
        "rank_full": full,
        "nu": nu,
        "nu_bruteforce": brute,
        "matching": sorted(matching),
        "min_spanning_set": sorted(span),
        "gallai_ok": gallai_ok,
    }
    if not gallai_ok:
        raise ConsistencyError("nu + rho != f(V)")
    return 0, payload, (
        f"f(V)={full}  nu={nu}  rho={len(span)}  (Gallai identity holds)"
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ikcs",
        description="Irreversible k-threshold conversion toolbox.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--rng-seed", type=int, default=None,
        help="seed for all randomized steps (default: from entropy, echoed)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", parents=[common], help="run the conversion process")
    p.add_argument("--k", type=int, required=True, help="conversion threshold")
    p.add_argument("--seed", required=True, help="comma-separated black vertex ids")
    p.add_argument("graph", help="edge-list file")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("min-set", parents=[common], help="minimum conversion set")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--engine", choices=("brute", "deg3", "auto"), default="auto")
    p.add_argument("--budget", type=int, default=30, help="vertex cap for brute search")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("graph", help="edge-list file")
    p.set_defaults(func=_cmd_min_set)

    p = sub.add_parser("reduce-sat", parents=[common], help="3-CNF to threshold-2 instance")
    p.add_argument("--out", help="also write the graph as an edge-list file")
    p.add_argument("cnf", help="DIMACS CNF file, 3 literals per clause")
    p.set_defaults(func=_cmd_reduce_sat)

    p = sub.add_parser(
        "check-sat-equiv", parents=[common],
        help="verify satisfiability matches the seed search on the built graph",
    )
    p.add_argument("--budget", type=int, default=200)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("cnf", help="DIMACS CNF file")
    p.set_defaults(func=_cmd_check_sat_equiv)

    p = sub.add_parser(
        "torus-construct", parents=[common],
        help="small verified 3-conversion set of the m x n torus",
    )
    p.add_argument("m", type=int)
    p.add_argument("n", type=int)
    p.add_argument("--verify", action="store_true", help="re-check and report percolation")
    p.add_argument("--emit-grid", action="store_true", help="include ASCII grid art")
    p.set_defaults(func=_cmd_torus_construct)

    p = sub.add_parser(
        "polymatroid-debug", parents=[common],
        help="rank / matching / spanning diagnostics for an instance JSON",
    )
    p.add_argument("instance", help="instance JSON file")
    p.set_defaults(func=_cmd_polymatroid_debug)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors with code 2
        return exc.code if isinstance(exc.code, int) else 2
    rng_seed = args.rng_seed
    if rng_seed is None:
        rng_seed = int.from_bytes(os.urandom(4), "big")
    rng = random.Random(rng_seed)
    try:
        code, payload, summary = args.func(args, rng)
    except (UsageError, ParseError, DimacsError, TorusError, GraphError,
            SearchBudgetExceeded, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConsistencyError as exc:
        print(f"consistency failure: {exc}", file=sys.stderr)
        return 3
    payload["rng_seed"] = rng_seed
    json.dump(payload, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")
    if summary:
        print(summary, file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
