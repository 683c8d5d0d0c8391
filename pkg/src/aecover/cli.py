"""Command-line front end: solve, exact, gen, bench, and bound tables.

Exit codes: 0 ok, 1 internal error, 2 infeasible input, 3 certification
violation.  All outputs are deterministic given identical inputs; wall-clock
timings go to stderr only.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import bounds as bounds_mod
from .core import Instance
from .errors import AecError, BudgetExceeded, DomainError, Infeasible, LimitExceeded
from .fileio import assignment_doc, format_fraction, instance_digest, load_instance, save_instance
from .general import solve_general
from .generators import FAMILIES, generate, tight73
from .locally_uniform import solve_locally_uniform, validate_locally_uniform
from .oracle import DEFAULT_MAX_NODES, DEFAULT_MAX_TERMINALS, exact_solve
from .report import BenchReport, SolveReport
from .unit import SUBSOLVERS, reduce_unit, solve_unit_a1, solve_unit_a2

ALGORITHMS = ("auto", "general", "locally-uniform", "unit-a1", "unit-a2")

# Oracle limits per family; the tight example needs all 48 terminals.
_BENCH_LIMITS = {"tight73": {"max_terminals": 48, "max_nodes": 80}}

_BENCH_ALGORITHMS = {
    "minpower": ("general",),
    "setcover-t2": ("general",),
    "setcover-t5": ("general",),
    "setcover-t10": ("general",),
    "installation": ("general",),
    "general": ("general",),
    "uniform": ("locally-uniform",),
    "uniform-unit": ("locally-uniform",),
    "unit": ("unit-a1", "unit-a2"),
    "tight73": ("locally-uniform",),
}


def pick_algorithm(inst: Instance) -> str:
    if inst.is_unit():
        return "unit-a2"
    try:
        validate_locally_uniform(inst)
        return "locally-uniform"
    except AecError:
        return "general"


def run_algorithm(
    inst: Instance,
    algorithm: str,
    tie_break: str = "lowest-id",
    priority: Optional[Sequence[str]] = None,
    subsolver: str = "exact",
) -> SolveReport:
    if algorithm == "auto":
        algorithm = pick_algorithm(inst)
    if algorithm == "general":
        return solve_general(inst)
    if algorithm == "locally-uniform":
        ubi = validate_locally_uniform(inst)
        return solve_locally_uniform(ubi, tie_break=tie_break, priority=priority)
    if algorithm == "unit-a1":
        return solve_unit_a1(reduce_unit(inst))
    if algorithm == "unit-a2":
        return solve_unit_a2(reduce_unit(inst), subsolver=SUBSOLVERS[subsolver])
    raise DomainError(f"unknown algorithm {algorithm!r}")


def _read_priority(path: Optional[str]) -> Optional[list[str]]:
    if path is None:
        return None
    return [line.strip() for line in Path(path).read_text().splitlines() if line.strip()]


def _write_or_print(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_solve(args: argparse.Namespace) -> int:
    inst = load_instance(args.input)
    priority = _read_priority(args.priority_file)
    started = time.monotonic()
    report = run_algorithm(
        inst,
        args.algorithm,
        tie_break=args.tie_break,
        priority=priority,
        subsolver=args.subsolver,
    )
    report.wall_time_s = time.monotonic() - started
    exit_code = 0
    if args.exact_check:
        exact = exact_solve(
            inst, max_terminals=args.max_terminals, max_nodes=args.max_nodes
        )
        report.exact_value = exact.value
        if not report.certified():
            print(
                f"certification violation: value {report.value} vs optimum "
                f"{exact.value} exceeds bound {report.claimed_bound}",
                file=sys.stderr,
            )
            exit_code = 3
    _write_or_print(report.to_json(), args.out)
    print(f"solved in {report.wall_time_s:.3f}s", file=sys.stderr)
    return exit_code


def cmd_exact(args: argparse.Namespace) -> int:
    inst = load_instance(args.input)
    limits = {
        "max_terminals": args.max_terminals,
        "max_nodes": args.max_nodes,
    }
    if args.force:
        limits = {"max_terminals": 10**9, "max_nodes": 10**9}
    result = exact_solve(inst, time_budget=args.time_budget, **limits)
    doc = {
        "schema_version": 1,
        "kind": "exact_result",
        "instance_digest": instance_digest(inst),
        "value": format_fraction(result.value),
        "assignment": assignment_doc(result.assignment),
        "optimal": result.optimal,
        "nodes_expanded": result.nodes_expanded,
    }
    _write_or_print(json.dumps(doc, sort_keys=True, indent=2) + "\n", args.out)
    return 0


def cmd_gen(args: argparse.Namespace) -> int:
    inst = generate(args.family, args.seed)
    save_instance(inst, args.out)
    if args.family == "tight73":
        _, priority = tight73()
        Path(str(args.out) + ".priority").write_text("\n".join(priority) + "\n")
    print(f"wrote {args.out} ({instance_digest(inst)[:12]})", file=sys.stderr)
    return 0


def _parse_seeds(text: str) -> tuple[int, int]:
    if ".." in text:
        a, b = text.split("..", 1)
        return int(a), int(b)
    v = int(text)
    return v, v


def cmd_bench(args: argparse.Namespace) -> int:
    seed_start, seed_end = _parse_seeds(args.seeds)
    algorithms = (
        tuple(args.algorithms.split(","))
        if args.algorithms
        else _BENCH_ALGORITHMS[args.family]
    )
    limits = _BENCH_LIMITS.get(args.family, {})
    bench = BenchReport(
        family=args.family,
        seed_start=seed_start,
        seed_end=seed_end,
        algorithms=algorithms,
    )
    started = time.monotonic()
    for seed in range(seed_start, seed_end + 1):
        inst = generate(args.family, seed)
        digest = instance_digest(inst)
        try:
            exact = exact_solve(inst, time_budget=args.time_budget, **limits)
        except (LimitExceeded, BudgetExceeded) as exc:
            bench.skipped.append({"seed": seed, "reason": str(exc)})
            continue
        reports = {}
        for alg in algorithms:
            rep = run_algorithm(inst, alg, subsolver=args.subsolver)
            rep.exact_value = exact.value
            reports[alg] = rep
        bench.add_entry(seed, digest, exact.value, reports)
    _write_or_print(bench.to_json(), args.out)
    print(
        f"benchmarked {len(bench.entries)} instances in {time.monotonic() - started:.2f}s, "
        f"{len(bench.violations)} violations",
        file=sys.stderr,
    )
    return 0 if bench.ok() else 3


def cmd_bounds(args: argparse.Namespace) -> int:
    if args.table1:
        print(bounds_mod.render_table(bounds_mod.table1()))
        return 0
    if not args.theta:
        raise DomainError("pass --table1 or --theta")
    thetas = [Fraction(tok) for tok in args.theta.split(",")]
    rows = {
        name: tuple(bounds_mod.bound_row(t)[name] for t in thetas)
        for name in bounds_mod.TABLE1_ROWS
    }
    table = bounds_mod.BoundTable(thetas=tuple(thetas), rows=rows)
    print(bounds_mod.render_table(table))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aecover",
        description="Activation edge-cover solvers with certified ratios.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="run an approximation solver on an instance file")
    p.add_argument("input")
    p.add_argument("--algorithm", choices=ALGORITHMS, default="auto")
    p.add_argument("--tie-break", choices=("lowest-id", "adversarial-order"), default="lowest-id")
    p.add_argument("--priority-file", help="facility order for adversarial tie-breaking")
    p.add_argument("--subsolver", choices=sorted(SUBSOLVERS), default="exact")
    p.add_argument("--exact-check", action="store_true", help="attach the exact optimum")
    p.add_argument("--max-terminals", type=int, default=DEFAULT_MAX_TERMINALS)
    p.add_argument("--max-nodes", type=int, default=DEFAULT_MAX_NODES)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("exact", help="exact optimum by branch and bound")
    p.add_argument("input")
    p.add_argument("--max-terminals", type=int, default=DEFAULT_MAX_TERMINALS)
    p.add_argument("--max-nodes", type=int, default=DEFAULT_MAX_NODES)
    p.add_argument("--time-budget", type=float, default=None)
    p.add_argument("--force", action="store_true", help="ignore size limits")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_exact)

    p = sub.add_parser("gen", help="write a seeded family instance file")
    p.add_argument("--family", choices=sorted(FAMILIES), required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_gen)

    p = sub.add_parser("bench", help="certify ratios over a seed range")
    p.add_argument("--family", choices=sorted(FAMILIES), required=True)
    p.add_argument("--seeds", default="0..19", help="inclusive range a..b")
    p.add_argument("--algorithms", help="comma-separated algorithm list")
    p.add_argument("--subsolver", choices=sorted(SUBSOLVERS), default="exact")
    p.add_argument("--time-budget", type=float, default=None)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_bench)

    p = sub.add_parser("bounds", help="print bound tables")
    p.add_argument("--table1", action="store_true")
    p.add_argument("--theta", help="comma-separated slopes")
    p.set_defaults(fn=cmd_bounds)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except Infeasible as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return 2
    except AecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
