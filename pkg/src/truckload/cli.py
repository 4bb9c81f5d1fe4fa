"""Command-line front end: ``python -m truckload {gen,solve,bench,validate}``.

Exit codes
----------
0  success
1  unexpected error
2  usage error (bad flags or parameters)
3  validation failed (instance or solution)
4  infeasible
5  resource or iteration limit hit
6  file could not be parsed
7  benchmark objectives disagree beyond 0.1%
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from .arcmodel import BRUTE_FORCE_LIMIT, brute_force, solve_exact
from .bench import run_bench
from .colgen import CGConfig, run_column_generation
from .errors import (BenchMismatchError, InfeasibleError, InvalidInputError, NonTerminationError,
                     ParseError, ResourceLimitError, ValidationError)
from .fileio import read_instance, read_solution, write_instance, write_solution
from .instances import DEFAULT_FLEET, FleetClass, GenParams, generate
from .lp import BACKENDS
from .model import validate_instance
from .validation import check_solution

EXIT_OK, EXIT_ERROR, EXIT_USAGE, EXIT_INVALID = 0, 1, 2, 3
EXIT_INFEASIBLE, EXIT_LIMIT, EXIT_PARSE, EXIT_MISMATCH = 4, 5, 6, 7


class _UsageError(Exception):
    pass


def _fleet(text: str) -> tuple:
    """``size:r:c:p[,size:r:c:p...]``"""
    classes = []
    for part in text.split(","):
        bits = part.split(":")
        if len(bits) != 4:
            raise argparse.ArgumentTypeError(f"fleet class {part!r} is not size:r:c:p")
        try:
            classes.append(FleetClass(int(bits[0]), *map(float, bits[1:])))
        except ValueError as exc:
            raise argparse.ArgumentTypeError(f"fleet class {part!r}: {exc}") from None
    return tuple(classes)


def _sizes(text: str) -> list:
    try:
        sizes = [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"sizes must be comma-separated integers, got {text!r}")
    if not sizes or any(s < 1 for s in sizes):
        raise argparse.ArgumentTypeError("sizes must be positive")
    return sizes


def _add_gen_params(p):
    g = p.add_argument_group("instance parameters")
    g.add_argument("--depots", type=int, default=3)
    g.add_argument("--clients", type=int, default=10)
    g.add_argument("--fleet", type=_fleet, default=DEFAULT_FLEET,
                   help="vehicle classes as size:r:c:p, comma separated (default 15:480:1:0.5,15:240:0.8:0.5)")
    g.add_argument("--epsilon", type=float, default=30.0, help="maximum waiting time between tasks")
    g.add_argument("--box", type=float, default=100.0, help="side of the square holding all locations")
    g.add_argument("--horizon", type=float, default=480.0)
    g.add_argument("--load-unload", type=float, default=10.0)
    g.add_argument("--speed", type=float, default=1.0)


def _gen_params(args, n_tasks, seed) -> GenParams:
    return GenParams(n_tasks=n_tasks, n_depots=args.depots, n_clients=args.clients,
                     fleet=args.fleet, epsilon=args.epsilon, box=args.box, horizon=args.horizon,
                     load_unload=args.load_unload, speed=args.speed, seed=seed)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="python -m truckload",
        description="Truckload vehicle scheduling with rental periods: exact MILP and column generation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a random instance file")
    p.add_argument("--tasks", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--out", type=Path, help="output path (default instance-n<tasks>-s<seed>.json)")
    _add_gen_params(p)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("solve", help="solve an instance file")
    p.add_argument("instance", type=Path)
    p.add_argument("--method", choices=("cg", "exact", "brute"), default="cg")
    p.add_argument("-o", "--out", type=Path, help="solution path (default <instance>.<method>.solution.json)")
    p.add_argument("--backend", choices=BACKENDS, default="highs",
                   help="LP/MIP engine: embedded simplex or HiGHS via scipy (default highs)")
    p.add_argument("--gap", type=float, default=1e-3, help="relative MIP gap (default 0.001)")
    p.add_argument("--pool-cap", type=int, help="column pool size cap (env TRUCKLOAD_POOL_CAP)")
    p.add_argument("--brute-limit", type=int, default=BRUTE_FORCE_LIMIT)
    p.add_argument("--plain", action="store_true",
                   help="exact: drop the tour-length rows and solve the bare formulation")
    p.add_argument("--partition", action="store_true",
                   help="cg: require each task exactly once instead of at least once")
    p.add_argument("--record-time", action="store_true",
                   help="store the solve wall time in the solution file (breaks byte-identical reruns)")
    p.add_argument("--trace", action="store_true", help="cg: print one line per pricing round")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("bench", help="time exact against cg on generated instances")
    p.add_argument("--sizes", type=_sizes, required=True, help="comma-separated task counts")
    p.add_argument("--reps", type=int, default=5)
    p.add_argument("--seed-base", type=int, default=0)
    p.add_argument("-o", "--out", type=Path, default=Path("bench.csv"),
                   help="per-run table; the summary goes next to it as <stem>-summary.csv")
    p.add_argument("--backend", choices=BACKENDS, default="highs")
    p.add_argument("--gap", type=float, default=1e-3)
    _add_gen_params(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("validate", help="check a solution file against its instance")
    p.add_argument("instance", type=Path)
    p.add_argument("solution", type=Path)
    p.set_defaults(func=cmd_validate)
    return parser


def cmd_gen(args) -> int:
    if args.tasks < 1:
        raise _UsageError("--tasks must be >= 1")
    inst = generate(_gen_params(args, args.tasks, args.seed))
    out = args.out or Path(f"instance-n{args.tasks}-s{args.seed}.json")
    write_instance(inst, out)
    print(out)
    print(f"tasks={inst.n_tasks} vehicles={inst.n_vehicles} epsilon={inst.epsilon:g} seed={args.seed}")
    return EXIT_OK


def _load_checked(path):
    inst = read_instance(path)
    problems = validate_instance(inst)
    if problems:
        raise ValidationError(problems)
    return inst


def cmd_solve(args) -> int:
    inst = _load_checked(args.instance)
    t0 = time.perf_counter()
    if args.method == "cg":
        config = CGConfig(gap=args.gap, backend=args.backend, pool_cap=args.pool_cap,
                          partition=args.partition, trace=sys.stdout if args.trace else None)
        sol = run_column_generation(inst, config)
    elif args.method == "exact":
        sol = solve_exact(inst, gap=args.gap, backend=args.backend,
                          tour_length_rows=not args.plain)
    else:
        sol = brute_force(inst, args.brute_limit)
    wall = time.perf_counter() - t0
    out = args.out or args.instance.with_name(f"{args.instance.stem}.{args.method}.solution.json")
    write_solution(sol, inst, out, wall if args.record_time else None)
    d = sol.diagnostics
    extra = ""
    if args.method == "cg":
        extra = (f" iterations={d['iterations']} columns_generated={d['columns_generated']}"
                 f" pool={d['pool_size']} lp_objective={d['lp_objective']:.6f}")
        if d["multiply_covered"]:
            extra += f" multiply_covered={d['multiply_covered']}"
    elif args.method == "exact":
        extra = f" status={d['mip_status']} nodes={d['nodes']} gap={d['mip_gap']:.2g}"
    print(out)
    print(f"method={sol.method} objective={sol.objective:.6f} vehicles={len(sol.assignments)} "
          f"wall_time={wall:.3f}{extra}")
    return EXIT_OK


def cmd_bench(args) -> int:
    if args.reps < 1:
        raise _UsageError("--reps must be >= 1")
    template = _gen_params(args, 1, 0)

    def progress(row):
        obj = "-" if row.objective is None else f"{row.objective:.6f}"
        print(f"size={row.size} seed={row.seed} method={row.method} objective={obj} "
              f"wall_time={row.wall_time:.3f} status={row.status}", flush=True)

    code = EXIT_OK
    try:
        report = run_bench(args.sizes, args.reps, args.seed_base, args.backend, args.gap,
                           template, progress)
    except BenchMismatchError as exc:
        report = exc.report
        print(f"BENCH FAILED: {exc}", file=sys.stderr)
        code = EXIT_MISMATCH
    args.out.write_text(report.runs_csv())
    summary = args.out.with_name(f"{args.out.stem}-summary.csv")
    summary.write_text(report.summary_csv())
    print(report.summary_csv(), end="")
    print(args.out)
    print(summary)
    return code


def cmd_validate(args) -> int:
    inst = _load_checked(args.instance)
    sol = read_solution(args.solution, inst)
    rep = check_solution(inst, sol)
    if rep.ok:
        kind = "exact partition" if rep.exact_partition else (
            f"covering; tasks run more than once: {rep.multiply_covered}")
        print(f"ok: {len(sol.assignments)} tours, objective {sol.objective!r}, {kind}")
        return EXIT_OK
    for v in rep.violations:
        print(f"violation: {v}")
    return EXIT_INVALID


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _UsageError as exc:
        parser.error(str(exc))
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ValidationError as exc:
        for v in exc.violations:
            print(f"violation: {v}", file=sys.stderr)
        return EXIT_INVALID
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (ResourceLimitError, NonTerminationError) as exc:
        print(f"limit reached: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except (InvalidInputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
