"""Exact-versus-column-generation benchmark on generated instance families."""

from __future__ import annotations

import csv
import io
import statistics
import time
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

from .arcmodel import solve_exact
from .colgen import CGConfig, run_column_generation
from .errors import BenchMismatchError, TruckloadError
from .instances import GenParams, generate

METHODS = ("exact", "cg")
MISMATCH_TOL = 1e-3
RUN_FIELDS = ("size", "seed", "method", "objective", "wall_time", "iterations",
              "columns_generated", "status")
SUMMARY_FIELDS = ("size", "method", "runs", "mean_wall_time", "sd_wall_time")


@dataclass
class BenchRow:
    size: int
    seed: int
    method: str
    objective: Optional[float]
    wall_time: float
    iterations: Optional[int] = None
    columns_generated: Optional[int] = None
    status: str = "optimal"


@dataclass
class BenchReport:
    rows: list = field(default_factory=list)

    def sizes(self) -> list:
        return sorted({r.size for r in self.rows})

    def times(self, size: int, method: str) -> list:
        return [r.wall_time for r in self.rows if r.size == size and r.method == method]

    def aggregates(self) -> list:
        """``(size, method, runs, mean, sample sd)`` per size and method; sd is nan for one run."""
        out = []
        for size in self.sizes():
            for method in METHODS:
                t = self.times(size, method)
                if not t:
                    continue
                sd = statistics.stdev(t) if len(t) > 1 else float("nan")
                out.append((size, method, len(t), statistics.fmean(t), sd))
        return out

    def speedup(self, size: int) -> float:
        """Mean exact wall time over mean CG wall time."""
        return statistics.fmean(self.times(size, "exact")) / statistics.fmean(self.times(size, "cg"))

    def mismatches(self, tol: float = MISMATCH_TOL) -> list:
        """``(size, seed, cg, exact, relative difference)`` for pairs that disagree beyond ``tol``."""
        by_key = {}
        for r in self.rows:
            by_key.setdefault((r.size, r.seed), {})[r.method] = r
        out = []
        for (size, seed), d in sorted(by_key.items()):
            cg, ex = d.get("cg"), d.get("exact")
            if cg is None or ex is None:
                continue
            if cg.objective is None or ex.objective is None:
                out.append((size, seed, cg.objective, ex.objective, float("nan")))
                continue
            rel = abs(cg.objective - ex.objective) / max(abs(ex.objective), 1e-12)
            if rel > tol:
                out.append((size, seed, cg.objective, ex.objective, rel))
        return out

    def runs_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(RUN_FIELDS)
        for r in self.rows:
            w.writerow([r.size, r.seed, r.method, _fmt(r.objective), f"{r.wall_time:.3f}",
                        _fmt(r.iterations), _fmt(r.columns_generated), r.status])
        return buf.getvalue()

    def summary_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(SUMMARY_FIELDS)
        for size, method, n, mean, sd in self.aggregates():
            w.writerow([size, method, n, f"{mean:.3f}", f"{sd:.3f}"])
        return buf.getvalue()


def _fmt(v) -> str:
    if v is None:
        return ""
    return repr(v) if isinstance(v, float) else str(v)


def _timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def run_instance(instance, size: int, seed: int, backend: str = "highs",
                 gap: float = 1e-3) -> list:
    """Solve one instance with both methods, exact first; returns two rows."""
    rows = []
    try:
        sol, wall = _timed(lambda: solve_exact(instance, gap=gap, backend=backend))
        rows.append(BenchRow(size, seed, "exact", sol.objective, wall,
                             status=sol.diagnostics["mip_status"]))
    except TruckloadError as exc:
        rows.append(BenchRow(size, seed, "exact", None, 0.0, status=type(exc).__name__))
    try:
        sol, wall = _timed(lambda: run_column_generation(
            instance, CGConfig(gap=gap, backend=backend)))
        d = sol.diagnostics
        rows.append(BenchRow(size, seed, "cg", sol.objective, wall, d["iterations"],
                             d["columns_generated"], d["ip_status"]))
    except TruckloadError as exc:
        rows.append(BenchRow(size, seed, "cg", None, 0.0, status=type(exc).__name__))
    return rows


def run_bench(sizes, reps: int = 5, seed_base: int = 0, backend: str = "highs",
              gap: float = 1e-3, template: GenParams = None,
              progress: Callable[[BenchRow], None] = None, strict: bool = True) -> BenchReport:
    """Generate ``reps`` instances per size (seeds ``seed_base + rep``) and time both methods.

    With ``strict`` a :class:`BenchMismatchError` carrying the full report is
    raised after the last run if any pair of objectives disagrees by more than
    0.1% relative.
    """
    sizes = list(sizes)
    if not sizes:
        raise ValueError("bench needs at least one size")
    if reps < 1:
        raise ValueError("reps must be >= 1")
    template = template or GenParams(n_tasks=1)
    report = BenchReport()
    for size in sizes:
        for rep in range(reps):
            seed = seed_base + rep
            inst = generate(replace(template, n_tasks=size, seed=seed))
            for row in run_instance(inst, size, seed, backend, gap):
                report.rows.append(row)
                if progress is not None:
                    progress(row)
    bad = report.mismatches()
    if strict and bad:
        lines = [f"size={s} seed={sd} cg={c!r} exact={e!r} rel_diff={r:.3g}" for s, sd, c, e, r in bad]
        raise BenchMismatchError("objective mismatch beyond 0.1%: " + "; ".join(lines), report)
    return report
