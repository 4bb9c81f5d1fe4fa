"""Path-based set-covering model solved by column generation.

The restricted master problem (RMP) has one variable ``y[k, c]`` per vehicle
and active column, with

* covering rows   ``sum_{k, c contains t} y[k, c] >= 1``      (dual ``mu_t >= 0``)
* convexity rows  ``sum_c y[k, c] <= 1``                       (dual ``lam_k <= 0``)
* rental rows     ``sum_c (l_c - r_k) y[k, c] <= 0``           (dual ``gamma_k <= 0``)

Pairs whose column is longer than the vehicle's rental period are fixed to 0.
The convexity row already caps every ``y`` at 1, so no explicit upper bound
is added; an explicit one would let a variable sit at that bound with a
negative reduced cost and spoil the pricing certificate.

Covering lets the integer master run a task twice when that makes two
tours cheaper (the second pass is an empty drive along the task's route).
A schedule where every task appears once may then cost more; the
``partition`` option asks for that stricter model.

Pricing scans the not-yet-active columns of the enumerated pool for the most
negative reduced cost per vehicle.  When the initial columns cannot cover
every task within the fleet, a phase-1 master with one artificial per task
is priced until the artificials vanish (or no column helps, which proves
infeasibility).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional, TextIO

import numpy as np
import scipy.sparse as sp

from .enumeration import ColumnPool, build_initial_set
from .errors import InfeasibleError, InvalidInputError, NonTerminationError
from .graph import build_graph
from .lp import EQ, GE, INFEASIBLE, LE, OPTIMAL, LinearProgram, LpSolution, solve_lp, solve_mip
from .model import Instance, Solution, TOL

DEFAULT_TOLERANCE = 1e-7


@dataclass
class CGConfig:
    tolerance: float = DEFAULT_TOLERANCE
    max_iterations: int = 10_000
    gap: float = 1e-3
    backend: str = "simplex"
    pool_cap: Optional[int] = None
    trace: Optional[TextIO] = None
    partition: bool = False   # task rows as "= 1" instead of ">= 1"


@dataclass
class Duals:
    mu: np.ndarray      # per task, covering rows (free in partition mode)
    lam: np.ndarray     # per vehicle, convexity rows
    gamma: np.ndarray   # per vehicle, rental rows


@dataclass
class PricingResult:
    vehicle: int
    column: Optional[int]
    reduced_cost: float


class _PoolArrays:
    """Vectorised view of a pool: durations and a column-by-task incidence matrix."""

    def __init__(self, pool: ColumnPool, n_tasks: int):
        self.durations = np.array([c.duration for c in pool.all], dtype=float)
        rows, cols = [], []
        for idx, c in enumerate(pool.all):
            rows.extend([idx] * len(c.tasks))
            cols.extend(c.tasks)
        self.incidence = sp.csr_matrix(
            (np.ones(len(rows)), (rows, cols)), shape=(len(pool.all), n_tasks)
        )


def _raw_costs(instance: Instance, durations: np.ndarray) -> np.ndarray:
    """``cost[k, c]`` by the assignment-cost formula, without the rental check."""
    r = np.array([v.rent_period for v in instance.vehicles])[:, None]
    c = np.array([v.cost_rate for v in instance.vehicles])[:, None]
    p = np.array([v.reimburse_fraction for v in instance.vehicles])[:, None]
    return r * c - p * c * (r - durations[None, :])


def _eligible(instance: Instance, durations: np.ndarray) -> np.ndarray:
    r = np.array([v.rent_period for v in instance.vehicles])[:, None]
    return durations[None, :] <= r + TOL


@dataclass
class RmpState:
    instance: Instance
    pool: ColumnPool
    active: list
    remaining: list
    phase: int = 2
    lp: Optional[LinearProgram] = None
    var_index: dict = field(default_factory=dict)
    solution: Optional[LpSolution] = None
    duals: Optional[Duals] = None
    arrays: Optional[_PoolArrays] = field(default=None, repr=False)
    partition: bool = False

    def __post_init__(self):
        if self.arrays is None:
            self.arrays = _PoolArrays(self.pool, self.instance.n_tasks)

    @property
    def n_structural(self) -> int:
        return self.instance.n_vehicles * len(self.active)


def _assemble(state: RmpState, integer: bool = False) -> LinearProgram:
    inst, pool = state.instance, state.pool
    n, m = inst.n_tasks, inst.n_vehicles
    act = np.array(state.active, dtype=int)
    L = state.arrays.durations[act]
    r = np.array([v.rent_period for v in inst.vehicles])
    cost = _raw_costs(inst, L).T.reshape(-1)   # var j = c_pos * m + k
    elig = _eligible(inst, L).T.reshape(-1)
    if state.phase == 1:
        cost = np.zeros_like(cost)
    cost = np.where(elig, cost, 0.0)

    rows, cols, vals = [], [], []
    var_index = {}
    for c_pos, c in enumerate(act):
        base = c_pos * m
        for k in range(m):
            var_index[(k, int(c))] = base + k
        for t in pool.all[c].tasks:
            rows.extend([t] * m)
            cols.extend(range(base, base + m))
            vals.extend([1.0] * m)
        rows.extend(range(n, n + m))
        cols.extend(range(base, base + m))
        vals.extend([1.0] * m)
        rows.extend(range(n + m, n + 2 * m))
        cols.extend(range(base, base + m))
        vals.extend((L[c_pos] - r).tolist())
    n_vars = len(act) * m
    upper = np.where(elig, np.inf, 0.0)
    lower = np.zeros(n_vars)
    integ = np.full(n_vars, integer)
    if state.phase == 1:
        rows.extend(range(n))
        cols.extend(range(n_vars, n_vars + n))
        vals.extend([1.0] * n)
        cost = np.concatenate([cost, np.ones(n)])
        lower = np.concatenate([lower, np.zeros(n)])
        upper = np.concatenate([upper, np.full(n, np.inf)])
        integ = np.concatenate([integ, np.zeros(n, bool)])
        n_vars += n
    A = sp.csr_matrix((vals, (rows, cols)), shape=(n + 2 * m, n_vars))
    A.sum_duplicates()
    senses = (EQ if state.partition else GE,) * n + (LE,) * (2 * m)
    rhs = np.concatenate([np.ones(n), np.ones(m), np.zeros(m)])
    state.var_index = var_index
    return LinearProgram(cost, A, senses, rhs, lower, upper, integ)


def build_rmp(pool: ColumnPool, instance: Instance, active=None, phase: int = 2,
              partition: bool = False) -> RmpState:
    """Set up the master over ``active`` columns (default: the pool's initial set).

    With ``partition`` every task must be covered exactly once.
    """
    if not pool.all:
        raise InvalidInputError("column pool is empty")
    active = list(pool.initial_ids if active is None else active)
    chosen = set(active)
    remaining = [i for i in range(len(pool.all)) if i not in chosen]
    state = RmpState(instance, pool, active, remaining, phase, partition=partition)
    state.lp = _assemble(state)
    return state


def solve_rmp(state: RmpState, backend: str = "simplex") -> LpSolution:
    state.lp = _assemble(state)
    sol = solve_lp(state.lp, backend)
    state.solution = sol
    if sol.status == OPTIMAL:
        n, m = state.instance.n_tasks, state.instance.n_vehicles
        y = sol.duals
        state.duals = Duals(y[:n].copy(), y[n:n + m].copy(), y[n + m:].copy())
    else:
        state.duals = None
    return sol


def reduced_cost(k: int, c: int, duals: Duals, pool: ColumnPool, instance: Instance,
                 phase: int = 2) -> float:
    """Reduced cost of ``y[k, c]``: cost minus the dual-weighted rows it touches."""
    k = instance.check_vehicle(k)
    if not 0 <= c < len(pool.all):
        raise InvalidInputError(f"unknown column index {c}")
    combo = pool.all[c]
    v = instance.vehicles[k]
    if phase == 1:
        cost = 0.0
    else:
        r, cr, p = v.rent_period, v.cost_rate, v.reimburse_fraction
        cost = r * cr - p * cr * (r - combo.duration)
    return (cost - float(sum(duals.mu[t] for t in combo.tasks)) - float(duals.lam[k])
            - float(duals.gamma[k]) * (combo.duration - v.rent_period))


def reduced_cost_matrix(state: RmpState, columns=None) -> np.ndarray:
    """Reduced costs for every vehicle against ``columns`` (default: whole pool).

    Entries for pairs whose column exceeds the vehicle's rental period are +inf.
    """
    inst = state.instance
    cols = np.arange(len(state.pool.all)) if columns is None else np.asarray(columns, dtype=int)
    L = state.arrays.durations[cols]
    d = state.duals
    covered = state.arrays.incidence[cols] @ d.mu
    r = np.array([v.rent_period for v in inst.vehicles])
    cost = np.zeros((inst.n_vehicles, len(cols))) if state.phase == 1 else _raw_costs(inst, L)
    rc = cost - covered[None, :] - d.lam[:, None] - d.gamma[:, None] * (L[None, :] - r[:, None])
    return np.where(_eligible(inst, L), rc, np.inf)


def price_vehicle(k: int, state: RmpState, pool: ColumnPool = None,
                  tolerance: float = DEFAULT_TOLERANCE) -> PricingResult:
    """Most negative reduced-cost column for vehicle ``k`` among the inactive ones."""
    if state.duals is None:
        raise InvalidInputError("pricing needs duals from an optimal master solve")
    k = state.instance.check_vehicle(k)
    if not state.remaining:
        return PricingResult(k, None, float("inf"))
    rc = reduced_cost_matrix(state, state.remaining)[k]
    pos = int(np.argmin(rc))  # remaining is ascending, so ties go to the lower pool index
    best = float(rc[pos])
    if best < -tolerance:
        return PricingResult(k, int(state.remaining[pos]), best)
    return PricingResult(k, None, best)


def _admit(state: RmpState, columns):
    state.active.extend(columns)
    gone = set(columns)
    state.remaining = [c for c in state.remaining if c not in gone]


def _trace(config: CGConfig, line: str):
    if config.trace is not None:
        config.trace.write(line + "\n")


def relax(state: RmpState, config: CGConfig) -> dict:
    """Run pricing rounds until no vehicle prices out a column.

    Returns per-iteration history.  Raises :class:`InfeasibleError` when
    phase 1 proves the fleet cannot cover every task.
    """
    history = []
    added_total = 0
    it = 0
    while True:
        it += 1
        if it > config.max_iterations:
            raise NonTerminationError(
                f"column generation did not converge in {config.max_iterations} iterations",
                {"history": history, "active": len(state.active)},
            )
        sol = solve_rmp(state, config.backend)
        if sol.status == INFEASIBLE and state.phase == 2:
            state.phase = 1
            _trace(config, f"iter={it} phase=2 status=infeasible switching to phase 1")
            sol = solve_rmp(state, config.backend)
        if sol.status != OPTIMAL:
            raise NonTerminationError(f"master LP returned status {sol.status}", {"history": history})
        if state.phase == 1 and sol.objective <= config.tolerance:
            state.phase = 2
            _trace(config, f"iter={it} phase=1 artificials cleared")
            continue

        added = []
        for k in range(state.instance.n_vehicles):
            res = price_vehicle(k, state, state.pool, config.tolerance)
            if res.column is not None and res.column not in added:
                added.append(res.column)
        history.append({"iteration": it, "phase": state.phase, "active": len(state.active),
                        "lp_objective": sol.objective, "added": len(added)})
        _trace(config, f"iter={it} phase={state.phase} active={len(state.active)} "
                       f"lp_objective={sol.objective!r} added={len(added)}")
        if not added:
            if state.phase == 1:
                art = sol.x[state.n_structural:]
                uncovered = [state.instance.tasks[t].id for t in np.flatnonzero(art > config.tolerance)]
                raise InfeasibleError(
                    f"the fleet cannot cover tasks {uncovered} even fractionally", uncovered
                )
            return {"history": history, "columns_added": added_total, "iterations": it}
        _admit(state, added)
        added_total += len(added)


def _uncovered_in_ip(state: RmpState, config: CGConfig) -> list:
    aux = RmpState(state.instance, state.pool, list(state.active), list(state.remaining), 1,
                   arrays=state.arrays, partition=state.partition)
    lp = _assemble(aux, integer=True)
    res = solve_mip(lp, 0.0, config.backend)
    if res.x is None:
        return [t.id for t in state.instance.tasks]
    art = res.x[aux.n_structural:]
    return [state.instance.tasks[t].id for t in np.flatnonzero(art > 0.5)]


def column_generation_relaxation(instance: Instance, config: CGConfig = None):
    """Build graph and pool, then price the master to LP optimality.

    Returns ``(state, info)``; ``state.duals`` are the final master duals.
    """
    config = config or CGConfig()
    graph = build_graph(instance)
    pool = build_initial_set(graph, instance, config.pool_cap)
    state = build_rmp(pool, instance, partition=config.partition)
    info = relax(state, config)
    return state, info


def _multiply_covered(instance: Instance, pairs) -> list:
    seen = np.zeros(instance.n_tasks, dtype=int)
    for _, combo in pairs:
        seen[list(combo.tasks)] += 1
    return [instance.tasks[t].id for t in np.flatnonzero(seen > 1)]


def run_column_generation(instance: Instance, config: CGConfig = None) -> Solution:
    """Solve by column generation, then an integer master over the active columns."""
    config = config or CGConfig()
    t0 = time.perf_counter()
    state, info = column_generation_relaxation(instance, config)
    pool = state.pool
    lp_obj = state.solution.objective
    min_rc, _ = pricing_certificate(state)

    lp = _assemble(state, integer=True)
    mip = solve_mip(lp, config.gap, config.backend)
    if mip.x is None:
        uncovered = _uncovered_in_ip(state, config)
        raise InfeasibleError(
            f"no integer schedule over the generated columns covers tasks {uncovered}", uncovered
        )
    pairs = []
    for (k, c), j in sorted(state.var_index.items(), key=lambda kv: kv[1]):
        if mip.x[j] > 0.5:
            pairs.append((k, pool.all[c]))
    diagnostics = {
        "iterations": info["iterations"],
        "columns_generated": info["columns_added"],
        "pool_size": len(pool.all),
        "initial_columns": len(pool.initial_ids),
        "active_columns": len(state.active),
        "lp_objective": lp_obj,
        "lp_history": [h["lp_objective"] for h in info["history"]],
        "min_reduced_cost": min_rc,
        "ip_status": mip.status,
        "ip_bound": mip.bound,
        "ip_gap": mip.gap,
        "integrality_gap": (mip.objective - lp_obj) / max(abs(mip.objective), 1e-10),
        "multiply_covered": _multiply_covered(instance, pairs),
        "solve_seconds": time.perf_counter() - t0,
    }
    return Solution.from_pairs(instance, pairs, "cg", diagnostics)


def pricing_certificate(state: RmpState) -> tuple:
    """Smallest reduced cost over every (vehicle, pool column) pair and where it occurs."""
    rc = reduced_cost_matrix(state)
    k, c = np.unravel_index(int(np.argmin(rc)), rc.shape)
    return float(rc[k, c]), (int(k), int(c))
