"""Arc-based MILP over the pull-out / deadhead / pull-in network, plus an exhaustive oracle.

Variables are ``Y[k, arc]`` (binary) for every vehicle and arc of the
network source -> task (pull-out), task -> task (deadhead; exactly the
compatibility-graph arcs), task -> sink (pull-in), and tour start/finish
times ``ts[k]``, ``tf[k]``.

Rows, per the model being benchmarked:

* each task entered exactly once over all vehicles
* per vehicle and task: flow in equals flow out
* at most one pull-out per vehicle, pull-outs equal pull-ins per vehicle
* big-M rows pinning ``ts[k]`` to the start of the first task and
  ``tf[k]`` to the delivery time of the last
* ``tf[k] - ts[k] <= r_k * (vehicle k used)``
* ``tf[k] - ts[k] >= 0``

The timing rows on deadhead arcs are not emitted: delivery times are data,
so they could only forbid arcs, and the arc set is already filtered by the
compatibility rule.  The last row keeps an unused vehicle from reporting a
negative tour length (which the big-M rows alone would allow and the
objective would reward).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import InfeasibleError, ResourceLimitError
from .graph import CompatGraph, build_graph
from .lp import EQ, GE, LE, LinearProgram, LpBuilder, solve_mip
from .model import Instance, Solution, TaskCombination, assignment_cost, tour_duration

BRUTE_FORCE_LIMIT = 8


@dataclass(frozen=True)
class ArcNetwork:
    n: int
    deadhead: tuple        # (i, j) pairs, the compatibility arcs
    big_m: float

    @property
    def pull_out(self):
        return tuple(("D", t) for t in range(self.n))

    @property
    def pull_in(self):
        return tuple((t, "S") for t in range(self.n))

    @property
    def arcs_per_vehicle(self) -> int:
        return 2 * self.n + len(self.deadhead)


def build_network(instance: Instance, graph: CompatGraph) -> ArcNetwork:
    return ArcNetwork(instance.n_tasks, tuple(graph.arcs()),
                      float(instance.delivery_times.max()) if instance.n_tasks else 0.0)


@dataclass
class ArcModel:
    lp: LinearProgram
    network: ArcNetwork
    po: np.ndarray   # po[k, t] -> variable index
    pi: np.ndarray   # pi[k, t]
    dh: np.ndarray   # dh[k, a] for a indexing network.deadhead
    ts: np.ndarray   # ts[k]
    tf: np.ndarray   # tf[k]


def build_arc_model(instance: Instance, graph: CompatGraph,
                    symmetry_breaking: bool = False, tour_length_rows: bool = False,
                    fix_long_arcs: bool = False) -> ArcModel:
    """Assemble the MILP.

    ``symmetry_breaking`` orders interchangeable vehicles (same rent period,
    rate and reimbursement) so a vehicle is used only if its predecessor in
    the class is.  ``tour_length_rows`` adds, per vehicle,
    ``tf - ts = sum(pi_j * pull-out_j) + sum((T_j - T_i) * deadhead_ij)``,
    which every integer solution satisfies and which makes the LP bound
    far tighter than the big-M rows alone.  ``fix_long_arcs`` fixes to 0
    every arc that alone makes a tour longer than the vehicle's rent period.
    None of the three changes the optimum.
    """
    net = build_network(instance, graph)
    n, m = instance.n_tasks, instance.n_vehicles
    M = net.big_m
    T, pi_t = instance.delivery_times, instance.durations
    b = LpBuilder()
    po = np.empty((m, n), dtype=int)
    pin = np.empty((m, n), dtype=int)
    dh = np.empty((m, len(net.deadhead)), dtype=int)
    ts = np.empty(m, dtype=int)
    tf = np.empty(m, dtype=int)
    for k, v in enumerate(instance.vehicles):
        fixed = v.rent_period * v.cost_rate * (1 - v.reimburse_fraction)
        for t in range(n):
            po[k, t] = b.add_var(f"Y[D,{t},{k}]", fixed, 0, 1, integer=True)
        for a, (i, j) in enumerate(net.deadhead):
            dh[k, a] = b.add_var(f"Y[{i},{j},{k}]", 0.0, 0, 1, integer=True)
        for t in range(n):
            pin[k, t] = b.add_var(f"Y[{t},S,{k}]", 0.0, 0, 1, integer=True)
    for k, v in enumerate(instance.vehicles):
        rate = v.cost_rate * v.reimburse_fraction
        ts[k] = b.add_var(f"ts[{k}]", -rate)
        tf[k] = b.add_var(f"tf[{k}]", rate)

    into = [[] for _ in range(n)]
    out = [[] for _ in range(n)]
    for a, (i, j) in enumerate(net.deadhead):
        out[i].append(a)
        into[j].append(a)

    for j in range(n):
        terms = [(po[k, j], 1) for k in range(m)]
        terms += [(dh[k, a], 1) for k in range(m) for a in into[j]]
        b.add_row(terms, EQ, 1, f"enter[{j}]")
    for k in range(m):
        for j in range(n):
            terms = [(po[k, j], 1)] + [(dh[k, a], 1) for a in into[j]]
            terms += [(pin[k, j], -1)] + [(dh[k, a], -1) for a in out[j]]
            b.add_row(terms, EQ, 0, f"flow[{j},{k}]")
    for k in range(m):
        b.add_row([(po[k, t], 1) for t in range(n)], LE, 1, f"one_start[{k}]")
        b.add_row([(po[k, t], 1) for t in range(n)] + [(pin[k, t], -1) for t in range(n)],
                  EQ, 0, f"start_end[{k}]")
    for k in range(m):
        for j in range(n):
            b.add_row([(ts[k], 1), (po[k, j], -M)], GE, T[j] - pi_t[j] - M, f"ts_lo[{j},{k}]")
            b.add_row([(ts[k], 1), (po[k, j], M)], LE, T[j] - pi_t[j] + M, f"ts_hi[{j},{k}]")
        for i in range(n):
            b.add_row([(tf[k], 1), (pin[k, i], -M)], GE, T[i] - M, f"tf_lo[{i},{k}]")
            b.add_row([(tf[k], 1), (pin[k, i], M)], LE, T[i] + M, f"tf_hi[{i},{k}]")
    for k, v in enumerate(instance.vehicles):
        b.add_row([(tf[k], 1), (ts[k], -1)] + [(po[k, t], -v.rent_period) for t in range(n)],
                  LE, 0, f"rent[{k}]")
        b.add_row([(tf[k], 1), (ts[k], -1)], GE, 0, f"nonneg_len[{k}]")
    if tour_length_rows:
        for k in range(m):
            terms = [(tf[k], 1), (ts[k], -1)] + [(po[k, t], -pi_t[t]) for t in range(n)]
            terms += [(dh[k, a], -(T[j] - T[i])) for a, (i, j) in enumerate(net.deadhead)]
            b.add_row(terms, EQ, 0, f"tour_len[{k}]")
    if symmetry_breaking:
        for k in range(1, m):
            if instance.vehicles[k].rental_class == instance.vehicles[k - 1].rental_class:
                b.add_row([(po[k, t], 1) for t in range(n)] + [(po[k - 1, t], -1) for t in range(n)],
                          LE, 0, f"sym[{k}]")
    lp = b.build()
    if fix_long_arcs:
        ub = lp.upper.copy()
        for k, v in enumerate(instance.vehicles):
            r = v.rent_period + 1e-9
            ub[po[k, pi_t > r]] = 0.0
            ub[pin[k, pi_t > r]] = 0.0
            for a, (i, j) in enumerate(net.deadhead):
                if T[j] - T[i] + pi_t[i] > r:
                    ub[dh[k, a]] = 0.0
        lp = lp.with_bounds(lp.lower, ub)
    return ArcModel(lp, net, po, pin, dh, ts, tf)


def extract_tours(model: ArcModel, x) -> list:
    """Follow the arcs with ``Y = 1`` from each used pull-out; returns ``(k, path)`` pairs."""
    net = model.network
    tours = []
    y = np.round(x).astype(int)
    for k in range(model.po.shape[0]):
        starts = [t for t in range(net.n) if y[model.po[k, t]] == 1]
        if not starts:
            continue
        if len(starts) != 1:
            raise InfeasibleError(f"vehicle {k} has {len(starts)} pull-out arcs")
        path = [starts[0]]
        nxt = {i: j for a, (i, j) in enumerate(net.deadhead) if y[model.dh[k, a]] == 1}
        while path[-1] in nxt:
            path.append(nxt[path[-1]])
            if len(path) > net.n:
                raise InfeasibleError(f"vehicle {k} tour does not terminate")
        if y[model.pi[k, path[-1]]] != 1:
            raise InfeasibleError(f"vehicle {k} tour does not end in a pull-in arc")
        tours.append((k, path))
    return tours


def _uncoverable(instance: Instance) -> list:
    longest = max((v.rent_period for v in instance.vehicles), default=-math.inf)
    return [t.id for t in instance.tasks if t.duration > longest + 1e-9]


def solve_exact(instance: Instance, gap: float = 1e-3, backend: str = "simplex",
                symmetry_breaking: bool = False, tour_length_rows: bool = True) -> Solution:
    """Solve the arc-based MILP to the given relative gap.

    The tour-length rows of :func:`build_arc_model` are on by default; with
    both options off this is the bare formulation.  Symmetry rows are off by
    default because they slow HiGHS down (it detects the symmetry itself).
    """
    t0 = time.perf_counter()
    graph = build_graph(instance)
    bad = _uncoverable(instance)
    if bad:
        raise InfeasibleError(f"no vehicle's rent period fits tasks {bad}", bad)
    model = build_arc_model(instance, graph, symmetry_breaking, tour_length_rows)
    res = solve_mip(model.lp, gap, backend)
    if res.x is None:
        raise InfeasibleError(f"arc model is {res.status}: the fleet cannot serve every task")
    pairs = [(k, TaskCombination.from_path(path, instance)) for k, path in extract_tours(model, res.x)]
    diagnostics = {
        "mip_status": res.status,
        "mip_objective": res.objective,
        "mip_bound": res.bound,
        "mip_gap": res.gap,
        "nodes": res.nodes,
        "binaries": int(model.lp.integer.sum()),
        "rows": model.lp.n_rows,
        "tour_times": {int(k): (float(res.x[model.ts[k]]), float(res.x[model.tf[k]]))
                       for k in range(instance.n_vehicles)},
        "solve_seconds": time.perf_counter() - t0,
    }
    return Solution.from_pairs(instance, pairs, "exact", diagnostics)


def chain_partitions(instance: Instance, graph: CompatGraph):
    """Yield every partition of the tasks into compatibility chains, once each.

    Tasks are placed in delivery-time order; each either opens a new chain or
    extends a chain whose last task it may follow.  Because arcs strictly
    increase delivery time, a chain's order is forced, so no partition
    repeats.
    """
    order = sorted(range(instance.n_tasks), key=lambda t: (instance.tasks[t].delivery_time, t))
    blocks = []

    def place(pos):
        if pos == len(order):
            yield [tuple(b) for b in blocks]
            return
        t = order[pos]
        for b in blocks:
            if graph.has_arc(b[-1], t):
                b.append(t)
                yield from place(pos + 1)
                b.pop()
        blocks.append([t])
        yield from place(pos + 1)
        blocks.pop()

    yield from place(0)


def brute_force(instance: Instance, limit: int = BRUTE_FORCE_LIMIT) -> Solution:
    """Cheapest schedule by exhaustive search; no LP involved.

    Every chain partition is tried, and for each one every way of handing
    the chains to distinct vehicles.  Vehicles with identical rent period,
    rate and reimbursement are interchangeable, so the hand-out is searched
    over vehicle classes with per-class counts.
    """
    if instance.n_tasks > limit:
        raise ResourceLimitError(
            f"brute force is limited to {limit} tasks; instance has {instance.n_tasks}"
        )
    graph = build_graph(instance)
    classes = {}
    for k, v in enumerate(instance.vehicles):
        classes.setdefault(v.rental_class, []).append(k)
    keys = list(classes)
    counts0 = tuple(len(classes[c]) for c in keys)
    reps = [instance.vehicles[classes[c][0]] for c in keys]

    best_cost, best = math.inf, None
    for blocks in chain_partitions(instance, graph):
        if len(blocks) > instance.n_vehicles:
            continue
        lengths = [tour_duration(b, instance) for b in blocks]

        @lru_cache(maxsize=None)
        def cheapest(i, counts):
            if i == len(blocks):
                return 0.0, ()
            out = (math.inf, ())
            for ci, v in enumerate(reps):
                if counts[ci] == 0 or lengths[i] > v.rent_period + 1e-9:
                    continue
                rest, plan = cheapest(i + 1, counts[:ci] + (counts[ci] - 1,) + counts[ci + 1:])
                total = assignment_cost(v, lengths[i]) + rest
                if total < out[0]:
                    out = (total, (ci,) + plan)
            return out

        cost, plan = cheapest(0, counts0)
        if cost < best_cost - 1e-12:
            used = {c: 0 for c in range(len(keys))}
            pairs = []
            for blk, ci in zip(blocks, plan):
                k = classes[keys[ci]][used[ci]]
                used[ci] += 1
                pairs.append((k, TaskCombination.from_path(blk, instance)))
            best_cost, best = cost, pairs
    if best is None:
        bad = _uncoverable(instance)
        raise InfeasibleError("no assignment of chains to vehicles covers every task", bad)
    return Solution.from_pairs(instance, best, "brute")
