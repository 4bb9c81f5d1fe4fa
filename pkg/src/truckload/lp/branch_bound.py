"""LP-based branch and bound on top of :class:`SimplexEngine`.

Search dives depth first (rounding direction of the branching variable
first) and, when a dive ends, resumes from the open node with the best
bound.  Branching picks the most fractional integer variable, lowest index
on ties.  Child nodes are re-optimised with the dual simplex from the
parent's basis.
"""

from __future__ import annotations

import heapq
import itertools
import math

import numpy as np

from .program import (INFEASIBLE, ITERATION_LIMIT, NODE_LIMIT, OPTIMAL, UNBOUNDED,
                      LinearProgram, MipSolution, relative_gap)
from .simplex import SimplexEngine

INT_TOL = 1e-6


def _branch_var(x, integer):
    frac = np.abs(x - np.round(x))
    frac[~integer] = 0.0
    j = int(np.argmax(frac))  # argmax returns the lowest index among ties
    return (j if frac[j] > INT_TOL else None), x[j]


def _polish(lp: LinearProgram, x):
    y = x.copy()
    y[lp.integer] = np.round(y[lp.integer])
    if lp.max_violation(y) <= 1e-6:
        return y
    return x


def branch_and_bound(lp: LinearProgram, gap: float = 1e-3, max_nodes=None) -> MipSolution:
    if gap < 0:
        raise ValueError("gap must be >= 0")
    engine = SimplexEngine(lp)
    integer = lp.integer
    lower0 = lp.lower.copy()
    upper0 = lp.upper.copy()
    lower0[integer] = np.ceil(lower0[integer] - INT_TOL)
    upper0[integer] = np.floor(upper0[integer] + INT_TOL)
    if np.any(lower0 > upper0):
        return MipSolution(INFEASIBLE)

    best_x, best_obj = None, math.inf
    pruned_bound = math.inf  # best bound among nodes discarded by the gap rule
    heap = []
    seq = itertools.count()
    nodes = 0
    hit_limit = False

    def cutoff():
        if best_x is None:
            return math.inf
        return best_obj - max(1e-9 * (1 + abs(best_obj)), gap * abs(best_obj))

    current = (lower0, upper0, None, -math.inf)
    while True:
        if current is None:
            while heap and heap[0][0] >= cutoff():
                bnd = heapq.heappop(heap)[0]
                if bnd < best_obj:
                    pruned_bound = min(pruned_bound, bnd)
            if not heap:
                break
            _, _, current = heapq.heappop(heap)
        if max_nodes is not None and nodes >= max_nodes:
            heapq.heappush(heap, (current[3], next(seq), current))
            hit_limit = True
            break
        lo, hi, snap, parent_bound = current
        if parent_bound >= cutoff():
            if parent_bound < best_obj:
                pruned_bound = min(pruned_bound, parent_bound)
            current = None
            continue
        warm = snap is not None
        if warm:
            engine.restore(snap)
        sol = engine.solve(lo, hi, warm=warm)
        nodes += 1
        if sol.status == INFEASIBLE:
            current = None
            continue
        if sol.status == UNBOUNDED:
            return MipSolution(UNBOUNDED, nodes=nodes)
        if sol.status == ITERATION_LIMIT:
            return MipSolution(ITERATION_LIMIT, best_x, best_obj, nodes=nodes)
        if sol.objective >= cutoff():
            if sol.objective < best_obj:
                pruned_bound = min(pruned_bound, sol.objective)
            current = None
            continue
        j, v = _branch_var(sol.x, integer)
        if j is None:
            x = _polish(lp, sol.x)
            best_x, best_obj = x, float(lp.c @ x)
            current = None
            continue
        down_hi = hi.copy()
        down_hi[j] = math.floor(v)
        up_lo = lo.copy()
        up_lo[j] = math.ceil(v)
        down = (lo, down_hi, sol.basis, sol.objective)
        up = (up_lo, hi, sol.basis, sol.objective)
        first, second = (down, up) if v - math.floor(v) < 0.5 else (up, down)
        heapq.heappush(heap, (sol.objective, next(seq), second))
        current = first

    if best_x is None:
        return MipSolution(NODE_LIMIT if hit_limit else INFEASIBLE, nodes=nodes)
    open_bound = min((h[0] for h in heap), default=math.inf)
    bound = min(best_obj, pruned_bound, open_bound)
    status = NODE_LIMIT if hit_limit else OPTIMAL
    return MipSolution(status, best_x, best_obj, bound, relative_gap(best_obj, bound), nodes)
