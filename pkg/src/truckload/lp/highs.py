"""Same contracts as the embedded engine, backed by SciPy's HiGHS bindings."""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp
from scipy.optimize import Bounds, LinearConstraint, linprog, milp

from .program import (EQ, GE, INFEASIBLE, ITERATION_LIMIT, LE, NODE_LIMIT, OPTIMAL, UNBOUNDED,
                      LinearProgram, LpSolution, MipSolution, relative_gap)

_LP_STATUS = {0: OPTIMAL, 1: ITERATION_LIMIT, 2: INFEASIBLE, 3: UNBOUNDED}
_MIP_STATUS = {0: OPTIMAL, 1: NODE_LIMIT, 2: INFEASIBLE, 3: UNBOUNDED}


def _split_rows(lp: LinearProgram):
    senses = np.array(lp.senses)
    A = lp.A.tocsr()
    ub_rows = np.flatnonzero(senses != EQ)
    eq_rows = np.flatnonzero(senses == EQ)
    sign = np.where(senses[ub_rows] == GE, -1.0, 1.0)
    A_ub = sp.diags(sign) @ A[ub_rows] if len(ub_rows) else None
    b_ub = sign * lp.rhs[ub_rows] if len(ub_rows) else None
    A_eq = A[eq_rows] if len(eq_rows) else None
    b_eq = lp.rhs[eq_rows] if len(eq_rows) else None
    return ub_rows, sign, eq_rows, A_ub, b_ub, A_eq, b_eq


def solve_lp_highs(lp: LinearProgram) -> LpSolution:
    ub_rows, sign, eq_rows, A_ub, b_ub, A_eq, b_eq = _split_rows(lp)
    bounds = np.column_stack([lp.lower, lp.upper])
    res = linprog(lp.c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq, bounds=bounds,
                  method="highs-ds")
    status = _LP_STATUS.get(res.status, ITERATION_LIMIT)
    if status != OPTIMAL:
        return LpSolution(status, iterations=int(getattr(res, "nit", 0)))
    duals = np.zeros(lp.n_rows)
    if len(ub_rows):
        duals[ub_rows] = sign * res.ineqlin.marginals
    if len(eq_rows):
        duals[eq_rows] = res.eqlin.marginals
    d = lp.c - lp.A.T @ duals
    return LpSolution(OPTIMAL, np.asarray(res.x), duals, d, float(res.fun), int(res.nit))


def solve_mip_highs(lp: LinearProgram, gap: float = 1e-3, time_limit=None) -> MipSolution:
    lo_rows = np.where(np.isin(lp.senses, (GE, EQ)), lp.rhs, -np.inf)
    hi_rows = np.where(np.isin(lp.senses, (LE, EQ)), lp.rhs, np.inf)
    constraints = [LinearConstraint(lp.A, lo_rows, hi_rows)] if lp.n_rows else []
    options = {"mip_rel_gap": gap, "disp": False}
    if time_limit is not None:
        options["time_limit"] = time_limit
    res = milp(lp.c, constraints=constraints, integrality=lp.integer.astype(int),
               bounds=Bounds(lp.lower, lp.upper), options=options)
    status = _MIP_STATUS.get(res.status, ITERATION_LIMIT)
    if res.x is None:
        return MipSolution(status if status != OPTIMAL else INFEASIBLE)
    x = np.asarray(res.x, dtype=float).copy()
    x[lp.integer] = np.round(x[lp.integer])
    obj = float(lp.c @ x)
    bound = float(getattr(res, "mip_dual_bound", obj))
    if not np.isfinite(bound):
        bound = obj
    bound = min(bound, obj)
    return MipSolution(status, x, obj, bound, relative_gap(obj, bound),
                       int(getattr(res, "mip_node_count", 0) or 0))
