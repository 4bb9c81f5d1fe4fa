"""Linear and mixed-integer solving.

``solve_lp`` / ``solve_mip`` run the embedded simplex and branch and bound
by default; ``backend="highs"`` routes the same call to SciPy's HiGHS.
"""

from .branch_bound import branch_and_bound
from .highs import solve_lp_highs, solve_mip_highs
from .program import (EQ, GE, INFEASIBLE, ITERATION_LIMIT, LE, NODE_LIMIT, OPTIMAL, UNBOUNDED,
                      LinearProgram, LpBuilder, LpSolution, MipSolution, certificate, dump_lp,
                      relative_gap)
from .simplex import SimplexEngine, solve_lp_simplex

BACKENDS = ("simplex", "highs")


def _check_backend(backend):
    if backend not in BACKENDS:
        raise ValueError(f"unknown LP backend {backend!r}; choose from {BACKENDS}")


def solve_lp(lp: LinearProgram, backend: str = "simplex") -> LpSolution:
    _check_backend(backend)
    if backend == "highs":
        return solve_lp_highs(lp)
    return solve_lp_simplex(lp)


def solve_mip(lp: LinearProgram, gap: float = 1e-3, backend: str = "simplex",
              max_nodes=None) -> MipSolution:
    _check_backend(backend)
    if gap < 0:
        raise ValueError("gap must be >= 0")
    if backend == "highs":
        return solve_mip_highs(lp, gap)
    return branch_and_bound(lp, gap, max_nodes)


__all__ = [
    "BACKENDS", "EQ", "GE", "INFEASIBLE", "ITERATION_LIMIT", "LE", "NODE_LIMIT", "OPTIMAL",
    "UNBOUNDED", "LinearProgram", "LpBuilder", "LpSolution", "MipSolution", "SimplexEngine",
    "branch_and_bound", "certificate", "dump_lp", "relative_gap", "solve_lp", "solve_mip",
]
