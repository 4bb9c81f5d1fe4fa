"""Linear programs in row form, their solutions, and an optimality certificate check."""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.sparse as sp

from ..errors import InvalidInputError

LE, GE, EQ = "<=", ">=", "="
SENSES = (LE, GE, EQ)

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"
ITERATION_LIMIT = "iteration-limit"
NODE_LIMIT = "node-limit"


@dataclass(frozen=True, eq=False)
class LinearProgram:
    """``min c.x`` subject to ``A x (<=|>=|=) rhs`` and ``lower <= x <= upper``.

    ``A`` is stored as a CSR matrix.  ``integer`` flags the variables that
    must take integral values in a MIP solve; LP solves ignore it.
    """

    c: np.ndarray
    A: sp.csr_matrix
    senses: tuple
    rhs: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    integer: np.ndarray
    var_names: Optional[tuple] = None
    row_names: Optional[tuple] = None

    def __post_init__(self):
        n = len(self.c)
        m = len(self.rhs)
        if self.A.shape != (m, n):
            raise InvalidInputError(f"constraint matrix is {self.A.shape}, expected {(m, n)}")
        if len(self.senses) != m or any(s not in SENSES for s in self.senses):
            raise InvalidInputError("one relation (<=, >=, =) is required per row")
        for name, arr in (("lower", self.lower), ("upper", self.upper), ("integer", self.integer)):
            if len(arr) != n:
                raise InvalidInputError(f"{name} has length {len(arr)}, expected {n}")
        if np.any(self.lower > self.upper):
            raise InvalidInputError("variable bounds must satisfy lower <= upper")
        if np.any(np.isnan(self.c)) or np.any(np.isnan(self.rhs)):
            raise InvalidInputError("NaN in objective or right-hand side")

    @property
    def n_vars(self) -> int:
        return len(self.c)

    @property
    def n_rows(self) -> int:
        return len(self.rhs)

    @classmethod
    def from_dense(cls, c, A, senses, rhs, lower=None, upper=None, integer=None, **names):
        c = np.asarray(c, dtype=float)
        n = len(c)
        A = np.asarray(A, dtype=float)
        if A.size == 0:
            A = A.reshape(len(rhs), n)
        if A.ndim != 2:
            raise InvalidInputError(f"constraint matrix must be 2-D, got shape {A.shape}")
        lower = np.zeros(n) if lower is None else np.asarray(lower, dtype=float)
        upper = np.full(n, np.inf) if upper is None else np.asarray(upper, dtype=float)
        integer = np.zeros(n, bool) if integer is None else np.asarray(integer, dtype=bool)
        return cls(c, sp.csr_matrix(A), tuple(senses), np.asarray(rhs, dtype=float),
                   lower, upper, integer, **names)

    def with_bounds(self, lower, upper) -> "LinearProgram":
        return LinearProgram(self.c, self.A, self.senses, self.rhs, np.asarray(lower, float),
                             np.asarray(upper, float), self.integer, self.var_names, self.row_names)

    def row_activity(self, x) -> np.ndarray:
        return self.A @ np.asarray(x, dtype=float)

    def max_violation(self, x) -> float:
        """Largest bound or row violation of ``x`` (0 when feasible)."""
        x = np.asarray(x, dtype=float)
        act = self.row_activity(x)
        viol = [0.0]
        for s, a, b in zip(self.senses, act, self.rhs):
            if s == LE:
                viol.append(a - b)
            elif s == GE:
                viol.append(b - a)
            else:
                viol.append(abs(a - b))
        viol.append(float(np.max(self.lower - x, initial=0.0)))
        viol.append(float(np.max(x - self.upper, initial=0.0)))
        return max(viol)


class LpBuilder:
    """Incremental construction of a :class:`LinearProgram` by named variables and rows."""

    def __init__(self):
        self.c, self.lower, self.upper, self.integer, self.var_names = [], [], [], [], []
        self.rows, self.cols, self.vals = [], [], []
        self.senses, self.rhs, self.row_names = [], [], []

    def add_var(self, name, cost=0.0, lower=0.0, upper=np.inf, integer=False) -> int:
        self.c.append(float(cost))
        self.lower.append(float(lower))
        self.upper.append(float(upper))
        self.integer.append(bool(integer))
        self.var_names.append(name)
        return len(self.c) - 1

    def add_row(self, terms, sense, rhs, name=None) -> int:
        r = len(self.rhs)
        for j, v in terms:
            if v != 0:
                self.rows.append(r)
                self.cols.append(j)
                self.vals.append(float(v))
        self.senses.append(sense)
        self.rhs.append(float(rhs))
        self.row_names.append(name if name is not None else f"r{r}")
        return r

    def build(self) -> LinearProgram:
        m, n = len(self.rhs), len(self.c)
        A = sp.csr_matrix((self.vals, (self.rows, self.cols)), shape=(m, n))
        A.sum_duplicates()
        return LinearProgram(
            np.array(self.c), A, tuple(self.senses), np.array(self.rhs),
            np.array(self.lower), np.array(self.upper), np.array(self.integer, dtype=bool),
            tuple(self.var_names), tuple(self.row_names),
        )


@dataclass
class LpSolution:
    """Primal point plus dual certificate.

    Duals follow the convention ``objective = rhs . duals + sum_j d_j x_j``
    over variables resting at a nonzero bound, where ``d`` are the reduced
    costs ``c - A^T duals``.  In a minimisation, ``>=`` rows get duals
    ``>= 0`` and ``<=`` rows get duals ``<= 0``.
    """

    status: str
    x: Optional[np.ndarray] = None
    duals: Optional[np.ndarray] = None
    reduced_costs: Optional[np.ndarray] = None
    objective: float = float("nan")
    iterations: int = 0
    basis: Optional[object] = field(default=None, repr=False)

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


@dataclass
class MipSolution:
    status: str
    x: Optional[np.ndarray] = None
    objective: float = float("nan")
    bound: float = float("nan")
    gap: float = float("nan")
    nodes: int = 0

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


def relative_gap(incumbent: float, bound: float) -> float:
    if not np.isfinite(incumbent):
        return float("inf")
    return max(0.0, incumbent - bound) / max(abs(incumbent), 1e-10)


def certificate(lp: LinearProgram, sol: LpSolution) -> dict:
    """Measure how well ``sol`` certifies optimality of ``lp``.

    Returns the worst primal violation, worst dual sign violation, the
    strong-duality gap, and the worst complementary-slackness violation
    (row slack times |dual|, and |reduced cost| of variables strictly
    inside their bounds).
    """
    x, y = sol.x, sol.duals
    d = lp.c - lp.A.T @ y
    act = lp.A @ x
    slack = lp.rhs - act

    dual_viol = 0.0
    for s, yi in zip(lp.senses, y):
        if s == GE:
            dual_viol = max(dual_viol, -yi)
        elif s == LE:
            dual_viol = max(dual_viol, yi)
    lo_fin, up_fin = np.isfinite(lp.lower), np.isfinite(lp.upper)
    # d > 0 needs a finite lower bound to rest on, d < 0 a finite upper bound
    dual_viol = max(dual_viol, float(np.max(np.where(~lo_fin, np.maximum(d, 0), 0), initial=0)))
    dual_viol = max(dual_viol, float(np.max(np.where(~up_fin, np.maximum(-d, 0), 0), initial=0)))

    bound_term = np.where(d > 0, np.where(lo_fin, lp.lower, 0.0), np.where(up_fin, lp.upper, 0.0))
    dual_obj = float(lp.rhs @ y + d @ bound_term)
    primal_obj = float(lp.c @ x)

    tol = 1e-9
    at_lo = np.abs(x - lp.lower) <= tol * (1 + np.abs(lp.lower))
    at_up = np.abs(x - lp.upper) <= tol * (1 + np.abs(lp.upper))
    inside = ~(at_lo | at_up)
    cs_var = float(np.max(np.abs(d[inside]), initial=0.0))
    wrong_side = np.where(at_lo & ~at_up, np.maximum(-d, 0), 0) + np.where(at_up & ~at_lo, np.maximum(d, 0), 0)
    cs_var = max(cs_var, float(np.max(wrong_side, initial=0.0)))
    cs_row = float(np.max(np.abs(slack * y), initial=0.0))

    return {
        "primal_violation": lp.max_violation(x),
        "dual_violation": dual_viol,
        "primal_objective": primal_obj,
        "dual_objective": dual_obj,
        "duality_gap": abs(primal_obj - dual_obj),
        "complementary_slackness": max(cs_var, cs_row),
    }


def _fmt(v: float) -> str:
    return repr(float(v)) if np.isfinite(v) else ("inf" if v > 0 else "-inf")


def dump_lp(lp: LinearProgram, out=None) -> str:
    """Render ``lp`` as plain text, one constraint per line.

    Layout::

        minimize: +3.0 x0 -1.0 x1
        r0: +1.0 x0 +1.0 x1 <= 4.0
        bound x0: 0.0 <= x0 <= inf
        integer: x0 x1

    Variable and row names come from the program when present.
    """
    vn = lp.var_names or tuple(f"x{j}" for j in range(lp.n_vars))
    rn = lp.row_names or tuple(f"r{i}" for i in range(lp.n_rows))
    buf = io.StringIO()

    def terms(pairs):
        return " ".join(f"{'+' if v >= 0 else '-'}{_fmt(abs(v))} {vn[j]}" for j, v in pairs) or "0"

    buf.write("minimize: " + terms((j, v) for j, v in enumerate(lp.c) if v != 0) + "\n")
    A = lp.A.tocsr()
    for i in range(lp.n_rows):
        lo, hi = A.indptr[i], A.indptr[i + 1]
        pairs = zip(A.indices[lo:hi], A.data[lo:hi])
        buf.write(f"{rn[i]}: {terms(pairs)} {lp.senses[i]} {_fmt(lp.rhs[i])}\n")
    for j in range(lp.n_vars):
        buf.write(f"bound {vn[j]}: {_fmt(lp.lower[j])} <= {vn[j]} <= {_fmt(lp.upper[j])}\n")
    ints = [vn[j] for j in np.flatnonzero(lp.integer)]
    if ints:
        buf.write("integer: " + " ".join(ints) + "\n")
    text = buf.getvalue()
    if out is not None:
        out.write(text)
    return text
