"""Dense bounded-variable revised simplex.

Every row ``a.x (rel) b`` gets a slack ``s`` with ``a.x + s = b``:
``<=`` rows have ``s >= 0``, ``>=`` rows ``s <= 0`` and ``=`` rows ``s = 0``.
Phase 1 adds one artificial per row whose slack cannot absorb the initial
residual.  The basis inverse is kept explicitly and refreshed from scratch
every ``REFACTOR_EVERY`` pivots.

Pricing is Dantzig's largest reduced cost; after ``BLAND_AFTER`` consecutive
degenerate pivots the engine switches to Bland's smallest-index rule until
the objective moves again, which rules out cycling.

:class:`SimplexEngine` also keeps its basis between solves, so branch and
bound can re-optimise a child node with the dual simplex after a bound change.
"""

from __future__ import annotations

import numpy as np

from .program import (EQ, GE, INFEASIBLE, ITERATION_LIMIT, LE, OPTIMAL, UNBOUNDED,
                      LinearProgram, LpSolution)

BASIC, AT_LOWER, AT_UPPER, FREE = 0, 1, 2, 3

FEAS_TOL = 1e-9
OPT_TOL = 1e-9
PIVOT_TOL = 1e-9
REFACTOR_EVERY = 50
BLAND_AFTER = 50


class SimplexEngine:
    def __init__(self, lp: LinearProgram, max_iter=None):
        self.lp = lp
        m, n = lp.n_rows, lp.n_vars
        self.m, self.n = m, n
        A = lp.A.toarray()
        # columns: structural | slack | artificial
        self.M = np.hstack([A, np.eye(m), np.eye(m)])
        self.b = np.asarray(lp.rhs, dtype=float)
        slo = np.array([0.0 if s in (LE, EQ) else -np.inf for s in lp.senses])
        shi = np.array([np.inf if s == LE else 0.0 for s in lp.senses])
        self.lo = np.concatenate([lp.lower, slo, np.zeros(m)])
        self.hi = np.concatenate([lp.upper, shi, np.zeros(m)])
        self.cost = np.concatenate([lp.c, np.zeros(2 * m)])
        self.max_iter = max_iter or max(1000, 20 * (m + n))
        self.head = None
        self.status = None
        self.Binv = None
        self.iterations = 0

    # -- basis bookkeeping -------------------------------------------------

    def snapshot(self):
        if self.head is None:
            return None
        return (self.head.copy(), self.status.copy(), self.M[:, self.n + self.m:].diagonal().copy())

    def restore(self, snap):
        head, status, art_sign = snap
        self.head, self.status = head.copy(), status.copy()
        self._set_art_signs(art_sign)
        self._refactor()

    def _set_art_signs(self, signs):
        base = self.n + self.m
        self.M[np.arange(self.m), base + np.arange(self.m)] = signs

    def _nonbasic_x(self):
        x = np.zeros(len(self.cost))
        st = self.status
        x[st == AT_LOWER] = self.lo[st == AT_LOWER]
        x[st == AT_UPPER] = self.hi[st == AT_UPPER]
        return x

    def _refactor(self):
        self.Binv = np.linalg.inv(self.M[:, self.head])

    def _xB(self):
        return self.Binv @ (self.b - self.M @ self._nonbasic_x())

    def _reduced(self, cost):
        y = cost[self.head] @ self.Binv
        return y, cost - self.M.T @ y

    def _pivot(self, r, j, w):
        row = self.Binv[r] / w[r]
        self.Binv -= np.outer(w, row)
        self.Binv[r] = row
        self.status[self.head[r]] = AT_LOWER  # caller overrides
        self.head[r] = j
        self.status[j] = BASIC

    # -- phase setup -------------------------------------------------------

    def _cold_start(self):
        n, m = self.n, self.m
        N = n + 2 * m
        self.status = np.empty(N, dtype=np.int8)
        lo, hi = self.lo, self.hi
        for j in range(n + m):
            if np.isfinite(lo[j]):
                self.status[j] = AT_LOWER
            elif np.isfinite(hi[j]):
                self.status[j] = AT_UPPER
            else:
                self.status[j] = FREE
        self.status[n + m:] = AT_LOWER
        self.hi[n + m:] = 0.0
        x = self._nonbasic_x()
        resid = self.b - self.M[:, :n] @ x[:n]
        head = np.empty(m, dtype=int)
        signs = np.ones(m)
        need = np.zeros(m, dtype=bool)
        for i in range(m):
            s = n + i
            if lo[s] - FEAS_TOL <= resid[i] <= hi[s] + FEAS_TOL:
                head[i] = s
            else:
                clipped = min(max(resid[i], lo[s]), hi[s])
                self.status[s] = AT_LOWER if clipped == lo[s] else AT_UPPER
                signs[i] = 1.0 if resid[i] > clipped else -1.0
                head[i] = n + m + i
                need[i] = True
        self._set_art_signs(signs)
        self.hi[n + m:][need] = np.inf
        self.head = head
        for s in head:
            self.status[s] = BASIC
        self._refactor()
        return need

    # -- primal simplex ----------------------------------------------------

    def _primal(self, cost):
        bland = False
        streak = 0
        lo, hi = self.lo, self.hi
        movable = hi > lo
        for it in range(self.max_iter):
            if it and it % REFACTOR_EVERY == 0:
                self._refactor()
            self.iterations += 1
            xB = self._xB()
            _, d = self._reduced(cost)
            st = self.status
            can_up = ((st == AT_LOWER) | (st == FREE)) & movable & (d < -OPT_TOL)
            can_dn = ((st == AT_UPPER) | (st == FREE)) & movable & (d > OPT_TOL)
            elig = np.flatnonzero(can_up | can_dn)
            if elig.size == 0:
                return OPTIMAL
            j = int(elig[0]) if bland else int(elig[np.argmax(np.abs(d[elig]))])
            direction = 1.0 if d[j] < 0 else -1.0
            w = self.Binv @ self.M[:, j]
            alpha = direction * w

            t_best = hi[j] - lo[j]
            r_best = -1
            lb, ub = lo[self.head], hi[self.head]
            with np.errstate(divide="ignore", invalid="ignore"):
                dec = alpha > PIVOT_TOL
                inc = alpha < -PIVOT_TOL
                ratio = np.full(self.m, np.inf)
                ratio[dec] = (xB[dec] - lb[dec]) / alpha[dec]
                ratio[inc] = (ub[inc] - xB[inc]) / -alpha[inc]
            ratio = np.maximum(ratio, 0.0)
            rmin = ratio.min() if self.m else np.inf
            if rmin < t_best:
                ties = np.flatnonzero(ratio <= rmin + 1e-12)
                if bland:
                    r_best = int(ties[np.argmin(self.head[ties])])
                else:
                    r_best = int(ties[np.argmax(np.abs(alpha[ties]))])
                t_best = rmin
            if not np.isfinite(t_best):
                return UNBOUNDED

            if t_best <= 1e-12:
                streak += 1
                if streak >= BLAND_AFTER:
                    bland = True
            else:
                streak = 0
                bland = False

            if r_best < 0:
                st[j] = AT_UPPER if direction > 0 else AT_LOWER
                continue
            leaving = self.head[r_best]
            self._pivot(r_best, j, w)
            st[leaving] = AT_LOWER if alpha[r_best] > 0 else AT_UPPER
            if st[leaving] == AT_LOWER and not np.isfinite(lo[leaving]):
                st[leaving] = AT_UPPER
            elif st[leaving] == AT_UPPER and not np.isfinite(hi[leaving]):
                st[leaving] = AT_LOWER
        return ITERATION_LIMIT

    # -- dual simplex ------------------------------------------------------

    def _make_dual_feasible(self, cost) -> bool:
        _, d = self._reduced(cost)
        st, lo, hi = self.status, self.lo, self.hi
        for j in np.flatnonzero(st != BASIC):
            if hi[j] <= lo[j]:
                continue
            if st[j] == AT_LOWER and d[j] < -OPT_TOL:
                if not np.isfinite(hi[j]):
                    return False
                st[j] = AT_UPPER
            elif st[j] == AT_UPPER and d[j] > OPT_TOL:
                if not np.isfinite(lo[j]):
                    return False
                st[j] = AT_LOWER
            elif st[j] == FREE and abs(d[j]) > OPT_TOL:
                return False
        return True

    def _dual(self, cost):
        lo, hi = self.lo, self.hi
        movable = hi > lo
        if self.m == 0:
            return OPTIMAL
        for it in range(self.max_iter):
            if it and it % REFACTOR_EVERY == 0:
                self._refactor()
            self.iterations += 1
            xB = self._xB()
            lb, ub = lo[self.head], hi[self.head]
            below = lb - xB
            above = xB - ub
            infeas = np.maximum(np.maximum(below, above), 0.0)
            r = int(np.argmax(infeas))
            if infeas[r] <= FEAS_TOL:
                return OPTIMAL
            raise_it = below[r] > 0
            _, d = self._reduced(cost)
            alpha = self.Binv[r] @ self.M
            st = self.status
            at_lo = (st == AT_LOWER) & movable
            at_up = (st == AT_UPPER) & movable
            free = (st == FREE) & movable
            if raise_it:
                cand = (at_lo & (alpha < -PIVOT_TOL)) | (at_up & (alpha > PIVOT_TOL))
            else:
                cand = (at_lo & (alpha > PIVOT_TOL)) | (at_up & (alpha < -PIVOT_TOL))
            cand |= free & (np.abs(alpha) > PIVOT_TOL)
            idx = np.flatnonzero(cand)
            if idx.size == 0:
                return INFEASIBLE
            ratios = np.abs(d[idx]) / np.abs(alpha[idx])
            best = ratios.min()
            ties = idx[ratios <= best + 1e-12]
            j = int(ties[np.argmax(np.abs(alpha[ties]))])
            w = self.Binv @ self.M[:, j]
            leaving = self.head[r]
            self._pivot(r, j, w)
            st[leaving] = AT_LOWER if raise_it else AT_UPPER
        return ITERATION_LIMIT

    # -- public ------------------------------------------------------------

    def solve(self, lower=None, upper=None, warm=False) -> LpSolution:
        """Optimise with the given structural bounds.

        With ``warm=True`` and a stored basis the dual simplex is tried first;
        it falls back to a cold two-phase solve whenever the stored basis is
        not dual feasible or the dual pass stalls.
        """
        n, m = self.n, self.m
        if lower is not None:
            self.lo[:n] = lower
        if upper is not None:
            self.hi[:n] = upper
        self.iterations = 0
        status = None
        if warm and self.head is not None:
            self._refactor()
            self.hi[n + m:] = 0.0
            for j in range(n):
                if self.status[j] == FREE and (np.isfinite(self.lo[j]) or np.isfinite(self.hi[j])):
                    self.status[j] = AT_LOWER if np.isfinite(self.lo[j]) else AT_UPPER
                elif self.status[j] == AT_LOWER and not np.isfinite(self.lo[j]):
                    self.status[j] = AT_UPPER if np.isfinite(self.hi[j]) else FREE
                elif self.status[j] == AT_UPPER and not np.isfinite(self.hi[j]):
                    self.status[j] = AT_LOWER if np.isfinite(self.lo[j]) else FREE
            if self._make_dual_feasible(self.cost):
                status = self._dual(self.cost)
                if status == OPTIMAL:
                    status = self._primal(self.cost)
                elif status == ITERATION_LIMIT:
                    status = None
        if status is None:
            status = self._two_phase()
        return self._result(status)

    def _two_phase(self):
        n, m = self.n, self.m
        need = self._cold_start()
        if need.any():
            phase1 = np.zeros(len(self.cost))
            phase1[n + m:][need] = 1.0
            st = self._primal(phase1)
            if st == ITERATION_LIMIT:
                return st
            xB = self._xB()
            infeas = float(phase1[self.head] @ xB)
            if infeas > 1e-7 * (1 + np.abs(self.b).max(initial=0)):
                return INFEASIBLE
            self.hi[n + m:] = 0.0
            self._drive_out_artificials()
        return self._primal(self.cost)

    def _drive_out_artificials(self):
        n, m = self.n, self.m
        for r in range(m):
            if self.head[r] < n + m:
                continue
            row = self.Binv[r] @ self.M[:, : n + m]
            row[self.status[: n + m] == BASIC] = 0.0
            j = int(np.argmax(np.abs(row)))
            if abs(row[j]) > 1e-7:
                w = self.Binv @ self.M[:, j]
                leaving = self.head[r]
                self._pivot(r, j, w)
                self.status[leaving] = AT_LOWER
        self._refactor()

    def _result(self, status) -> LpSolution:
        n = self.n
        if status != OPTIMAL:
            return LpSolution(status, iterations=self.iterations)
        self._refactor()
        x = self._nonbasic_x()
        x[self.head] = self._xB()
        y, d = self._reduced(self.cost)
        xs = x[:n].copy()
        # snap values within rounding distance of a bound
        for bnd in (self.lo[:n], self.hi[:n]):
            near = np.isfinite(bnd) & (np.abs(xs - bnd) <= 1e-11 * (1 + np.abs(bnd)))
            xs[near] = bnd[near]
        return LpSolution(
            OPTIMAL, xs, y.copy(), d[:n].copy(), float(self.lp.c @ xs), self.iterations,
            self.snapshot(),
        )


def solve_lp_simplex(lp: LinearProgram, max_iter=None) -> LpSolution:
    return SimplexEngine(lp, max_iter).solve()
