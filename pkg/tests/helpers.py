"""Instance builders and independent oracles shared by the test modules.

The oracles deliberately avoid the package's own algorithms: paths are
counted by dynamic programming instead of DFS, LPs are solved by vertex
enumeration, and IPs by trying every 0/1 vector.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from truckload.instances import FleetClass, GenParams, generate
from truckload.model import Instance, Location, Task, Vehicle

SMALL_FLEET = (FleetClass(3, 480.0, 1.0, 0.5), FleetClass(3, 240.0, 0.8, 0.5))


def make_instance(T, pi, deadhead=None, epsilon=10.0, vehicles=((100.0, 1.0, 0.5),)):
    """Instance from plain lists; deadhead defaults to all zeros."""
    n = len(T)
    if deadhead is None:
        deadhead = [[0.0] * n for _ in range(n)]
    tasks = [Task(i, Location(f"C{i}", 0.0, 0.0), Location(f"R{i}", 0.0, 0.0), float(T[i]),
                  float(pi[i])) for i in range(n)]
    fleet = [Vehicle(k, *map(float, v)) for k, v in enumerate(vehicles)]
    return Instance(tuple(tasks), tuple(fleet), float(epsilon), deadhead)


def chain_instance():
    """a -> b -> c with the skip arc a -> c excluded by the idle cap."""
    return make_instance([10, 14, 18], [2, 3, 3], epsilon=2.0)


def small_random(seed, n=None, fleet=SMALL_FLEET, **kw):
    n = n if n is not None else 4 + seed % 5
    kw.setdefault("horizon", 240.0)
    kw.setdefault("box", 60.0)
    return generate(GenParams(n, fleet=fleet, seed=seed, **kw))


def count_paths(succ) -> int:
    """Elementary paths of a DAG, all lengths, by DP over a reverse topological order."""
    n = len(succ)
    memo = {}

    def from_node(i):
        if i not in memo:
            memo[i] = 1 + sum(from_node(j) for j in succ[i])
        return memo[i]

    return sum(from_node(i) for i in range(n))


def compat_pairs(instance) -> set:
    """Ordered pairs satisfying the timing rule, checked directly from task data."""
    out = set()
    T, pi, d = instance.delivery_times, instance.durations, instance.deadhead_matrix
    for i, j in itertools.permutations(range(instance.n_tasks), 2):
        lo = T[i] + d[i, j] + pi[j]
        if lo - 1e-9 <= T[j] <= lo + instance.epsilon + 1e-9:
            out.add((i, j))
    return out


def lp_vertex_optimum(c, A, senses, b):
    """Minimum of ``c x`` over ``{A x (senses) b, x >= 0}`` by enumerating vertices.

    Returns ``None`` if infeasible.  Callers must ensure boundedness.
    """
    m, n = A.shape
    rows = [A[i] for i in range(m)] + [np.eye(n)[j] for j in range(n)]
    rhs = list(b) + [0.0] * n
    best = None
    for pick in itertools.combinations(range(len(rows)), n):
        M = np.array([rows[p] for p in pick])
        if abs(np.linalg.det(M)) < 1e-10:
            continue
        x = np.linalg.solve(M, np.array([rhs[p] for p in pick]))
        if np.any(x < -1e-8):
            continue
        act = A @ x
        ok = all(
            (s == "<=" and act[i] <= b[i] + 1e-8) or (s == ">=" and act[i] >= b[i] - 1e-8)
            or (s == "=" and abs(act[i] - b[i]) <= 1e-8)
            for i, s in enumerate(senses)
        )
        if ok:
            val = float(c @ x)
            best = val if best is None else min(best, val)
    return best


def ip_exhaustive(c, A, senses, b):
    """Minimum of ``c x`` over binary ``x`` satisfying the rows; ``None`` if infeasible."""
    n = len(c)
    best = None
    for bits in itertools.product((0, 1), repeat=n):
        x = np.array(bits, dtype=float)
        act = A @ x
        if all((s == "<=" and act[i] <= b[i] + 1e-9) or (s == ">=" and act[i] >= b[i] - 1e-9)
               or (s == "=" and abs(act[i] - b[i]) <= 1e-9) for i, s in enumerate(senses)):
            v = float(c @ x)
            if best is None or v < best:
                best = v
    return best


def rel_diff(a, b) -> float:
    return abs(a - b) / max(abs(b), 1e-12)


def close(a, b, rel=1e-9, abs_=1e-9) -> bool:
    return math.isclose(a, b, rel_tol=rel, abs_tol=abs_)
