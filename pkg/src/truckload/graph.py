"""Task compatibility graph: which task may directly follow which on one vehicle."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, ValidationError
from .model import TOL, Instance, validate_instance


@dataclass(frozen=True)
class CompatGraph:
    n: int
    succ: tuple  # succ[i] is the ascending tuple of j with arc (i, j)

    @property
    def arc_count(self) -> int:
        return sum(len(s) for s in self.succ)

    def arcs(self):
        return [(i, j) for i in range(self.n) for j in self.succ[i]]

    def has_arc(self, i: int, j: int) -> bool:
        return j in self.succ[i]

    def pred(self):
        p = [[] for _ in range(self.n)]
        for i, j in self.arcs():
            p[j].append(i)
        return tuple(tuple(x) for x in p)


def deadhead_time(i: int, j: int, instance: Instance) -> float:
    """Empty travel time from the client of task ``i`` to the depot of task ``j``."""
    i, j = instance.check_task(i), instance.check_task(j)
    if i == j:
        raise InvalidInputError("deadhead time is undefined for i == j")
    return float(instance.deadhead_matrix[i, j])


def is_compatible(i: int, j: int, instance: Instance) -> bool:
    """True iff ``j`` can be served right after ``i`` with at most ``epsilon`` idle time."""
    d = deadhead_time(i, j, instance)
    ti, tj = instance.tasks[i], instance.tasks[j]
    earliest = ti.delivery_time + d + tj.duration
    return earliest <= tj.delivery_time + TOL and tj.delivery_time <= earliest + instance.epsilon + TOL


def compatibility_matrix(instance: Instance) -> np.ndarray:
    """Boolean ``n x n`` matrix of compatible ordered pairs (vectorised ``is_compatible``)."""
    T = instance.delivery_times
    earliest = T[:, None] + instance.deadhead_matrix + instance.durations[None, :]
    ok = (earliest <= T[None, :] + TOL) & (T[None, :] <= earliest + instance.epsilon + TOL)
    np.fill_diagonal(ok, False)
    return ok


def build_graph(instance: Instance) -> CompatGraph:
    violations = validate_instance(instance)
    if violations:
        raise ValidationError(violations)
    ok = compatibility_matrix(instance)
    succ = tuple(tuple(int(j) for j in np.flatnonzero(row)) for row in ok)
    return CompatGraph(instance.n_tasks, succ)


def is_chain(path, graph: CompatGraph) -> bool:
    """Consecutive-pair compatibility and no repeated task."""
    if len(set(path)) != len(path):
        return False
    return all(graph.has_arc(a, b) for a, b in zip(path, path[1:]))
