"""Feasible task-combination enumeration and the greedy starting columns."""

from __future__ import annotations

import os
from dataclasses import dataclass

from .errors import InvalidInputError, ResourceLimitError
from .graph import CompatGraph
from .model import Instance, TaskCombination

DEFAULT_POOL_CAP = 5_000_000
POOL_CAP_ENV = "TRUCKLOAD_POOL_CAP"


def pool_cap(cap=None) -> int:
    if cap is not None:
        return int(cap)
    return int(os.environ.get(POOL_CAP_ENV, DEFAULT_POOL_CAP))


@dataclass(frozen=True)
class ColumnPool:
    all: tuple
    initial_ids: tuple
    remaining_ids: tuple

    def __post_init__(self):
        seen = {}
        for idx, c in enumerate(self.all):
            if c.tasks in seen:
                raise InvalidInputError(f"duplicate combination {c.tasks} in pool")
            seen[c.tasks] = idx
        object.__setattr__(self, "_lookup", seen)

    def index_of(self, tasks) -> int:
        return self._lookup[tuple(tasks)]

    @property
    def initial(self):
        return [self.all[i] for i in self.initial_ids]

    @property
    def remaining(self):
        return [self.all[i] for i in self.remaining_ids]


def _paths_from(succ, on_path, path, out, cap):
    out.append(tuple(path))
    if len(out) > cap:
        raise ResourceLimitError(f"feasible column pool exceeds cap of {cap} combinations")
    for j in succ[path[-1]]:
        if not on_path[j]:
            on_path[j] = True
            path.append(j)
            _paths_from(succ, on_path, path, out, cap)
            path.pop()
            on_path[j] = False


def enumerate_feasible(graph: CompatGraph, instance: Instance, cap=None) -> list:
    """Every elementary path of the graph, including all prefixes, as combinations.

    Order: start task ascending, then depth-first with successors ascending.
    Durations are recomputed from the path endpoints.
    """
    cap = pool_cap(cap)
    paths = []
    on_path = [False] * graph.n
    for i in range(graph.n):
        on_path[i] = True
        _paths_from(graph.succ, on_path, [i], paths, cap)
        on_path[i] = False
    return [TaskCombination.from_path(p, instance) for p in paths]


def greedy_path_from(i: int, graph: CompatGraph, instance: Instance) -> TaskCombination:
    """Grow a chain from ``i`` by repeatedly taking the successor with the least idle slack.

    The step from the current last task ``l`` picks the successor ``k`` minimising
    ``T_k - T_l + d_lk + pi_k``; ties go to the smaller index.
    """
    i = instance.check_task(i)
    T, pi, d = instance.delivery_times, instance.durations, instance.deadhead_matrix
    path = [i]
    on_path = {i}
    while True:
        last = path[-1]
        cands = [k for k in graph.succ[last] if k not in on_path]
        if not cands:
            break
        nxt = min(cands, key=lambda k: (T[k] - T[last] + d[last, k] + pi[k], k))
        path.append(nxt)
        on_path.add(nxt)
    return TaskCombination.from_path(path, instance)


def build_initial_set(graph: CompatGraph, instance: Instance, cap=None) -> ColumnPool:
    everything = enumerate_feasible(graph, instance, cap)
    index = {c.tasks: n for n, c in enumerate(everything)}
    initial = []
    for i in range(graph.n):
        idx = index[greedy_path_from(i, graph, instance).tasks]
        if idx not in initial:
            initial.append(idx)
    chosen = set(initial)
    remaining = tuple(n for n in range(len(everything)) if n not in chosen)
    return ColumnPool(tuple(everything), tuple(initial), remaining)
