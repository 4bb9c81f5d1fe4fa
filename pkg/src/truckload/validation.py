"""Independent checks of a schedule against its instance."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

from .graph import build_graph
from .model import TOL, Instance, Solution, assignment_cost, tour_duration


@dataclass
class SolutionReport:
    violations: list = field(default_factory=list)
    uncovered: list = field(default_factory=list)
    multiply_covered: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def exact_partition(self) -> bool:
        return not self.uncovered and not self.multiply_covered


def check_solution(instance: Instance, solution: Solution, graph=None) -> SolutionReport:
    """Coverage, one tour per vehicle, chain feasibility, rental limits, tour times and cost."""
    graph = graph or build_graph(instance)
    rep = SolutionReport()
    out = rep.violations
    seen_vehicles = Counter(a.vehicle for a in solution.assignments)
    for k, cnt in sorted(seen_vehicles.items()):
        if cnt > 1:
            out.append(f"vehicle {instance.vehicles[k].id} is assigned {cnt} tours")

    covered = Counter()
    costs = []
    for a in solution.assignments:
        v = instance.vehicles[a.vehicle]
        path = a.combination.tasks
        label = f"vehicle {v.id}"
        if not path:
            out.append(f"{label}: empty tour")
            continue
        covered.update(path)
        ids = [instance.tasks[i].id for i in path]
        if len(set(path)) != len(path):
            out.append(f"{label}: tour repeats a task {ids}")
        for p, q in zip(path, path[1:]):
            if not graph.has_arc(p, q):
                out.append(
                    f"{label}: task {instance.tasks[q].id} cannot follow task {instance.tasks[p].id}"
                )
        length = tour_duration(path, instance)
        if abs(a.combination.duration - length) > TOL:
            out.append(f"{label}: stored duration {a.combination.duration} != {length}")
        first, last = instance.tasks[path[0]], instance.tasks[path[-1]]
        if abs(a.tour_start - first.start_time) > TOL:
            out.append(f"{label}: tour start {a.tour_start} != {first.start_time}")
        if abs(a.tour_finish - last.delivery_time) > TOL:
            out.append(f"{label}: tour finish {a.tour_finish} != {last.delivery_time}")
        if length > v.rent_period + TOL:
            out.append(f"{label}: tour length {length:g} exceeds rent period {v.rent_period:g}")
            costs.append(math.nan)
        elif length < -TOL:
            out.append(f"{label}: tour ends {-length:g} before it starts")
            costs.append(math.nan)
        else:
            costs.append(assignment_cost(v, length))

    stored = solution.diagnostics.get("stored_costs") if solution.diagnostics else None
    if stored:
        for a, c, s in zip(solution.assignments, costs, stored):
            if s is not None and not math.isnan(c) and abs(c - s) > TOL:
                out.append(f"vehicle {instance.vehicles[a.vehicle].id}: stored cost {s} != {c}")

    rep.uncovered = [instance.tasks[i].id for i in range(instance.n_tasks) if covered[i] == 0]
    rep.multiply_covered = [instance.tasks[i].id for i in range(instance.n_tasks) if covered[i] > 1]
    for tid in rep.uncovered:
        out.append(f"task {tid} is not covered")
    if not any(math.isnan(c) for c in costs):
        total = math.fsum(costs)
        if abs(total - solution.objective) > TOL:
            out.append(f"objective {solution.objective!r} != recomputed cost {total!r}")
    return rep


def validate_solution(instance: Instance, solution: Solution) -> list:
    return check_solution(instance, solution).violations
