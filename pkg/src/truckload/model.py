"""Domain types and the two formulas every formulation shares.

Tasks and vehicles carry external ``id`` labels, but paths, graphs and
assignments refer to them by *position* in ``Instance.tasks`` /
``Instance.vehicles``.  Ids only matter at the file boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from .errors import InfeasibleAssignmentError, InvalidInputError

TOL = 1e-9


@dataclass(frozen=True)
class Location:
    id: str
    x: float
    y: float

    def distance_to(self, other: "Location") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)


@dataclass(frozen=True)
class Task:
    """One truckload job: pick up at ``depot``, deliver at ``client`` by ``delivery_time``.

    ``duration`` covers loading, the loaded drive and unloading, so the job
    occupies the vehicle over ``[delivery_time - duration, delivery_time]``.
    """

    id: int
    client: Location
    depot: Location
    delivery_time: float
    duration: float

    @property
    def start_time(self) -> float:
        return self.delivery_time - self.duration


@dataclass(frozen=True)
class Vehicle:
    id: int
    rent_period: float
    cost_rate: float
    reimburse_fraction: float

    @property
    def rental_class(self) -> tuple:
        return (self.rent_period, self.cost_rate, self.reimburse_fraction)


@dataclass(frozen=True)
class Instance:
    """Tasks, fleet, idle cap and deadhead travel data.

    If ``deadhead`` is given it is an explicit ``n x n`` matrix of travel
    times from the client of task i to the depot of task j and it overrides
    the coordinates.  Otherwise travel times are Euclidean distances divided
    by ``speed``.
    """

    tasks: tuple
    vehicles: tuple
    epsilon: float
    deadhead: Optional[tuple] = None
    speed: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "tasks", tuple(self.tasks))
        object.__setattr__(self, "vehicles", tuple(self.vehicles))
        if self.deadhead is not None:
            rows = tuple(tuple(float(v) for v in row) for row in self.deadhead)
            object.__setattr__(self, "deadhead", rows)

    @property
    def n_tasks(self) -> int:
        return len(self.tasks)

    @property
    def n_vehicles(self) -> int:
        return len(self.vehicles)

    @cached_property
    def delivery_times(self) -> np.ndarray:
        return np.array([t.delivery_time for t in self.tasks], dtype=float)

    @cached_property
    def durations(self) -> np.ndarray:
        return np.array([t.duration for t in self.tasks], dtype=float)

    @cached_property
    def deadhead_matrix(self) -> np.ndarray:
        n = self.n_tasks
        if self.deadhead is not None:
            d = np.array(self.deadhead, dtype=float).reshape(n, n)
        else:
            cx = np.array([t.client.x for t in self.tasks], dtype=float)
            cy = np.array([t.client.y for t in self.tasks], dtype=float)
            dx = np.array([t.depot.x for t in self.tasks], dtype=float)
            dy = np.array([t.depot.y for t in self.tasks], dtype=float)
            d = np.hypot(cx[:, None] - dx[None, :], cy[:, None] - dy[None, :]) / self.speed
        d = d.copy()
        np.fill_diagonal(d, 0.0)
        d.setflags(write=False)
        return d

    @cached_property
    def task_index(self) -> dict:
        return {t.id: i for i, t in enumerate(self.tasks)}

    @cached_property
    def vehicle_index(self) -> dict:
        return {v.id: k for k, v in enumerate(self.vehicles)}

    def check_task(self, i) -> int:
        if isinstance(i, (bool, np.bool_)) or not isinstance(i, (int, np.integer)):
            raise InvalidInputError(f"task index must be an integer, got {i!r}")
        if not 0 <= i < self.n_tasks:
            raise InvalidInputError(f"unknown task index {i}")
        return int(i)

    def check_vehicle(self, k) -> int:
        if isinstance(k, (bool, np.bool_)) or not isinstance(k, (int, np.integer)):
            raise InvalidInputError(f"vehicle index must be an integer, got {k!r}")
        if not 0 <= k < self.n_vehicles:
            raise InvalidInputError(f"unknown vehicle index {k}")
        return int(k)


def tour_duration(path: Sequence[int], instance: Instance) -> float:
    """Span of a tour: from the start of its first task to the delivery of its last.

    Only the endpoints matter: ``T_last - T_first + pi_first``.
    """
    if len(path) == 0:
        raise InvalidInputError("path must contain at least one task")
    first = instance.tasks[instance.check_task(path[0])]
    for i in path[1:-1]:
        instance.check_task(i)
    last = instance.tasks[instance.check_task(path[-1])]
    return last.delivery_time - first.delivery_time + first.duration


def assignment_cost(vehicle: Vehicle, duration: float) -> float:
    """Rent minus the reimbursed share of the unused rental time.

    ``r*c - p*c*(r - duration)``, equivalently ``r*c*(1-p) + duration*c*p``.
    """
    if duration < -TOL:
        raise InvalidInputError(f"negative tour duration {duration}")
    if duration > vehicle.rent_period + TOL:
        raise InfeasibleAssignmentError(
            f"tour of length {duration:g} exceeds rent period {vehicle.rent_period:g} "
            f"of vehicle {vehicle.id}"
        )
    r, c, p = vehicle.rent_period, vehicle.cost_rate, vehicle.reimburse_fraction
    return r * c - p * c * (r - duration)


@dataclass(frozen=True)
class TaskCombination:
    """An ordered chain of task indices one vehicle can run back to back."""

    tasks: tuple
    duration: float

    @classmethod
    def from_path(cls, path: Sequence[int], instance: Instance) -> "TaskCombination":
        path = tuple(int(i) for i in path)
        return cls(path, tour_duration(path, instance))

    def __len__(self):
        return len(self.tasks)

    def __contains__(self, task):
        return task in self.tasks


@dataclass(frozen=True)
class Assignment:
    vehicle: int
    combination: TaskCombination
    tour_start: float
    tour_finish: float


@dataclass(frozen=True)
class Solution:
    assignments: tuple
    objective: float
    method: str
    diagnostics: dict = field(default_factory=dict, compare=False, hash=False)

    @classmethod
    def from_pairs(cls, instance: Instance, pairs, method: str, diagnostics=None) -> "Solution":
        """Build a solution from ``(vehicle index, TaskCombination)`` pairs.

        Tour times and the objective are derived from the combinations, so
        the stored objective is exactly the sum of assignment costs.
        """
        assignments = []
        for k, combo in sorted(pairs, key=lambda kc: kc[0]):
            first = instance.tasks[combo.tasks[0]]
            last = instance.tasks[combo.tasks[-1]]
            assignments.append(
                Assignment(int(k), combo, first.start_time, last.delivery_time)
            )
        objective = math.fsum(
            assignment_cost(instance.vehicles[a.vehicle], a.combination.duration)
            for a in assignments
        )
        return cls(tuple(assignments), objective, method, dict(diagnostics or {}))

    @property
    def n_vehicles_used(self) -> int:
        return len(self.assignments)


def validate_instance(instance: Instance) -> list:
    """Return every broken instance invariant as a readable message; ``[]`` if clean."""
    out = []
    if instance.n_tasks == 0:
        out.append("instance has no tasks")

    seen = {}
    for t in instance.tasks:
        if t.id in seen:
            out.append(f"duplicate task id {t.id}")
        seen[t.id] = t
        if not (math.isfinite(t.duration) and t.duration > 0):
            out.append(f"task {t.id}: duration must be > 0 (got {t.duration})")
        if not math.isfinite(t.delivery_time):
            out.append(f"task {t.id}: delivery time is not finite")
        elif t.delivery_time < t.duration - TOL:
            out.append(
                f"task {t.id}: delivery time {t.delivery_time} is earlier than its duration {t.duration}"
            )

    seen_v = set()
    for v in instance.vehicles:
        if v.id in seen_v:
            out.append(f"duplicate vehicle id {v.id}")
        seen_v.add(v.id)
        if not v.rent_period > 0:
            out.append(f"vehicle {v.id}: rent period must be > 0")
        if not v.cost_rate > 0:
            out.append(f"vehicle {v.id}: cost rate must be > 0")
        if not 0 <= v.reimburse_fraction <= 1:
            out.append(f"vehicle {v.id}: reimburse fraction must lie in [0, 1]")

    locations = {}
    for t in instance.tasks:
        for loc in (t.client, t.depot):
            prev = locations.setdefault(loc.id, loc)
            if prev != loc:
                out.append(f"location id {loc.id!r} used for two different places")
                locations[loc.id] = loc

    if not (math.isfinite(instance.epsilon) and instance.epsilon >= 0):
        out.append(f"epsilon must be >= 0 (got {instance.epsilon})")
    if instance.deadhead is not None:
        n = instance.n_tasks
        if len(instance.deadhead) != n or any(len(row) != n for row in instance.deadhead):
            out.append(f"deadhead matrix must be {n} x {n}")
        elif any(not (math.isfinite(v) and v >= 0) for row in instance.deadhead for v in row):
            out.append("deadhead matrix entries must be finite and >= 0")
    elif not instance.speed > 0:
        out.append(f"speed must be > 0 (got {instance.speed})")
    return out
