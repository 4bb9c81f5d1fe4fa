"""Seeded random instances shaped like the depot/client/two-class-fleet experiments."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInputError
from .model import Instance, Location, Task, Vehicle


def canonical(x: float) -> float:
    """Round to 9 significant digits, the precision used in instance files."""
    return float(f"{float(x):.9g}")


@dataclass(frozen=True)
class FleetClass:
    size: int
    rent_period: float
    cost_rate: float
    reimburse_fraction: float


DEFAULT_FLEET = (
    FleetClass(15, 480.0, 1.0, 0.5),
    FleetClass(15, 240.0, 0.8, 0.5),
)


@dataclass(frozen=True)
class GenParams:
    n_tasks: int
    n_depots: int = 3
    n_clients: int = 10
    fleet: tuple = field(default=DEFAULT_FLEET)
    epsilon: float = 30.0
    box: float = 100.0
    horizon: float = 480.0
    load_unload: float = 10.0
    speed: float = 1.0
    seed: int = 0

    @property
    def fleet_size(self) -> int:
        return sum(fc.size for fc in self.fleet)

    def problems(self) -> list:
        out = []
        for name in ("n_tasks", "n_depots", "n_clients"):
            if getattr(self, name) < 1:
                out.append(f"{name} must be >= 1")
        if not self.fleet:
            out.append("fleet needs at least one vehicle class")
        for fc in self.fleet:
            if fc.size < 1:
                out.append("every fleet class needs size >= 1")
            if not (fc.rent_period > 0 and fc.cost_rate > 0 and 0 <= fc.reimburse_fraction <= 1):
                out.append(f"bad fleet class parameters {fc}")
        if not self.box > 0:
            out.append("box must be > 0")
        if not self.speed > 0:
            out.append("speed must be > 0")
        if self.epsilon < 0:
            out.append("epsilon must be >= 0")
        if self.load_unload < 0:
            out.append("load_unload must be >= 0")
        return out


def make_fleet(fleet) -> tuple:
    vehicles = []
    for fc in fleet:
        for _ in range(fc.size):
            vehicles.append(Vehicle(len(vehicles), canonical(fc.rent_period),
                                    canonical(fc.cost_rate), canonical(fc.reimburse_fraction)))
    return tuple(vehicles)


def generate(params: GenParams) -> Instance:
    """Draw a reproducible instance.

    Depots and clients are uniform in ``[0, box]^2``; each task picks a
    client uniformly and is served from the depot nearest to it.  Task
    duration is the loaded drive plus ``load_unload``; the delivery time is
    uniform in ``[duration, horizon]``.  All numbers are stored at the
    9-significant-digit file precision, so writing and re-reading the
    instance gives back an equal object.
    """
    problems = params.problems()
    if problems:
        raise InvalidInputError("; ".join(problems))
    rng = np.random.default_rng(params.seed)
    depots, clients = _draw_sites(params, rng)

    client_of_task = rng.integers(0, params.n_clients, size=params.n_tasks)
    u = rng.random(params.n_tasks)
    tasks = []
    for t in range(params.n_tasks):
        client = clients[client_of_task[t]]
        depot = nearest_depot(client, depots)
        pi = canonical(depot.distance_to(client) / params.speed + params.load_unload)
        if pi <= 0:
            raise InvalidInputError("task with zero duration; raise load_unload or move locations")
        if pi > params.horizon:
            raise InvalidInputError(f"horizon {params.horizon} is shorter than task duration {pi}")
        T = max(pi, canonical(pi + u[t] * (params.horizon - pi)))
        tasks.append(Task(t, client, depot, T, pi))
    return Instance(tuple(tasks), make_fleet(params.fleet), canonical(params.epsilon),
                    speed=canonical(params.speed))


def _draw_sites(params: GenParams, rng) -> tuple:
    depot_xy = rng.uniform(0.0, params.box, size=(params.n_depots, 2))
    client_xy = rng.uniform(0.0, params.box, size=(params.n_clients, 2))
    depots = [Location(f"R{j}", canonical(x), canonical(y)) for j, (x, y) in enumerate(depot_xy)]
    clients = [Location(f"C{j}", canonical(x), canonical(y)) for j, (x, y) in enumerate(client_xy)]
    return depots, clients


def sites(params: GenParams) -> tuple:
    """``(depots, clients)`` exactly as :func:`generate` places them for ``params``."""
    return _draw_sites(params, np.random.default_rng(params.seed))


def nearest_depot(client: Location, depots) -> Location:
    """Closest depot to ``client``; the lower index wins ties."""
    dists = [client.distance_to(d) for d in depots]
    return depots[int(np.argmin(dists))]
