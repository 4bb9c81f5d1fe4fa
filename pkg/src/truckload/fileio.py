"""Instance and solution files.

Both are JSON documents tagged with a ``schema`` string.  Instances are
written in a canonical layout (one task or vehicle per line, numbers at 9
significant digits) so that ``write_instance(read_instance(f))`` reproduces
a canonical file byte for byte.

Instance file::

    {
    "schema": "truckload-instance/1",
    "epsilon": 30.0,
    "speed": 1.0,
    "tasks": [
    {"id": 0, "depot": "R1", "depot_xy": [1.0, 2.0], "client": "C4", "client_xy": [5.0, 6.0], "T": 120.0, "pi": 17.0},
    ...
    ],
    "vehicles": [
    {"id": 0, "r": 480.0, "c": 1.0, "p": 0.5},
    ...
    ],
    "deadhead": null
    }

``deadhead`` may instead hold an explicit ``n x n`` matrix of travel times
(client of row task to depot of column task), which overrides coordinates.

Solution file::

    {"schema": "truckload-solution/1", "method": "cg", "objective": ...,
     "wall_time": null, "assignments": [{"vehicle": 3, "tasks": [0, 4],
     "tour_start": ..., "tour_finish": ..., "cost": ...}, ...]}

Tasks and vehicles are referenced by their ids.  ``wall_time`` is null
unless timing was requested, which keeps repeated runs byte-identical.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

from .errors import ParseError
from .model import (Assignment, Instance, Location, Solution, Task, TaskCombination, Vehicle,
                    assignment_cost, tour_duration)

INSTANCE_SCHEMA = "truckload-instance/1"
SOLUTION_SCHEMA = "truckload-solution/1"


def _num(x) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"cannot serialise non-finite number {x}")
    return repr(float(f"{x:.9g}"))


def _full(x) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"cannot serialise non-finite number {x}")
    return repr(x)


def _id(v) -> str:
    return json.dumps(v)


def dumps_instance(instance: Instance) -> str:
    lines = ["{", f'"schema": "{INSTANCE_SCHEMA}",', f'"epsilon": {_num(instance.epsilon)},',
             f'"speed": {_num(instance.speed)},', '"tasks": [']
    rows = []
    for t in instance.tasks:
        rows.append(
            f'{{"id": {_id(t.id)}, "depot": {_id(t.depot.id)}, '
            f'"depot_xy": [{_num(t.depot.x)}, {_num(t.depot.y)}], '
            f'"client": {_id(t.client.id)}, '
            f'"client_xy": [{_num(t.client.x)}, {_num(t.client.y)}], '
            f'"T": {_num(t.delivery_time)}, "pi": {_num(t.duration)}}}'
        )
    lines.append(",\n".join(rows))
    lines.append("],")
    lines.append('"vehicles": [')
    lines.append(",\n".join(
        f'{{"id": {_id(v.id)}, "r": {_num(v.rent_period)}, "c": {_num(v.cost_rate)}, '
        f'"p": {_num(v.reimburse_fraction)}}}'
        for v in instance.vehicles
    ))
    lines.append("],")
    if instance.deadhead is None:
        lines.append('"deadhead": null')
    else:
        lines.append('"deadhead": [')
        lines.append(",\n".join("[" + ", ".join(_num(v) for v in row) + "]"
                                for row in instance.deadhead))
        lines.append("]")
    lines.append("}")
    return "\n".join(line for line in lines if line != "") + "\n"


def write_instance(instance: Instance, path) -> Path:
    path = Path(path)
    path.write_text(dumps_instance(instance))
    return path


def _load_json(text, what):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{what}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def _field(obj, key, where, kind=None):
    if not isinstance(obj, dict):
        raise ParseError(f"{where}: expected an object")
    if key not in obj:
        raise ParseError(f"{where}: missing field '{key}'")
    v = obj[key]
    if kind == "num":
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ParseError(f"{where}.{key}: expected a number, got {v!r}")
        return float(v)
    if kind == "xy":
        if not (isinstance(v, list) and len(v) == 2
                and all(isinstance(a, (int, float)) and not isinstance(a, bool) for a in v)):
            raise ParseError(f"{where}.{key}: expected [x, y]")
        return float(v[0]), float(v[1])
    if kind == "list" and not isinstance(v, list):
        raise ParseError(f"{where}.{key}: expected a list")
    return v


def _task_line(text: str, k: int) -> str:
    """Best-effort source line of the k-th task for error messages."""
    lines = text.splitlines()
    try:
        start = next(i for i, l in enumerate(lines) if l.strip().startswith('"tasks"'))
    except StopIteration:
        return ""
    ln = start + 2 + k
    return f" (line {ln})" if ln <= len(lines) else ""


def loads_instance(text: str, source="instance") -> Instance:
    doc = _load_json(text, source)
    if not isinstance(doc, dict):
        raise ParseError(f"{source}: top level must be an object")
    schema = _field(doc, "schema", source)
    if schema != INSTANCE_SCHEMA:
        raise ParseError(f"{source}: unsupported schema {schema!r} (expected {INSTANCE_SCHEMA})")
    epsilon = _field(doc, "epsilon", source, "num")
    speed = float(doc.get("speed", 1.0))
    locations = {}

    def loc(lid, xy):
        if lid is None:
            lid = f"@{xy[0]!r},{xy[1]!r}"
        return locations.setdefault((lid, xy), Location(str(lid), *xy))

    tasks = []
    for k, row in enumerate(_field(doc, "tasks", source, "list")):
        where = f"{source}: tasks[{k}]{_task_line(text, k)}"
        depot = loc(row.get("depot") if isinstance(row, dict) else None, _field(row, "depot_xy", where, "xy"))
        client = loc(row.get("client"), _field(row, "client_xy", where, "xy"))
        tasks.append(Task(_field(row, "id", where), client, depot,
                          _field(row, "T", where, "num"), _field(row, "pi", where, "num")))
    vehicles = []
    for k, row in enumerate(_field(doc, "vehicles", source, "list")):
        where = f"{source}: vehicles[{k}]"
        vehicles.append(Vehicle(_field(row, "id", where), _field(row, "r", where, "num"),
                                _field(row, "c", where, "num"), _field(row, "p", where, "num")))
    deadhead = doc.get("deadhead")
    if deadhead is not None:
        n = len(tasks)
        if not isinstance(deadhead, list) or len(deadhead) != n:
            raise ParseError(f"{source}: deadhead must have {n} rows (one per task)")
        for i, row in enumerate(deadhead):
            if not isinstance(row, list) or len(row) != n:
                raise ParseError(f"{source}: deadhead[{i}] must have {n} entries (one per task)")
            if any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in row):
                raise ParseError(f"{source}: deadhead[{i}] holds a non-number")
    return Instance(tuple(tasks), tuple(vehicles), epsilon, deadhead, speed)


def read_instance(path) -> Instance:
    path = Path(path)
    return loads_instance(path.read_text(), str(path))


def dumps_solution(solution: Solution, instance: Instance, wall_time=None) -> str:
    rows = []
    for a in solution.assignments:
        v = instance.vehicles[a.vehicle]
        cost = assignment_cost(v, a.combination.duration)
        ids = ", ".join(_id(instance.tasks[i].id) for i in a.combination.tasks)
        rows.append(
            f'{{"vehicle": {_id(v.id)}, "tasks": [{ids}], "tour_start": {_full(a.tour_start)}, '
            f'"tour_finish": {_full(a.tour_finish)}, "cost": {_full(cost)}}}'
        )
    wt = "null" if wall_time is None else repr(round(float(wall_time), 3))
    body = ",\n".join(rows)
    return (
        "{\n"
        f'"schema": "{SOLUTION_SCHEMA}",\n'
        f'"method": {json.dumps(solution.method)},\n'
        f'"objective": {_full(solution.objective)},\n'
        f'"wall_time": {wt},\n'
        '"assignments": [\n'
        f"{body}{chr(10) if body else ''}"
        "]\n}\n"
    )


def write_solution(solution: Solution, instance: Instance, path, wall_time=None) -> Path:
    path = Path(path)
    path.write_text(dumps_solution(solution, instance, wall_time))
    return path


def loads_solution(text: str, instance: Instance, source="solution") -> Solution:
    """Parse a solution file against ``instance``.

    The stored tour times, per-assignment costs and objective are kept as
    written (not recomputed) so a validator can check them.  Per-assignment
    costs go to ``diagnostics["stored_costs"]``.
    """
    doc = _load_json(text, source)
    if not isinstance(doc, dict):
        raise ParseError(f"{source}: top level must be an object")
    schema = _field(doc, "schema", source)
    if schema != SOLUTION_SCHEMA:
        raise ParseError(f"{source}: unsupported schema {schema!r} (expected {SOLUTION_SCHEMA})")
    assignments, costs = [], []
    for k, row in enumerate(_field(doc, "assignments", source, "list")):
        where = f"{source}: assignments[{k}]"
        vid = _field(row, "vehicle", where)
        if vid not in instance.vehicle_index:
            raise ParseError(f"{where}.vehicle: unknown vehicle id {vid!r}")
        tids = _field(row, "tasks", where, "list")
        if not tids:
            raise ParseError(f"{where}.tasks: empty task list")
        path = []
        for tid in tids:
            if tid not in instance.task_index:
                raise ParseError(f"{where}.tasks: unknown task id {tid!r}")
            path.append(instance.task_index[tid])
        combo = TaskCombination(tuple(path), tour_duration(path, instance))
        assignments.append(Assignment(instance.vehicle_index[vid], combo,
                                      _field(row, "tour_start", where, "num"),
                                      _field(row, "tour_finish", where, "num")))
        costs.append(float(row["cost"]) if "cost" in row else None)
    wall = doc.get("wall_time")
    return Solution(tuple(assignments), _field(doc, "objective", source, "num"),
                    str(doc.get("method", "")), {"stored_costs": costs, "wall_time": wall})


def read_solution(path, instance: Instance) -> Solution:
    path = Path(path)
    return loads_solution(path.read_text(), instance, str(path))
