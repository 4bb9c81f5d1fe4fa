"""A five-task day solved by hand-sized steps.

Builds an instance from scratch, looks at which tasks can share a truck,
lists every feasible task sequence, then prices a cheapest fleet plan by
column generation and checks it.

    python demos/quickstart.py
"""

from truckload import (CGConfig, Instance, Location, Task, Vehicle, build_graph, check_solution,
                       enumerate_feasible, run_column_generation)

depot = Location("plant", 0.0, 0.0)
north, east = Location("north", 0.0, 20.0), Location("east", 25.0, 0.0)

# Each task loads at the plant and must arrive at its client at a fixed time.
tasks = (
    Task(0, north, depot, delivery_time=60.0, duration=30.0),
    Task(1, east, depot, delivery_time=115.0, duration=35.0),
    Task(2, north, depot, delivery_time=70.0, duration=30.0),
    Task(3, east, depot, delivery_time=160.0, duration=35.0),
    Task(4, north, depot, delivery_time=230.0, duration=30.0),
)
fleet = (
    Vehicle(0, rent_period=240.0, cost_rate=1.0, reimburse_fraction=0.5),
    Vehicle(1, rent_period=120.0, cost_rate=0.9, reimburse_fraction=0.5),
    Vehicle(2, rent_period=120.0, cost_rate=0.9, reimburse_fraction=0.5),
)
inst = Instance(tasks, fleet, epsilon=30.0)

graph = build_graph(inst)
print("tasks that may follow one another on the same truck:")
for i, j in graph.arcs():
    print(f"  {i} -> {j}")

pool = enumerate_feasible(graph, inst)
print(f"\n{len(pool)} feasible sequences:")
for combo in pool:
    print(f"  {combo.tasks}  busy for {combo.duration:g} min")

sol = run_column_generation(inst, CGConfig())
print(f"\nplan costs {sol.objective:.2f} with {sol.n_vehicles_used} trucks")
for a in sol.assignments:
    v = inst.vehicles[a.vehicle]
    print(f"  vehicle {v.id} (rented {v.rent_period:g} min): tasks {a.combination.tasks}, "
          f"out {a.tour_start:g} back {a.tour_finish:g}")

report = check_solution(inst, sol)
print("\nindependent check:", "ok" if report.ok else report.violations)
