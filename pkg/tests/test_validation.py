from dataclasses import replace

import pytest

from helpers import make_instance
from truckload.colgen import run_column_generation
from truckload.instances import GenParams, generate
from truckload.model import Assignment, Solution, TaskCombination
from truckload.validation import check_solution, validate_solution


@pytest.fixture(scope="module")
def solved():
    inst = generate(GenParams(15, seed=2))
    return inst, run_column_generation(inst, __import__("truckload").CGConfig(backend="highs"))


def _with(sol, assignments, objective=None):
    return Solution(tuple(assignments), sol.objective if objective is None else objective, sol.method)


def test_solver_output_is_clean(solved):
    inst, sol = solved
    rep = check_solution(inst, sol)
    assert rep.ok and not rep.uncovered


def test_dropped_task_is_reported(solved):
    inst, sol = solved
    a = sol.assignments[0]
    rest = list(sol.assignments[1:])
    if len(a.combination) > 1:
        shorter = TaskCombination.from_path(a.combination.tasks[:-1], inst)
        last = inst.tasks[shorter.tasks[-1]]
        rest.append(Assignment(a.vehicle, shorter, a.tour_start, last.delivery_time))
    dropped = inst.tasks[a.combination.tasks[-1]].id
    out = validate_solution(inst, _with(sol, rest))
    assert any(f"task {dropped} is not covered" in v for v in out)


def test_tour_past_rent_period_is_reported():
    inst = make_instance([10, 14, 18], [2, 3, 3], epsilon=2, vehicles=((6, 1, .5), (20, 1, .5)))
    combo = TaskCombination.from_path([0, 1, 2], inst)
    sol = Solution((Assignment(0, combo, 8.0, 18.0),), 0.0, "x")
    out = validate_solution(inst, sol)
    assert any("exceeds rent period" in v for v in out)


def test_broken_arc_is_reported():
    inst = make_instance([10, 14, 18], [2, 3, 3], epsilon=2)
    combo = TaskCombination.from_path([0, 2], inst)
    sol = Solution((Assignment(0, combo, 8.0, 18.0),), 0.0, "x")
    out = validate_solution(inst, replace(sol, objective=0.0))
    assert any("cannot follow" in v for v in out)


def test_reversed_tour_is_reported_not_raised():
    inst = make_instance([10, 14, 18], [2, 3, 3], epsilon=2)
    combo = TaskCombination((2, 1, 0), 2.0 - 10.0)
    out = validate_solution(inst, Solution((Assignment(0, combo, 15.0, 10.0),), 0.0, "x"))
    assert any("cannot follow" in v for v in out)
    assert any("before it starts" in v for v in out)


def test_tampered_objective_is_reported(solved):
    inst, sol = solved
    out = validate_solution(inst, _with(sol, sol.assignments, sol.objective + 1.0))
    assert any("recomputed cost" in v for v in out)


def test_reused_vehicle_and_bad_times(solved):
    inst, sol = solved
    a, b = sol.assignments[:2]
    moved = Assignment(a.vehicle, b.combination, b.tour_start + 1, b.tour_finish)
    out = validate_solution(inst, _with(sol, [a, moved] + list(sol.assignments[2:])))
    assert any("assigned 2 tours" in v for v in out)
    assert any("tour start" in v for v in out)


def test_double_coverage_is_allowed_but_reported():
    inst = make_instance([10, 14], [2, 3], epsilon=2, vehicles=((20, 1, .5), (20, 1, .5)))
    pairs = [(0, TaskCombination.from_path([0, 1], inst)), (1, TaskCombination.from_path([1], inst))]
    sol = Solution.from_pairs(inst, pairs, "x")
    rep = check_solution(inst, sol)
    assert rep.ok and not rep.exact_partition and rep.multiply_covered == [1]
