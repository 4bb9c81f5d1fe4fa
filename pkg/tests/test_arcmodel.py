import numpy as np
import pytest

from helpers import SMALL_FLEET, chain_instance, make_instance, small_random
from truckload.arcmodel import (build_arc_model, brute_force, chain_partitions, extract_tours,
                                solve_exact)
from truckload.colgen import CGConfig, run_column_generation
from truckload.errors import InfeasibleError, ResourceLimitError
from truckload.graph import build_graph
from truckload.lp import solve_mip
from truckload.model import assignment_cost
from truckload.validation import check_solution


def test_variable_counts():
    inst = small_random(3, n=6, epsilon=60)
    g = build_graph(inst)
    model = build_arc_model(inst, g)
    n, m, a = inst.n_tasks, inst.n_vehicles, g.arc_count
    assert int(model.lp.integer.sum()) == m * (2 * n + a)
    assert model.lp.n_vars - int(model.lp.integer.sum()) == 2 * m
    assert model.network.big_m == inst.delivery_times.max()
    assert model.network.deadhead == tuple(g.arcs())


def test_optional_rows_only_add_rows():
    inst = small_random(3, n=6, epsilon=60)
    g = build_graph(inst)
    plain = build_arc_model(inst, g)
    full = build_arc_model(inst, g, symmetry_breaking=True, tour_length_rows=True)
    assert full.lp.n_vars == plain.lp.n_vars
    assert full.lp.n_rows > plain.lp.n_rows


@pytest.mark.parametrize("backend", ["simplex", "highs"])
def test_single_task_single_vehicle(backend):
    inst = make_instance([30], [7], vehicles=((50, 1.5, .4),))
    sol = solve_exact(inst, backend=backend, tour_length_rows=False)
    assert sol.objective == pytest.approx(assignment_cost(inst.vehicles[0], 7))
    times = sol.diagnostics["tour_times"][0]
    assert times == pytest.approx((23.0, 30.0))


def test_chain_two_tight_vehicles_matches_brute_force():
    inst = make_instance([10, 14, 18], [2, 3, 3], epsilon=2, vehicles=((6, 1, .5), (6, 2, .5)))
    b = brute_force(inst)
    for kw in ({}, {"tour_length_rows": False}, {"symmetry_breaking": True}):
        e = solve_exact(inst, gap=0, **kw)
        assert e.objective == pytest.approx(b.objective, abs=1e-9)
        assert check_solution(inst, e).ok


def test_uncoverable_task_named():
    inst = make_instance([10, 60], [5, 30], epsilon=0, vehicles=((20, 1, .5), (25, 1, .5)))
    with pytest.raises(InfeasibleError) as err:
        solve_exact(inst)
    assert err.value.uncovered == (1,)


def test_fleet_too_small_is_infeasible():
    inst = make_instance([10, 60], [5, 5], epsilon=0, vehicles=((20, 1, .5),))
    with pytest.raises(InfeasibleError):
        solve_exact(inst, backend="highs")


def test_no_arc_tours_span_task_duration():
    inst = make_instance([10, 60, 110], [5, 8, 13], epsilon=0,
                         vehicles=((50, 1, .5), (50, 1, .5), (50, 1, .5)))
    sol = solve_exact(inst, gap=0, tour_length_rows=False)
    times = sol.diagnostics["tour_times"]
    for a in sol.assignments:
        ts, tf = times[a.vehicle]
        assert tf - ts == pytest.approx(inst.tasks[a.combination.tasks[0]].duration)


@pytest.mark.parametrize("seed", range(6))
def test_solution_structure(seed):
    inst = small_random(seed, n=7, epsilon=60)
    g = build_graph(inst)
    model = build_arc_model(inst, g, tour_length_rows=True)
    res = solve_mip(model.lp, 0.0, "highs")
    x = np.round(res.x)
    entering = np.zeros(inst.n_tasks)
    for k in range(inst.n_vehicles):
        entering += x[model.po[k]]
        for a, (i, j) in enumerate(g.arcs()):
            entering[j] += x[model.dh[k, a]]
    assert np.all(entering == 1)
    for k, path in extract_tours(model, res.x):
        first, last = inst.tasks[path[0]], inst.tasks[path[-1]]
        assert res.x[model.ts[k]] == pytest.approx(first.start_time, abs=1e-6)
        assert res.x[model.tf[k]] == pytest.approx(last.delivery_time, abs=1e-6)
        assert res.x[model.tf[k]] - res.x[model.ts[k]] <= inst.vehicles[k].rent_period + 1e-6
    # objective identity between the arc form and the per-assignment form
    sol = solve_exact(inst, gap=0, backend="highs")
    assert sol.diagnostics["mip_objective"] == pytest.approx(sol.objective, abs=1e-6)


def test_brute_force_picks_cheaper_vehicle():
    inst = make_instance([30], [7], vehicles=((50, 1, .5), (10, 1, .5)))
    sol = brute_force(inst)
    assert [a.vehicle for a in sol.assignments] == [1]


def test_brute_force_two_incompatible_tasks_one_vehicle():
    inst = make_instance([10, 90], [5, 5], epsilon=0)
    with pytest.raises(InfeasibleError):
        brute_force(inst)


def test_brute_force_limit():
    inst = small_random(0, n=9)
    with pytest.raises(ResourceLimitError):
        brute_force(inst)


def test_chain_partitions_are_distinct_and_complete():
    inst = chain_instance()
    parts = list(chain_partitions(inst, build_graph(inst)))
    canon = {tuple(sorted(p)) for p in parts}
    assert len(canon) == len(parts) == 4  # {abc}, {ab,c}, {a,bc}, {a,b,c}


@pytest.mark.parametrize("seed", range(10))
def test_brute_exact_cg_agree(seed):
    inst = small_random(seed, epsilon=60)
    b = brute_force(inst)
    e = solve_exact(inst, gap=0, backend="highs")
    p = run_column_generation(inst, CGConfig(gap=0, backend="highs", partition=True))
    assert e.objective == pytest.approx(b.objective, rel=1e-9)
    assert p.objective == pytest.approx(b.objective, rel=1e-9)
    for s in (b, e, p):
        assert check_solution(inst, s).ok


@pytest.mark.parametrize("seed", range(4))
def test_plain_and_strengthened_models_agree(seed):
    inst = small_random(seed, n=6, epsilon=60)
    a = solve_exact(inst, gap=0, backend="highs", tour_length_rows=False)
    b = solve_exact(inst, gap=0, backend="highs")
    c = solve_exact(inst, gap=0, backend="highs", symmetry_breaking=True)
    assert a.objective == pytest.approx(b.objective, rel=1e-9)
    assert c.objective == pytest.approx(b.objective, rel=1e-9)


def test_embedded_backend_on_small_instance():
    inst = small_random(4, n=6)
    e = solve_exact(inst, gap=0)
    assert e.objective == pytest.approx(brute_force(inst).objective, rel=1e-9)
