import io
import itertools
import math

import numpy as np
import pytest

from helpers import chain_instance, make_instance, small_random
from truckload.colgen import (CGConfig, Duals, _assemble, build_rmp, column_generation_relaxation,
                              price_vehicle, pricing_certificate, reduced_cost,
                              reduced_cost_matrix, run_column_generation, solve_rmp)
from truckload.enumeration import ColumnPool, build_initial_set
from truckload.errors import InfeasibleError, InvalidInputError
from truckload.graph import build_graph
from truckload.instances import GenParams, generate
from truckload.lp import EQ, GE, LE, OPTIMAL
from truckload.model import TaskCombination, assignment_cost
from truckload.validation import check_solution


def _pool(inst):
    return build_initial_set(build_graph(inst), inst)


def test_rmp_structure_counts():
    inst = make_instance([10, 14], [2, 3], epsilon=2)
    pool = ColumnPool((TaskCombination.from_path([0, 1], inst),), (0,), ())
    lp = build_rmp(pool, inst).lp
    assert lp.n_rows == 4 and lp.n_vars == 1
    assert lp.senses == (GE, GE, LE, LE)
    assert lp.c[0] == assignment_cost(inst.vehicles[0], 6)


def test_partition_mode_uses_equality_rows():
    inst = chain_instance()
    state = build_rmp(_pool(inst), inst, partition=True)
    assert state.lp.senses[:3] == (EQ, EQ, EQ)


def test_empty_pool_rejected():
    with pytest.raises(InvalidInputError):
        build_rmp(ColumnPool((), (), ()), make_instance([10], [2]))


def test_overlong_column_fixed_to_zero():
    inst = make_instance([10, 14, 80], [2, 3, 50], epsilon=2, vehicles=((40, 1, .5), (40, 1, .5)))
    pool = _pool(inst)
    state = build_rmp(pool, inst)
    c = pool.index_of((2,))
    for k in range(2):
        assert state.lp.upper[state.var_index[(k, c)]] == 0.0
    assert solve_rmp(state).status != OPTIMAL


def test_initial_master_feasible_on_generated():
    inst = generate(GenParams(20, seed=2))
    state = build_rmp(_pool(inst), inst)
    assert solve_rmp(state).status == OPTIMAL


def test_zero_duals_give_plain_cost():
    inst = chain_instance()
    pool = _pool(inst)
    zero = Duals(np.zeros(3), np.zeros(1), np.zeros(1))
    for c, combo in enumerate(pool.all):
        assert reduced_cost(0, c, zero, pool, inst) == pytest.approx(
            assignment_cost(inst.vehicles[0], combo.duration))


def test_reduced_cost_rejects_unknown_ids():
    inst = chain_instance()
    pool = _pool(inst)
    zero = Duals(np.zeros(3), np.zeros(1), np.zeros(1))
    with pytest.raises(InvalidInputError):
        reduced_cost(3, 0, zero, pool, inst)
    with pytest.raises(InvalidInputError):
        reduced_cost(0, 99, zero, pool, inst)


def _state_with_duals(inst, duals, remaining):
    pool = _pool(inst)
    state = build_rmp(pool, inst)
    state.duals = duals
    state.remaining = remaining
    return state, pool


def test_price_vehicle_empty_remaining():
    inst = chain_instance()
    state, pool = _state_with_duals(inst, Duals(np.zeros(3), np.zeros(1), np.zeros(1)), [])
    assert price_vehicle(0, state, pool).column is None


def test_price_vehicle_returns_negative_column():
    inst = chain_instance()
    pool = _pool(inst)
    c = pool.index_of((1,))
    cost = assignment_cost(inst.vehicles[0], 3.0)
    mu = np.array([0.0, cost + 3.2, 0.0])
    state, _ = _state_with_duals(inst, Duals(mu, np.zeros(1), np.zeros(1)), [c])
    res = price_vehicle(0, state, pool)
    assert res.column == c and res.reduced_cost == pytest.approx(-3.2)


def test_price_vehicle_tolerance():
    inst = chain_instance()
    pool = _pool(inst)
    c = pool.index_of((1,))
    cost = assignment_cost(inst.vehicles[0], 3.0)
    mu = np.array([0.0, cost + 1e-9, 0.0])
    state, _ = _state_with_duals(inst, Duals(mu, np.zeros(1), np.zeros(1)), [c])
    res = price_vehicle(0, state, pool)
    assert res.column is None and res.reduced_cost == pytest.approx(-1e-9, abs=1e-12)


@pytest.mark.parametrize("seed", range(8))
def test_matrix_matches_scalar_scan(seed):
    inst = small_random(seed, n=8, epsilon=60)
    state, _ = column_generation_relaxation(inst, CGConfig())
    M = reduced_cost_matrix(state)
    for k, c in itertools.product(range(inst.n_vehicles), range(len(state.pool.all))):
        if inst.vehicles[k].rent_period + 1e-9 < state.pool.all[c].duration:
            assert M[k, c] == math.inf
        else:
            assert M[k, c] == pytest.approx(reduced_cost(k, c, state.duals, state.pool, inst), abs=1e-9)


@pytest.mark.parametrize("backend", ["simplex", "highs"])
@pytest.mark.parametrize("seed", range(6))
def test_no_negative_reduced_cost_after_relaxation(seed, backend):
    inst = generate(GenParams(15, seed=seed))
    state, info = column_generation_relaxation(inst, CGConfig(backend=backend))
    scan = min(reduced_cost(k, c, state.duals, state.pool, inst)
               for k in range(inst.n_vehicles) for c in range(len(state.pool.all))
               if state.pool.all[c].duration <= inst.vehicles[k].rent_period + 1e-9)
    assert scan >= -1e-7
    assert pricing_certificate(state)[0] == pytest.approx(scan, abs=1e-9)


def test_lp_objective_nonincreasing():
    inst = generate(GenParams(25, seed=3))
    sol = run_column_generation(inst, CGConfig(backend="highs"))
    hist = sol.diagnostics["lp_history"]
    assert all(b <= a + 1e-7 for a, b in zip(hist, hist[1:]))


def test_no_arc_instance_uses_cheapest_vehicle_per_task():
    inst = make_instance([10, 60, 110], [5, 8, 13], epsilon=0,
                         vehicles=((50, 1, .5), (20, 1, .5), (30, 2, .9), (20, 3, .5)))
    sol = run_column_generation(inst, CGConfig(gap=0))
    # brute force over injective task -> vehicle maps
    best = math.inf
    for ks in itertools.permutations(range(4), 3):
        try:
            best = min(best, sum(assignment_cost(inst.vehicles[k], inst.tasks[t].duration)
                                 for t, k in enumerate(ks)))
        except Exception:
            continue
    assert sol.objective == pytest.approx(best, abs=1e-9)
    assert check_solution(inst, sol).ok


def test_lp_optimal_initial_set_needs_no_pricing():
    inst = chain_instance()
    trace = io.StringIO()
    sol = run_column_generation(inst, CGConfig(trace=trace))
    assert sol.diagnostics["columns_generated"] == 0
    assert sol.diagnostics["iterations"] == 1
    assert [a.combination.tasks for a in sol.assignments] == [(0, 1, 2)]
    assert trace.getvalue().startswith("iter=1 phase=2 active=3 lp_objective=")


def test_phase_one_when_initial_columns_do_not_fit_fleet():
    # greedy takes 0 -> 1 (too long for the only vehicle); singletons are needed
    inst = make_instance([10, 60], [5, 5], deadhead=[[0, 45], [0, 0]], epsilon=0,
                         vehicles=((20, 1, .5), (20, 1, .5)))
    g = build_graph(inst)
    assert list(g.arcs()) == [(0, 1)]
    sol = run_column_generation(inst, CGConfig(gap=0))
    assert sorted(a.combination.tasks for a in sol.assignments) == [(0,), (1,)]


def test_infeasible_fleet_reports_uncovered():
    inst = make_instance([10, 60], [5, 30], epsilon=0, vehicles=((20, 1, .5),))
    with pytest.raises(InfeasibleError) as err:
        run_column_generation(inst)
    assert 1 in err.value.uncovered


def test_too_few_vehicles_infeasible():
    inst = make_instance([10, 60, 110], [5, 5, 5], epsilon=0, vehicles=((20, 1, .5), (20, 1, .5)))
    with pytest.raises(InfeasibleError):
        run_column_generation(inst)


@pytest.mark.parametrize("seed", range(5))
def test_backends_agree(seed):
    inst = generate(GenParams(15, seed=seed))
    a = run_column_generation(inst, CGConfig(backend="simplex"))
    b = run_column_generation(inst, CGConfig(backend="highs"))
    assert a.objective == pytest.approx(b.objective, rel=1e-3)
    assert check_solution(inst, a).ok and check_solution(inst, b).ok


def test_solution_diagnostics():
    inst = generate(GenParams(12, seed=9))
    d = run_column_generation(inst).diagnostics
    for key in ("iterations", "columns_generated", "pool_size", "lp_objective", "min_reduced_cost",
                "ip_gap", "integrality_gap", "multiply_covered"):
        assert key in d
    assert d["min_reduced_cost"] >= -1e-7
