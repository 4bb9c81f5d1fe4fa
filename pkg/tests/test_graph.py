import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import chain_instance, compat_pairs, make_instance
from truckload.errors import InvalidInputError, ValidationError
from truckload.graph import (build_graph, compatibility_matrix, deadhead_time, is_chain,
                             is_compatible)
from truckload.instances import GenParams, generate
from truckload.model import Instance, Location, Task, Vehicle


def _two_located(client_xy, depot_xy, speed=1.0):
    tasks = (Task(0, Location("C0", *client_xy), Location("R0", 9, 9), 50, 5),
             Task(1, Location("C1", 7, 7), Location("R1", *depot_xy), 80, 5))
    return Instance(tasks, (Vehicle(0, 100, 1, .5),), 10.0, speed=speed)


def test_deadhead_explicit_matrix_passthrough():
    inst = make_instance([10, 20], [2, 3], deadhead=[[0, 5], [2, 0]])
    assert deadhead_time(0, 1, inst) == 5


def test_deadhead_from_coordinates_client_to_depot():
    assert deadhead_time(0, 1, _two_located((0, 0), (3, 4))) == 5
    assert deadhead_time(0, 1, _two_located((0, 0), (3, 4), speed=2.0)) == 2.5


def test_deadhead_zero_when_client_is_next_depot():
    assert deadhead_time(0, 1, _two_located((3, 4), (3, 4))) == 0


def test_deadhead_same_task_rejected():
    with pytest.raises(InvalidInputError):
        deadhead_time(1, 1, make_instance([10, 20], [2, 3]))


@pytest.mark.parametrize("Tj,expected", [(19, True), (17, False), (21, False), (18, True), (20, True)])
def test_is_compatible_window(Tj, expected):
    inst = make_instance([10, Tj], [2, 3], deadhead=[[0, 5], [5, 0]], epsilon=2)
    assert is_compatible(0, 1, inst) is expected


def test_single_task_graph_has_no_arcs():
    assert build_graph(make_instance([10], [2])).arc_count == 0


def test_two_task_graph_forward_arc_only():
    inst = make_instance([10, 19], [2, 3], deadhead=[[0, 5], [5, 0]], epsilon=2)
    assert list(build_graph(inst).arcs()) == [(0, 1)]


def test_chain_skip_arc_excluded():
    inst = chain_instance()
    g = build_graph(inst)
    assert list(g.arcs()) == [(0, 1), (1, 2)]
    assert set(g.arcs()) == compat_pairs(inst)
    assert is_chain([0, 1, 2], g) and not is_chain([0, 2], g)


def test_build_graph_rejects_invalid_instance():
    with pytest.raises(ValidationError):
        build_graph(make_instance([10, 20], [0, 3]))


@pytest.mark.parametrize("seed", range(6))
@pytest.mark.parametrize("n", [10, 30, 50])
def test_graph_matches_pairwise_rule(n, seed):
    inst = generate(GenParams(n, seed=seed))
    g = build_graph(inst)
    assert set(g.arcs()) == compat_pairs(inst)
    for i, j in g.arcs():
        assert inst.delivery_times[j] > inst.delivery_times[i]
    assert all(list(s) == sorted(s) for s in g.succ)


def test_vectorised_matches_scalar():
    inst = generate(GenParams(25, seed=3, epsilon=60))
    M = compatibility_matrix(inst)
    for i in range(inst.n_tasks):
        for j in range(inst.n_tasks):
            if i != j:
                assert M[i, j] == is_compatible(i, j, inst)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.permutations(range(12)))
def test_graph_invariant_under_task_permutation(seed, perm):
    inst = generate(GenParams(12, seed=seed, epsilon=60))
    shuffled = Instance(tuple(inst.tasks[p] for p in perm), inst.vehicles, inst.epsilon,
                        speed=inst.speed)
    g, h = build_graph(inst), build_graph(shuffled)
    relabelled = {(perm[i], perm[j]) for i, j in h.arcs()}
    assert relabelled == set(g.arcs())


def test_generated_deadhead_triangle_inequality():
    # client(i) -> depot(k) is never longer than going through task j's depot and client
    inst = generate(GenParams(20, seed=7))
    d = inst.deadhead_matrix
    leg = np.array([t.depot.distance_to(t.client) for t in inst.tasks])
    n = inst.n_tasks
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if len({i, j, k}) == 3:
                    assert d[i, k] <= d[i, j] + leg[j] + d[j, k] + 1e-9
