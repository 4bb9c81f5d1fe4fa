"""Truckload vehicle scheduling with fixed delivery times and vehicle rental periods.

Two solvers share one data model: an arc-based MILP (:func:`solve_exact`)
and a path-based set-covering model priced by column generation
(:func:`run_column_generation`).  :func:`brute_force` is an exhaustive
oracle for small instances.
"""

from .arcmodel import brute_force, build_arc_model, solve_exact
from .bench import BenchReport, run_bench
from .colgen import CGConfig, column_generation_relaxation, run_column_generation
from .enumeration import ColumnPool, build_initial_set, enumerate_feasible, greedy_path_from
from .errors import (BenchMismatchError, InfeasibleAssignmentError, InfeasibleError,
                     InvalidInputError, NonTerminationError, ParseError, ResourceLimitError,
                     TruckloadError, ValidationError)
from .fileio import read_instance, read_solution, write_instance, write_solution
from .graph import CompatGraph, build_graph, deadhead_time, is_compatible
from .instances import GenParams, generate
from .model import (Assignment, Instance, Location, Solution, Task, TaskCombination, Vehicle,
                    assignment_cost, tour_duration, validate_instance)
from .validation import check_solution, validate_solution

__all__ = [
    "Assignment", "BenchMismatchError", "BenchReport", "CGConfig", "ColumnPool", "CompatGraph",
    "GenParams", "InfeasibleAssignmentError", "InfeasibleError", "Instance", "InvalidInputError",
    "Location", "NonTerminationError", "ParseError", "ResourceLimitError", "Solution", "Task",
    "TaskCombination", "TruckloadError", "ValidationError", "Vehicle", "assignment_cost",
    "brute_force", "build_arc_model", "build_graph", "build_initial_set", "check_solution",
    "column_generation_relaxation", "deadhead_time", "enumerate_feasible", "generate",
    "greedy_path_from", "is_compatible", "read_instance", "read_solution", "run_bench",
    "run_column_generation", "solve_exact", "tour_duration", "validate_instance",
    "validate_solution", "write_instance", "write_solution",
]
