"""Why column generation can come out cheaper than the exact model.

The path master asks that every task be covered at least once.  When a
long sequence that repeats a task is cheaper than two shorter ones, the
master takes it and the task is run twice.  The arc model forbids that,
so it can cost more.  Asking the master for an exact partition closes
the gap.

    python demos/covering_vs_partition.py
"""

from truckload import CGConfig, GenParams, check_solution, generate, run_column_generation, solve_exact

inst = generate(GenParams(20, seed=3))

cover = run_column_generation(inst, CGConfig(backend="highs"))
exact = solve_exact(inst, backend="highs")
part = run_column_generation(inst, CGConfig(backend="highs", partition=True))

print(f"covering master : {cover.objective:.4f}  tasks run twice: "
      f"{cover.diagnostics['multiply_covered']}")
print(f"arc model       : {exact.objective:.4f}")
print(f"partition master: {part.objective:.4f}")
print(f"\ncovering is {(exact.objective - cover.objective) / exact.objective:.2%} cheaper")

for a in cover.assignments:
    dup = set(a.combination.tasks) & set(cover.diagnostics["multiply_covered"])
    if dup:
        print(f"  vehicle {a.vehicle} runs {a.combination.tasks}, repeating {sorted(dup)}")

for name, sol in (("covering", cover), ("partition", part)):
    rep = check_solution(inst, sol)
    print(f"{name} plan valid: {rep.ok}, exact partition: {rep.exact_partition}")
