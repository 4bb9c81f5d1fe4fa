"""Column generation against the arc-based MILP on one generated instance.

Both solve the same day of deliveries.  The exact model puts a binary on
every arc of a per-vehicle network; column generation works on whole
task sequences and only prices in the ones that can lower the cost.

    python demos/cg_vs_exact.py [n_tasks] [seed]
"""

import sys
import time

from truckload import CGConfig, GenParams, check_solution, generate, run_column_generation, solve_exact

n = int(sys.argv[1]) if len(sys.argv) > 1 else 15
seed = int(sys.argv[2]) if len(sys.argv) > 2 else 0
inst = generate(GenParams(n, seed=seed))
print(f"{inst.n_tasks} tasks, {inst.n_vehicles} vehicles, idle cap {inst.epsilon:g}")

t0 = time.perf_counter()
cg = run_column_generation(inst, CGConfig(backend="highs"))
t_cg = time.perf_counter() - t0
d = cg.diagnostics
print(f"\ncolumn generation: {cg.objective:.4f} in {t_cg:.2f}s")
print(f"  {d['pool_size']} feasible sequences, {d['initial_columns']} in the first master,"
      f" {d['columns_generated']} priced in over {d['iterations']} rounds")
print(f"  LP bound {d['lp_objective']:.4f}, integrality gap {d['integrality_gap']:.2%}")

t0 = time.perf_counter()
ex = solve_exact(inst, backend="highs")
t_ex = time.perf_counter() - t0
d = ex.diagnostics
print(f"\narc model: {ex.objective:.4f} in {t_ex:.2f}s")
print(f"  {d['binaries']} binaries, {d['rows']} rows, {d['nodes']} branch-and-bound nodes")

print(f"\nexact/cg time ratio: {t_ex / t_cg:.1f}x")
for name, sol in (("cg", cg), ("exact", ex)):
    rep = check_solution(inst, sol)
    state = "ok" if rep.ok else "; ".join(rep.violations)
    extra = "" if rep.exact_partition else f" (tasks run twice: {rep.multiply_covered})"
    print(f"{name:>5} plan check: {state}{extra}")
