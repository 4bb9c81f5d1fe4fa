"""A small timing sweep, the library form of ``python -m truckload bench``.

Every instance is solved by both methods; the report keeps raw runs and
per-size means.  Mismatching objectives are listed instead of raising.

    python demos/bench_sweep.py
"""

from truckload import run_bench

report = run_bench([8, 12, 16], reps=3, strict=False,
                   progress=lambda row: print(f"  size {row.size} seed {row.seed} "
                                              f"{row.method:>5}: {row.objective:.2f} "
                                              f"in {row.wall_time:.2f}s"))
print()
print(report.summary_csv())
for size in report.sizes():
    print(f"size {size}: cg is {report.speedup(size):.1f}x faster")
for m in report.mismatches():
    print("mismatch:", m)
