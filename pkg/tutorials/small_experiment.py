"""
A small reproduction experiment
===============================

Runs the ER protocol at a reduced scale and prints the aggregate table.  The
full-size version is ``netsens experiment --preset er-paper``.
"""

import time

from netsens import aggregate, load_preset, run_experiment

spec = load_preset("er-paper", runs=10, inner_samples=10,
                   mechanisms=("add_edges:0.1", "rm_nodes:0.3"))
t0 = time.perf_counter()
records = run_experiment(spec, progress=lambda k: print(f"\rrun {k}/{spec.runs}", end=""))
print(f"\n{len(records)} records in {time.perf_counter() - t0:.1f}s")

print(f"{'mechanism':>16} {'measure':>8} {'mean s':>7} {'p95 imp':>8} {'p95 iter':>8} "
      f"{'ok imp':>7} {'ok iter':>7}")
for row in aggregate(records):
    print(f"{row.mechanism + ':' + format(row.level, 'g'):>16} {row.measure.value:>8} "
          f"{row.mean_s:7.3f} {row.p95_abs_err_imp:8.3f} {row.p95_abs_err_iter:8.3f} "
          f"{row.success_rate_imp:7.2f} {row.success_rate_iter:7.2f}")
