"""D2D coverage radius sweep next to sparse cellular relaying.

    python scripts/coverage_sweep.py --runs 300 --out coverage.csv

Prints mean final distance (with standard error) per specification and,
with --out, writes the full per-round results file.
"""

import argparse

from swarmtwin import D2D, BatchConfig, Cellular, ScenarioConfig, run_batch
from swarmtwin import results

p = argparse.ArgumentParser()
p.add_argument("--runs", type=int, default=300)
p.add_argument("--rounds", type=int, default=500)
p.add_argument("--radii", type=float, nargs="+", default=[50, 100, 200, 400, 900])
p.add_argument("--partners", type=int, nargs="+", default=[1, 2, 5])
p.add_argument("--seed", type=int, default=0)
p.add_argument("--workers", type=int)
p.add_argument("--out")
args = p.parse_args()

schemes = [D2D(r) for r in args.radii] + [Cellular(k) for k in args.partners]
base = ScenarioConfig(agent_count=50, scheme=schemes[0], max_rounds=args.rounds, master_seed=args.seed)
res = run_batch(BatchConfig(base, args.runs, (("scheme", tuple(schemes)),)), workers=args.workers)

print(f"{'spec':<32}{'final [m]':>12}{'se':>8}  curve at rounds 0/50/100/200")
for s in res.specs:
    c = s.mean_curve
    marks = "/".join(f"{c[min(t, len(c) - 1)]:.1f}" for t in (0, 50, 100, 200))
    print(f"{s.spec.label:<32}{s.mean_final:>12.2f}{s.se_final:>8.2f}  {marks}")
if args.out:
    results.write(res, args.out)
