"""Digital twin vs full cellular exchange under a shared transmission budget.

    python scripts/budget_scaling.py --agents 10 20 30 40 50 --budget 1000
"""

import argparse

from swarmtwin import BatchConfig, Cellular, DigitalTwin, ScenarioConfig, run_batch

p = argparse.ArgumentParser()
p.add_argument("--agents", type=int, nargs="+", default=[10, 30, 50])
p.add_argument("--budget", type=int, default=1000)
p.add_argument("--runs", type=int, default=50)
p.add_argument("--seed", type=int, default=0)
p.add_argument("--workers", type=int)
args = p.parse_args()

base = ScenarioConfig(agent_count=args.agents[0], scheme=DigitalTwin(), max_rounds=10 * args.budget,
                      tx_budget=args.budget, master_seed=args.seed)
sweep = (("scheme", (DigitalTwin(), Cellular())), ("agent_count", tuple(args.agents)))
res = run_batch(BatchConfig(base, args.runs, sweep), workers=args.workers)

by = {(s.spec.config.scheme.type, s.spec.config.agent_count): s for s in res.specs}
print(f"{'I':>4}{'rounds DT':>11}{'rounds cell':>13}{'final DT':>11}{'final cell':>12}{'gap/se':>8}")
for n in args.agents:
    dt, cell = by["digital_twin", n], by["cellular", n]
    se = (dt.se_final**2 + cell.se_final**2) ** 0.5
    print(f"{n:>4}{dt.mean_rounds:>11.1f}{cell.mean_rounds:>13.1f}{dt.mean_final:>11.2f}"
          f"{cell.mean_final:>12.2f}{(cell.mean_final - dt.mean_final) / se:>8.1f}")
