"""Run all four protocols on one shared field and compare their lifetimes.

Every protocol sees the same node layout and the same readings because
they share the scenario seed. Run with ``python demos/02_protocol_lifetimes.py``
(takes about half a minute).
"""

import numpy as np

from priyasim.engine import PROTOCOLS, Scenario, run

SEED = 7
reports = {p: run(Scenario(protocol=p, seed=SEED)) for p in PROTOCOLS}

# %% lifetime summary
print(f"{'protocol':<8} {'1st death':>9} {'all dead':>9} {'BS pkts':>8} {'delay s':>8}")
for p, rep in reports.items():
    s = rep.summary
    print(f"{p:<8} {s.first_death_round:>9} {s.all_dead_round or '-':>9} "
          f"{s.bs_packets:>8} {s.avg_delay:>8.2f}")

# %% alive nodes at a few checkpoints
checkpoints = [500, 1000, 2000, 3000, 4000, 6000]
print("\nalive nodes by round")
for p, rep in reports.items():
    alive = np.asarray(rep.alive)
    row = [int(alive[min(c, len(alive) - 1)]) for c in checkpoints]
    print(f"{p:<8}", " ".join(f"{v:>5}" for v in row))

# %% load balance before anyone dies: energy spread after 1500 rounds
for p in PROTOCOLS:
    d = np.asarray(run(Scenario(protocol=p, seed=SEED, max_rounds=1500)).node_dissipation)
    top = np.argsort(d)[-3:][::-1]
    print(f"{p:<8} mean {d.mean():.3f} J  max {d.max():.3f} J  heaviest {top.tolist()}")
