"""Time cost of moving the first qubit to the end of the chain.

Direct control synthesizes the whole multi-qubit swap circuit as one
pulse program. Heisenberg couplings exchange neighbouring spins natively,
so the same circuit needs noticeably less control time than under Ising
couplings, where every exchange has to be assembled from z-z evolution
and local fields. Expect a couple of minutes of optimization.
"""

from spincompile.bench import bench_swap
from spincompile.model import HEISENBERG, ISING
from spincompile.optimizer import OptimizerConfig

result = bench_swap(
    3, interactions=(ISING, HEISENBERG),
    opt_cfg=OptimizerConfig(seed=3, max_iters_per_stage=600),
    error_budget=1e-1, seeds=2,
    t_grids={
        (ISING, 2): [1.0, 1.5, 2.0],
        (ISING, 3): [2.0, 2.5, 3.0, 3.5],
        (HEISENBERG, 2): [0.5, 0.75, 1.0, 1.5],
        (HEISENBERG, 3): [1.0, 1.5, 2.0, 2.5],
    },
    jobs=2)

print(f"{'interaction':<16}{'N':>3}{'time':>8}{'error':>10}")
for row in result.rows:
    print(f"{row['interaction']:<16}{row['n']:>3}{row['time']:>8}"
          f"{row['error']:>10.4f}" + ("  (missed budget)" if row.get("failed")
                                      else ""))
for key, fit in result.fits.items():
    print(f"{key}: slope {fit.gamma:.2f} per qubit")
