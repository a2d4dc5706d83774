"""Synthesize the pulses for a controlled phase gate by direct control.

The chain is two spins with an always-on z-z coupling; the only knobs are
the transverse fields on each spin, one constant value per time slice.
Starting from a coarse slicing, the optimizer runs Adam on the exact
gradient of the gate error and halves the slice width whenever progress
stalls, so early iterations explore a smooth low-dimensional landscape
and later ones refine the fine structure.

One detail worth seeing once: the evolution operator of a traceless
Hamiltonian always has determinant one, while diag(1, 1, 1, i) does not.
The synthesizer therefore matches the closest unit-determinant version of
the target (a global phase, reported in the result) - without it, the
error could never drop below ~0.78 no matter how long the pulses run.
"""

import numpy as np

from spincompile.gates import controlled_phase
from spincompile.model import nearest_neighbor_chain
from spincompile.optimizer import OptimizerConfig, synthesize_auto
from spincompile.schedule import write_pulse_table

target = controlled_phase(np.pi / 2).matrix
model = nearest_neighbor_chain(2)

# 0.45 time units: less than the 0.5 a single CNOT needs on this chain
report = synthesize_auto(target, model, total_time=0.45,
                         cfg=OptimizerConfig(seed=1, max_iters_per_stage=800))

print(f"final error          : {report.final_error:.2e}")
print(f"iterations           : {len(report.loss_history)}")
print(f"slice-halving points : {report.stage_boundaries}")
print(f"matched target phase : exp({np.angle(report.target_phase):+.4f}i)")
print(f"wall time            : {report.wall_time:.1f} s")

losses = report.loss_history
for b in (0, *report.stage_boundaries, len(losses) - 1):
    print(f"  loss[{b:4d}] = {losses[b]:.3e}")

with open("cphase_pulses.csv", "w") as f:
    f.write(write_pulse_table(report.final_schedule))
print("pulse table written to cphase_pulses.csv")
