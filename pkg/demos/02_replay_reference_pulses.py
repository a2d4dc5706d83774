"""Replay the bundled reference pulse tables and measure their gate errors.

Each table drives the default chain for its stated duration; the evolved
operator is compared against the exact target of the corresponding
elementary gate. Two tables (u3, u8) converged to ~0.06-0.09 rather than
the few-percent level of the rest; u3's duration actually sits below the
minimum time its block needs on this chain (see the README), so that
residual is physical, not numerical.
"""

from spincompile.instructions import (bundled_pulse_ids,
                                      load_bundled_realizations, quvis3_set)

iset = load_bundled_realizations(quvis3_set())

print(f"{'gate':<6}{'T':>6}{'K':>6}{'width':>7}{'error':>10}")
for m in range(9):
    eg = iset[f"u{m}"]
    sched = eg.realized_schedule
    print(f"u{m:<5}{sched.total_time:>6}{sched.n_slices:>6}"
          f"{eg.width:>7}{eg.realized_error:>10.4f}")

extra = [gid for gid in bundled_pulse_ids() if not gid.startswith("u")]
print(f"\nalso bundled: {', '.join(extra)}")
