"""Coarse-to-fine gradient synthesis of pulse schedules.

One synthesis run is a sequence of stages. Within a stage, Adam updates
every pulse amplitude using the exact gradient of the gate error; when the
windowed loss stops improving (or the iteration budget runs out) the
schedule is refined by halving the slice width, which preserves the
realized evolution exactly, and the next stage continues from there.

Targets are matched phase-sensitively. Because the control Hamiltonian is
traceless, every reachable evolution operator has unit determinant, so a
target whose determinant is not 1 can never be reached exactly; by default
the synthesis rephases the target to its closest unit-determinant
representative (``phase_mode="det1"``). Pass ``phase_mode="exact"`` to
optimize against the target verbatim.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, replace

import numpy as np

from .errors import BudgetUnreachable, DimensionMismatch, NonUnitaryTarget
from .evolution import DEFAULT_CONFIG, EvolutionConfig, error_and_gradient, gate_error
from .model import SpinChainModel
from .schedule import PulseSchedule, random_init, refine_double, stage_plan, zeros

DET1 = "det1"
EXACT = "exact"


@dataclass(frozen=True)
class OptimizerConfig:
    learning_rate: float = 0.01
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_eps: float = 1e-8
    max_iters_per_stage: int = 2000
    convergence_window: int = 50
    convergence_rel_tol: float = 1e-4
    n_refinements: int = 3
    init_amplitude: float = 1.0
    seed: int = 0
    field_clamp: float | None = None
    phase_mode: str = DET1

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if not (0 <= self.adam_beta1 < 1 and 0 <= self.adam_beta2 < 1):
            raise ValueError("adam betas must lie in [0, 1)")
        if self.n_refinements < 0:
            raise ValueError("n_refinements must be >= 0")
        if self.phase_mode not in (DET1, EXACT):
            raise ValueError(f"unknown phase_mode {self.phase_mode!r}")


@dataclass
class AdamState:
    m: np.ndarray
    v: np.ndarray
    t: int = 0

    @classmethod
    def like(cls, schedule: PulseSchedule) -> "AdamState":
        return cls(m=np.zeros_like(schedule.values),
                   v=np.zeros_like(schedule.values))


def adam_step(schedule: PulseSchedule, grad: np.ndarray, state: AdamState,
              cfg: OptimizerConfig):
    """One bias-corrected Adam update; returns (schedule', state')."""
    if grad.shape != schedule.values.shape:
        raise DimensionMismatch(
            f"gradient shape {grad.shape} vs values {schedule.values.shape}")
    t = state.t + 1
    m = cfg.adam_beta1 * state.m + (1 - cfg.adam_beta1) * grad
    v = cfg.adam_beta2 * state.v + (1 - cfg.adam_beta2) * grad ** 2
    m_hat = m / (1 - cfg.adam_beta1 ** t)
    v_hat = v / (1 - cfg.adam_beta2 ** t)
    vals = schedule.values - cfg.learning_rate * m_hat / (np.sqrt(v_hat) + cfg.adam_eps)
    if cfg.field_clamp is not None:
        vals = np.clip(vals, -cfg.field_clamp, cfg.field_clamp)
    return schedule.with_values(vals), AdamState(m=m, v=v, t=t)


@dataclass(frozen=True)
class OptimizationReport:
    loss_history: np.ndarray
    stage_boundaries: tuple
    final_error: float
    final_schedule: PulseSchedule
    wall_time: float
    target_phase: complex = 1.0 + 0.0j


def check_unitary_target(target: np.ndarray) -> np.ndarray:
    target = np.asarray(target, dtype=complex)
    d = target.shape[0]
    if target.shape != (d, d):
        raise NonUnitaryTarget("target must be square")
    dev = np.linalg.norm(target.conj().T @ target - np.eye(d))
    if dev > 1e-8:
        raise NonUnitaryTarget(f"target deviates from unitarity by {dev:.3e}")
    return target


def det1_phase(target: np.ndarray) -> complex:
    """Phase factor s with det(s * target) = 1, principal branch."""
    d = target.shape[0]
    return np.exp(-1j * np.angle(np.linalg.det(target)) / d)


def _converged(losses, cfg: OptimizerConfig) -> bool:
    w = cfg.convergence_window
    if len(losses) < 2 * w:
        return False
    prev = np.mean(losses[-2 * w:-w])
    cur = np.mean(losses[-w:])
    return (prev - cur) < cfg.convergence_rel_tol * max(prev, 1e-300)


def fgto_synthesize(target, model: SpinChainModel, total_time: float,
                    initial_slices: int, cfg: OptimizerConfig,
                    evo: EvolutionConfig = DEFAULT_CONFIG) -> OptimizationReport:
    """Synthesize a schedule whose evolution matches the target unitary.

    Runs n_refinements + 1 stages, halving the slice width between stages,
    and returns the best schedule encountered anywhere in the run.
    """
    t0 = time.perf_counter()
    target = check_unitary_target(target)
    if target.shape[0] != model.dim:
        raise DimensionMismatch(
            f"target dim {target.shape[0]}, model dim {model.dim}")
    phase = det1_phase(target) if cfg.phase_mode == DET1 else 1.0 + 0.0j
    work_target = phase * target

    if cfg.init_amplitude == 0:
        schedule = zeros(model.n_qubits, total_time, initial_slices)
    else:
        schedule = random_init(model.n_qubits, total_time, initial_slices,
                               cfg.init_amplitude, cfg.seed)
    losses: list[float] = []
    boundaries: list[int] = []
    best_err = np.inf
    best_schedule = schedule
    for stage in range(cfg.n_refinements + 1):
        if stage > 0:
            boundaries.append(len(losses))
            schedule = refine_double(schedule)
        state = AdamState.like(schedule)
        stage_losses: list[float] = []
        for it in range(cfg.max_iters_per_stage):
            err, grad = error_and_gradient(work_target, model, schedule, evo)
            stage_losses.append(err)
            if err < best_err:
                best_err = err
                best_schedule = schedule
            if err == 0.0 or _converged(stage_losses, cfg):
                break
            if it == cfg.max_iters_per_stage - 1:
                break  # keep the recorded loss aligned with the schedule
            schedule, state = adam_step(schedule, grad, state, cfg)
        losses.extend(stage_losses)
        if best_err == 0.0:
            break

    final_error = gate_error(work_target, model, best_schedule, evo)
    return OptimizationReport(
        loss_history=np.array(losses),
        stage_boundaries=tuple(boundaries),
        final_error=final_error,
        final_schedule=best_schedule,
        wall_time=time.perf_counter() - t0,
        target_phase=phase,
    )


def synthesize_auto(target, model, total_time, cfg,
                    evo: EvolutionConfig = DEFAULT_CONFIG) -> OptimizationReport:
    """fgto_synthesize with the default coarse-to-fine stage plan."""
    k0, refinements = stage_plan(total_time)
    if refinements != cfg.n_refinements:
        cfg = replace(cfg, n_refinements=refinements)
    return fgto_synthesize(target, model, total_time, k0, cfg, evo)


def multi_seed_synthesize(target, model, total_time, cfg, seeds,
                          error_budget: float,
                          evo: EvolutionConfig = DEFAULT_CONFIG):
    """Try seeds in order; return the first report meeting the budget, else
    the best report. Second return element says whether the budget was met."""
    best = None
    for seed in seeds:
        report = synthesize_auto(target, model, total_time,
                                 replace(cfg, seed=int(seed)), evo)
        if best is None or report.final_error < best.final_error:
            best = report
        if report.final_error <= error_budget:
            return report, True
    return best, False


def time_cost_search(target, model: SpinChainModel, cfg: OptimizerConfig,
                     error_budget: float, t_grid, restarts: int = 1,
                     evo: EvolutionConfig = DEFAULT_CONFIG):
    """Smallest grid time whose synthesis meets the budget.

    Returns (time, report). Raises BudgetUnreachable (carrying all
    per-point reports) if no grid point succeeds.
    """
    t_grid = list(t_grid)
    if any(b <= a for a, b in zip(t_grid, t_grid[1:])):
        raise ValueError("t_grid must be strictly ascending")
    attempts = []
    for t in t_grid:
        seeds = [cfg.seed + i for i in range(restarts)]
        report, ok = multi_seed_synthesize(target, model, t, cfg, seeds,
                                           error_budget, evo)
        attempts.append((t, report))
        if ok:
            return t, report
    raise BudgetUnreachable(
        f"no grid point reached error {error_budget:g}", reports=attempts)
