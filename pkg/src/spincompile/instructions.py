"""Instruction sets and circuit lowering.

Two flavours of instruction set are built here:

* the variational sets ("quvis3" with gates up to 3 qubits, "quvis2" up
  to 2), whose elementary gates are whole sub-circuits realized directly
  by optimized pulse schedules, and
* the microinstruction baseline ("qumis"): one-qubit rotations plus CNOT,
  with the standard cost model (rotation theta/10 time units, CNOT 0.5).

Elementary-gate matrices come in two frames. The *circuit frame* is the
textbook convention (Hadamard, controlled phase with the phase on |11>,
plain swap); compiled circuits compose exactly to the target unitary in
this frame. The *physical frame* is what a pulse schedule can actually
reach: the register convention of the bundled tables indexes basis states
with the bit values inverted, and every reachable evolution operator has
unit determinant, so swaps carry e^{i pi/4} and a controlled phase theta
carries e^{-i theta/4}. ``physical_frame``/``circuit_frame`` convert
between the two.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import (DimensionMismatch, MissingRealization, OutOfRange,
                     SynthesisFailed, UnknownGate)
from .evolution import DEFAULT_CONFIG, evolve, gate_error
from .gates import (Gate, cnot, controlled_phase, hadamard, phase_gate, place,
                    qft_matrix, rotation, swap2)
from .model import nearest_neighbor_chain
from .optimizer import OptimizerConfig, multi_seed_synthesize
from .schedule import PulseSchedule, read_pulse_table, write_pulse_table

QUVIS3 = "quvis3"
QUVIS2 = "quvis2"
QUMIS = "qumis"

SWAP_GATE_ID = "swap"
CNOT_TIME = 0.5
ROTATION_RATE = 10.0
SWAP_TIME = 3 * CNOT_TIME

# Synthesis time budgets for the variational gates: measured durations at
# which the optimization reaches errors of order 1e-2 on the default chain.
QUVIS3_TIME = {"u0": 0.3, "u1": 2.1, "u2": 2.1, "u3": 1.4, "u4": 2.4,
               "u5": 1.5, "u6": 2.4, "u7": 1.5, "u8": 2.4,
               SWAP_GATE_ID: SWAP_TIME}
# The 2-qubit set reuses the measured budgets where the same block exists
# (v3, v5, v7 equal u3, u5, u7); the remaining entries are model values
# chosen consistently with the observed linear growth of compiled circuit times.
QUVIS2_TIME = {"w1": 1.3, "v2": 1.45, "v3": 1.4, "v4": 1.5,
               "v5": 1.5, "v6": 1.5, "v7": 1.5, "v8": 1.5, "u0": 0.3,
               SWAP_GATE_ID: SWAP_TIME}


# ---------------------------------------------------------------------------
# frame conversion


def bit_reverse(matrix: np.ndarray) -> np.ndarray:
    """Conjugate by X on every qubit (basis index j -> 2^N - 1 - j)."""
    return matrix[::-1, ::-1].copy()


def det1_rephase(matrix: np.ndarray) -> np.ndarray:
    """Scale by the principal phase making the determinant 1."""
    d = matrix.shape[0]
    return matrix * np.exp(-1j * np.angle(np.linalg.det(matrix)) / d)


def physical_swap() -> np.ndarray:
    return np.exp(1j * np.pi / 4) * swap2().matrix


def physical_cphase(theta: float) -> np.ndarray:
    return np.exp(-1j * theta / 4) * controlled_phase(theta).matrix


# ---------------------------------------------------------------------------
# the variational gates

def _phase_swap(p: int) -> np.ndarray:
    """Adjacent-pair block: controlled phase pi/2^p followed by a swap."""
    return swap2().matrix @ controlled_phase(np.pi / 2 ** p).matrix


def _physical_phase_swap(p: int) -> np.ndarray:
    return physical_swap() @ physical_cphase(np.pi / 2 ** p)


def _h_on(q: int, n: int) -> np.ndarray:
    return place(hadamard(), (q,), n)


def _cascade_head(n: int, phase_swap, h_first) -> np.ndarray:
    """H on wire 1, then phase-swap blocks walking it down to wire n."""
    u = h_first
    for p in range(1, n):
        u = place(Gate(f"v{p}", 2, phase_swap(p)), (p, p + 1), n) @ u
    return u


def quvis_gate(m: int) -> Gate:
    """Circuit-frame matrix of the m-th variational gate, m in 0..8.

    u0 is the 2-qubit Fourier block without its trailing swap; u1 is the
    3-qubit Fourier transform up to one trailing adjacent swap; u2 is the
    head of the Fourier cascade (H plus the first two phase-swap blocks).
    Odd m >= 3 is a single phase-swap block; even m >= 4 stacks two
    consecutive blocks on three wires.
    """
    if not 0 <= m <= 8:
        raise OutOfRange(f"gate index {m} outside 0..8")
    if m == 0:
        u = (place(hadamard(), (2,), 2)
             @ controlled_phase(np.pi / 2).matrix
             @ place(hadamard(), (1,), 2))
        return Gate("u0", 2, u)
    if m == 1:
        u = place(swap2(), (1, 2), 3) @ qft_matrix(3).matrix
        return Gate("u1", 3, u)
    if m == 2:
        return Gate("u2", 3, _cascade_head(3, _phase_swap, _h_on(1, 3)))
    if m % 2 == 1:
        return Gate(f"u{m}", 2, _phase_swap(m))
    u = (place(Gate("b", 2, _phase_swap(m)), (2, 3), 3)
         @ place(Gate("a", 2, _phase_swap(m - 1)), (1, 2), 3))
    return Gate(f"u{m}", 3, u)


def quvis_gate_physical(m: int) -> np.ndarray:
    """Physical-frame target for the m-th gate (what a pulse realizes)."""
    if not 0 <= m <= 8:
        raise OutOfRange(f"gate index {m} outside 0..8")
    if m == 0:
        u = (place(hadamard(), (2,), 2)
             @ physical_cphase(np.pi / 2)
             @ place(hadamard(), (1,), 2))
    elif m == 1:
        q2 = (place(hadamard(), (2,), 2) @ physical_cphase(np.pi / 2)
              @ place(hadamard(), (1,), 2))
        u = (place(Gate("q2", 2, q2), (1, 2), 3)
             @ _cascade_head(3, _physical_phase_swap, _h_on(1, 3)))
    elif m == 2:
        u = _cascade_head(3, _physical_phase_swap, _h_on(1, 3))
    elif m % 2 == 1:
        u = _physical_phase_swap(m)
    else:
        u = (place(Gate("b", 2, _physical_phase_swap(m)), (2, 3), 3)
             @ place(Gate("a", 2, _physical_phase_swap(m - 1)), (1, 2), 3))
    return bit_reverse(u)


def physical_frame(gate: Gate) -> np.ndarray:
    """Default physical-frame synthesis target for a circuit-frame gate:
    the bit-reversed, determinant-normalized matrix (principal branch).

    Gates built from swap/controlled-phase primitives carry specific
    phase branches instead; see quvis_gate_physical.
    """
    return det1_rephase(bit_reverse(gate.matrix))


def frame_phase(gate: Gate, phys: np.ndarray) -> complex:
    """Phase s with phys = s * bit_reverse(gate.matrix)."""
    tr = np.trace(bit_reverse(gate.matrix).conj().T @ phys)
    return tr / abs(tr)


def circuit_frame(realized: np.ndarray, gate: Gate, phys: np.ndarray) -> np.ndarray:
    """Map a realized (physical-frame) unitary back to the circuit frame."""
    return bit_reverse(realized) / frame_phase(gate, phys)


def snap_frame(realized: np.ndarray, gate: Gate) -> np.ndarray:
    """Circuit-frame version of a realized unitary when the physical
    branch is unknown: the frame phase is estimated from the overlap and
    snapped to the unit-determinant grid."""
    flipc = bit_reverse(gate.matrix)
    d = flipc.shape[0]
    base = -np.angle(np.linalg.det(flipc)) / d
    raw = np.angle(np.trace(flipc.conj().T @ realized))
    k = round((raw - base) / (2 * np.pi / d))
    phi = base + 2 * np.pi * k / d
    return bit_reverse(realized) * np.exp(-1j * phi)


# ---------------------------------------------------------------------------
# instruction sets

@dataclass
class ElementaryGate:
    gate_id: str
    gate: Gate
    time_cost: float
    physical_target: np.ndarray
    realized_schedule: PulseSchedule | None = None
    realized_error: float | None = None

    @property
    def width(self) -> int:
        return self.gate.n_qubits

    def realized_unitary(self, evo=DEFAULT_CONFIG) -> np.ndarray:
        """Circuit-frame unitary actually produced by the realized pulses."""
        if self.realized_schedule is None:
            raise MissingRealization(f"{self.gate_id} has no realized schedule")
        model = nearest_neighbor_chain(self.realized_schedule.n_qubits)
        u = evolve(model, self.realized_schedule, evo)
        return circuit_frame(u, self.gate, self.physical_target)


@dataclass
class InstructionSet:
    kind: str
    max_width: int
    gates: dict = field(default_factory=dict)

    def add(self, eg: ElementaryGate) -> None:
        if eg.width > self.max_width:
            raise DimensionMismatch(
                f"{eg.gate_id} is {eg.width}-qubit, set width {self.max_width}")
        self.gates[eg.gate_id] = eg

    def __getitem__(self, gate_id: str) -> ElementaryGate:
        return self.gates[gate_id]


def quvis3_set() -> InstructionSet:
    iset = InstructionSet(kind=QUVIS3, max_width=3)
    for m in range(9):
        g = quvis_gate(m)
        iset.add(ElementaryGate(gate_id=g.label, gate=g,
                                time_cost=QUVIS3_TIME[g.label],
                                physical_target=quvis_gate_physical(m)))
    sw = swap2()
    iset.add(ElementaryGate(gate_id=SWAP_GATE_ID, gate=sw,
                            time_cost=QUVIS3_TIME[SWAP_GATE_ID],
                            physical_target=bit_reverse(physical_swap())))
    return iset


def quvis2_set() -> InstructionSet:
    iset = InstructionSet(kind=QUVIS2, max_width=2)
    w1 = Gate("w1", 2, _phase_swap(1) @ place(hadamard(), (1,), 2))
    iset.add(ElementaryGate("w1", w1, QUVIS2_TIME["w1"],
                            physical_target=bit_reverse(
                                _physical_phase_swap(1)
                                @ place(hadamard(), (1,), 2))))
    for p in range(2, 9):
        g = Gate(f"v{p}", 2, _phase_swap(p))
        iset.add(ElementaryGate(f"v{p}", g, QUVIS2_TIME[f"v{p}"],
                                physical_target=bit_reverse(
                                    _physical_phase_swap(p))))
    g0 = quvis_gate(0)
    iset.add(ElementaryGate("u0", g0, QUVIS2_TIME["u0"],
                            physical_target=quvis_gate_physical(0)))
    sw = swap2()
    iset.add(ElementaryGate(SWAP_GATE_ID, sw, QUVIS2_TIME[SWAP_GATE_ID],
                            physical_target=bit_reverse(physical_swap())))
    return iset


# ---------------------------------------------------------------------------
# compiled circuits

@dataclass(frozen=True)
class CompiledCircuit:
    target_label: str
    n_qubits: int
    placements: tuple  # ordered (gate_id, positions); first entry acts first
    total_time: float
    predicted_error: float | None = None

    def compose(self, iset: InstructionSet) -> np.ndarray:
        """Exact-matrix composition of the placements, in placement order."""
        u = np.eye(2 ** self.n_qubits, dtype=complex)
        for gate_id, pos in self.placements:
            u = place(iset[gate_id].gate, pos, self.n_qubits) @ u
        return u


def _qft_stage_quvis3(j: int):
    """Placements of the width-j cascade stage in the 3-qubit set."""
    out = [("u2", (1, 2, 3))]
    last_even = j - 1 if j % 2 == 1 else j - 2
    for m in range(4, last_even + 1, 2):
        out.append((f"u{m}", (m - 1, m, m + 1)))
    if j % 2 == 0:
        out.append((f"u{j-1}", (j - 1, j)))
    return out


def compile_qft_quvis(n_qubits: int) -> CompiledCircuit:
    """Lower the n-qubit Fourier transform onto the 3-qubit variational set.

    Stages peel one qubit at a time (widest first); the base is the
    3-qubit block u1 plus the one adjacent swap it leaves over.
    """
    if not 3 <= n_qubits <= 9:
        raise OutOfRange(f"n_qubits {n_qubits} outside 3..9")
    placements = []
    for j in range(n_qubits, 3, -1):
        placements.extend(_qft_stage_quvis3(j))
    placements.append(("u1", (1, 2, 3)))
    placements.append((SWAP_GATE_ID, (1, 2)))
    iset = quvis3_set()
    total = sum(iset[g].time_cost for g, _ in placements)
    return CompiledCircuit(target_label=f"qft{n_qubits}", n_qubits=n_qubits,
                           placements=tuple(placements), total_time=total)


def compile_qft_quvis2(n_qubits: int) -> CompiledCircuit:
    """Same lowering restricted to 2-qubit blocks: each stage opens with
    the merged Hadamard/phase-swap block w1."""
    if not 3 <= n_qubits <= 9:
        raise OutOfRange(f"n_qubits {n_qubits} outside 3..9")
    placements = []
    for j in range(n_qubits, 2, -1):
        placements.append(("w1", (1, 2)))
        for p in range(2, j):
            placements.append((f"v{p}", (p, p + 1)))
    placements.append(("u0", (1, 2)))
    placements.append((SWAP_GATE_ID, (1, 2)))
    iset = quvis2_set()
    total = sum(iset[g].time_cost for g, _ in placements)
    return CompiledCircuit(target_label=f"qft{n_qubits}", n_qubits=n_qubits,
                           placements=tuple(placements), total_time=total)


# ---------------------------------------------------------------------------
# the microinstruction baseline

def qumis_decompose_controlled_phase(theta: float):
    """Parameters and placement list realizing controlled_phase(theta)
    from z rotations, CNOTs, and a phase gate on the control.

    Returns ((alpha, theta1, theta2, theta3), placements) with
    theta1 + theta2 + theta3 = 0, so the three rotations compose to the
    identity, and the product of the sequence equals the target exactly.
    Placements are (kind, parameter, positions) with the control on the
    first listed qubit.
    """
    alpha, th1, th2, th3 = theta / 2, theta / 2, -theta / 2, 0.0
    placements = (
        ("rz", th3, (2,)),
        ("cnot", None, (1, 2)),
        ("rz", th2, (2,)),
        ("cnot", None, (1, 2)),
        ("rz", th1, (2,)),
        ("phase", alpha, (1,)),
    )
    return (alpha, th1, th2, th3), placements


def qumis_placement_matrix(kind: str, param, positions, n_total: int) -> np.ndarray:
    if kind == "rz":
        g = rotation("z", param)
    elif kind == "rx":
        g = rotation("x", param)
    elif kind == "ry":
        g = rotation("y", param)
    elif kind == "phase":
        g = phase_gate(param)
    elif kind == "gphase":
        return np.exp(1j * param) * np.eye(2 ** n_total, dtype=complex)
    elif kind == "cnot":
        g = cnot()
    elif kind == SWAP_GATE_ID:
        g = swap2()
    else:
        raise UnknownGate(f"unknown placement kind {kind!r}")
    return place(g, positions, n_total)


def compose_qumis(placements, n_total: int) -> np.ndarray:
    u = np.eye(2 ** n_total, dtype=complex)
    for kind, param, pos in placements:
        u = qumis_placement_matrix(kind, param, pos, n_total) @ u
    return u


def qumis_time_cost(placements) -> float:
    """Rotation |theta|/10, CNOT 0.5, swap as three CNOTs, phase factors
    are free. Hadamard placements are not accepted; lower them first."""
    total = 0.0
    for kind, param, _pos in placements:
        if kind in ("rz", "rx", "ry"):
            total += abs(param) / ROTATION_RATE
        elif kind == "cnot":
            total += CNOT_TIME
        elif kind == SWAP_GATE_ID:
            total += SWAP_TIME
        elif kind in ("phase", "gphase"):
            total += 0.0
        else:
            raise UnknownGate(f"unknown placement kind {kind!r}")
    return total


def _qumis_h(q: int):
    """Exact Hadamard: H = e^{i pi/2} Rz(pi/2) Rx(pi/2) Rz(pi/2)."""
    return [("rz", np.pi / 2, (q,)), ("rx", np.pi / 2, (q,)),
            ("rz", np.pi / 2, (q,)), ("gphase", np.pi / 2, (q,))]


def compile_qft_qumis(n_qubits: int):
    """Lower the Fourier cascade fully to rotations + CNOT.

    Returns (placements, total_time). The placement list composes exactly
    to the Fourier matrix: each cascade stage is a Hadamard followed by
    phase-swap blocks, with the controlled phase decomposed per
    qumis_decompose_controlled_phase and each swap charged as three CNOTs.
    """
    if n_qubits < 2:
        raise OutOfRange("n_qubits must be >= 2")
    placements = []
    for j in range(n_qubits, 1, -1):
        placements.extend(_qumis_h(1))
        for p in range(1, j):
            _, cp = qumis_decompose_controlled_phase(np.pi / 2 ** p)
            for kind, param, pos in cp:
                placements.append((kind, param,
                                   tuple(q + p - 1 for q in pos)))
            placements.append((SWAP_GATE_ID, None, (p, p + 1)))
    placements.extend(_qumis_h(1))
    return placements, qumis_time_cost(placements)


# ---------------------------------------------------------------------------
# realization

def _chain_for(width: int):
    return nearest_neighbor_chain(width)


def attach_realization(eg: ElementaryGate, schedule: PulseSchedule,
                       evo=DEFAULT_CONFIG) -> None:
    """Record a schedule and its measured error against the physical target."""
    err = gate_error(eg.physical_target, _chain_for(schedule.n_qubits),
                     schedule, evo)
    eg.realized_schedule = schedule
    eg.realized_error = err


def realize_instruction_set(iset: InstructionSet, opt_cfg: OptimizerConfig,
                            budgets: dict | None = None,
                            error_budget: float = 5e-2,
                            restarts: int = 3,
                            evo=DEFAULT_CONFIG) -> InstructionSet:
    """Synthesize pulses for every gate at its time budget.

    budgets overrides per-gate synthesis durations (gate_id -> T).
    Raises SynthesisFailed (carrying the best report) on the first gate
    that misses error_budget after all restarts.
    """
    for gate_id, eg in iset.gates.items():
        t = (budgets or {}).get(gate_id, eg.time_cost)
        model = _chain_for(eg.width)
        seeds = [opt_cfg.seed + i for i in range(restarts)]
        report, ok = multi_seed_synthesize(eg.physical_target, model, t,
                                           opt_cfg, seeds, error_budget, evo)
        if not ok:
            raise SynthesisFailed(
                f"{gate_id}: best error {report.final_error:.3e} "
                f"above budget {error_budget:g} at T={t}", report=report)
        eg.realized_schedule = report.final_schedule
        eg.realized_error = report.final_error
    return iset


def circuit_error_estimate(circuit: CompiledCircuit, iset: InstructionSet,
                           target: np.ndarray | None = None,
                           evo=DEFAULT_CONFIG) -> float:
    """Frobenius distance from the target to the composition of the
    realized (imperfect) unitaries of every placement."""
    realized = {}
    for gate_id, _pos in circuit.placements:
        if gate_id not in realized:
            realized[gate_id] = Gate(gate_id, iset[gate_id].width,
                                     iset[gate_id].realized_unitary(evo))
    u = np.eye(2 ** circuit.n_qubits, dtype=complex)
    for gate_id, pos in circuit.placements:
        u = place(realized[gate_id], pos, circuit.n_qubits) @ u
    if target is None:
        target = circuit.compose(iset)
    return float(np.linalg.norm(target - u))


# ---------------------------------------------------------------------------
# bundled reference pulses

def bundled_pulse_ids():
    from importlib import resources

    root = resources.files("spincompile").joinpath("data/pulses")
    return sorted(p.name[:-4] for p in root.iterdir() if p.name.endswith(".csv"))


def load_bundled_schedule(gate_id: str) -> PulseSchedule:
    from importlib import resources

    path = resources.files("spincompile").joinpath(f"data/pulses/{gate_id}.csv")
    return read_pulse_table(path.read_text())


# Gates that are the same block under a different id (the 2-qubit set's
# odd blocks coincide with u3/u5/u7).
BUNDLE_ALIASES = {"v3": "u3", "v5": "u5", "v7": "u7"}


def load_bundled_realizations(iset: InstructionSet,
                              evo=DEFAULT_CONFIG) -> InstructionSet:
    """Attach every bundled schedule whose id matches a gate in the set."""
    available = set(bundled_pulse_ids())
    for gate_id, eg in iset.gates.items():
        source = BUNDLE_ALIASES.get(gate_id, gate_id)
        if source in available:
            attach_realization(eg, load_bundled_schedule(source), evo)
    return iset


# ---------------------------------------------------------------------------
# serialization

def instruction_set_to_json(iset: InstructionSet) -> str:
    gates = []
    for gate_id, eg in sorted(iset.gates.items()):
        entry = {
            "id": gate_id,
            "n_qubits": eg.width,
            "time_cost": eg.time_cost,
            "realized_error": eg.realized_error,
            "pulse_table": (write_pulse_table(eg.realized_schedule)
                            if eg.realized_schedule is not None else None),
        }
        gates.append(entry)
    return json.dumps({"kind": iset.kind, "max_width": iset.max_width,
                       "gates": gates}, indent=2, sort_keys=True)


def instruction_set_from_json(text: str) -> InstructionSet:
    """Rebuild a set serialized by instruction_set_to_json.

    Gate matrices are reconstructed from the set kind; only realizations
    and costs travel through the file.
    """
    data = json.loads(text)
    kind = data["kind"]
    if kind == QUVIS3:
        iset = quvis3_set()
    elif kind == QUVIS2:
        iset = quvis2_set()
    else:
        raise UnknownGate(f"cannot rebuild instruction set of kind {kind!r}")
    for entry in data["gates"]:
        eg = iset[entry["id"]]
        eg.time_cost = entry["time_cost"]
        if entry.get("pulse_table"):
            eg.realized_schedule = read_pulse_table(entry["pulse_table"])
            eg.realized_error = entry.get("realized_error")
    return iset
