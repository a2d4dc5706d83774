"""Controllable spin-chain Hamiltonians.

Spin operators are spin-1/2 (S = sigma/2). The default chain couples
nearest neighbours at J = 2*pi through Ising z-z terms; a Heisenberg
variant couples all three components at the same strength. Transverse
magnetic fields enter scaled by 2*pi, with a configurable overall sign
(see ``field_sign`` below).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import AxisViolation, DimensionMismatch
from .linalg import kron

ISING = "ising_zz"
HEISENBERG = "heisenberg_xyz"

# Sign convention for the field terms. "fields_add": H = coupling
# + 2*pi sum_n (h^x S^x + h^y S^y + h^z S^z); "fields_subtract": the field
# terms enter with a minus sign instead. The bundled reference pulse
# tables assume the additive convention.
FIELDS_ADD = "fields_add"
FIELDS_SUBTRACT = "fields_subtract"

_PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def spin_operator(axis: str) -> np.ndarray:
    """Single-site spin-1/2 operator S^axis = sigma^axis / 2."""
    return _PAULI[axis] / 2.0


@lru_cache(maxsize=None)
def site_operator(axis: str, site: int, n_qubits: int) -> np.ndarray:
    """S^axis acting on one site of an n-qubit register (site 0 = leftmost)."""
    op = np.eye(1, dtype=complex)
    for i in range(n_qubits):
        op = kron(op, spin_operator(axis) if i == site else np.eye(2))
    op.setflags(write=False)
    return op


def _chain_couplings(n_qubits: int, j: float) -> np.ndarray:
    c = np.zeros((n_qubits, n_qubits))
    for n in range(n_qubits - 1):
        c[n, n + 1] = j
        c[n + 1, n] = j
    return c


@dataclass(frozen=True)
class SpinChainModel:
    """A register of coupled spins with transverse-field control.

    couplings[n, n'] is the two-body strength between sites n and n'
    (angular frequency); it must be symmetric with zero diagonal.
    control_axes lists the field directions the optimizer may drive;
    by default the z fields are pinned to zero.
    """

    n_qubits: int
    couplings: np.ndarray
    interaction: str = ISING
    control_axes: frozenset = frozenset({"x", "y"})
    field_sign: str = FIELDS_ADD

    def __post_init__(self):
        c = np.asarray(self.couplings, dtype=float)
        if c.shape != (self.n_qubits, self.n_qubits):
            raise DimensionMismatch(
                f"couplings shape {c.shape} for {self.n_qubits} qubits")
        if not np.allclose(c, c.T):
            raise ValueError("couplings must be symmetric")
        if np.any(np.diag(c) != 0):
            raise ValueError("self-couplings must be zero")
        if self.interaction not in (ISING, HEISENBERG):
            raise ValueError(f"unknown interaction {self.interaction!r}")
        if self.field_sign not in (FIELDS_ADD, FIELDS_SUBTRACT):
            raise ValueError(f"unknown field_sign {self.field_sign!r}")
        if not set(self.control_axes) <= {"x", "y", "z"}:
            raise ValueError("control_axes must be a subset of {x, y, z}")
        c.setflags(write=False)
        object.__setattr__(self, "couplings", c)

    @property
    def dim(self) -> int:
        return 2 ** self.n_qubits


def nearest_neighbor_chain(n_qubits: int, j: float = 2 * np.pi,
                           interaction: str = ISING,
                           field_sign: str = FIELDS_ADD) -> SpinChainModel:
    """The default chain: J_{n,n+1} = j, everything else zero."""
    return SpinChainModel(n_qubits=n_qubits,
                          couplings=_chain_couplings(n_qubits, j),
                          interaction=interaction, field_sign=field_sign)


@dataclass(frozen=True)
class FieldSnapshot:
    """Instantaneous field amplitudes per site (dimensionless; the
    Hamiltonian scales them by 2*pi)."""

    hx: np.ndarray
    hy: np.ndarray
    hz: np.ndarray

    @classmethod
    def of(cls, hx=None, hy=None, hz=None, n_qubits=None):
        def vec(v):
            if v is None:
                return np.zeros(n_qubits)
            return np.asarray(v, dtype=float)
        if n_qubits is None:
            for v in (hx, hy, hz):
                if v is not None:
                    n_qubits = len(v)
                    break
        return cls(hx=vec(hx), hy=vec(hy), hz=vec(hz))


def coupling_hamiltonian(model: SpinChainModel) -> np.ndarray:
    """The field-free part: sum over pairs n < n' of J_{nn'} two-body terms."""
    axes = ("z",) if model.interaction == ISING else ("x", "y", "z")
    n = model.n_qubits
    h = np.zeros((model.dim, model.dim), dtype=complex)
    for a in range(n):
        for b in range(a + 1, n):
            j = model.couplings[a, b]
            if j == 0.0:
                continue
            for ax in axes:
                h += j * (site_operator(ax, a, n) @ site_operator(ax, b, n))
    return h


def full_hamiltonian(model: SpinChainModel, fields: FieldSnapshot) -> np.ndarray:
    """Coupling plus 2*pi-scaled field terms, signed per model.field_sign."""
    comps = {"x": fields.hx, "y": fields.hy, "z": fields.hz}
    for ax, v in comps.items():
        v = np.asarray(v, dtype=float)
        if v.shape != (model.n_qubits,):
            raise DimensionMismatch(f"{ax} fields shape {v.shape}")
        if ax not in model.control_axes and np.any(v != 0.0):
            raise AxisViolation(f"nonzero {ax} field but axis not controllable")
    sign = 1.0 if model.field_sign == FIELDS_ADD else -1.0
    h = coupling_hamiltonian(model)
    for ax in model.control_axes:
        v = comps[ax]
        for n in range(model.n_qubits):
            if v[n] != 0.0:
                h = h + sign * 2 * np.pi * v[n] * site_operator(ax, n, model.n_qubits)
    return h
