"""Dense complex-matrix kernel.

Everything here operates on plain ``numpy`` complex arrays. Matrix
exponentials of Hermitian generators go through the eigendecomposition,
which keeps results exactly unitary at these dimensions (<= 512) and gives
a closed-form directional derivative via the divided-difference kernel.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NotHermitian

# Gap below which eigenvalue pairs are treated as degenerate in the
# divided-difference kernel (analytic limit instead of a 0/0 quotient).
DEGENERATE_GAP = 1e-12

_HERMITICITY_RTOL = 1e-8


def as_complex(a) -> np.ndarray:
    return np.asarray(a, dtype=complex)


def kron(a, b) -> np.ndarray:
    """Kronecker product; dimensions multiply."""
    return np.kron(as_complex(a), as_complex(b))


def frobenius_distance(a, b) -> float:
    """sqrt(sum |a_jk - b_jk|^2), unnormalized."""
    a = as_complex(a)
    b = as_complex(b)
    if a.shape != b.shape:
        raise DimensionMismatch(f"shape {a.shape} vs {b.shape}")
    return float(np.linalg.norm(a - b))


def _check_hermitian(h: np.ndarray) -> None:
    hn = np.linalg.norm(h)
    dev = np.linalg.norm(h - h.conj().T)
    if dev > _HERMITICITY_RTOL * max(hn, 1.0):
        raise NotHermitian(f"deviation {dev:.3e} exceeds {_HERMITICITY_RTOL:.0e} * norm")


@dataclass(frozen=True)
class HermitianEigen:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def eig_hermitian(h) -> HermitianEigen:
    """Eigendecomposition with a Hermiticity guard.

    Raises NotHermitian if ||h - h^dag||_F / ||h||_F > 1e-8.
    """
    h = as_complex(h)
    _check_hermitian(h)
    w, v = np.linalg.eigh(h)
    return HermitianEigen(eigenvalues=w, eigenvectors=v)


def expm_i(h, t: float) -> np.ndarray:
    """exp(-i t h) for Hermitian h, via the eigendecomposition."""
    eig = eig_hermitian(h)
    v = eig.eigenvectors
    return (v * np.exp(-1j * t * eig.eigenvalues)) @ v.conj().T


def loewner_kernel(eigenvalues: np.ndarray, t: float) -> np.ndarray:
    """Divided differences Phi_jk = (e^{-it l_j} - e^{-it l_k})/(l_j - l_k).

    Near-degenerate pairs (gap < DEGENERATE_GAP) take the analytic limit
    -it e^{-it l_j} to avoid catastrophic cancellation.
    """
    w = np.asarray(eigenvalues, dtype=float)
    ph = np.exp(-1j * t * w)
    dl = w[:, None] - w[None, :]
    close = np.abs(dl) < DEGENERATE_GAP
    num = ph[:, None] - ph[None, :]
    phi = np.where(close, -1j * t * ph[:, None], num / np.where(close, 1.0, dl))
    return phi


def frechet_expm_i(h, t: float, dh) -> np.ndarray:
    """Directional derivative of exp(-i t h) along the Hermitian direction dh."""
    h = as_complex(h)
    dh = as_complex(dh)
    if h.shape != dh.shape:
        raise DimensionMismatch(f"shape {h.shape} vs {dh.shape}")
    _check_hermitian(dh)
    eig = eig_hermitian(h)
    v = eig.eigenvectors
    phi = loewner_kernel(eig.eigenvalues, t)
    z = v.conj().T @ dh @ v
    return v @ (phi * z) @ v.conj().T
