import numpy as np
import pytest

from spincompile.errors import DimensionMismatch, NotHermitian
from spincompile.linalg import (eig_hermitian, expm_i, frechet_expm_i,
                                frobenius_distance, kron)

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
I2 = np.eye(2)


def random_hermitian(n, seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (a + a.conj().T) / 2


def random_unitary(n, seed):
    q, r = np.linalg.qr(random_hermitian(n, seed) + 1j * random_hermitian(n, seed + 1))
    return q * (np.diag(r) / np.abs(np.diag(r)))


class TestKron:
    def test_identity(self):
        assert np.array_equal(kron(I2, I2), np.eye(4))

    def test_diagonal_product(self):
        got = kron(SZ / 2, SZ / 2)
        assert np.allclose(got, np.diag([0.25, -0.25, -0.25, 0.25]))

    def test_hadamard_on_first_matches_basis_action(self):
        # brute force over all 4 two-qubit basis states
        got = kron(H, I2)
        for b in range(4):
            q1, q2 = b >> 1, b & 1
            expect = np.zeros(4, dtype=complex)
            # H|q1> = (|0> + (-1)^q1 |1>)/sqrt(2)
            expect[0 * 2 + q2] += 1 / np.sqrt(2)
            expect[1 * 2 + q2] += (-1) ** q1 / np.sqrt(2)
            assert np.allclose(got[:, b], expect)


class TestEigHermitian:
    def test_diag(self):
        eig = eig_hermitian(np.diag([3.0, 1.0]))
        assert np.allclose(eig.eigenvalues, [1.0, 3.0])
        assert np.allclose(np.abs(eig.eigenvectors), [[0, 1], [1, 0]])

    def test_pauli_x_spectrum(self):
        eig = eig_hermitian(SX)
        assert np.allclose(eig.eigenvalues, [-1.0, 1.0])

    def test_reconstruction(self):
        h = random_hermitian(8, seed=0)
        eig = eig_hermitian(h)
        assert frobenius_distance(eig.reconstruct(), h) <= 1e-10 * np.linalg.norm(h)
        v = eig.eigenvectors
        assert frobenius_distance(v.conj().T @ v, np.eye(8)) <= 1e-10

    def test_not_hermitian_raises(self):
        with pytest.raises(NotHermitian):
            eig_hermitian(np.array([[0, 1], [0, 0]], dtype=complex))


class TestExpmI:
    def test_zero_matrix(self):
        assert np.allclose(expm_i(np.zeros((4, 4)), 0.7), np.eye(4))

    def test_spin_half_period(self):
        got = expm_i(SZ / 2, 2 * np.pi)
        assert np.allclose(got, -np.eye(2), atol=1e-12)

    def test_against_taylor_series(self):
        h = random_hermitian(4, seed=1)
        t = 0.3
        term = np.eye(4, dtype=complex)
        total = np.eye(4, dtype=complex)
        for k in range(1, 64):
            term = term @ (-1j * t * h) / k
            total = total + term
        assert frobenius_distance(expm_i(h, t), total) <= 1e-10

    def test_unitarity(self):
        for seed in range(5):
            h = random_hermitian(8, seed=seed)
            u = expm_i(h, 1.7)
            assert frobenius_distance(u.conj().T @ u, np.eye(8)) <= 1e-10

    def test_group_property(self):
        h = random_hermitian(4, seed=3)
        lhs = expm_i(h, 0.9)
        rhs = expm_i(h, 0.5) @ expm_i(h, 0.4)
        assert frobenius_distance(lhs, rhs) <= 1e-10


class TestFrechet:
    def test_zero_direction(self):
        h = random_hermitian(4, seed=4)
        got = frechet_expm_i(h, 0.5, np.zeros((4, 4)))
        assert np.allclose(got, 0.0)

    def test_commuting_diagonal_case(self):
        lam = np.array([0.3, -1.2, 2.5])
        dh = np.diag([1.0, 2.0, -0.5])
        t = 0.8
        got = frechet_expm_i(np.diag(lam), t, dh)
        expect = np.diag(-1j * t * np.exp(-1j * t * lam) * np.diag(dh))
        assert frobenius_distance(got, expect) <= 1e-12

    def test_against_finite_differences(self):
        h = random_hermitian(4, seed=5)
        dh = random_hermitian(4, seed=6)
        t = 0.7
        eps = 1e-6
        fd = (expm_i(h + eps * dh, t) - expm_i(h - eps * dh, t)) / (2 * eps)
        got = frechet_expm_i(h, t, dh)
        assert np.max(np.abs(got - fd)) <= 1e-6

    def test_degenerate_spectrum(self):
        # repeated eigenvalues force the analytic-limit branch
        h = np.diag([1.0, 1.0, 2.0])
        dh = random_hermitian(3, seed=7)
        eps = 1e-6
        t = 0.4
        fd = (expm_i(h + eps * dh, t) - expm_i(h - eps * dh, t)) / (2 * eps)
        assert np.max(np.abs(frechet_expm_i(h, t, dh) - fd)) <= 1e-6

    def test_linearity(self):
        h = random_hermitian(4, seed=8)
        d1 = random_hermitian(4, seed=9)
        d2 = random_hermitian(4, seed=10)
        a, b = 0.7, -1.3
        lhs = frechet_expm_i(h, 0.6, a * d1 + b * d2)
        rhs = a * frechet_expm_i(h, 0.6, d1) + b * frechet_expm_i(h, 0.6, d2)
        assert frobenius_distance(lhs, rhs) <= 1e-9


class TestFrobeniusDistance:
    def test_self_distance(self):
        u = random_unitary(4, seed=11)
        assert frobenius_distance(u, u) == 0.0

    def test_sign_flip(self):
        assert np.isclose(frobenius_distance(np.eye(2), -np.eye(2)),
                          2 * np.sqrt(2))

    def test_matches_entry_sum(self):
        a = random_unitary(8, seed=12)
        b = random_unitary(8, seed=13)
        brute = np.sqrt(sum(abs(a[j, k] - b[j, k]) ** 2
                            for j in range(8) for k in range(8)))
        assert np.isclose(frobenius_distance(a, b), brute, atol=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            frobenius_distance(np.eye(2), np.eye(4))

    @pytest.mark.parametrize("seed", range(5))
    def test_metric_axioms(self, seed):
        a = random_unitary(4, seed=3 * seed)
        b = random_unitary(4, seed=3 * seed + 1)
        c = random_unitary(4, seed=3 * seed + 2)
        dab = frobenius_distance(a, b)
        assert dab >= 0
        assert np.isclose(dab, frobenius_distance(b, a), atol=1e-12)
        assert dab <= (frobenius_distance(a, c) + frobenius_distance(c, b)
                       + 1e-12)
