import numpy as np
import pytest

from spincompile.errors import BadPlacement, OutOfRange
from spincompile.gates import (cnot, controlled_phase, hadamard, pauli_x,
                               phase_gate, place, qft_matrix, rotation, swap2,
                               swap_to_end_circuit)


def basis_state(bits):
    v = np.zeros(2 ** len(bits), dtype=complex)
    idx = 0
    for b in bits:
        idx = (idx << 1) | b
    v[idx] = 1.0
    return v


class TestRotation:
    def test_zero_angle(self):
        assert np.allclose(rotation("z", 0.0).matrix, np.eye(2))

    def test_z_diagonal(self):
        th = 0.77
        assert np.allclose(rotation("z", th).matrix,
                           np.diag([np.exp(-1j * th / 2), np.exp(1j * th / 2)]))

    def test_x_pi(self):
        sx = pauli_x().matrix
        assert np.allclose(rotation("x", np.pi).matrix, -1j * sx, atol=1e-12)

    def test_bad_axis(self):
        with pytest.raises(OutOfRange):
            rotation("q", 0.1)


class TestControlledPhase:
    def test_zero(self):
        assert np.allclose(controlled_phase(0.0).matrix, np.eye(4))

    def test_quarter(self):
        assert np.allclose(controlled_phase(np.pi / 2).matrix,
                           np.diag([1, 1, 1, 1j]))

    def test_figure_phases(self):
        for p in range(1, 9):
            th = np.pi / 2 ** p
            m = controlled_phase(th).matrix
            assert m[3, 3] == pytest.approx(np.exp(1j * th))

    def test_additivity(self):
        a, b = 0.9, -0.4
        lhs = controlled_phase(a).matrix @ controlled_phase(b).matrix
        assert np.linalg.norm(lhs - controlled_phase(a + b).matrix) <= 1e-12


class TestStandardGates:
    def test_hadamard_squares_to_identity(self):
        h = hadamard().matrix
        assert np.allclose(h @ h, np.eye(2), atol=1e-12)

    def test_cnot_involution(self):
        c = cnot().matrix
        assert np.allclose(c @ c, np.eye(4), atol=1e-12)

    def test_swap_conjugates_tensor_factors(self):
        rng = np.random.default_rng(0)
        a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        b = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        s = swap2().matrix
        assert np.allclose(s @ np.kron(a, b) @ s, np.kron(b, a))

    def test_phase_gate(self):
        assert np.allclose(phase_gate(np.pi).matrix, np.diag([1, -1]))


class TestPlace:
    def test_identity_placement(self):
        ident = type(hadamard())("i", 1, np.eye(2))
        assert np.allclose(place(ident, (2,), 3), np.eye(8))

    def test_full_width_swap(self):
        assert np.array_equal(place(swap2(), (1, 2), 2), swap2().matrix)

    def test_cnot_on_tail_matches_basis_action(self):
        u = place(cnot(), (2, 3), 3)
        for bits in [(a, b, c) for a in (0, 1) for b in (0, 1) for c in (0, 1)]:
            got = u @ basis_state(bits)
            expect = basis_state((bits[0], bits[1], bits[2] ^ bits[1]))
            assert np.allclose(got, expect), bits

    def test_noncontiguous_and_reversed_positions(self):
        u = place(cnot(), (3, 1), 3)  # control qubit 3, target qubit 1
        for bits in [(a, b, c) for a in (0, 1) for b in (0, 1) for c in (0, 1)]:
            got = u @ basis_state(bits)
            expect = basis_state((bits[0] ^ bits[2], bits[1], bits[2]))
            assert np.allclose(got, expect), bits

    def test_respects_composition(self):
        g1, g2 = cnot(), swap2()
        prod = type(g1)("p", 2, g1.matrix @ g2.matrix)
        lhs = place(prod, (2, 4), 4)
        rhs = place(g1, (2, 4), 4) @ place(g2, (2, 4), 4)
        assert np.linalg.norm(lhs - rhs) <= 1e-12

    def test_bad_placements(self):
        with pytest.raises(BadPlacement):
            place(cnot(), (1, 1), 3)
        with pytest.raises(BadPlacement):
            place(cnot(), (0, 1), 3)
        with pytest.raises(BadPlacement):
            place(cnot(), (1,), 3)


class TestQft:
    def test_single_qubit_is_hadamard(self):
        assert np.allclose(qft_matrix(1).matrix, hadamard().matrix)

    def test_two_qubit_dft(self):
        w = 1j
        expect = np.array([[w ** (j * k) for k in range(4)]
                           for j in range(4)]) / 2
        assert np.allclose(qft_matrix(2).matrix, expect)

    @pytest.mark.parametrize("n", range(1, 10))
    def test_unitarity(self, n):
        f = qft_matrix(n).matrix
        assert np.linalg.norm(f.conj().T @ f - np.eye(2 ** n)) <= 1e-12


class TestSwapToEnd:
    def test_two_qubits(self):
        assert np.array_equal(swap_to_end_circuit(2).matrix, swap2().matrix)
        sq = swap_to_end_circuit(2).matrix
        assert np.allclose(sq @ sq, np.eye(4))

    def test_three_qubit_cycle(self):
        u = swap_to_end_circuit(3).matrix
        for bits in [(a, b, c) for a in (0, 1) for b in (0, 1) for c in (0, 1)]:
            got = u @ basis_state(bits)
            expect = basis_state((bits[1], bits[2], bits[0]))
            assert np.allclose(got, expect), bits
