import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from locc2n.bipartite import PureState, decompose
from locc2n.linalg import haar_random_unitary, unitarity_residual
from locc2n.protocol import confusion_matrix
from locc2n.zero_diag import equalize_pair, overlap_matrix, two_state_protocol, zero_diagonal_unitary

from .conftest import basis_state


class TestEqualizePair:
    def test_pauli_z(self):
        g = equalize_pair(np.diag([1, -1]))
        np.testing.assert_allclose(g, np.array([[1, 1], [1, -1]]) / np.sqrt(2), atol=1e-15)
        np.testing.assert_allclose(np.diag(g.conj().T @ np.diag([1, -1]) @ g), [0, 0], atol=1e-15)

    def test_identity(self):
        g = equalize_pair(np.eye(2))
        np.testing.assert_allclose(np.diag(g.conj().T @ g), [1, 1])

    def test_random(self):
        rng = np.random.default_rng(0)
        for _ in range(1000):
            b = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
            g = equalize_pair(b)
            r = g.conj().T @ b @ g
            assert abs(r[0, 0] - r[1, 1]) <= 1e-12
            assert abs(r[0, 0] - np.trace(b) / 2) <= 1e-12
            assert unitarity_residual(g) <= 1e-14

    def test_nearly_parallel_split(self):
        # tiny diagonal, large off-diagonal: a regime where angle-based formulas fail
        b = np.array([[1e-9 + 4e-9j, 5e-3 - 0.13j], [-0.24 - 0.5j, -1.6e-9 - 1.4e-9j]])
        r = equalize_pair(b).conj().T @ b @ equalize_pair(b)
        assert abs(r[0, 0] - r[1, 1]) <= 1e-15


class TestZeroDiagonal:
    def test_zero_matrix(self):
        zd = zero_diagonal_unitary(np.zeros((3, 3)))
        np.testing.assert_array_equal(zd.unitary, np.eye(3))
        assert zd.iterations == 0

    def test_pauli_z(self):
        zd = zero_diagonal_unitary(np.diag([1, -1]))
        w = zd.unitary
        np.testing.assert_allclose(w.conj().T @ np.diag([1, -1]) @ w, [[0, 1], [1, 0]], atol=1e-15)

    def test_random_10(self):
        rng = np.random.default_rng(1)
        m = rng.standard_normal((10, 10)) + 1j * rng.standard_normal((10, 10))
        m -= np.trace(m) / 10 * np.eye(10)
        zd = zero_diagonal_unitary(m)
        final = zd.unitary.conj().T @ m @ zd.unitary
        assert np.max(np.abs(np.diag(final))) <= 1e-10
        assert unitarity_residual(zd.unitary) <= 1e-12
        assert abs(np.trace(final) - np.trace(m)) <= 1e-12
        assert zd.monotone

    def test_fixed_prefix_untouched(self):
        rng = np.random.default_rng(2)
        m = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
        m[0, 0] = 0
        m[1:, 1:] -= np.trace(m) / 4 * np.eye(4)
        w = zero_diagonal_unitary(m, fixed_prefix=1).unitary
        np.testing.assert_array_equal(w[0], [1, 0, 0, 0, 0])
        np.testing.assert_array_equal(w[:, 0], [1, 0, 0, 0, 0])

    def test_rejects_trace(self):
        with pytest.raises(ValueError):
            zero_diagonal_unitary(np.diag([1, 0]))

    def test_rejects_nonzero_fixed_entry(self):
        with pytest.raises(ValueError):
            zero_diagonal_unitary(np.diag([1, -1, 0]), fixed_prefix=1)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 12), st.integers(0, 2**32 - 1))
def test_zero_diagonal_property(d, seed):
    rng = np.random.default_rng(seed)
    m = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    m -= np.trace(m) / d * np.eye(d)
    zd = zero_diagonal_unitary(m)
    h = np.array(zd.deviation_history)
    assert np.all(np.diff(h) < 0)
    # per-step decrease is at least |M_ii|^2 / 2 >= S / (2 d)
    assert np.all(h[1:] <= h[:-1] * (1 - 1 / (2 * d)) + 1e-24)
    assert np.max(np.abs(np.diag(zd.unitary.conj().T @ m @ zd.unitary))) <= 1e-10


class TestTwoState:
    def test_product_pair(self):
        psi, phi = basis_state(2, 2, 0, 0), basis_state(2, 2, 1, 1)
        p = two_state_protocol(psi, phi)
        np.testing.assert_allclose(np.abs(p.first_basis), np.eye(2))
        np.testing.assert_allclose(confusion_matrix(p, [psi, phi])[:, :2], np.eye(2), atol=1e-15)

    def test_bell_pair_uses_x_basis(self, bell):
        psi, phi = bell["phi+"], bell["phi-"]
        np.testing.assert_allclose(overlap_matrix(psi, phi), np.diag([0.5, -0.5]))
        p = two_state_protocol(psi, phi)
        np.testing.assert_allclose(np.abs(p.first_basis), np.full((2, 2), 1 / np.sqrt(2)), atol=1e-15)
        np.testing.assert_allclose(confusion_matrix(p, [psi, phi])[:, :2], np.eye(2), atol=1e-15)

    def test_random_5x4(self):
        u = haar_random_unitary(20, 3)
        states = [PureState.from_vector(u[:, k], 5, 4) for k in (0, 1)]
        cm = confusion_matrix(two_state_protocol(*states), states)
        assert np.max(np.abs(cm[:, :2] - np.eye(2))) <= 1e-9

    def test_local_unitary_covariance(self):
        rng = np.random.default_rng(4)
        for _ in range(10):
            u = haar_random_unitary(12, rng)
            states = [PureState.from_vector(u[:, k], 3, 4) for k in (0, 1)]
            la, lb = haar_random_unitary(3, rng), haar_random_unitary(4, rng)
            moved = [PureState(la @ s.coeffs @ lb.T) for s in states]
            for pair in (states, moved):
                cm = confusion_matrix(two_state_protocol(*pair), pair)
                assert np.max(np.abs(cm[:, :2] - np.eye(2))) <= 1e-9

    def test_fixed_first_axis(self):
        rng = np.random.default_rng(5)
        # both states orthogonal to |0>|0>, with orthogonal |0> components
        c1 = np.zeros((3, 3), dtype=complex)
        c2 = np.zeros((3, 3), dtype=complex)
        c1[0, 1], c2[0, 2] = 0.6, 0.6
        c1[1:] = rng.standard_normal((2, 3))
        c2[1:] = rng.standard_normal((2, 3))
        c1[1:] *= 0.8 / np.linalg.norm(c1[1:])
        v1, v2 = c1[1:].ravel(), c2[1:].ravel()
        v2 = v2 - np.vdot(v1, v2) / np.vdot(v1, v1) * v1
        c2[1:] = (0.8 * v2 / np.linalg.norm(v2)).reshape(2, 3)
        psi, phi = PureState(c1), PureState(c2)
        p = two_state_protocol(psi, phi, fixed_first_axis=True)
        np.testing.assert_allclose(p.first_basis[:, 0], [1, 0, 0], atol=1e-15)
        np.testing.assert_allclose(confusion_matrix(p, [psi, phi])[:, :2], np.eye(2), atol=1e-9)

    def test_rejects_non_orthogonal(self, bell):
        with pytest.raises(ValueError):
            two_state_protocol(bell["phi+"], bell["phi+"])

    def test_alice_basis_from_conjugated_unitary(self, bell):
        # the first-party basis must be conj(W); check the components directly
        u = haar_random_unitary(6, 6)
        states = [PureState.from_vector(u[:, k], 3, 2) for k in (0, 1)]
        p = two_state_protocol(*states)
        dec = decompose(states, p.first_basis)
        for a in range(3):
            assert abs(dec.overlaps(a)[0, 1]) <= 1e-10
