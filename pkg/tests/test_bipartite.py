import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from locc2n.bipartite import (
    PureState,
    Subspace,
    decompose,
    haar_random_subspace,
    planted_product_subspace,
    subspace_from_vectors,
    swap_roles,
    walgate_form_check,
)
from locc2n.linalg import RankDeficiencyError, gram, haar_random_unitary

from .conftest import S, basis_state


class TestDecompose:
    def test_product(self):
        dec = decompose([basis_state(2, 3, 0, 0)])
        np.testing.assert_array_equal(dec.components[0, 0], [1, 0, 0])
        np.testing.assert_array_equal(dec.components[0, 1], [0, 0, 0])

    def test_bell(self, bell):
        dec = decompose([bell["phi+"]])
        np.testing.assert_allclose(dec.components[0, 0], [S, 0])
        np.testing.assert_allclose(dec.components[0, 1], [0, S])

    def test_random_reassembly(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            m, n = rng.integers(1, 6, size=2)
            q = haar_random_subspace(m, n, int(rng.integers(1, m * n + 1)), rng)
            dec = decompose(q.basis, haar_random_unitary(m, rng))
            coeffs = np.stack([s.coeffs for s in q.basis])
            assert np.max(np.abs(dec.reassemble() - coeffs)) <= 1e-12

    def test_rejects_nonorthonormal_basis(self, bell):
        with pytest.raises(ValueError):
            decompose([bell["phi+"]], np.array([[1, 1], [0, 1]]))


class TestFormCheck:
    def test_phi_plus_psi_plus(self, bell):
        assert walgate_form_check([bell["phi+"], bell["psi+"]]).passed

    def test_phi_plus_phi_minus(self, bell):
        check = walgate_form_check([bell["phi+"], bell["phi-"]])
        assert not check.passed
        assert abs(check.residual - 0.5) <= 1e-15

    def test_single_state(self, bell):
        assert walgate_form_check([bell["psi-"]]) == (True, 0.0)

    def test_phase_and_relabel_invariance(self):
        rng = np.random.default_rng(3)
        for _ in range(30):
            q = haar_random_subspace(3, 3, 4, rng)
            alice = haar_random_unitary(3, rng)
            base = walgate_form_check(q.basis, alice).residual
            phases = np.exp(2j * np.pi * rng.uniform(size=4))
            perm = rng.permutation(4)
            moved = [PureState(phases[k] * q.basis[k].coeffs) for k in perm]
            assert abs(walgate_form_check(moved, alice).residual - base) <= 1e-14


class TestSubspaceFromVectors:
    def test_orthonormal_unchanged(self):
        q = haar_random_subspace(2, 3, 3, 1)
        again = subspace_from_vectors(q.basis, 2, 3)
        assert not again.reorthonormalized
        np.testing.assert_allclose(again.matrix, q.matrix, atol=1e-12)

    def test_same_span(self):
        v00 = np.array([1, 0, 0, 0])
        q = subspace_from_vectors([v00, np.array([1, 0, 0, 1])], 2, 2)
        assert q.reorthonormalized
        assert np.max(np.abs(gram(q.matrix) - np.eye(2))) <= 1e-12
        # projector onto span{|00>, |11>}
        expected = np.diag([1, 0, 0, 1])
        assert np.max(np.abs(q.projector() - expected)) <= 1e-10

    def test_dependent(self):
        v = np.array([1, 2, 0, 1j])
        with pytest.raises(RankDeficiencyError):
            subspace_from_vectors([v, 2 * v], 2, 2)


class TestRandomSubspaces:
    def test_full_space(self):
        q = haar_random_subspace(2, 3, 6, 0)
        assert np.max(np.abs(q.projector() - np.eye(6))) <= 1e-12

    def test_reproducible(self):
        np.testing.assert_array_equal(haar_random_subspace(2, 4, 3, 7).matrix, haar_random_subspace(2, 4, 3, 7).matrix)

    def test_gram(self):
        q = haar_random_subspace(2, 4, 3, 8)
        assert np.max(np.abs(gram(q.matrix) - np.eye(3))) <= 1e-12

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            haar_random_subspace(2, 2, 5, 0)


class TestPlanted:
    @pytest.mark.parametrize("dims", [(2, 2), (3, 4), (5, 3)])
    def test_witness_membership(self, dims):
        q, w = planted_product_subspace(*dims, seed=sum(dims))
        assert q.dim == 3
        assert q.membership_residual(w.state) <= 1e-10
        assert w.state.schmidt_coefficients()[1] <= 1e-12
        assert np.max(np.abs(gram(q.matrix) - np.eye(3))) <= 1e-12


class TestSwap:
    def test_involution(self):
        q = haar_random_subspace(2, 5, 4, 0)
        np.testing.assert_array_equal(swap_roles(swap_roles(q)).matrix, q.matrix)

    def test_symmetric_state(self, bell):
        q = Subspace(2, 2, (bell["phi+"],))
        np.testing.assert_array_equal(swap_roles(q).matrix, q.matrix)

    def test_dims(self):
        q = swap_roles(haar_random_subspace(2, 5, 4, 0))
        assert (q.dim_a, q.dim_b) == (5, 2)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_reassembly_property(m, n, seed):
    rng = np.random.default_rng(seed)
    q = haar_random_subspace(m, n, int(rng.integers(1, m * n + 1)), rng)
    dec = decompose(q.basis, haar_random_unitary(m, rng))
    assert np.max(np.abs(dec.reassemble() - np.stack([s.coeffs for s in q.basis]))) <= 1e-12
