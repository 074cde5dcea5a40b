"""Bipartite pure states, subspaces and first-party component decompositions.

A state on C^dimA (x) C^dimB is stored as its ``dimA x dimB`` coefficient
matrix ``C`` with ``|psi> = sum_{a,b} C[a, b] |a>|b>``; the flattened vector uses
the joint index ``a * dimB + b`` (numpy row-major order, consistent with
``np.kron``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .linalg import (
    DERIVED_TOL,
    RankDeficiencyError,
    as_matrix,
    basis_matrix,
    columns,
    gram,
    haar_random_unitary,
    random_unit_vector,
)


@dataclass(frozen=True, eq=False)
class PureState:
    coeffs: np.ndarray

    def __post_init__(self):
        c = as_matrix(self.coeffs, "coeffs")
        norm = np.linalg.norm(c)
        if abs(norm - 1) > DERIVED_TOL:
            raise ValueError(f"state is not normalized (norm {norm:.12f})")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_vector(cls, vector, dim_a: int, dim_b: int) -> "PureState":
        v = np.asarray(vector, dtype=complex).ravel()
        if v.shape[0] != dim_a * dim_b:
            raise ValueError(f"vector of length {v.shape[0]} does not fit {dim_a}x{dim_b}")
        return cls(v.reshape(dim_a, dim_b))

    @classmethod
    def product(cls, alice, bob) -> "PureState":
        return cls(np.outer(np.asarray(alice, dtype=complex), np.asarray(bob, dtype=complex)))

    @property
    def dim_a(self) -> int:
        return self.coeffs.shape[0]

    @property
    def dim_b(self) -> int:
        return self.coeffs.shape[1]

    @property
    def vector(self) -> np.ndarray:
        return self.coeffs.reshape(-1)

    def schmidt_coefficients(self) -> np.ndarray:
        return np.linalg.svd(self.coeffs, compute_uv=False)

    def swapped(self) -> "PureState":
        return PureState(self.coeffs.T)

    def __repr__(self):
        return f"PureState({self.dim_a}x{self.dim_b})"


class ProductWitness(NamedTuple):
    """A product state ``alice (x) bob`` asserted to lie in some subspace."""

    alice: np.ndarray
    bob: np.ndarray

    @property
    def state(self) -> PureState:
        return PureState.product(self.alice, self.bob)

    def swapped(self) -> "ProductWitness":
        return ProductWitness(self.bob, self.alice)


@dataclass(frozen=True, eq=False)
class Subspace:
    """An orthonormal basis of a subspace of C^dimA (x) C^dimB."""

    dim_a: int
    dim_b: int
    basis: tuple[PureState, ...]
    reorthonormalized: bool = field(default=False, compare=False)

    def __post_init__(self):
        basis = tuple(self.basis)
        object.__setattr__(self, "basis", basis)
        if len(basis) > self.dim_a * self.dim_b:
            raise ValueError("more basis states than the joint dimension")
        for s in basis:
            if s.coeffs.shape != (self.dim_a, self.dim_b):
                raise ValueError(f"state of shape {s.coeffs.shape} in a {self.dim_a}x{self.dim_b} subspace")
        if basis:
            off = np.max(np.abs(gram(self.matrix) - np.eye(len(basis))))
            if off > DERIVED_TOL:
                raise ValueError(f"basis is not orthonormal (max deviation {off:.3e})")

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def matrix(self) -> np.ndarray:
        """Basis vectors as the columns of a ``dimA*dimB x d`` isometry."""
        if not self.basis:
            return np.zeros((self.dim_a * self.dim_b, 0), dtype=complex)
        return np.stack([s.vector for s in self.basis], axis=1)

    def projector(self) -> np.ndarray:
        m = self.matrix
        return m @ m.conj().T

    def membership_residual(self, state) -> float:
        v = state.vector if isinstance(state, PureState) else np.asarray(state, dtype=complex).ravel()
        m = self.matrix
        return float(np.linalg.norm(v - m @ (m.conj().T @ v)))

    def swapped(self) -> "Subspace":
        return swap_roles(self)

    def __len__(self):
        return len(self.basis)

    def __iter__(self):
        return iter(self.basis)


def swap_roles(q: Subspace) -> Subspace:
    """Exchange the two parties: transpose every coefficient matrix."""
    return Subspace(q.dim_b, q.dim_a, tuple(s.swapped() for s in q.basis))


@dataclass(frozen=True, eq=False)
class ComponentDecomposition:
    """First-party components of a list of states.

    ``components[i, a]`` is the unnormalized second-party vector ``eta_a^i``
    with ``|psi_i> = sum_a |a'> (x) |eta_a^i>``, where ``|a'>`` is column ``a`` of
    ``alice_basis``.
    """

    alice_basis: np.ndarray
    components: np.ndarray

    @property
    def num_states(self) -> int:
        return self.components.shape[0]

    def overlaps(self, a: int) -> np.ndarray:
        """Gram matrix of the outcome-``a`` components across states."""
        eta = self.components[:, a, :]
        return eta.conj() @ eta.T

    def reassemble(self) -> np.ndarray:
        """Coefficient matrices, shape ``(d, dimA, dimB)``."""
        return np.einsum("xa,iab->ixb", self.alice_basis, self.components)


def decompose(states: Sequence[PureState], alice_basis=None, tol: float = DERIVED_TOL) -> ComponentDecomposition:
    if not states:
        raise ValueError("no states to decompose")
    dim_a, dim_b = states[0].coeffs.shape
    u = basis_matrix(alice_basis, dim_a, tol)
    coeffs = np.stack([s.coeffs for s in states])
    # eta_a = (<a'| (x) 1)|psi>  ->  U^dag C
    eta = np.einsum("xa,ixb->iab", u.conj(), coeffs)
    return ComponentDecomposition(u, eta)


class FormCheck(NamedTuple):
    passed: bool
    residual: float


def walgate_form_check(states: Sequence[PureState], alice_basis=None, tol: float = DERIVED_TOL) -> FormCheck:
    """Check that, for each first-party outcome, the components are pairwise orthogonal.

    This is the condition under which the first party can measure in
    ``alice_basis`` and the second party can then finish the discrimination
    with a projective measurement. For a qubit first party it is also
    necessary for first-party-goes-first discrimination.
    """
    if len(states) < 2:
        return FormCheck(True, 0.0)
    dec = decompose(states, alice_basis)
    d = dec.num_states
    mask = ~np.eye(d, dtype=bool)
    worst = max(float(np.max(np.abs(dec.overlaps(a))[mask])) for a in range(dec.alice_basis.shape[1]))
    return FormCheck(worst <= tol, worst)


def subspace_from_vectors(vectors, dim_a: int, dim_b: int, rank_tol: float = 1e-10) -> Subspace:
    """Orthonormalize raw vectors into a :class:`Subspace` with the same span.

    Inputs already orthonormal to 1e-12 are kept as they are. Otherwise the
    vectors are orthonormalized in order (QR); the result is flagged
    ``reorthonormalized`` when the input Gram matrix was off by more than 1e-8.
    """
    raw = []
    for v in vectors:
        v = v.coeffs if isinstance(v, PureState) else v
        raw.append(np.asarray(v, dtype=complex).ravel())
    if not raw:
        return Subspace(dim_a, dim_b, ())
    m = columns(raw)
    if m.shape[0] != dim_a * dim_b:
        raise ValueError(f"vectors have length {m.shape[0]}, expected {dim_a * dim_b}")
    if not np.all(np.isfinite(m)):
        raise ValueError("vectors have non-finite entries")
    deviation = float(np.max(np.abs(gram(m) - np.eye(m.shape[1]))))
    if deviation <= 1e-12:
        q = m
    else:
        s = np.linalg.svd(m, compute_uv=False)
        if m.shape[1] > m.shape[0] or s[-1] <= rank_tol * max(s[0], 1.0):
            raise RankDeficiencyError(f"vectors are linearly dependent (smallest singular value {s[-1]:.3e})")
        q, r = np.linalg.qr(m)
        phases = np.diag(r) / np.abs(np.diag(r))
        q = q * phases
    states = tuple(PureState(q[:, k].reshape(dim_a, dim_b)) for k in range(q.shape[1]))
    return Subspace(dim_a, dim_b, states, reorthonormalized=deviation > 1e-8)


def haar_random_subspace(dim_a: int, dim_b: int, d: int, seed=None) -> Subspace:
    if not 0 <= d <= dim_a * dim_b:
        raise ValueError(f"subspace dimension {d} out of range for {dim_a}x{dim_b}")
    u = haar_random_unitary(dim_a * dim_b, seed)
    return Subspace(dim_a, dim_b, tuple(PureState(u[:, k].reshape(dim_a, dim_b)) for k in range(d)))


def planted_product_subspace(dim_a: int, dim_b: int, seed=None) -> tuple[Subspace, ProductWitness]:
    """Random 3-dim subspace guaranteed to contain a random product state."""
    if dim_a < 2 or dim_b < 2:
        raise ValueError("both local dimensions must be at least 2")
    rng = np.random.default_rng(seed)
    witness = ProductWitness(random_unit_vector(dim_a, rng), random_unit_vector(dim_b, rng))
    extra = [random_unit_vector(dim_a * dim_b, rng) for _ in range(2)]
    q = subspace_from_vectors([np.kron(witness.alice, witness.bob), *extra], dim_a, dim_b)
    # mix the basis so the witness is not simply the first element
    mix = haar_random_unitary(3, rng)
    mixed = q.matrix @ mix
    q = Subspace(dim_a, dim_b, tuple(PureState(mixed[:, k].reshape(dim_a, dim_b)) for k in range(3)))
    return q, witness
