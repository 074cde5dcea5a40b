"""One-way projective protocols for 3-dimensional subspaces containing a product state.

Pipeline, in the local frames where the product witness is ``|0>|0>``:

1. ``phi_1 = |00>`` and an orthonormal pair ``phi_2, phi_3`` completing the subspace;
2. a 2x2 SVD rotation of the pair makes their ``|0>`` components orthogonal;
3. the overlap matrix of the pair is brought to zero diagonal with index 0
   held fixed, giving a first-party basis that keeps ``|0>``;
4. outcome 0 leaves three orthogonal second-party vectors, any other outcome
   leaves two (``phi_1`` has no amplitude there).
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .bipartite import (
    ProductWitness,
    PureState,
    Subspace,
    decompose,
    swap_roles,
    walgate_form_check,
)
from .linalg import DERIVED_TOL, VerificationError, orthonormal_complete, random_unit_vector, svd
from .protocol import OneWayProtocol, build_one_way_protocol
from .zero_diag import overlap_matrix, zero_diagonal_unitary

__all__ = [
    "ThreeStateProtocol",
    "WitnessNotFound",
    "find_product_witness",
    "lpcc3_protocol",
    "swap_roles",
    "witness_residual",
]


class WitnessNotFound(LookupError):
    """The heuristic search gave up. This says nothing about absence."""


class ThreeStateProtocol(NamedTuple):
    states: tuple[PureState, PureState, PureState]
    protocol: OneWayProtocol


def witness_residual(q: Subspace, witness: ProductWitness) -> float:
    a = np.asarray(witness.alice, dtype=complex)
    b = np.asarray(witness.bob, dtype=complex)
    if a.shape != (q.dim_a,) or b.shape != (q.dim_b,):
        raise ValueError("witness dimensions do not match the subspace")
    if abs(np.linalg.norm(a) - 1) > DERIVED_TOL or abs(np.linalg.norm(b) - 1) > DERIVED_TOL:
        raise ValueError("witness vectors must be unit vectors")
    return q.membership_residual(np.kron(a, b))


def lpcc3_protocol(q: Subspace, witness: ProductWitness, tol: float = DERIVED_TOL) -> ThreeStateProtocol:
    if q.dim != 3:
        raise ValueError(f"subspace must be 3-dimensional, got {q.dim}")
    res = witness_residual(q, witness)
    if res > tol:
        raise ValueError(f"witness is not in the subspace (residual {res:.3e})")
    dim_a, dim_b = q.dim_a, q.dim_b
    ua = orthonormal_complete([witness.alice], dim_a)
    ub = orthonormal_complete([witness.bob], dim_b)

    # coefficients in the local frames: C' = Ua^dag C conj(Ub)
    local = np.stack([ua.conj().T @ s.coeffs @ ub.conj() for s in q.basis])
    flat = local.reshape(3, -1).T
    flat[0] = 0  # project out |00>
    w = svd(flat).left[:, :2]
    pair = [w[:, k].reshape(dim_a, dim_b) for k in range(2)]

    # make the |0> components orthogonal
    rot = svd(np.stack([pair[0][0], pair[1][0]], axis=1)).right.conj().T
    pair = [rot[0, k] * pair[0] + rot[1, k] * pair[1] for k in range(2)]
    phi1 = np.zeros((dim_a, dim_b), dtype=complex)
    phi1[0, 0] = 1
    local_states = [PureState(phi1), PureState(pair[0]), PureState(pair[1])]

    m = overlap_matrix(local_states[1], local_states[2])
    zd = zero_diagonal_unitary(m, fixed_prefix=1, tol=tol, trace_tol=tol)
    alice_local = zd.unitary.conj()
    check = walgate_form_check(local_states, alice_local, tol)
    if not check.passed:
        raise VerificationError(f"three-state construction failed its form check (residual {check.residual:.3e})")
    local_protocol = build_one_way_protocol(decompose(local_states, alice_local), tol)

    states = tuple(PureState(ua @ s.coeffs @ ub.T) for s in local_states)
    return ThreeStateProtocol(states, local_protocol.mapped(ua, ub))


def find_product_witness(q: Subspace, attempts: int = 50, seed=None, tol: float = DERIVED_TOL, max_sweeps: int = 2000) -> ProductWitness:
    """Search for a product state in ``q`` by alternating maximization of
    ``||P (a x b)||`` from random starts."""
    rng = np.random.default_rng(seed)
    dim_a, dim_b = q.dim_a, q.dim_b
    if q.dim == 0:
        raise WitnessNotFound("empty subspace")
    basis = q.matrix.reshape(dim_a, dim_b, q.dim)
    best = np.inf
    for _ in range(attempts):
        b = random_unit_vector(dim_b, rng)
        a = random_unit_vector(dim_a, rng)
        prev = np.inf
        for _ in range(max_sweeps):
            # <a x b| basis_k> as a function of a, then of b
            ma = np.einsum("xbk,b->xk", basis, b.conj())
            a = np.linalg.eigh(ma @ ma.conj().T)[1][:, -1]
            mb = np.einsum("xbk,x->bk", basis, a.conj())
            b = np.linalg.eigh(mb @ mb.conj().T)[1][:, -1]
            res = q.membership_residual(np.kron(a, b))
            if res <= tol * 1e-2 or res >= prev * (1 - 1e-10):
                break
            prev = res
        best = min(best, res)
        if res <= tol:
            return ProductWitness(a, b)
    raise WitnessNotFound(f"heuristic exhausted after {attempts} starts (best residual {best:.3e})")
