"""Locally distinguishable bases for subspaces of C^2 (x) C^n.

Given any orthonormal basis ``phi_j = |0>|zeta_0^j> + |1>|zeta_1^j>`` of the
subspace, collect ``A = (zeta_0^1, ..., zeta_0^d)`` and factor ``A = W S V``.
Rotating the basis by ``U = V^dag`` makes the columns of ``A U = W S``
orthogonal; orthonormality of the rotated states then forces the ``|1>``
components to be orthogonal as well, so the qubit holder can measure first.
The qubit basis is arbitrary and can be supplied by the caller.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bipartite import PureState, Subspace, decompose, walgate_form_check
from .linalg import DERIVED_TOL, VerificationError, basis_matrix, svd
from .protocol import OneWayProtocol, build_one_way_protocol


@dataclass(frozen=True, eq=False)
class RotationResult:
    rotation: np.ndarray
    rotated_basis: Subspace

    @property
    def states(self) -> tuple[PureState, ...]:
        return self.rotated_basis.basis


def locc_basis(q: Subspace, alice_basis=None, tol: float = DERIVED_TOL) -> RotationResult:
    """Rotate the basis of ``q`` so that it is distinguishable with the qubit
    party measuring first in ``alice_basis`` (computational by default)."""
    if q.dim_a != 2:
        raise ValueError(f"dimA must be 2, got {q.dim_a}")
    u_a = basis_matrix(alice_basis, 2)
    if q.dim == 0:
        return RotationResult(np.eye(0, dtype=complex), q)
    dec = decompose(q.basis, u_a)
    a = dec.components[:, 0, :].T  # n x d, columns zeta_0^j
    rotation = svd(a).right.conj().T
    rotated = q.matrix @ rotation
    states = tuple(PureState(rotated[:, k].reshape(2, q.dim_b)) for k in range(q.dim))
    result = RotationResult(rotation, Subspace(2, q.dim_b, states))
    check = walgate_form_check(states, u_a, tol)
    if not check.passed:
        raise VerificationError(f"rotated basis not in orthogonal form (residual {check.residual:.3e})")
    return result


def distinguishing_protocol(q: Subspace, alice_basis=None, tol: float = DERIVED_TOL) -> tuple[RotationResult, OneWayProtocol]:
    """:func:`locc_basis` followed by protocol assembly."""
    rot = locc_basis(q, alice_basis, tol)
    return rot, build_one_way_protocol(decompose(rot.states, alice_basis), tol)
