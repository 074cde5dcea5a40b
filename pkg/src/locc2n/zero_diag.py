"""Unitary similarity to a zero diagonal, and two-state discrimination built on it.

For two orthogonal states with first-party components ``eta_j`` and ``nu_k`` the
overlap matrix ``M[j, k] = <eta_j|nu_k>`` has trace ``<psi|phi> = 0``. Changing
the first party's basis by ``u`` transforms ``M`` into ``u^T M conj(u)``, so a
unitary ``W`` with ``W^dag M W`` zero on the diagonal yields the first-party
basis ``conj(W)``: after every first-party outcome the second party holds two
orthogonal vectors.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bipartite import PureState, decompose, walgate_form_check
from .linalg import ALGEBRAIC_TOL, DERIVED_TOL, ConvergenceError, VerificationError, as_matrix
from .protocol import OneWayProtocol, build_one_way_protocol

_PAULI = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ]
)


def overlap_matrix(psi: PureState, phi: PureState) -> np.ndarray:
    return psi.coeffs.conj() @ phi.coeffs.T


def _orthogonal_direction(h: np.ndarray, k: np.ndarray) -> np.ndarray:
    """Unit vector in R^3 orthogonal to both ``h`` and ``k``.

    Taken from the null space of the 2x3 matrix ``[h; k]`` so that the result
    stays orthogonal to machine precision even when ``h`` and ``k`` are nearly
    parallel. If that null space is 2-dimensional the coordinate axis least
    aligned with the nonzero direction is projected into it.
    """
    _, s, vh = np.linalg.svd(np.stack([h, k]))
    if s[0] == 0:
        return np.array([0.0, 0.0, 1.0])
    if s[1] > 1e-12 * s[0]:
        return vh[2]
    e = np.zeros(3)
    e[int(np.argmin(np.abs(vh[0])))] = 1.0
    n = vh[1] * (vh[1] @ e) + vh[2] * (vh[2] @ e)
    return n / np.linalg.norm(n)


def equalize_pair(b) -> np.ndarray:
    """2x2 unitary ``G`` such that ``G^dag B G`` has both diagonal entries ``tr(B)/2``.

    Writing the traceless part of ``B`` as ``(h + i k) . sigma`` with real
    3-vectors ``h`` and ``k``, the diagonal of the rotated matrix is
    ``+-(h + i k) . n`` for the Bloch vector ``n`` of the first column of ``G``,
    so any unit ``n`` orthogonal to both ``h`` and ``k`` works.
    """
    b = as_matrix(b, "B")
    if b.shape != (2, 2):
        raise ValueError("equalize_pair expects a 2x2 matrix")
    traceless = b - np.trace(b) / 2 * np.eye(2)
    coeffs = np.einsum("kab,ba->k", _PAULI, traceless) / 2
    n = _orthogonal_direction(coeffs.real, coeffs.imag)
    # spinor of n without going through angles (arccos is ill-conditioned near the poles)
    if n[2] >= 0:
        spinor = np.array([1 + n[2], n[0] + 1j * n[1]])
    else:
        spinor = np.array([n[0] - 1j * n[1], 1 - n[2]])
    c, s = spinor / np.linalg.norm(spinor)
    return np.array([[c, np.conj(s)], [s, -np.conj(c)]])


@dataclass(frozen=True, eq=False)
class ZeroDiagResult:
    unitary: np.ndarray
    residual: float
    iterations: int
    deviation_history: list[float] = field(repr=False)

    @property
    def monotone(self) -> bool:
        h = self.deviation_history
        return all(b < a for a, b in zip(h, h[1:]))


def zero_diagonal_unitary(
    m,
    fixed_prefix: int = 0,
    tol: float = DERIVED_TOL,
    max_iter: int = 100_000,
    trace_tol: float = DERIVED_TOL,
) -> ZeroDiagResult:
    """Find a unitary ``W`` with ``max |diag(W^dag M W)| <= tol``.

    Each step takes the active index ``i`` with the largest diagonal modulus,
    pairs it with the active index ``j`` minimizing ``Re(M_jj conj(M_ii))``
    (negative because the active diagonal sums to zero) and equalizes the two
    entries with :func:`equalize_pair`. The sum of squared diagonal moduli
    drops by ``|M_ii - M_jj|^2 / 2 >= |M_ii|^2 / 2`` per step. The first
    ``fixed_prefix`` indices are never touched.
    """
    m0 = as_matrix(m, "M")
    d = m0.shape[0]
    if m0.shape != (d, d):
        raise ValueError("M must be square")
    if fixed_prefix not in (0, 1) or fixed_prefix > d:
        raise ValueError("fixed_prefix must be 0 or 1")
    if abs(np.trace(m0)) > trace_tol:
        raise ValueError(f"M is not traceless (|tr M| = {abs(np.trace(m0)):.3e})")
    if fixed_prefix and abs(m0[0, 0]) > trace_tol:
        raise ValueError(f"fixed index has nonzero diagonal entry {abs(m0[0, 0]):.3e}")

    work = m0.copy()
    w = np.eye(d, dtype=complex)
    active = np.arange(fixed_prefix, d)
    target = tol / 4
    history = []
    it = 0
    while True:
        diag = np.diag(work)[active]
        history.append(float(np.sum(np.abs(diag) ** 2)))
        if active.size == 0 or np.max(np.abs(diag)) <= target:
            break
        if len(history) > 1 and history[-1] >= history[-2]:
            raise ConvergenceError("diagonal stopped decreasing (round-off floor)", float(np.max(np.abs(diag))))
        if it >= max_iter:
            raise ConvergenceError("zero-diagonal iteration cap reached", float(np.max(np.abs(diag))))
        pos_i = int(np.argmax(np.abs(diag)))
        scores = (diag * np.conj(diag[pos_i])).real
        scores[pos_i] = np.inf
        pos_j = int(np.argmin(scores))
        i, j = int(active[pos_i]), int(active[pos_j])
        idx = [i, j]
        g = equalize_pair(work[np.ix_(idx, idx)])
        work[:, idx] = work[:, idx] @ g
        work[idx, :] = g.conj().T @ work[idx, :]
        w[:, idx] = w[:, idx] @ g
        it += 1

    final = w.conj().T @ m0 @ w
    residual = float(np.max(np.abs(np.diag(final)[fixed_prefix:]))) if d > fixed_prefix else 0.0
    if fixed_prefix:
        residual = max(residual, abs(final[0, 0]))
    if residual > tol:
        raise ConvergenceError("accumulated round-off exceeds tolerance", residual)
    return ZeroDiagResult(w, residual, it, history)


def two_state_protocol(
    psi: PureState,
    phi: PureState,
    fixed_first_axis: bool = False,
    tol: float = DERIVED_TOL,
) -> OneWayProtocol:
    """One-way protocol perfectly distinguishing two orthogonal pure states.

    With ``fixed_first_axis`` the first basis vector of the first party stays
    ``|0>``; this requires the ``|0>`` components of the two states to be
    orthogonal already.
    """
    if psi.coeffs.shape != phi.coeffs.shape:
        raise ValueError("states live in different spaces")
    overlap = np.vdot(psi.vector, phi.vector)
    if abs(overlap) > tol:
        raise ValueError(f"states are not orthogonal (|<psi|phi>| = {abs(overlap):.3e})")
    m = overlap_matrix(psi, phi)
    zd = zero_diagonal_unitary(m, fixed_prefix=int(fixed_first_axis), tol=tol, trace_tol=tol)
    alice = zd.unitary.conj()
    check = walgate_form_check([psi, phi], alice, tol)
    if not check.passed:
        raise VerificationError(f"first-party basis does not separate the states (residual {check.residual:.3e})")
    return build_one_way_protocol(decompose([psi, phi], alice), tol)
