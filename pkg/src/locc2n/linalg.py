"""Dense complex linear algebra primitives.

Every construction in the package is built from these few operations. Vectors
are 1-d complex arrays; lists of vectors are passed around as the columns of a
2-d array unless stated otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

# Algebraic identities (unitarity, reconstruction) vs derived orthogonality.
ALGEBRAIC_TOL = 1e-12
DERIVED_TOL = 1e-10


class ConvergenceError(RuntimeError):
    """An iterative routine stopped before reaching its target."""

    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (residual {residual:.3e})")
        self.residual = residual


class RankDeficiencyError(ValueError):
    pass


class VerificationError(RuntimeError):
    """A construction failed its own post-condition check."""


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise ValueError(f"{name} must be 2-d, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} has non-finite entries")
    return m


def columns(vectors) -> np.ndarray:
    """Stack a sequence of vectors (or pass through a 2-d array) as columns."""
    if isinstance(vectors, np.ndarray) and vectors.ndim == 2:
        return vectors.astype(complex, copy=False)
    vectors = [np.asarray(v, dtype=complex).ravel() for v in vectors]
    if not vectors:
        raise ValueError("cannot infer dimension of an empty vector list")
    lengths = {v.shape[0] for v in vectors}
    if len(lengths) != 1:
        raise ValueError(f"vector length mismatch: {sorted(lengths)}")
    return np.stack(vectors, axis=1)


def unitarity_residual(u: np.ndarray) -> float:
    """Operator norm of U^dag U - I (columns orthonormal iff zero)."""
    u = np.asarray(u, dtype=complex)
    k = u.shape[1]
    if k == 0:
        return 0.0
    return float(np.linalg.norm(u.conj().T @ u - np.eye(k), ord=2))


def is_unitary(u: np.ndarray, tol: float = ALGEBRAIC_TOL) -> bool:
    u = np.asarray(u)
    return u.ndim == 2 and u.shape[0] == u.shape[1] and unitarity_residual(u) <= tol


@dataclass(frozen=True)
class SVDResult:
    """Factorization ``A = left @ diag(singulars) @ right``.

    ``right`` is the unitary itself, not its adjoint, so ``A @ right.conj().T``
    has pairwise orthogonal columns.
    """

    left: np.ndarray
    singulars: np.ndarray
    right: np.ndarray

    def sigma(self) -> np.ndarray:
        """The rectangular ``n x d`` diagonal factor."""
        n, d = self.left.shape[0], self.right.shape[0]
        s = np.zeros((n, d))
        k = len(self.singulars)
        s[:k, :k] = np.diag(self.singulars)
        return s

    def reconstruct(self) -> np.ndarray:
        return self.left @ self.sigma() @ self.right


def svd(a) -> SVDResult:
    """Full singular value decomposition of a complex matrix.

    Backed by LAPACK via :func:`numpy.linalg.svd`; a failure to converge is
    re-raised as :class:`ConvergenceError` carrying the Frobenius norm of the
    input as a residual scale.
    """
    a = as_matrix(a, "A")
    n, d = a.shape
    if n == 0 or d == 0:
        return SVDResult(np.eye(n, dtype=complex), np.zeros(0), np.eye(d, dtype=complex))
    try:
        w, s, v = np.linalg.svd(a, full_matrices=True)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"SVD did not converge: {exc}", float(np.linalg.norm(a))) from exc
    return SVDResult(w, s, v)


def gram(vectors) -> np.ndarray:
    """Gram matrix ``G[i, j] = <v_i|v_j>`` (conjugate-linear in the first slot)."""
    m = columns(vectors)
    return m.conj().T @ m


def orthonormal_complete(vectors, dim: int, tol: float = DERIVED_TOL) -> np.ndarray:
    """Extend pairwise orthogonal vectors to an orthonormal basis of C^dim.

    Returns a ``dim x dim`` unitary whose first ``k`` columns are the
    normalized inputs, in order.
    """
    if isinstance(vectors, np.ndarray) and vectors.ndim == 2:
        given = vectors.astype(complex)
    elif len(vectors) == 0:
        given = np.zeros((dim, 0), dtype=complex)
    else:
        given = columns(vectors)
    if given.shape[0] != dim:
        raise ValueError(f"vectors have length {given.shape[0]}, expected {dim}")
    k = given.shape[1]
    if k > dim:
        raise ValueError(f"{k} vectors cannot be orthogonal in dimension {dim}")
    norms = np.linalg.norm(given, axis=0)
    if np.any(norms == 0):
        raise ValueError("zero vector cannot be part of an orthonormal basis")
    given = given / norms
    off = gram(given) - np.eye(k)
    if k and np.max(np.abs(off)) > tol:
        raise ValueError(f"input vectors are not orthogonal (max overlap {np.max(np.abs(off)):.3e})")
    if k == dim:
        return given
    if k == 0:
        return np.eye(dim, dtype=complex)
    # rows k.. of the right factor span the orthogonal complement
    _, _, vh = np.linalg.svd(given.conj().T, full_matrices=True)
    complement = vh[k:].conj().T
    return np.concatenate([given, complement], axis=1)


def partial_trace_env(rho_joint, env_dim: int = 2) -> np.ndarray:
    """Trace out the trailing environment factor (joint index ``b * env_dim + e``)."""
    rho = as_matrix(rho_joint, "rho_joint")
    total = rho.shape[0]
    if rho.shape[1] != total or env_dim < 1 or total % env_dim:
        raise ValueError(f"cannot trace a {env_dim}-dim factor from shape {rho.shape}")
    sys_dim = total // env_dim
    return np.einsum("aebe->ab", rho.reshape(sys_dim, env_dim, sys_dim, env_dim))


def haar_random_unitary(dim: int, seed=None) -> np.ndarray:
    """Haar-distributed unitary from the QR factorization of a Ginibre matrix.

    The phases of Q are fixed so that R has a real positive diagonal, which
    makes the output a deterministic function of the Gaussian draw.
    """
    if dim < 1:
        raise ValueError("dim must be >= 1")
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_unit_vector(dim: int, seed=None) -> np.ndarray:
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def rotate_plane(u: np.ndarray, i: int, j: int, angle: float) -> np.ndarray:
    """Return ``u`` with columns ``i`` and ``j`` mixed by a real rotation."""
    out = np.array(u, dtype=complex)
    c, s = np.cos(angle), np.sin(angle)
    out[:, i], out[:, j] = c * u[:, i] - s * u[:, j], s * u[:, i] + c * u[:, j]
    return out


def basis_matrix(basis: Sequence | np.ndarray | None, dim: int, tol: float = DERIVED_TOL) -> np.ndarray:
    """Validate an orthonormal basis given as columns; ``None`` means computational."""
    if basis is None:
        return np.eye(dim, dtype=complex)
    m = np.asarray(basis, dtype=complex)
    if m.ndim != 2:
        m = columns(basis)
    if m.shape != (dim, dim):
        raise ValueError(f"basis must be {dim}x{dim}, got {m.shape}")
    res = unitarity_residual(m)
    if res > tol:
        raise ValueError(f"basis is not orthonormal (residual {res:.3e})")
    return m
