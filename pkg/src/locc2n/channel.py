"""Environment-assisted decoding for channels with two Kraus operators.

The Stinespring isometry ``V|psi> = K0|psi> (x) |0>_E + K1|psi> (x) |1>_E``
maps the input space onto a ``d_in``-dimensional subspace of
output (x) environment, where the environment is a qubit. With the qubit
treated as the first party, :func:`~locc2n.two_by_n.locc_basis` yields an input
basis whose images are distinguishable when the environment is measured first
and the outcome is passed to the receiver. That gives ``log2(d_in)`` bits per
use with zero error.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .bipartite import PureState, Subspace, decompose
from .linalg import (
    DERIVED_TOL,
    as_matrix,
    basis_matrix,
    haar_random_unitary,
    partial_trace_env,
)
from .protocol import REJECT, SecondMeasurement, build_one_way_protocol
from .two_by_n import locc_basis


@dataclass(frozen=True, eq=False)
class KrausPair:
    k0: np.ndarray
    k1: np.ndarray

    def __post_init__(self):
        k0 = as_matrix(self.k0, "K0")
        k1 = as_matrix(self.k1, "K1")
        if k0.shape != k1.shape:
            raise ValueError(f"Kraus operators have shapes {k0.shape} and {k1.shape}")
        object.__setattr__(self, "k0", k0)
        object.__setattr__(self, "k1", k1)
        res = self.completeness_residual()
        if res > DERIVED_TOL:
            raise ValueError(f"Kraus operators are not complete (residual {res:.3e})")

    @property
    def d_out(self) -> int:
        return self.k0.shape[0]

    @property
    def d_in(self) -> int:
        return self.k0.shape[1]

    def completeness_residual(self) -> float:
        s = self.k0.conj().T @ self.k0 + self.k1.conj().T @ self.k1
        return float(np.max(np.abs(s - np.eye(self.k0.shape[1])))) if s.size else 0.0

    @classmethod
    def from_isometry(cls, v) -> "KrausPair":
        v = as_matrix(v, "V")
        d_out = v.shape[0] // 2
        blocks = v.reshape(d_out, 2, v.shape[1])
        return cls(blocks[:, 0, :], blocks[:, 1, :])


def amplitude_damping(gamma: float) -> KrausPair:
    return KrausPair(
        np.array([[1, 0], [0, np.sqrt(1 - gamma)]]),
        np.array([[0, np.sqrt(gamma)], [0, 0]]),
    )


def phase_flip(p: float) -> KrausPair:
    return KrausPair(np.sqrt(1 - p) * np.eye(2), np.sqrt(p) * np.diag([1.0, -1.0]))


def random_kraus_pair(d_in: int, d_out: int | None = None, seed=None) -> KrausPair:
    """Channel whose Stinespring isometry is the first ``d_in`` columns of a
    Haar unitary on output (x) environment."""
    d_out = d_in if d_out is None else d_out
    if 2 * d_out < d_in:
        raise ValueError("a two-Kraus channel needs 2 * d_out >= d_in")
    u = haar_random_unitary(2 * d_out, seed)
    return KrausPair.from_isometry(u[:, :d_in])


def stinespring(k: KrausPair) -> np.ndarray:
    """Isometry ``V`` of shape ``(2 d_out, d_in)``, joint index ``b * 2 + e``."""
    return np.stack([k.k0, k.k1], axis=1).reshape(2 * k.d_out, k.d_in)


def apply_channel(k: KrausPair, rho) -> np.ndarray:
    rho = as_matrix(rho, "rho")
    if rho.shape != (k.d_in, k.d_in):
        raise ValueError(f"state has shape {rho.shape}, channel input dimension is {k.d_in}")
    if np.max(np.abs(rho - rho.conj().T)) > DERIVED_TOL:
        raise ValueError("state is not Hermitian")
    if abs(np.trace(rho) - 1) > DERIVED_TOL:
        raise ValueError("state does not have unit trace")
    if np.min(np.linalg.eigvalsh(rho)) < -DERIVED_TOL:
        raise ValueError("state is not positive semidefinite")
    return k.k0 @ rho @ k.k0.conj().T + k.k1 @ rho @ k.k1.conj().T


def apply_via_dilation(k: KrausPair, rho) -> np.ndarray:
    v = stinespring(k)
    return partial_trace_env(v @ np.asarray(rho, dtype=complex) @ v.conj().T, 2)


def range_subspace(k: KrausPair) -> Subspace:
    """Image of the isometry with the environment qubit as the first factor."""
    states = tuple(PureState(np.stack([k.k0[:, j], k.k1[:, j]])) for j in range(k.d_in))
    return Subspace(2, k.d_out, states)


@dataclass(frozen=True, eq=False)
class EnvAssistedCode:
    """``codewords`` are the columns of a ``d_in x d_in`` unitary; after
    environment outcome ``e`` (in ``env_basis``) the receiver measures
    ``receiver_measurements[e]``."""

    codewords: np.ndarray
    env_basis: np.ndarray
    receiver_measurements: tuple[SecondMeasurement, ...]


def env_assisted_code(k: KrausPair, env_basis=None, tol: float = DERIVED_TOL) -> EnvAssistedCode:
    env = basis_matrix(env_basis, 2)
    rot = locc_basis(range_subspace(k), env, tol)
    protocol = build_one_way_protocol(decompose(rot.states, env), tol)
    return EnvAssistedCode(rot.rotation, env, protocol.second)


class CapacityReport(NamedTuple):
    successes: np.ndarray
    bits: float | None

    @property
    def verified(self) -> bool:
        return self.bits is not None


def verify_capacity(k: KrausPair, code: EnvAssistedCode, tol: float = 1e-9) -> CapacityReport:
    """Exact success probability of every codeword.

    Computed directly from the Kraus operators: after environment outcome
    ``e`` the receiver holds ``sum_f conj(env[f, e]) K_f psi``.
    """
    kraus = (k.k0, k.k1)
    d = code.codewords.shape[1]
    successes = np.zeros(d)
    for i in range(d):
        psi = code.codewords[:, i]
        for e, meas in enumerate(code.receiver_measurements):
            out = sum(np.conj(code.env_basis[f, e]) * (kraus[f] @ psi) for f in range(2))
            for vec, label in zip(meas.vectors.T, meas.labels):
                if label == i and label != REJECT:
                    successes[i] += abs(np.vdot(vec, out)) ** 2
    ok = d > 0 and np.min(successes) >= 1 - tol
    return CapacityReport(successes, float(np.log2(d)) if ok else None)
