"""One-way local projective protocols and their exact simulation."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .bipartite import ComponentDecomposition, PureState, decompose
from .linalg import DERIVED_TOL, VerificationError, gram, orthonormal_complete

REJECT = -1


@dataclass(frozen=True, eq=False)
class SecondMeasurement:
    """Projective measurement of the second party after one first-party outcome.

    ``vectors`` holds the measurement basis as columns; ``labels[k]`` is the
    state index decoded from outcome ``k`` or :data:`REJECT`.
    """

    vectors: np.ndarray
    labels: tuple[int, ...]


@dataclass(frozen=True, eq=False)
class OneWayProtocol:
    """First party measures in ``first_basis`` (columns), announces outcome ``a``,
    then the second party performs ``second[a]``."""

    first_basis: np.ndarray
    second: tuple[SecondMeasurement, ...]

    @property
    def dim_a(self) -> int:
        return self.first_basis.shape[0]

    @property
    def dim_b(self) -> int:
        return self.second[0].vectors.shape[0] if self.second else 0

    def labels(self) -> set[int]:
        return {lab for m in self.second for lab in m.labels if lab != REJECT}

    def mapped(self, first_unitary=None, second_unitary=None) -> "OneWayProtocol":
        """The same protocol expressed after local changes of frame."""
        fa = self.first_basis if first_unitary is None else first_unitary @ self.first_basis
        sec = tuple(
            m if second_unitary is None else SecondMeasurement(second_unitary @ m.vectors, m.labels)
            for m in self.second
        )
        return OneWayProtocol(fa, sec)


class Validation(NamedTuple):
    passed: bool
    residual: float


def validate(p: OneWayProtocol, tol: float = DERIVED_TOL) -> Validation:
    """Check that both measurement stages are complete orthonormal bases."""
    dim_a = p.first_basis.shape[0]
    residuals = []
    ok = p.first_basis.shape == (dim_a, dim_a) and len(p.second) == dim_a
    residuals.append(float(np.max(np.abs(gram(p.first_basis) - np.eye(p.first_basis.shape[1])))))
    for m in p.second:
        v = m.vectors
        ok &= v.ndim == 2 and v.shape[0] == v.shape[1] and len(m.labels) == v.shape[1]
        ok &= v.shape[0] == p.dim_b
        residuals.append(float(np.max(np.abs(gram(v) - np.eye(v.shape[1])))) if v.size else 0.0)
    worst = max(residuals)
    return Validation(bool(ok and worst <= tol), worst)


def build_one_way_protocol(dec: ComponentDecomposition, tol: float = DERIVED_TOL, zero_tol: float = 1e-12) -> OneWayProtocol:
    """Turn a decomposition in orthogonal form into an explicit protocol.

    For each first-party outcome the non-negligible components are normalized
    and labelled with their state index; the second-party basis is completed
    with ``REJECT`` outcomes.
    """
    d, dim_a, dim_b = dec.components.shape
    mask = ~np.eye(d, dtype=bool)
    measurements = []
    for a in range(dim_a):
        overlaps = dec.overlaps(a)
        worst = float(np.max(np.abs(overlaps[mask]))) if d > 1 else 0.0
        if worst > tol:
            raise VerificationError(f"outcome {a}: components not orthogonal (overlap {worst:.3e})")
        eta = dec.components[:, a, :]
        norms = np.linalg.norm(eta, axis=1)
        keep = [i for i in np.argsort(-norms, kind="stable") if norms[i] > zero_tol]
        if len(keep) > dim_b:
            raise VerificationError(f"outcome {a}: {len(keep)} orthogonal components in dimension {dim_b}")
        if keep:
            # Householder QR in decreasing-norm order removes residual round-off
            # without moving the dominant directions.
            q, r = np.linalg.qr(eta[keep].T)
            phases = np.diag(r) / np.where(np.abs(np.diag(r)) > 0, np.abs(np.diag(r)), 1)
            vectors = orthonormal_complete(q * phases, dim_b)
        else:
            vectors = np.eye(dim_b, dtype=complex)
        labels = tuple(int(i) for i in keep) + (REJECT,) * (dim_b - len(keep))
        measurements.append(SecondMeasurement(vectors, labels))
    return OneWayProtocol(dec.alice_basis, tuple(measurements))


def _second_amplitudes(p: OneWayProtocol, states: Sequence[PureState]) -> np.ndarray:
    """Probabilities ``P[i, a, k]`` of first outcome ``a`` and second outcome ``k``."""
    coeffs = np.stack([s.coeffs for s in states])
    if coeffs.shape[1:] != (p.dim_a, p.dim_b):
        raise ValueError(f"states are {coeffs.shape[1:]}, protocol is {(p.dim_a, p.dim_b)}")
    eta = np.einsum("xa,ixb->iab", p.first_basis.conj(), coeffs)
    bob = np.stack([m.vectors for m in p.second])
    amps = np.einsum("abk,iab->iak", bob.conj(), eta)
    return np.abs(amps) ** 2


def _label_table(p: OneWayProtocol, d: int) -> np.ndarray:
    """Column index in the confusion matrix for each (a, k); reject is column d."""
    table = np.full((p.dim_a, p.dim_b), d, dtype=int)
    for a, m in enumerate(p.second):
        for k, lab in enumerate(m.labels):
            if lab != REJECT and 0 <= lab < d:
                table[a, k] = lab
    return table


def confusion_matrix(p: OneWayProtocol, states: Sequence[PureState]) -> np.ndarray:
    """Exact ``d x (d+1)`` decode-probability matrix; the last column is reject.

    Labels outside ``0..d-1`` count as reject.
    """
    d = len(states)
    if d == 0:
        return np.zeros((0, 1))
    probs = _second_amplitudes(p, states)
    table = _label_table(p, d).ravel()
    out = np.zeros((d, d + 1))
    for i in range(d):
        out[i] = np.bincount(table, weights=probs[i].ravel(), minlength=d + 1)
    return out


def verify_perfect(p: OneWayProtocol, states: Sequence[PureState], tol: float = 1e-9) -> bool:
    if not states:
        return True
    cm = confusion_matrix(p, states)
    return bool(np.all(np.diag(cm[:, : len(states)]) >= 1 - tol))


def sample_confusion(p: OneWayProtocol, states: Sequence[PureState], shots: int, seed=None) -> np.ndarray:
    """Monte Carlo estimate of :func:`confusion_matrix` by simulating the two
    measurement stages one after the other."""
    rng = np.random.default_rng(seed)
    d = len(states)
    table = _label_table(p, d)
    bob = np.stack([m.vectors for m in p.second])
    out = np.zeros((d, d + 1))
    for i, s in enumerate(states):
        eta = p.first_basis.conj().T @ s.coeffs
        first_probs = np.linalg.norm(eta, axis=1) ** 2
        first = rng.choice(p.dim_a, size=shots, p=first_probs / first_probs.sum())
        counts = np.zeros(d + 1)
        for a, n_a in zip(*np.unique(first, return_counts=True)):
            cond = np.abs(bob[a].conj().T @ eta[a]) ** 2
            second = rng.choice(p.dim_b, size=n_a, p=cond / cond.sum())
            np.add.at(counts, table[a, second], 1)
        out[i] = counts / shots
    return out


def protocol_for(states: Sequence[PureState], alice_basis=None, tol: float = DERIVED_TOL) -> OneWayProtocol:
    """Shortcut: decompose ``states`` in ``alice_basis`` and build the protocol."""
    return build_one_way_protocol(decompose(states, alice_basis), tol)
