"""Randomized verification suite.

Each ``check_*`` function runs one family of randomized instances and returns a
:class:`CriterionResult`. Randomness is derived from a single integer seed
and the criterion name, so reruns with the same seed see the same instances,
whatever order the criteria are run in.
"""

from __future__ import annotations

import time
import zlib
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .bipartite import PureState, haar_random_subspace, planted_product_subspace, swap_roles, walgate_form_check
from .channel import (
    EnvAssistedCode,
    amplitude_damping,
    apply_channel,
    apply_via_dilation,
    env_assisted_code,
    phase_flip,
    random_kraus_pair,
    verify_capacity,
)
from .linalg import haar_random_unitary, rotate_plane, unitarity_residual
from .protocol import REJECT, OneWayProtocol, SecondMeasurement, confusion_matrix, sample_confusion, verify_perfect
from .three_dim import lpcc3_protocol
from .two_by_n import distinguishing_protocol
from .zero_diag import two_state_protocol, zero_diagonal_unitary

DEFAULT_SEED = 20100318


def trial_rng(seed: int, name: str, index: int = 0) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(zlib.crc32(name.encode()), index))
    return np.random.default_rng(ss)


@dataclass
class CriterionResult:
    name: str
    passed: bool
    trials: int
    worst: dict[str, float]
    failures: int = 0
    seconds: float = 0.0
    notes: list[str] = field(default_factory=list)

    def line(self) -> str:
        worst = ", ".join(f"{k}={v:.3e}" for k, v in self.worst.items())
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}: {self.trials} trials, {self.failures} failures, {worst} ({self.seconds:.2f}s)"

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "trials": self.trials,
            "failures": self.failures,
            "worst": {k: float(v) if np.isfinite(v) else "inf" for k, v in self.worst.items()},
            "seconds": self.seconds,
            "notes": list(self.notes),
        }


class _Tracker:
    def __init__(self, name: str, limits: dict[str, float], time_limit: float | None = None):
        self.name = name
        self.limits = limits
        self.time_limit = time_limit
        self.worst = {k: 0.0 for k in limits}
        self.failures = 0
        self.trials = 0
        self.notes: list[str] = []
        self.start = time.perf_counter()

    def record(self, **metrics: float) -> bool:
        ok = True
        for k, v in metrics.items():
            v = float(v)
            self.worst[k] = max(self.worst[k], v) if np.isfinite(v) else np.inf
            ok &= bool(v <= self.limits[k])
        return ok

    def trial(self, fn: Callable[[], bool], index: int) -> None:
        self.trials += 1
        try:
            ok = fn()
        except Exception as exc:  # a construction error is a failed trial
            ok = False
            if len(self.notes) < 5:
                self.notes.append(f"trial {index}: {type(exc).__name__}: {exc}")
        if not ok:
            self.failures += 1

    def result(self) -> CriterionResult:
        seconds = time.perf_counter() - self.start
        passed = self.failures == 0
        if self.time_limit is not None and seconds > self.time_limit:
            passed = False
            self.notes.append(f"runtime {seconds:.1f}s exceeds {self.time_limit:.0f}s")
        return CriterionResult(self.name, passed, self.trials, self.worst, self.failures, seconds, self.notes)


def _perfect_deficit(protocol, states) -> float:
    cm = confusion_matrix(protocol, states)
    return float(1 - np.min(np.diag(cm[:, : len(states)]))) if states else 0.0


def check_two_by_n(seed: int = DEFAULT_SEED, trials: int = 200, tol: float = 1e-9) -> CriterionResult:
    """Random 2 x n subspaces with random preselected qubit bases."""
    tr = _Tracker("two_by_n_basis", {"form_residual": tol, "decode_deficit": tol}, time_limit=60)
    for t in range(trials):
        rng = trial_rng(seed, tr.name, t)

        def run():
            n = int(rng.integers(2, 9))
            d = int(rng.integers(1, 2 * n + 1))
            q = haar_random_subspace(2, n, d, rng)
            alice = haar_random_unitary(2, rng)
            rot, protocol = distinguishing_protocol(q, alice)
            form = walgate_form_check(rot.states, alice, tol)
            return tr.record(form_residual=form.residual, decode_deficit=_perfect_deficit(protocol, rot.states))

        tr.trial(run, t)
    return tr.result()


def check_preselection(seed: int = DEFAULT_SEED, trials: int = 50, tol: float = 1e-9) -> CriterionResult:
    """One fixed subspace, many qubit bases."""
    tr = _Tracker("preselected_basis_freedom", {"form_residual": tol, "decode_deficit": tol})
    q = haar_random_subspace(2, 5, 6, trial_rng(seed, tr.name + "/subspace"))
    for t in range(trials):
        rng = trial_rng(seed, tr.name, t)

        def run():
            alice = haar_random_unitary(2, rng)
            rot, protocol = distinguishing_protocol(q, alice)
            form = walgate_form_check(rot.states, alice, tol)
            return tr.record(form_residual=form.residual, decode_deficit=_perfect_deficit(protocol, rot.states))

        tr.trial(run, t)
    return tr.result()


def check_zero_diagonal(seed: int = DEFAULT_SEED, trials: int = 500, tol: float = 1e-10, unitary_tol: float = 1e-12) -> CriterionResult:
    tr = _Tracker("zero_diagonal_engine", {"diag_residual": tol, "unitarity": unitary_tol, "nonmonotone_steps": 0}, time_limit=30)
    for t in range(trials):
        rng = trial_rng(seed, tr.name, t)

        def run():
            d = int(rng.integers(2, 13))
            m = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
            m -= np.trace(m) / d * np.eye(d)
            zd = zero_diagonal_unitary(m, tol=tol)
            h = zd.deviation_history
            bad = sum(1 for a, b in zip(h, h[1:]) if not b < a)
            final = zd.unitary.conj().T @ m @ zd.unitary
            return tr.record(
                diag_residual=np.max(np.abs(np.diag(final))),
                unitarity=unitarity_residual(zd.unitary),
                nonmonotone_steps=bad,
            )

        tr.trial(run, t)
    return tr.result()


def check_two_state(seed: int = DEFAULT_SEED, trials: int = 200, tol: float = 1e-9) -> CriterionResult:
    tr = _Tracker("two_state_discrimination", {"confusion_offset": tol})
    for t in range(trials):
        rng = trial_rng(seed, tr.name, t)

        def run():
            m, n = (int(x) for x in rng.integers(2, 7, size=2))
            u = haar_random_unitary(m * n, rng)
            states = [PureState.from_vector(u[:, k], m, n) for k in range(2)]
            cm = confusion_matrix(two_state_protocol(*states), states)
            return tr.record(confusion_offset=np.max(np.abs(cm[:, :2] - np.eye(2))))

        tr.trial(run, t)
    return tr.result()


def check_three_dim(seed: int = DEFAULT_SEED, trials: int = 100, tol: float = 1e-9) -> CriterionResult:
    tr = _Tracker("three_dim_product_subspace", {"decode_deficit": tol, "swapped_decode_deficit": tol})
    for t in range(trials):
        rng = trial_rng(seed, tr.name, t)

        def run():
            m, n = (int(x) for x in rng.choice([3, 4, 5], size=2))
            q, witness = planted_product_subspace(m, n, rng)
            direct = lpcc3_protocol(q, witness)
            swapped = lpcc3_protocol(swap_roles(q), witness.swapped())
            return tr.record(
                decode_deficit=_perfect_deficit(direct.protocol, direct.states),
                swapped_decode_deficit=_perfect_deficit(swapped.protocol, swapped.states),
            )

        tr.trial(run, t)
    return tr.result()


def check_channels(seed: int = DEFAULT_SEED, trials: int = 100, tol: float = 1e-9) -> CriterionResult:
    tr = _Tracker("rank_two_channel_capacity", {"success_deficit": tol, "bits_shortfall": tol}, time_limit=60)

    def verify(k, env):
        code = env_assisted_code(k, env)
        rep = verify_capacity(k, code, tol)
        shortfall = np.log2(k.d_in) - rep.bits if rep.verified else np.inf
        return tr.record(success_deficit=1 - np.min(rep.successes), bits_shortfall=abs(shortfall))

    for t in range(trials):
        rng = trial_rng(seed, tr.name, t)

        def run():
            d_in = int(rng.integers(2, 9))
            d_out = int(rng.integers((d_in + 1) // 2, d_in + 3))
            return verify(random_kraus_pair(d_in, d_out, rng), haar_random_unitary(2, rng))

        tr.trial(run, t)
    for j, gamma in enumerate(np.round(np.linspace(0, 1, 11), 10)):
        tr.trial(lambda: verify(amplitude_damping(gamma), None), trials + j)
    return tr.result()


def _random_protocol(dim_a: int, dim_b: int, d: int, rng) -> OneWayProtocol:
    labels = list(range(d)) + [REJECT]
    second = tuple(
        SecondMeasurement(haar_random_unitary(dim_b, rng), tuple(int(x) for x in rng.choice(labels, size=dim_b)))
        for _ in range(dim_a)
    )
    return OneWayProtocol(haar_random_unitary(dim_a, rng), second)


def check_oracles(
    seed: int = DEFAULT_SEED,
    trials: int = 20,
    shots: int = 100_000,
    sigmas: float = 5.0,
    channel_trials: int = 100,
    tol: float = 1e-12,
) -> CriterionResult:
    """Closed-form confusion matrices vs Monte Carlo; Kraus sum vs dilation."""
    tr = _Tracker("independent_oracles", {"mc_excess_sigmas": sigmas, "dual_route": tol})
    for t in range(trials):
        rng = trial_rng(seed, tr.name, t)

        def run():
            if t % 2 == 0:
                n = int(rng.integers(2, 6))
                q = haar_random_subspace(2, n, int(rng.integers(1, 2 * n + 1)), rng)
                rot, protocol = distinguishing_protocol(q, haar_random_unitary(2, rng))
                states = list(rot.states)
            else:
                m, n = (int(x) for x in rng.integers(2, 4, size=2))
                d = int(rng.integers(2, 4))
                states = list(haar_random_subspace(m, n, d, rng).basis)
                protocol = _random_protocol(m, n, d, rng)
            exact = np.clip(confusion_matrix(protocol, states), 0, 1)
            sampled = sample_confusion(protocol, states, shots, rng)
            stderr = np.sqrt(exact * (1 - exact) / shots)
            diff = np.abs(sampled - exact)
            excess = np.where(stderr > 0, diff / np.where(stderr > 0, stderr, 1), np.where(diff > 0, np.inf, 0))
            return tr.record(mc_excess_sigmas=np.max(excess))

        tr.trial(run, t)
    for t in range(channel_trials):
        rng = trial_rng(seed, tr.name + "/channel", t)

        def run():
            d_in = int(rng.integers(1, 7))
            k = random_kraus_pair(d_in, int(rng.integers((d_in + 1) // 2, d_in + 3)), rng)
            g = rng.standard_normal((d_in, d_in)) + 1j * rng.standard_normal((d_in, d_in))
            rho = g @ g.conj().T
            rho /= np.trace(rho)
            return tr.record(dual_route=np.max(np.abs(apply_channel(k, rho) - apply_via_dilation(k, rho))))

        tr.trial(run, trials + t)
    return tr.result()


def check_negative_controls(seed: int = DEFAULT_SEED, trials: int = 20, tol: float = 1e-9) -> CriterionResult:
    """Things that must fail do fail."""
    tr = _Tracker("negative_controls", {"bell_residual_error": 1e-12, "missed_failures": 0})
    s = 1 / np.sqrt(2)
    phi_plus = PureState(np.array([[s, 0], [0, s]]))
    phi_minus = PureState(np.array([[s, 0], [0, -s]]))

    def bell():
        check = walgate_form_check([phi_plus, phi_minus], None, tol)
        return tr.record(bell_residual_error=abs(check.residual - 0.5), missed_failures=int(check.passed))

    tr.trial(bell, 0)

    def swapped_labels(k, env=None):
        code = env_assisted_code(k, env)
        d = k.d_in
        receiver = tuple(
            SecondMeasurement(m.vectors, tuple(lab if lab == REJECT else (lab + 1) % d for lab in m.labels))
            for m in code.receiver_measurements
        )
        bad = EnvAssistedCode(code.codewords, code.env_basis, receiver)
        return tr.record(missed_failures=int(verify_capacity(k, bad, tol).verified))

    tr.trial(lambda: swapped_labels(phase_flip(0.5)), 1)
    for t in range(trials):
        rng = trial_rng(seed, tr.name, t)
        tr.trial(lambda: swapped_labels(random_kraus_pair(int(rng.integers(2, 7)), seed=rng), haar_random_unitary(2, rng)), 2 + t)

        def perturbed():
            n = int(rng.integers(2, 7))
            q = haar_random_subspace(2, n, int(rng.integers(2, 2 * n + 1)), rng)
            rot, protocol = distinguishing_protocol(q, haar_random_unitary(2, rng))
            first = protocol.second[0]
            second = (SecondMeasurement(rotate_plane(first.vectors, 0, 1, 0.1), first.labels),) + protocol.second[1:]
            broken = OneWayProtocol(protocol.first_basis, second)
            return tr.record(missed_failures=int(verify_perfect(broken, rot.states, tol)))

        tr.trial(perturbed, 2 + trials + t)
    return tr.result()


CRITERIA: dict[str, Callable[..., CriterionResult]] = {
    "two_by_n_basis": check_two_by_n,
    "preselected_basis_freedom": check_preselection,
    "zero_diagonal_engine": check_zero_diagonal,
    "two_state_discrimination": check_two_state,
    "three_dim_product_subspace": check_three_dim,
    "rank_two_channel_capacity": check_channels,
    "independent_oracles": check_oracles,
    "negative_controls": check_negative_controls,
}


def run_suite(seed: int = DEFAULT_SEED, trials: int | None = None, tol: float | None = None) -> list[CriterionResult]:
    """Run every criterion. ``trials`` and ``tol`` override the per-criterion
    defaults when given."""
    results = []
    for fn in CRITERIA.values():
        kwargs: dict = {"seed": seed}
        if trials is not None:
            kwargs["trials"] = trials
        if tol is not None:
            kwargs["tol"] = tol
            if fn is check_zero_diagonal:
                kwargs["unitary_tol"] = tol
        results.append(fn(**kwargs))
    return results
