"""Command-line interface.

Exit codes: 0 verified, 1 construction or verification failure, 2 invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import serialization as io
from .bipartite import walgate_form_check
from .channel import env_assisted_code, verify_capacity
from .linalg import DERIVED_TOL, ConvergenceError, VerificationError
from .protocol import confusion_matrix, sample_confusion, validate, verify_perfect
from .suite import DEFAULT_SEED, run_suite
from .three_dim import WitnessNotFound, find_product_witness, lpcc3_protocol, swap_roles
from .two_by_n import distinguishing_protocol
from .zero_diag import two_state_protocol


class Failure(Exception):
    """Construction or verification failed (exit 1)."""


def _emit(args, outputs: dict[str, io.Document], primary: str) -> None:
    if args.out:
        for suffix, doc in outputs.items():
            io.write(doc, f"{args.out}.{suffix}.json")
    else:
        print(io.dumps(outputs[primary]))


def _alice_basis(path, dim):
    return None if path is None else io.read_basis(io.read(path), dim)


def cmd_basis(args) -> int:
    q = io.read_subspace(io.read(args.subspace))
    if q.dim_a != 2:
        raise ValueError(f"dimA must be 2, got {q.dim_a}")
    rot, protocol = distinguishing_protocol(q, _alice_basis(args.alice_basis, 2), args.tol)
    if not verify_perfect(protocol, rot.states, args.tol):
        raise Failure("emitted protocol does not decode perfectly")
    _emit(args, {"protocol": io.protocol_document(protocol), "states": io.subspace_document(rot.rotated_basis)}, "protocol")
    return 0


def cmd_check(args) -> int:
    states = io.read_states(io.read(args.states))
    basis = _alice_basis(args.alice_basis, states[0].dim_a)
    check = walgate_form_check(states, basis, args.tol)
    report = io.report_document(states[0].coeffs.shape, {"passed": check.passed, "residual": check.residual})
    _emit(args, {"report": report}, "report")
    return 0 if check.passed else 1


def cmd_two_state(args) -> int:
    states = io.read_states(io.read(args.states))
    if len(states) != 2:
        raise ValueError(f"two-state needs exactly 2 states, got {len(states)}")
    protocol = two_state_protocol(*states, tol=args.tol)
    if not verify_perfect(protocol, states, args.tol):
        raise Failure("emitted protocol does not decode perfectly")
    _emit(args, {"protocol": io.protocol_document(protocol)}, "protocol")
    return 0


def cmd_three(args) -> int:
    q = io.read_subspace(io.read(args.subspace))
    if q.dim != 3:
        raise ValueError(f"subspace must be 3-dimensional, got {q.dim}")
    if args.witness:
        witness = io.read_witness(io.read(args.witness))
    elif args.find_witness:
        witness = find_product_witness(q, args.attempts, args.seed)
    else:
        raise ValueError("give --witness FILE or --find-witness")
    if args.swap_roles:
        q, witness = swap_roles(q), witness.swapped()
    result = lpcc3_protocol(q, witness, args.tol)
    if not verify_perfect(result.protocol, result.states, args.tol):
        raise Failure("emitted protocol does not decode perfectly")
    _emit(args, {"protocol": io.protocol_document(result.protocol), "states": io.states_document(result.states)}, "protocol")
    return 0


def cmd_channel(args) -> int:
    k = io.read_kraus(io.read(args.kraus))
    env = _alice_basis(args.env_basis, 2)
    code = env_assisted_code(k, env, args.tol)
    rep = verify_capacity(k, code, max(args.tol, 1e-9))
    payload = {
        "successes": [float(x) for x in rep.successes],
        "verified": rep.verified,
        "bits": rep.bits,
        "optimal_bits": float(np.log2(k.d_in)),
    }
    _emit(args, {"code": io.code_document(code), "report": io.report_document((k.d_out, k.d_in), payload)}, "report")
    if not rep.verified:
        raise Failure("code does not verify")
    return 0


def cmd_simulate(args) -> int:
    protocol = io.read_protocol(io.read(args.protocol))
    states = io.read_states(io.read(args.states))
    valid = validate(protocol)
    if not valid.passed:
        raise ValueError(f"protocol is not a complete pair of measurements (residual {valid.residual:.3e})")
    cm = confusion_matrix(protocol, states)
    perfect = verify_perfect(protocol, states, args.tol)
    payload = {"confusion": cm.tolist(), "perfect": perfect}
    if args.shots:
        payload["sampled"] = sample_confusion(protocol, states, args.shots, args.seed).tolist()
    _emit(args, {"report": io.report_document((protocol.dim_a, protocol.dim_b), payload)}, "report")
    return 0 if perfect else 1


def cmd_suite(args) -> int:
    results = run_suite(args.seed, args.trials, args.tol)
    for r in results:
        print(r.line(), file=sys.stderr)
    passed = all(r.passed for r in results)
    payload = {"seed": args.seed, "passed": passed, "criteria": [r.as_dict() for r in results]}
    _emit(args, {"report": io.report_document((1,), payload)}, "report")
    return 0 if passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="locc2n", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help):
        p = sub.add_parser(name, help=help)
        p.set_defaults(func=fn)
        p.add_argument("--tol", type=float, default=DERIVED_TOL)
        p.add_argument("--out", help="output prefix; files are written as PREFIX.<kind>.json")
        return p

    p = add("basis", cmd_basis, "distinguishable basis and protocol for a 2 x n subspace")
    p.add_argument("subspace")
    p.add_argument("--alice-basis")

    p = add("check", cmd_check, "check the orthogonal-component form of a list of states")
    p.add_argument("states")
    p.add_argument("--alice-basis")

    p = add("two-state", cmd_two_state, "protocol for two orthogonal states")
    p.add_argument("states")

    p = add("three", cmd_three, "protocol for a 3-dim subspace containing a product state")
    p.add_argument("subspace")
    p.add_argument("--witness")
    p.add_argument("--find-witness", action="store_true")
    p.add_argument("--swap-roles", action="store_true", help="let the second party measure first")
    p.add_argument("--attempts", type=int, default=50)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)

    p = add("channel", cmd_channel, "environment-assisted code for a two-Kraus channel")
    p.add_argument("kraus")
    p.add_argument("--env-basis")

    p = add("simulate", cmd_simulate, "exact confusion matrix of a protocol")
    p.add_argument("protocol")
    p.add_argument("states")
    p.add_argument("--shots", type=int, default=0)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)

    p = add("suite", cmd_suite, "run the randomized verification suite")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--trials", type=int)
    p.set_defaults(tol=None)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (Failure, VerificationError, ConvergenceError, WitnessNotFound) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
