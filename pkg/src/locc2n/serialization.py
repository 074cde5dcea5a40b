"""JSON document format.

Every file is an envelope ``{"kind": ..., "dims": [...], "payload": {...}}``.
Complex numbers are ``[re, im]`` pairs, matrices are lists of rows and
bipartite vectors use the joint index ``a * dimB + b``. The canonical text
form (sorted keys, no whitespace) round-trips bit for bit.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from .bipartite import ProductWitness, PureState, Subspace, subspace_from_vectors
from .channel import EnvAssistedCode, KrausPair
from .protocol import REJECT, OneWayProtocol, SecondMeasurement

KINDS = ("subspace", "states", "protocol", "kraus", "report", "basis", "code")


class DocumentError(ValueError):
    pass


@dataclass(frozen=True)
class Document:
    kind: str
    dims: tuple[int, ...]
    payload: dict

    def to_json(self) -> dict:
        return {"kind": self.kind, "dims": list(self.dims), "payload": self.payload}


def _num(x: float) -> float:
    x = float(x)
    if not math.isfinite(x):
        raise DocumentError("non-finite number")
    return x


def encode_complex(z) -> list[float]:
    z = complex(z)
    return [_num(z.real), _num(z.imag)]


def decode_complex(pair) -> complex:
    if not (isinstance(pair, list) and len(pair) == 2 and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in pair)):
        raise DocumentError(f"expected [re, im], got {pair!r}")
    return complex(_num(pair[0]), _num(pair[1]))


def encode_vector(v) -> list:
    return [encode_complex(z) for z in np.asarray(v).ravel()]


def decode_vector(items, length: int | None = None) -> np.ndarray:
    if not isinstance(items, list):
        raise DocumentError("expected a list of complex numbers")
    v = np.array([decode_complex(p) for p in items], dtype=complex)
    if length is not None and v.shape[0] != length:
        raise DocumentError(f"vector has length {v.shape[0]}, expected {length}")
    return v


def encode_matrix(m) -> list:
    return [encode_vector(row) for row in np.asarray(m)]


def decode_matrix(rows, shape: tuple[int, int] | None = None) -> np.ndarray:
    if not isinstance(rows, list) or not rows:
        raise DocumentError("expected a non-empty list of rows")
    m = np.stack([decode_vector(r) for r in rows]) if len({len(r) for r in rows}) == 1 else None
    if m is None:
        raise DocumentError("ragged matrix")
    if shape is not None and m.shape != shape:
        raise DocumentError(f"matrix has shape {m.shape}, expected {shape}")
    return m


def dumps(doc: Document) -> str:
    return json.dumps(doc.to_json(), sort_keys=True, separators=(",", ":"), allow_nan=False)


def loads(text: str) -> Document:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"malformed JSON: {exc}") from exc
    if not isinstance(raw, dict) or set(raw) != {"kind", "dims", "payload"}:
        raise DocumentError("document must have exactly the keys kind, dims, payload")
    if raw["kind"] not in KINDS:
        raise DocumentError(f"unknown kind {raw['kind']!r}")
    dims = raw["dims"]
    if not isinstance(dims, list) or not all(isinstance(x, int) and not isinstance(x, bool) and x >= 1 for x in dims):
        raise DocumentError("dims must be a list of positive integers")
    if not isinstance(raw["payload"], dict):
        raise DocumentError("payload must be an object")
    return Document(raw["kind"], tuple(dims), raw["payload"])


def read(path) -> Document:
    with open(path) as fh:
        return loads(fh.read())


def write(doc: Document, path) -> None:
    with open(path, "w") as fh:
        fh.write(dumps(doc) + "\n")


def _expect(doc: Document, kind: str, ndims: int) -> None:
    if doc.kind != kind:
        raise DocumentError(f"expected a {kind!r} document, got {doc.kind!r}")
    if len(doc.dims) != ndims:
        raise DocumentError(f"{kind} documents need {ndims} dims, got {len(doc.dims)}")


# bipartite state lists ------------------------------------------------------


def states_document(states, kind: str = "states") -> Document:
    states = list(states)
    dim_a, dim_b = states[0].coeffs.shape
    key = "basis" if kind == "subspace" else "states"
    return Document(kind, (dim_a, dim_b), {key: [encode_vector(s.vector) for s in states]})


def subspace_document(q: Subspace) -> Document:
    return Document("subspace", (q.dim_a, q.dim_b), {"basis": [encode_vector(s.vector) for s in q.basis]})


def _raw_vectors(doc: Document, key: str) -> list[np.ndarray]:
    items = doc.payload.get(key)
    if not isinstance(items, list) or not items:
        raise DocumentError(f"payload needs a non-empty {key!r} list")
    dim_a, dim_b = doc.dims
    return [decode_vector(v, dim_a * dim_b) for v in items]


def read_subspace(doc: Document) -> Subspace:
    """Accepts ``subspace`` and ``states`` documents; orthonormalizes if needed."""
    if doc.kind not in ("subspace", "states"):
        raise DocumentError(f"expected a subspace document, got {doc.kind!r}")
    _expect(doc, doc.kind, 2)
    key = "basis" if doc.kind == "subspace" else "states"
    return subspace_from_vectors(_raw_vectors(doc, key), *doc.dims)


def read_states(doc: Document) -> list[PureState]:
    if doc.kind not in ("subspace", "states"):
        raise DocumentError(f"expected a states document, got {doc.kind!r}")
    _expect(doc, doc.kind, 2)
    key = "basis" if doc.kind == "subspace" else "states"
    dim_a, dim_b = doc.dims
    return [PureState.from_vector(v, dim_a, dim_b) for v in _raw_vectors(doc, key)]


def read_witness(doc: Document) -> ProductWitness:
    """A ``states`` document holding one rank-1 state."""
    states = read_states(doc)
    if len(states) != 1:
        raise DocumentError("a witness document holds exactly one state")
    state = states[0]
    u, s, vh = np.linalg.svd(state.coeffs)
    if len(s) > 1 and s[1] > 1e-10:
        raise DocumentError(f"witness is not a product state (second Schmidt coefficient {s[1]:.3e})")
    return ProductWitness(u[:, 0] * s[0], vh[0])


def witness_document(w: ProductWitness) -> Document:
    return states_document([w.state])


# local bases ------------------------------------------------------------------


def basis_document(u) -> Document:
    u = np.asarray(u)
    return Document("basis", (u.shape[0],), {"vectors": [encode_vector(u[:, k]) for k in range(u.shape[1])]})


def read_basis(doc: Document, dim: int | None = None) -> np.ndarray:
    _expect(doc, "basis", 1)
    (n,) = doc.dims
    if dim is not None and n != dim:
        raise DocumentError(f"basis has dimension {n}, expected {dim}")
    vectors = doc.payload.get("vectors")
    if not isinstance(vectors, list) or len(vectors) != n:
        raise DocumentError(f"basis needs exactly {n} vectors")
    return np.stack([decode_vector(v, n) for v in vectors], axis=1)


# protocols ----------------------------------------------------------------------


def _encode_label(label: int) -> Any:
    return "reject" if label == REJECT else int(label)


def _decode_label(label) -> int:
    if label == "reject":
        return REJECT
    if isinstance(label, int) and not isinstance(label, bool) and label >= 0:
        return label
    raise DocumentError(f"invalid label {label!r}")


def _encode_measurement(m: SecondMeasurement) -> dict:
    return {
        "vectors": [encode_vector(m.vectors[:, k]) for k in range(m.vectors.shape[1])],
        "labels": [_encode_label(x) for x in m.labels],
    }


def _decode_measurement(raw, dim: int) -> SecondMeasurement:
    if not isinstance(raw, dict) or not isinstance(raw.get("vectors"), list) or not isinstance(raw.get("labels"), list):
        raise DocumentError("measurement needs 'vectors' and 'labels'")
    if len(raw["vectors"]) != len(raw["labels"]) or not raw["vectors"]:
        raise DocumentError("measurement vectors and labels differ in number")
    vectors = np.stack([decode_vector(v, dim) for v in raw["vectors"]], axis=1)
    return SecondMeasurement(vectors, tuple(_decode_label(x) for x in raw["labels"]))


def protocol_document(p: OneWayProtocol) -> Document:
    payload = {
        "first_basis": [encode_vector(p.first_basis[:, k]) for k in range(p.first_basis.shape[1])],
        "second": [_encode_measurement(m) for m in p.second],
    }
    return Document("protocol", (p.dim_a, p.dim_b), payload)


def read_protocol(doc: Document) -> OneWayProtocol:
    _expect(doc, "protocol", 2)
    dim_a, dim_b = doc.dims
    first = doc.payload.get("first_basis")
    second = doc.payload.get("second")
    if not isinstance(first, list) or not isinstance(second, list) or len(first) != dim_a or len(second) != dim_a:
        raise DocumentError("protocol needs dimA first-party vectors and dimA second-party measurements")
    first_basis = np.stack([decode_vector(v, dim_a) for v in first], axis=1)
    return OneWayProtocol(first_basis, tuple(_decode_measurement(m, dim_b) for m in second))


# channels -----------------------------------------------------------------------


def kraus_document(k: KrausPair) -> Document:
    return Document("kraus", (k.d_out, k.d_in), {"K0": encode_matrix(k.k0), "K1": encode_matrix(k.k1)})


def read_kraus(doc: Document) -> KrausPair:
    _expect(doc, "kraus", 2)
    shape = tuple(doc.dims)
    if "K0" not in doc.payload or "K1" not in doc.payload:
        raise DocumentError("kraus payload needs K0 and K1")
    return KrausPair(decode_matrix(doc.payload["K0"], shape), decode_matrix(doc.payload["K1"], shape))


def code_document(code: EnvAssistedCode) -> Document:
    d_in = code.codewords.shape[0]
    d_out = code.receiver_measurements[0].vectors.shape[0]
    payload = {
        "codewords": [encode_vector(code.codewords[:, k]) for k in range(code.codewords.shape[1])],
        "env_basis": [encode_vector(code.env_basis[:, k]) for k in range(2)],
        "receiver": [_encode_measurement(m) for m in code.receiver_measurements],
    }
    return Document("code", (d_out, d_in), payload)


def read_code(doc: Document) -> EnvAssistedCode:
    _expect(doc, "code", 2)
    d_out, d_in = doc.dims
    p = doc.payload
    try:
        codewords = np.stack([decode_vector(v, d_in) for v in p["codewords"]], axis=1)
        env = np.stack([decode_vector(v, 2) for v in p["env_basis"]], axis=1)
        receiver = tuple(_decode_measurement(m, d_out) for m in p["receiver"])
    except (KeyError, TypeError) as exc:
        raise DocumentError(f"invalid code payload: {exc}") from exc
    return EnvAssistedCode(codewords, env, receiver)


def report_document(dims, payload: dict) -> Document:
    return Document("report", tuple(dims), payload)
