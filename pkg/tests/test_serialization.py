import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from locc2n import serialization as io
from locc2n.bipartite import haar_random_subspace
from locc2n.channel import env_assisted_code, random_kraus_pair
from locc2n.two_by_n import distinguishing_protocol

finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(finite, finite), min_size=1, max_size=8))
def test_vector_round_trip_is_exact(pairs):
    v = np.array([complex(a, b) for a, b in pairs])
    doc = io.Document("basis", (len(v),), {"vectors": [io.encode_vector(v)]})
    text = io.dumps(doc)
    back = io.decode_vector(io.loads(text).payload["vectors"][0])
    assert back.tobytes() == v.tobytes()
    assert io.dumps(io.loads(text)) == text


def test_documents_round_trip():
    q = haar_random_subspace(2, 3, 4, 0)
    rot, protocol = distinguishing_protocol(q)
    k = random_kraus_pair(3, seed=1)
    code = env_assisted_code(k)
    docs = [
        io.subspace_document(q),
        io.states_document(rot.states),
        io.protocol_document(protocol),
        io.kraus_document(k),
        io.code_document(code),
        io.basis_document(np.eye(2)),
        io.report_document((1,), {"passed": True}),
    ]
    for doc in docs:
        text = io.dumps(doc)
        assert io.dumps(io.loads(text)) == text

    p2 = io.read_protocol(io.loads(io.dumps(io.protocol_document(protocol))))
    np.testing.assert_array_equal(p2.first_basis, protocol.first_basis)
    assert [m.labels for m in p2.second] == [m.labels for m in protocol.second]
    k2 = io.read_kraus(io.loads(io.dumps(io.kraus_document(k))))
    np.testing.assert_array_equal(k2.k0, k.k0)
    q2 = io.read_subspace(io.loads(io.dumps(io.subspace_document(q))))
    np.testing.assert_array_equal(q2.matrix, q.matrix)
    c2 = io.read_code(io.loads(io.dumps(io.code_document(code))))
    np.testing.assert_array_equal(c2.codewords, code.codewords)


def test_joint_index_convention():
    doc = io.loads('{"kind":"states","dims":[2,3],"payload":{"states":[[[0,0],[0,0],[0,0],[0,0],[1,0],[0,0]]]}}')
    (s,) = io.read_states(doc)
    assert s.coeffs[1, 1] == 1  # index 4 = 1 * 3 + 1


@pytest.mark.parametrize(
    "text",
    [
        "{not json",
        '{"kind":"nope","dims":[2],"payload":{}}',
        '{"kind":"basis","dims":[0],"payload":{}}',
        '{"kind":"basis","dims":[2],"payload":[]}',
        '{"kind":"basis","dims":[2]}',
        '{"kind":"basis","dims":[2],"payload":{"vectors":[[[NaN,0],[0,0]],[[0,0],[1,0]]]}}',
    ],
)
def test_rejects_bad_documents(text):
    with pytest.raises(ValueError):
        io.read_basis(io.loads(text))


def test_rejects_nonfinite_output():
    with pytest.raises(io.DocumentError):
        io.encode_complex(complex(np.inf, 0))


def test_witness_must_be_product():
    doc = io.states_document(haar_random_subspace(2, 2, 1, 0).basis)
    with pytest.raises(io.DocumentError):
        io.read_witness(doc)
