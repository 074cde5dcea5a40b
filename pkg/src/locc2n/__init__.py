"""Local discrimination of bipartite states.

Constructs orthonormal bases that can be perfectly distinguished by one-way
local projective measurements:

* any subspace of C^2 (x) C^n (:mod:`locc2n.two_by_n`),
* any pair of orthogonal states (:mod:`locc2n.zero_diag`),
* any 3-dimensional subspace with a known product state (:mod:`locc2n.three_dim`),
* zero-error environment-assisted codes for two-Kraus channels (:mod:`locc2n.channel`),

and checks every construction by exact simulation (:mod:`locc2n.protocol`).
"""

from .bipartite import (
    ComponentDecomposition,
    ProductWitness,
    PureState,
    Subspace,
    decompose,
    haar_random_subspace,
    planted_product_subspace,
    subspace_from_vectors,
    swap_roles,
    walgate_form_check,
)
from .channel import KrausPair, env_assisted_code, stinespring, verify_capacity
from .linalg import ConvergenceError, RankDeficiencyError, VerificationError, haar_random_unitary, svd
from .protocol import REJECT, OneWayProtocol, build_one_way_protocol, confusion_matrix, validate, verify_perfect
from .three_dim import WitnessNotFound, find_product_witness, lpcc3_protocol
from .two_by_n import distinguishing_protocol, locc_basis
from .zero_diag import equalize_pair, two_state_protocol, zero_diagonal_unitary

__version__ = "0.1.0"
