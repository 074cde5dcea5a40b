"""Two orthogonal pure states can always be told apart locally.

The overlap matrix of the pair is traceless, so some unitary similarity makes
its diagonal vanish. Its conjugate columns give Alice a basis after which
Bob's conditional states are orthogonal.
"""

import numpy as np

from locc2n.bipartite import PureState
from locc2n.linalg import haar_random_unitary
from locc2n.protocol import confusion_matrix
from locc2n.zero_diag import overlap_matrix, two_state_protocol, zero_diagonal_unitary

u = haar_random_unitary(12, 3)
psi, phi = (PureState.from_vector(u[:, k], 3, 4) for k in (0, 1))

m = overlap_matrix(psi, phi)
print(f"trace of overlap matrix: {abs(np.trace(m)):.1e}")

zd = zero_diagonal_unitary(m)
print(f"zero-diagonal residual {zd.residual:.1e} after {zd.iterations} rotations")
print("squared deviation per step:", ", ".join(f"{h:.2e}" for h in zd.deviation_history[:6]), "...")

protocol = two_state_protocol(psi, phi)
print("confusion matrix:")
print(np.round(confusion_matrix(protocol, [psi, phi]), 12))
