"""A 2 x n subspace always has a locally distinguishable basis.

We draw a random 4-dimensional subspace of a qubit tensored with a 3-level
system, rotate its basis so that Alice can measure first in a basis of her
choosing, and then check the resulting one-way protocol exactly.
"""

import numpy as np

from locc2n.bipartite import haar_random_subspace, walgate_form_check
from locc2n.linalg import haar_random_unitary
from locc2n.protocol import confusion_matrix
from locc2n.two_by_n import distinguishing_protocol

rng = np.random.default_rng(7)
q = haar_random_subspace(2, 3, 4, rng)

# Alice may fix her measurement basis in advance; any qubit basis works.
alice = haar_random_unitary(2, rng)
rot, protocol = distinguishing_protocol(q, alice_basis=alice)

check = walgate_form_check(rot.states, alice)
print(f"form check passed: {check.passed}  (residual {check.residual:.2e})")

cm = confusion_matrix(protocol, rot.states)
np.set_printoptions(precision=3, suppress=True)
print("confusion matrix (last column is reject):")
print(cm)

# For contrast, the original basis is usually not distinguishable this way.
naive = walgate_form_check(q.basis, alice)
print(f"original basis in the same Alice basis: residual {naive.residual:.3f}")
