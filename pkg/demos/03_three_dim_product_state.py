"""Three-dimensional subspaces containing a product state.

We plant a product state inside a random 3-dimensional subspace of 3 x 4,
hide it with a random change of basis, recover it with the alternating
search, and build a perfect protocol with either party measuring first.
"""

import numpy as np

from locc2n.bipartite import planted_product_subspace, swap_roles
from locc2n.protocol import confusion_matrix
from locc2n.three_dim import find_product_witness, lpcc3_protocol, witness_residual

q, planted = planted_product_subspace(3, 4, seed=11)
found = find_product_witness(q, seed=0)
print(f"witness residual: {witness_residual(q, found):.1e}")
overlap = abs(np.vdot(np.kron(planted.alice, planted.bob), np.kron(found.alice, found.bob)))
print(f"overlap with the planted state: {overlap:.12f}")

for label, subspace, witness in (("Alice first", q, found), ("Bob first", swap_roles(q), found.swapped())):
    result = lpcc3_protocol(subspace, witness)
    cm = confusion_matrix(result.protocol, result.states)
    print(f"{label}: worst success {np.min(np.diag(cm)[:3]):.12f}")
