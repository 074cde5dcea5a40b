"""Two Kraus operators never cost any capacity if the environment helps.

The range of the Stinespring isometry is a 2 x d_out subspace with the
environment as the qubit party. Its distinguishable basis gives codewords,
the environment's measurement and the receiver's conditional decoders.
"""

import numpy as np

from locc2n.channel import amplitude_damping, env_assisted_code, random_kraus_pair, verify_capacity

for gamma in (0.0, 0.3, 0.5, 0.9, 1.0):
    k = amplitude_damping(gamma)
    report = verify_capacity(k, env_assisted_code(k))
    print(f"amplitude damping gamma={gamma:.1f}: bits={report.bits}, worst success={min(report.successes):.12f}")

rng = np.random.default_rng(5)
for d_in in (3, 5, 8):
    k = random_kraus_pair(d_in, seed=rng)
    report = verify_capacity(k, env_assisted_code(k))
    print(f"random channel d_in={d_in}: bits={report.bits:.4f} (log2 d_in = {np.log2(d_in):.4f})")
