"""The independent model next to the torus.

Monte-Carlo second moments of sum a_k prod_{j<=k}(1 + cos U_j) against the
exact value sum a_k a_l (3/2)^min(k,l), and the L1 contraction obtained by
convolving with a shifted Riesz product.
"""

import numpy as np

from rieszprod.lacunary import make_sequence
from rieszprod.verify.transfer import check_l1_transfer, iid_second_moment, montecarlo_iid

for a in ([1, -2, 0, 3], [2, 1, -1, 1, -2], [0, 0, 0, 1]):
    rep = montecarlo_iid(2.0, len(a) - 1, a, samples=100_000, seed=1)
    exact = iid_second_moment(a)
    z = (rep.value - float(exact)) / rep.error_estimate
    print(f"a={a}: MC {rep.value:.4f} +- {rep.error_estimate:.4f}, exact {exact} ({float(exact):.4f}), z = {z:+.2f}")

seq = make_sequence(ratio=3, length=4)
V = np.random.default_rng(0).standard_normal((5, 3))
r = check_l1_transfer(seq, 4, V, psi_samples=10, seed=5)
print(f"L1 contraction over 10 phase vectors: worst {r.lhs:.6f} <= {r.rhs:.6f}: {r.passed}")
