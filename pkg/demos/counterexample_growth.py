"""Riesz products with modes p^j drifting away from the independent model.

Prints r_k = ||R_2k||_4 / ||R~_2k||_4 for modes 4, 16, ..., computed with
exact rational arithmetic, then the p-scan comparing
P(x) = (1 + cos x)(1 + cos 4x) with its two-variable lift.
"""

from rieszprod.verify.schneider import check_p_discrepancy, norm_ratio_power

for k in range(1, 5):
    q = norm_ratio_power(4, k)
    print(f"k={k}: r_k^4 = {q}  (r_k = {float(q) ** 0.25:.6f})")

print()
print(f"{'p':>4} {'torus':>12} {'lifted':>12}  differs")
for row in check_p_discrepancy(4, [1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0]):
    print(f"{row.p:4.1f} {row.torus:12.8f} {row.product:12.8f}  {row.differs}")
