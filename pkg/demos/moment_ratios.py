"""How the two-sided moment ratio behaves as terms are added.

For each p the script sweeps every sign pattern of sum_k v_k R_k over modes
3^j and prints the smallest and largest ratio
int |sum v_k R_k|^p / sum |v_k|^p int R_k^p.
"""

from rieszprod.lacunary import make_sequence
from rieszprod.verify.theorem import check_theorem_batch, sign_patterns

seq = make_sequence(ratio=3, length=6)
print(f"{'p':>4} {'N':>2} {'min ratio':>10} {'max ratio':>10}  method")
for p in (1.0, 1.5, 2.0, 3.0, 4.0):
    for N in range(1, 7):
        recs = check_theorem_batch(seq, p, sign_patterns(N), tol=1e-7)
        ratios = [r.lhs for r in recs[::2]]
        print(f"{p:4.1f} {N:2d} {min(ratios):10.5f} {max(ratios):10.5f}  {recs[0].method}")
