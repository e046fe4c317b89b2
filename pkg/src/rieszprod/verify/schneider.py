"""Riesz products whose L^p norms drift away from the independent model.

With modes ``n_j = p^j`` and even ``p`` the torus moment of ``R_{2k}`` beats
the product-form moment of the lifted polynomial by a factor that grows
geometrically in ``k``.  Everything here is exact (Plancherel on dyadic
coefficients) except the p-grid scan of :func:`check_p_discrepancy`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence

import numpy as np

from ..errors import HypothesisViolation
from ..lacunary import make_sequence
from ..moments import lp_even_exact, lp_quadrature, x_moment, x_moment_exact
from ..riesz import riesz_factor, riesz_product
from ..trigpoly import TrigPoly
from .results import CheckResult, compare


def _check_even(p: int, name: str = "p") -> int:
    if int(p) != p or int(p) % 2 or p < 4:
        raise HypothesisViolation(f"{name} must be an even integer >= 4")
    return int(p)


def block_function(p: int) -> TrigPoly:
    """``f(x) = (1 + cos x)^{p/2} (1 + cos p x)^{p/2}`` (exact)."""
    q = p // 2
    return (riesz_factor(1) * riesz_factor(p)) ** q


def norm_ratio_power(p: int, k: int) -> Fraction:
    """``||R_{2k}||_p^p / ||R~_{2k}||_p^p`` for modes ``p, p^2, ..., p^{2k}``, exactly."""
    seq = make_sequence(base=p, ratio=p, length=2 * k)
    num = lp_even_exact(riesz_product(seq, 2 * k), p // 2).exact_rational
    return num / x_moment_exact(p) ** (2 * k)


def check_schneider_counterexample(p_even: int = 4, k_max: int = 3) -> List[CheckResult]:
    """Growth of ``r_k = ||R_{2k}||_p / ||R~_{2k}||_p`` and the block lower bound.

    For each ``k`` three records:

    - ``SCH-denominator``: ``(int X^p)^{2k} == (int int g^2)^k`` with
      ``g(x, y) = (1 + cos x)^{p/2} (1 + cos y)^{p/2}``;
    - ``SCH-growth``: ``r_{k-1} < r_k`` (``r_0 = 1``), compared on p-th powers;
    - ``SCH-block``: ``||R_{2k}||_p^p >= (int f^2)^k``.
    """
    p = _check_even(p_even)
    if k_max < 1:
        raise ValueError("k_max must be positive")
    q = p // 2
    g1 = riesz_factor(1) ** q
    g_sq = Fraction(g1.plancherel()) ** 2
    f_sq = Fraction(block_function(p).plancherel())
    out: List[CheckResult] = []
    prev = Fraction(1)
    for k in range(1, k_max + 1):
        inst = {"p": p, "k": k, "modes": [p**j for j in range(1, 2 * k + 1)]}
        den = x_moment_exact(p) ** (2 * k)
        out.append(compare("SCH-denominator", inst, den, g_sq**k, "==", "PRODUCT_FORM"))
        ratio = norm_ratio_power(p, k)
        num = ratio * den
        out.append(compare("SCH-growth", inst, prev, ratio, "<", "PLANCHEREL_EXACT", note=f"r_k = {float(ratio) ** (1 / p):.17g}"))
        out.append(compare("SCH-block", inst, num, f_sq**k, ">=", "PLANCHEREL_EXACT"))
        prev = ratio
    return out


def check_larger_inequality(g: TrigPoly, qs: Sequence[int]) -> CheckResult:
    """``int |g(q_1 x) ... g(q_k x)|^2 dm >= ||g||_2^{2k}`` for ``g`` with nonnegative coefficients.

    Equality holds exactly when every frequency of the product has a single
    representation; the record's note says which case occurred.
    """
    if not g.exact:
        raise HypothesisViolation("g must be exact")
    if any(c.real < 0 or c.imag != 0 for _, c in g.items()):
        raise HypothesisViolation("g needs nonnegative Fourier coefficients")
    prod = TrigPoly.constant(1)
    count = 1
    for q in qs:
        prod = prod * g.dilate(int(q))
        count *= g.nterms
    lhs = Fraction(prod.plancherel())
    rhs = Fraction(g.plancherel()) ** len(qs)
    note = "distinct sums" if prod.nterms == count else "collisions"
    return compare("SCH-larger", {"qs": list(map(int, qs)), "g": g.to_json()}, lhs, rhs, ">=", "PLANCHEREL_EXACT", note=note)


@dataclass(frozen=True)
class DiscrepancyRow:
    p: float
    torus: float
    product: float
    error: float
    differs: bool

    def to_dict(self):
        return {"p": self.p, "torus": self.torus, "product": self.product, "error": self.error, "differs": self.differs}


def check_p_discrepancy(q: int, p_grid: Sequence[float], tol: float = 1e-10) -> List[DiscrepancyRow]:
    """Compare ``||P||_p^p`` with ``||P~||_p^p = (int X^p)^2`` over ``p_grid``.

    ``P(x) = (1 + cos x)(1 + cos q x)``.  A row differs when the gap exceeds
    ``max(100 * error, 1e-9) * value``.
    """
    q = _check_even(q, "q")
    P = riesz_factor(1) * riesz_factor(q)
    rows = []
    for p in p_grid:
        p = float(p)
        if p.is_integer() and int(p) % 2 == 0:
            a = lp_even_exact(P, int(p) // 2)
            b = Fraction(x_moment_exact(int(p))) ** 2
            torus, product, err = a.value, float(b), 0.0
            differs = a.exact_rational != b
        else:
            a = lp_quadrature(P, p, tol, m0=8 * (q + 1))
            x = x_moment(p, tol=min(tol, 1e-12))
            torus, product = a.value, x.value**2
            err = a.error_estimate + 2 * x.value * x.error_estimate
            differs = bool(abs(torus - product) > max(100 * err, 1e-9) * max(torus, product))
        rows.append(DiscrepancyRow(p, torus, product, err, bool(differs)))
    return rows


def discrepancy_table(q: int, p_grid: Sequence[float], tol: float = 1e-10) -> np.ndarray:
    """``(p, torus, product)`` rows as a float array, for plotting."""
    return np.array([[r.p, r.torus, r.product] for r in check_p_discrepancy(q, p_grid, tol)])
