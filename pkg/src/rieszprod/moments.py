"""L^p moments on the torus.

Three backends are provided:

* exact Plancherel sums for even integer exponents, ``int f^{2m} dm =
  sum_n |(f^m)^(n)|^2``, whose cost depends on term counts only;
* an adaptive periodic trapezoid rule with point doubling for everything
  else;
* product-form and two-dimensional tensor-grid integrals for lifted
  Riesz products on the multi-torus.

All integrals are against the normalised Haar measure ``dm = dt / 2pi``.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable, Optional, Union

import numpy as np
from scipy.special import gammaln

from .errors import NoConvergence
from .lacunary import LacunarySeq
from .riesz import WeightSpec, riesz_product, riesz_samples, weight_samples
from .trigpoly import TrigPoly, VecTrigPoly, vector_norm

DEFAULT_MAX_POINTS = 2**24


class Method(str, enum.Enum):
    PLANCHEREL_EXACT = "PLANCHEREL_EXACT"
    QUADRATURE = "QUADRATURE"
    PRODUCT_FORM = "PRODUCT_FORM"
    TENSOR_GRID = "TENSOR_GRID"
    MONTE_CARLO = "MONTE_CARLO"


@dataclass(frozen=True)
class MomentReport:
    """A computed moment with its provenance.

    ``error_estimate`` is the last successive difference for quadrature, the
    standard error for Monte Carlo and 0 for exact values.
    """

    value: float
    method: Method
    error_estimate: float = 0.0
    points_or_terms: int = 0
    exact_rational: Optional[Fraction] = None
    converged: bool = True

    def __post_init__(self):
        if not self.error_estimate >= 0:
            raise ValueError("error_estimate must be nonnegative")
        if self.method is Method.PLANCHEREL_EXACT and (self.exact_rational is None or self.error_estimate != 0):
            raise ValueError("exact reports carry the rational value and zero error")

    def to_json(self) -> str:
        d = {
            "method": self.method.value,
            "value": self.value,
            "error_estimate": self.error_estimate,
            "points_or_terms": self.points_or_terms,
            "converged": self.converged,
        }
        if self.exact_rational is not None:
            d["exact_rational"] = f"{self.exact_rational.numerator}/{self.exact_rational.denominator}"
        return json.dumps(d)


def _exact_report(value: Fraction, terms: int) -> MomentReport:
    return MomentReport(float(value), Method.PLANCHEREL_EXACT, 0.0, terms, Fraction(value))


# --------------------------------------------------------------------------
# adaptive periodic trapezoid
# --------------------------------------------------------------------------

# a sampler maps (M, idx) to integrand values at t = 2 pi idx / M
GridSampler = Callable[[int, np.ndarray], np.ndarray]


def _next_pow2(x: int) -> int:
    return 1 << max(0, int(x - 1).bit_length())


def adaptive_trapezoid(
    sampler: GridSampler,
    tol: float = 1e-10,
    m0: int = 64,
    max_points: int = DEFAULT_MAX_POINTS,
    raise_on_fail: bool = True,
) -> MomentReport:
    """Mean of a periodic integrand by trapezoid rule with point doubling.

    Each doubling only samples the new midpoints.  Stops once successive
    estimates differ by less than ``tol`` relative to the current one.
    """
    M = max(4, _next_pow2(m0))
    est = float(np.mean(sampler(M, np.arange(M, dtype=np.int64))))
    diff = math.inf
    while True:
        if 2 * M > max_points:
            report = MomentReport(est, Method.QUADRATURE, diff, M, converged=False)
            if raise_on_fail:
                raise NoConvergence(f"no convergence within {max_points} points (last change {diff:.3g})", report)
            return report
        new = sampler(2 * M, np.arange(1, 2 * M, 2, dtype=np.int64))
        prev, est = est, 0.5 * (est + float(np.mean(new)))
        M *= 2
        diff = abs(est - prev)
        if diff <= tol * abs(est) or (est == 0.0 and diff == 0.0):
            return MomentReport(est, Method.QUADRATURE, diff, M)


def adaptive_trapezoid_many(
    sampler: GridSampler,
    tol: float = 1e-10,
    m0: int = 64,
    max_points: int = DEFAULT_MAX_POINTS,
    chunk: int = 1 << 14,
):
    """Batched :func:`adaptive_trapezoid` for integrands returning ``(B, len(idx))``.

    All B means share one grid and stop together once every relative change
    is below ``tol``.  Grid points are fed to ``sampler`` in chunks of at
    most ``chunk`` indices.

    Returns
    -------
    values, errors : ndarray
        Means and last successive differences, shape ``(B,)``.
    points : int
        Final grid size.
    converged : bool
    """

    def mean_over(M, idx):
        total = None
        for s in range(0, idx.size, chunk):
            part = np.sum(sampler(M, idx[s : s + chunk]), axis=-1)
            total = part if total is None else total + part
        return total / idx.size

    M = max(4, _next_pow2(m0))
    est = mean_over(M, np.arange(M, dtype=np.int64))
    diff = np.full(est.shape, np.inf)
    while 2 * M <= max_points:
        new = mean_over(2 * M, np.arange(1, 2 * M, 2, dtype=np.int64))
        prev, est = est, 0.5 * (est + new)
        M *= 2
        diff = np.abs(est - prev)
        if np.all((diff <= tol * np.abs(est)) | ((est == 0) & (diff == 0))):
            return est, diff, M, True
    return est, diff, M, False


def _norm_power(vals: np.ndarray, p: float, e_norm: str) -> np.ndarray:
    return vector_norm(vals, e_norm) ** p if vals.ndim > 1 else np.abs(vals) ** p


def _poly_sampler(f: Union[TrigPoly, VecTrigPoly], p: float) -> GridSampler:
    cache = {}

    def sample(M, idx):
        if M not in cache:
            cache.clear()
            if isinstance(f, VecTrigPoly):
                cache[M] = vector_norm(f.sample(M), f.e_norm) ** p
            else:
                cache[M] = np.abs(f.sample(M)) ** p
        return cache[M][idx]

    return sample


def _callable_sampler(f: Callable, p: float, e_norm: str) -> GridSampler:
    def sample(M, idx):
        vals = np.asarray(f(2 * np.pi * idx / M))
        return _norm_power(vals, p, e_norm)

    return sample


def lp_quadrature(
    f,
    p: float,
    tol: float = 1e-10,
    max_points: int = DEFAULT_MAX_POINTS,
    e_norm: str = "l2",
    m0: Optional[int] = None,
    raise_on_fail: bool = True,
) -> MomentReport:
    """``int ||f||^p dm`` by adaptive trapezoid.

    ``f`` is a :class:`TrigPoly`, a :class:`VecTrigPoly` (its own norm is used)
    or a vectorised callable of ``t`` returning scalars or vectors along the
    last axis (normed with ``e_norm``).  For polynomials the first grid has at
    least ``4 * degree`` points.

    Raises
    ------
    NoConvergence
        When ``max_points`` is reached; the partial report is attached.
    """
    if p < 0:
        raise ValueError("p must be nonnegative")
    if isinstance(f, (TrigPoly, VecTrigPoly)):
        sampler = _poly_sampler(f, p)
        start = max(64, 4 * f.degree)
    else:
        sampler = _callable_sampler(f, p, e_norm)
        start = 64
    return adaptive_trapezoid(sampler, tol, m0 or start, max_points, raise_on_fail)


# --------------------------------------------------------------------------
# exact even moments
# --------------------------------------------------------------------------


def lp_even_exact(f: Union[TrigPoly, VecTrigPoly], m: int, budget: Optional[int] = None) -> MomentReport:
    """``int ||f||^{2m} dm`` by Plancherel on sparse powers.

    Scalars use ``sum_n |(f^m)^(n)|^2``.  Vectors (l2 norm only) use
    ``g = sum_i f_i^2`` and ``int g^a g^b dm`` with ``a + b = m``.  Exact
    inputs give an exact rational.
    """
    if m < 1 or int(m) != m:
        raise ValueError("m must be a positive integer")
    m = int(m)
    if isinstance(f, VecTrigPoly):
        if f.dim == 1:
            f = f.coords[0]
        elif f.e_norm != "l2":
            raise ValueError("even moments of vectors are polynomial only for the l2 norm")
        else:
            g = TrigPoly.zero(exact=f.exact)
            for c in f.coords:
                g = g + c.multiply(c, budget)
            a, b = (m + 1) // 2, m // 2
            ga = _power(g, a, budget)
            gb = _power(g, b, budget) if b != a else ga
            val = ga.inner(gb)
            terms = ga.nterms + gb.nterms
            if f.exact:
                return _exact_report(val.real, terms)
            return _float_plancherel(complex(val).real, terms)
    fm = _power(f, m, budget)
    val = fm.plancherel()
    if f.exact:
        return _exact_report(val, fm.nterms)
    return _float_plancherel(val, fm.nterms)


def _float_plancherel(value: float, terms: int) -> MomentReport:
    # float coefficients: the formula is exact, only rounding remains; the
    # rational field then records the double that was computed
    return MomentReport(float(value), Method.PLANCHEREL_EXACT, 0.0, terms, Fraction(float(value)))


def _power(f: TrigPoly, m: int, budget: Optional[int]) -> TrigPoly:
    out = TrigPoly.constant(1, exact=f.exact)
    for _ in range(m):
        out = out.multiply(f, budget)
    return out


# --------------------------------------------------------------------------
# the factor X = 1 + cos
# --------------------------------------------------------------------------


def x_moment_closed_form(p: float) -> float:
    """``int (1 + cos t)^p dm = 2^p Gamma(p + 1/2) / (sqrt(pi) Gamma(p + 1))``."""
    return math.exp(p * math.log(2) + gammaln(p + 0.5) - 0.5 * math.log(math.pi) - gammaln(p + 1))


def x_moment_exact(p: int) -> Fraction:
    """``C(2p, p) / 2^p`` for integer ``p``."""
    return Fraction(math.comb(2 * p, p), 2**p)


def x_moment(p: float, tol: float = 1e-12, max_points: int = DEFAULT_MAX_POINTS) -> MomentReport:
    """``int (1 + cos t)^p dm`` by quadrature.

    Integer exponents also carry the exact value ``C(2p, p)/2^p``.  The
    integrand vanishes like ``|t - pi|^{2p}``, so small ``p`` needs finer
    grids; ``tol`` applies to successive doublings.
    """
    if p < 0:
        raise ValueError("p must be nonnegative")

    def sampler(M, idx):
        # 1 + cos t = 2 cos^2(t/2), accurate near t = pi
        return (2.0 * np.cos(np.pi * idx / M) ** 2) ** p

    rep = adaptive_trapezoid(sampler, tol, 64, max_points)
    if float(p).is_integer():
        rep = replace(rep, exact_rational=x_moment_exact(int(p)))
    return rep


def tilde_norm_product(p: float, N: int) -> MomentReport:
    """``int_{T^N} prod_j X(y_j)^p = (int X^p dm)^N`` (the lifted Riesz product)."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    if float(p).is_integer():
        exact = x_moment_exact(int(p)) ** N
        return MomentReport(float(exact), Method.PRODUCT_FORM, 0.0, N, exact)
    base = x_moment(p)
    return MomentReport(base.value**N, Method.PRODUCT_FORM, N * base.value ** max(N - 1, 0) * base.error_estimate, N)


def torus2_norm(
    F: Callable[[np.ndarray, np.ndarray], np.ndarray],
    p: float,
    tol: float = 1e-10,
    max_points: int = 2**24,
    m0: int = 32,
) -> MomentReport:
    """``int_{T^2} |F(x, y)|^p dm dm`` on tensor grids doubled in both axes."""
    M = _next_pow2(max(m0, 4))
    prev = None
    while True:
        t = 2 * np.pi * np.arange(M) / M
        X, Y = np.meshgrid(t, t, indexing="ij")
        est = float(np.mean(np.abs(F(X, Y)) ** p))
        if prev is not None:
            diff = abs(est - prev)
            if diff <= tol * abs(est) or (est == 0.0 and diff == 0.0):
                return MomentReport(est, Method.TENSOR_GRID, diff, M * M)
        if 4 * M * M > max_points:
            report = MomentReport(est, Method.TENSOR_GRID, math.inf if prev is None else abs(est - prev), M * M, converged=False)
            raise NoConvergence("tensor grid exhausted", report)
        prev = est
        M *= 2


# --------------------------------------------------------------------------
# Riesz-specific moments
# --------------------------------------------------------------------------


def riesz_sampler(seq: LacunarySeq, N: int, p: float, start: int = 1) -> GridSampler:
    """Sampler of ``R_N^p`` (or ``(X_start...X_N)^p``) with exact index reduction."""

    def sample(M, idx):
        return riesz_samples(seq, N, M, idx, start=start)[N] ** p

    return sample


def riesz_moment(seq: LacunarySeq, N: int, p: float, tol: float = 1e-10, max_points: int = DEFAULT_MAX_POINTS) -> MomentReport:
    """``int R_N^p dm``; exact for even integer p, quadrature otherwise."""
    if N == 0:
        return _exact_report(Fraction(1), 1)
    if float(p).is_integer() and int(p) % 2 == 0 and 3**N * (int(p) + 1) ** N <= 10**7:
        return lp_even_exact(riesz_product(seq, N), int(p) // 2)
    return adaptive_trapezoid(riesz_sampler(seq, N, p), tol, 4 * seq.degree(N), max_points)


def weighted_moment(
    f: Union[TrigPoly, VecTrigPoly],
    spec: WeightSpec,
    seq: LacunarySeq,
    p: float,
    tol: float = 1e-10,
    max_points: int = DEFAULT_MAX_POINTS,
) -> MomentReport:
    """``int ||f||^p g dm`` with ``g`` the weight described by ``spec``."""
    base = _poly_sampler(f, p)

    def sample(M, idx):
        return base(M, idx) * weight_samples(spec, seq, M, idx)

    wdeg = max((n for n, _ in zip(seq.modes, spec.choices)), default=0) * spec.k
    return adaptive_trapezoid(sample, tol, max(64, 4 * max(f.degree, wdeg)), max_points)
