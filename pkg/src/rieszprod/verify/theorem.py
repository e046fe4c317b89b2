"""The two-sided moment bound for weighted sums of Riesz products.

For coefficients ``v_0..v_N`` the quantity of interest is

    ratio = int ||sum_k v_k R_k||^p dm / sum_k ||v_k||^p int R_k^p dm,

which the theory bounds below by ``c_p`` and above by ``C_p`` once the
sequence ratio is large enough.
"""

from __future__ import annotations

import functools
import itertools
import math
from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np

from ..approx import closed_form_constants
from ..lacunary import LacunarySeq
from ..moments import adaptive_trapezoid_many, lp_even_exact, riesz_moment
from ..riesz import riesz_product, riesz_samples, weighted_sum
from ..trigpoly import vector_norm
from .results import CheckResult, ConstantEstimate, compare, stream

MAX_POINTS = 2**23


def _as_batch(coeffs) -> np.ndarray:
    V = np.asarray(coeffs, dtype=np.float64)
    if V.ndim == 1:
        V = V[None, :, None]
    elif V.ndim == 2:
        V = V[None]
    return V


@functools.lru_cache(maxsize=512)
def _riesz_moment_cached(modes: Tuple[int, ...], ratio, k: int, p: float, tol: float) -> float:
    seq = LacunarySeq(modes, ratio)
    return riesz_moment(seq, k, p, tol=tol).value


def riesz_moments(seq: LacunarySeq, N: int, p: float, tol: float = 1e-10) -> np.ndarray:
    """``[int R_k^p dm for k = 0..N]`` (memoised)."""
    return np.array([_riesz_moment_cached(seq.modes[:N], seq.ratio_floor, k, float(p), tol) for k in range(N + 1)])


def sum_moments(seq: LacunarySeq, p: float, coeffs, e_norm: str = "l2", tol: float = 1e-9, max_points: int = MAX_POINTS):
    """``int ||sum_k v_k R_k||^p dm`` for a batch of coefficient sets.

    ``coeffs`` has shape ``(B, N+1, m)``, ``(N+1, m)`` or ``(N+1,)``.  Grid
    values come from the Riesz basis with exact index reduction, so the
    cost is ``B (N+1) m`` per grid point.

    Returns
    -------
    values, errors : ndarray of shape (B,)
    points : int
    converged : bool
    """
    V = _as_batch(coeffs)
    B, K, m = V.shape
    N = K - 1

    def sampler(M, idx):
        basis = riesz_samples(seq, N, M, idx)
        vals = np.einsum("bkm,kc->bcm", V, basis)
        return vector_norm(vals, e_norm) ** p if m > 1 else np.abs(vals[..., 0]) ** p

    chunk = max(256, 4_000_000 // max(1, B * m))
    start = max(64, 4 * seq.degree(N)) if N else 64
    return adaptive_trapezoid_many(sampler, tol, start, max_points, chunk)


def denominators(seq: LacunarySeq, p: float, coeffs, e_norm: str = "l2", tol: float = 1e-10) -> np.ndarray:
    """``sum_k ||v_k||^p int R_k^p dm`` for a batch."""
    V = _as_batch(coeffs)
    N = V.shape[1] - 1
    norms = vector_norm(V, e_norm) if V.shape[2] > 1 else np.abs(V[..., 0])
    return (norms**p) @ riesz_moments(seq, N, p, tol)


def moment_ratios(seq: LacunarySeq, p: float, coeffs, e_norm: str = "l2", tol: float = 1e-9, max_points: int = MAX_POINTS):
    """Ratios, their absolute error estimates and the grid size for a batch."""
    num, err, M, conv = sum_moments(seq, p, coeffs, e_norm, tol, max_points)
    den = denominators(seq, p, coeffs, e_norm)
    return num / den, err / den, M, conv


def _exact_ratio(seq: LacunarySeq, p: float, coeffs, e_norm: str):
    """Exact ratio for even p (scalar or l2); ``None`` if not applicable.

    Integer coefficients give a Fraction, others a float.
    """
    V = np.asarray(coeffs)
    if not (float(p).is_integer() and int(p) % 2 == 0):
        return None
    if V.ndim == 2 and V.shape[1] > 1 and e_norm != "l2":
        return None
    N = V.shape[0] - 1
    half = int(p) // 2
    if 3**N * (2 * half + 1) ** N > 10**7:
        return None
    f = weighted_sum(V.tolist(), seq, N, e_norm)
    num = lp_even_exact(f, half)
    moments = [lp_even_exact(riesz_product(seq, k), half).exact_rational for k in range(N + 1)]
    rows = V.reshape(N + 1, -1)
    if f.exact:
        den = sum(Fraction(sum(int(x) ** 2 for x in row.tolist())) ** half * mk for row, mk in zip(rows, moments))
        return num.exact_rational / den
    den = sum(float(np.sum(row.astype(float) ** 2)) ** half * float(mk) for row, mk in zip(rows, moments))
    return num.value / den


def candidate_constants(p: float) -> Tuple[float, float, str]:
    """Lower and upper candidates from the closed-form constants."""
    led = closed_form_constants(p)
    return led.value(p, "c_lower"), led.value(p, "C_upper"), led.get(p, "C_upper").source


def check_main_theorem(
    seq: LacunarySeq,
    p: float,
    coeffs,
    e_norm: str = "l2",
    tol: float = 1e-9,
    lower: Optional[float] = None,
    upper: Optional[float] = None,
    seed: Optional[int] = None,
) -> Tuple[CheckResult, CheckResult]:
    """Lower and upper checks of the moment ratio for one coefficient set.

    Even ``p`` with scalar or l2 coefficients is evaluated exactly by
    Plancherel; other cases use the adaptive trapezoid rule with slack
    ``max(10 * error, 1e-10)``.
    """
    c_lo, c_up, _ = candidate_constants(p)
    lower = c_lo if lower is None else lower
    upper = c_up if upper is None else upper
    V = np.asarray(coeffs)
    N = V.shape[0] - 1
    instance = {"seq": list(seq.modes[:N]), "p": p, "N": N, "e_norm": e_norm, "coeffs": V.tolist()}
    if N == 0:
        return (
            compare("THM-lower", instance, 1.0, lower, ">=", "TRIVIAL", seed=seed),
            compare("THM-upper", instance, 1.0, upper, "<=", "TRIVIAL", seed=seed),
        )
    exact = _exact_ratio(seq, p, V, e_norm)
    if exact is not None:
        if isinstance(exact, Fraction):
            lo = compare("THM-lower", instance, exact, Fraction(lower), ">=", "PLANCHEREL_EXACT", seed=seed)
            up = compare("THM-upper", instance, exact, Fraction(upper), "<=", "PLANCHEREL_EXACT", seed=seed)
            return lo, up
        return (
            compare("THM-lower", instance, exact, lower, ">=", "PLANCHEREL_EXACT", 1e-12 * exact, seed=seed),
            compare("THM-upper", instance, exact, upper, "<=", "PLANCHEREL_EXACT", 1e-12 * exact, seed=seed),
        )
    ratio, err, M, conv = moment_ratios(seq, p, V[None] if V.ndim == 2 else V[None, :, None], e_norm, tol)
    r, slack = float(ratio[0]), max(10 * float(err[0]), 1e-10)
    note = "" if conv else f"quadrature not converged at {M} points"
    return (
        compare("THM-lower", instance, r, lower, ">=", "QUADRATURE", slack, seed, note),
        compare("THM-upper", instance, r, upper, "<=", "QUADRATURE", slack, seed, note),
    )


# --------------------------------------------------------------------------
# adversarial search
# --------------------------------------------------------------------------


def sign_patterns(N: int, m: int = 1, limit: Optional[int] = None) -> np.ndarray:
    """All sign vectors with ``v_0 = +1`` (the ratio is invariant under a global sign)."""
    pats = [(1,) + s for s in itertools.product((1, -1), repeat=N)]
    if limit is not None:
        pats = pats[:limit]
    out = np.zeros((len(pats), N + 1, m))
    out[:, :, 0] = np.array(pats, dtype=np.float64)
    return out


def random_coefficients(seed: int, index: int, N: int, m: int) -> np.ndarray:
    """Random unit directions with log-normal magnitudes; stream keyed by (seed, index)."""
    rng = stream(seed, index)
    u = rng.standard_normal((N + 1, m))
    u /= np.linalg.norm(u, axis=1, keepdims=True)
    return u * np.exp(rng.standard_normal((N + 1, 1)))


def estimate_lower_constant(
    seq: LacunarySeq,
    p: float,
    N: int,
    e_norm: str = "l2",
    strategy: str = "all",
    budget: int = 64,
    seed: int = 0,
    m: int = 3,
    tol: float = 1e-8,
    descent_rounds: int = 2,
) -> ConstantEstimate:
    """Search for the extreme moment ratios over coefficient sets.

    Strategies: ``signs`` (all sign patterns, scalar), ``random`` (``budget``
    random vectors in ``R^m``), ``descent`` (multiplicative coordinate
    descent from the best random start) or ``all``.  Deterministic under
    ``seed``; ties keep the first minimum found.
    """
    if budget < 1:
        raise ValueError("budget must be positive")
    if N == 0:
        e0 = np.ones((1, 1))
        return ConstantEstimate(p, 0, seq.modes[:0], e_norm, 1.0, 1.0, e0, e0, budget, 1, strategy, seed)
    pools = []
    if strategy in ("signs", "all"):
        pools.append(sign_patterns(N, 1, limit=budget))
    if strategy in ("random", "descent", "all"):
        pools.append(np.stack([random_coefficients(seed, i, N, m) for i in range(budget)]))
    best_lo = (math.inf, None)
    best_hi = (-math.inf, None)
    evals = 0
    for pool in pools:
        r, _, _, _ = moment_ratios(seq, p, pool, e_norm, tol)
        evals += len(pool)
        i, j = int(np.argmin(r)), int(np.argmax(r))
        if r[i] < best_lo[0]:
            best_lo = (float(r[i]), pool[i])
        if r[j] > best_hi[0]:
            best_hi = (float(r[j]), pool[j])
    if strategy in ("descent", "all"):
        for sign, best in ((1, best_lo), (-1, best_hi)):
            val, v = best
            for _ in range(descent_rounds):
                cands = []
                for k in range(N + 1):
                    for fac in (0.5, 2.0, -1.0, 0.1, 10.0):
                        w = v.copy()
                        w[k] *= fac
                        if np.any(w):
                            cands.append(w)
                cands = np.stack(cands)
                r, _, _, _ = moment_ratios(seq, p, cands, e_norm, tol)
                evals += len(cands)
                idx = int(np.argmin(sign * r))
                if sign * r[idx] < sign * val:
                    val, v = float(r[idx]), cands[idx]
                else:
                    break
            if sign == 1:
                best_lo = (val, v)
            else:
                best_hi = (val, v)
    # the unit vector e_0 attains ratio 1
    e0 = np.zeros_like(best_lo[1])
    e0[0, 0] = 1.0
    if best_lo[0] > 1.0:
        best_lo = (1.0, e0)
    if best_hi[0] < 1.0:
        best_hi = (1.0, e0)
    return ConstantEstimate(p, N, seq.modes[:N], e_norm, best_lo[0], best_hi[0], best_lo[1], best_hi[1], budget, evals, strategy, seed)


def check_theorem_batch(
    seq: LacunarySeq,
    p: float,
    coeffs,
    e_norm: str = "l2",
    tol: float = 1e-9,
    lower: Optional[float] = None,
    upper: Optional[float] = None,
    seed: Optional[int] = None,
) -> List[CheckResult]:
    """:func:`check_main_theorem` over a batch ``(B, N+1, m)``, sharing one quadrature.

    Returns ``[lower_0, upper_0, lower_1, upper_1, ...]``.
    """
    V = _as_batch(coeffs)
    if V.shape[0] == 0:
        return []
    if V.shape[1] == 1 or _exact_ratio(seq, p, V[0], e_norm) is not None:
        out: List[CheckResult] = []
        for v in V:
            out.extend(check_main_theorem(seq, p, v if v.shape[1] > 1 else v[:, 0], e_norm, tol, lower, upper, seed))
        return out
    c_lo, c_up, _ = candidate_constants(p)
    lower = c_lo if lower is None else lower
    upper = c_up if upper is None else upper
    N = V.shape[1] - 1
    ratio, err, M, conv = moment_ratios(seq, p, V, e_norm, tol)
    note = "" if conv else f"quadrature not converged at {M} points"
    out = []
    for v, r, e in zip(V, ratio, err):
        v = v if v.shape[1] > 1 else v[:, 0]
        instance = {"seq": list(seq.modes[:N]), "p": p, "N": N, "e_norm": e_norm, "coeffs": v.tolist()}
        slack = max(10 * float(e), 1e-10)
        out.append(compare("THM-lower", instance, float(r), lower, ">=", "QUADRATURE", slack, seed, note))
        out.append(compare("THM-upper", instance, float(r), upper, "<=", "QUADRATURE", slack, seed, note))
    return out
