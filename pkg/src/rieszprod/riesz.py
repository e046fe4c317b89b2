"""Riesz products, their shifted and partial variants, and the weight family.

For a lacunary sequence ``n_1 < n_2 < ...`` the Riesz product of order N is
``R_N(t) = prod_{j<=N} (1 + cos(n_j t))``, with ``R_0 = 1``.  The factor
``X_j = 1 + cos(n_j t)`` is also used on its own.
"""

from __future__ import annotations

import enum
import functools
import json
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .errors import BudgetExceeded
from .lacunary import LacunarySeq
from .trigpoly import Dyadic, TrigPoly, VecTrigPoly

# 3**13 terms is the largest Riesz product built by default
MAX_TERMS = 3**13


class Choice(str, enum.Enum):
    """One factor ``h_j`` of a weight: ``1``, ``phi_k^p / 2`` or ``1 - phi_k^p / 2``."""

    ONE = "ONE"
    HALF_PHI = "HALF_PHI"
    ONE_MINUS_HALF_PHI = "ONE_MINUS_HALF_PHI"


@dataclass(frozen=True)
class WeightSpec:
    """A weight ``g(t) = prod_{j<=l} h_j(n_j t)`` with ``h_j`` chosen per index.

    ``l == 0`` is the constant weight 1.
    """

    k: int
    l: int
    p: float
    choices: Tuple[Choice, ...] = ()

    def __post_init__(self):
        choices = tuple(Choice(c) for c in self.choices)
        object.__setattr__(self, "choices", choices)
        if self.k < 1:
            raise ValueError("k must be a positive integer")
        if self.l < 0:
            raise ValueError("l must be nonnegative")
        if self.p < 1:
            raise ValueError("p must be at least 1")
        if len(choices) != self.l:
            raise ValueError(f"expected {self.l} choices, got {len(choices)}")

    @classmethod
    def constant(cls, k: int = 1, p: float = 1.0) -> "WeightSpec":
        return cls(k, 0, p, ())

    @property
    def trivial(self) -> bool:
        return all(c is Choice.ONE for c in self.choices)

    def to_json(self) -> str:
        return json.dumps({"k": self.k, "l": self.l, "p": self.p, "choices": [c.value for c in self.choices]})

    @classmethod
    def from_json(cls, text: str) -> "WeightSpec":
        d = json.loads(text)
        return cls(int(d["k"]), int(d["l"]), float(d["p"]), tuple(d["choices"]))


# --------------------------------------------------------------------------
# polynomial constructors
# --------------------------------------------------------------------------


def riesz_factor(n: int) -> TrigPoly:
    """``X = 1 + cos(n t)`` as an exact polynomial."""
    return TrigPoly.from_coeffs({0: 1, n: Dyadic(1, 0, 1), -n: Dyadic(1, 0, 1)})


@functools.lru_cache(maxsize=128)
def _riesz_cached(modes: Tuple[int, ...]) -> TrigPoly:
    if not modes:
        return TrigPoly.constant(1)
    return _riesz_cached(modes[:-1]).multiply(riesz_factor(modes[-1]))


def _check_order(seq: LacunarySeq, N: int) -> None:
    if not 0 <= N <= len(seq):
        raise ValueError(f"order {N} outside 0..{len(seq)}")
    if 3**N > MAX_TERMS:
        raise BudgetExceeded(f"3^{N} terms exceed the budget of {MAX_TERMS}")


def riesz_product(seq: LacunarySeq, N: int) -> TrigPoly:
    """Exact ``R_N`` over the first ``N`` modes; prefixes are memoised."""
    _check_order(seq, N)
    return _riesz_cached(seq.modes[:N])


def partial_product(seq: LacunarySeq, l: int, N: int) -> TrigPoly:
    """``R_{l,N} = X_l X_{l+1} ... X_N`` (1-based indices)."""
    if not 1 <= l <= N <= len(seq):
        raise ValueError("need 1 <= l <= N <= len(seq)")
    if 3 ** (N - l + 1) > MAX_TERMS:
        raise BudgetExceeded("partial product exceeds the term budget")
    return _riesz_cached(seq.modes[l - 1 : N])


def riesz_shifted(seq: LacunarySeq, N: int, psi: Sequence[float]) -> TrigPoly:
    """``prod_{j<=N} (1 + cos(n_j t + psi_j))`` in float mode."""
    _check_order(seq, N)
    psi = list(psi)
    if len(psi) < N:
        raise ValueError(f"need {N} phases, got {len(psi)}")
    out = TrigPoly.constant(1.0, exact=False)
    for n, ph in zip(seq.modes[:N], psi[:N]):
        half = 0.5 * complex(math.cos(ph), math.sin(ph))
        if ph == 0:
            half = 0.5 + 0j
        factor = TrigPoly.from_coeffs({0: 1.0, n: half, -n: half.conjugate()}, exact=False, real=True)
        out = out.multiply(factor)
    return out


def riesz_tilde(seq: LacunarySeq, N: int, psi: Sequence[float]) -> TrigPoly:
    """``prod_{j<=N} (1 + cos(n_j t + psi_j) / 2)``, built directly."""
    _check_order(seq, N)
    out = TrigPoly.constant(1.0, exact=False)
    for n, ph in zip(seq.modes[:N], list(psi)[:N]):
        q = 0.25 * complex(math.cos(ph), math.sin(ph))
        factor = TrigPoly.from_coeffs({0: 1.0, n: q, -n: q.conjugate()}, exact=False, real=True)
        out = out.multiply(factor)
    return out


@functools.lru_cache(maxsize=32)
def phi_k(k: int) -> TrigPoly:
    """``phi_k(t) = ((1 - cos t) / 2)^k``, exact, degree k, values in [0, 1]."""
    if k < 1:
        raise ValueError("k must be positive")
    base = TrigPoly.from_coeffs({0: Dyadic(1, 0, 1), 1: Dyadic(-1, 0, 2), -1: Dyadic(-1, 0, 2)})
    return base**k


def weighted_sum(coeffs, seq: LacunarySeq, N: Optional[int] = None, e_norm: str = "l2") -> VecTrigPoly:
    """``sum_{k<=N} v_k R_k`` as an ``R^m``-valued polynomial.

    ``coeffs`` has shape ``(N+1,)`` (scalars, m = 1) or ``(N+1, m)``.  Integer
    or dyadic coefficients keep the result exact.
    """
    rows = [np.atleast_1d(np.asarray(v)) for v in coeffs]
    if N is None:
        N = len(rows) - 1
    if len(rows) != N + 1:
        raise ValueError(f"need {N + 1} coefficient vectors, got {len(rows)}")
    m = rows[0].size
    if any(r.size != m for r in rows):
        raise ValueError("coefficient vectors must share one dimension")
    _check_order(seq, N)
    exact = all(_is_exact_scalar(x) for r in rows for x in r.tolist())
    products = [riesz_product(seq, k) for k in range(N + 1)]
    coords = []
    for i in range(m):
        acc = TrigPoly.zero(exact=exact)
        for k in range(N + 1):
            c = rows[k].tolist()[i]
            if c == 0:
                continue
            term = products[k].scale(c) if exact else products[k].to_float().scale(float(c))
            acc = acc + term
        coords.append(acc)
    return VecTrigPoly(tuple(coords), e_norm)


def _is_exact_scalar(x) -> bool:
    return not isinstance(x, (float, complex)) and Dyadic.coerce(x) is not None


# --------------------------------------------------------------------------
# pointwise and grid evaluation
# --------------------------------------------------------------------------


def _phi_values(x: np.ndarray, k: int) -> np.ndarray:
    # (1 - cos x)/2 = sin(x/2)^2 avoids cancellation near x = 0
    return np.sin(0.5 * x) ** (2 * k)


def _h_values(choice: Choice, phi: np.ndarray, p: float) -> np.ndarray:
    if choice is Choice.ONE:
        return np.ones_like(phi)
    half = 0.5 * phi**p
    return half if choice is Choice.HALF_PHI else 1.0 - half


def weight_eval(spec: WeightSpec, seq: LacunarySeq, t):
    """``g(t) = prod_{j<=l} h_j(n_j t)``, evaluated pointwise (never expanded)."""
    if spec.l > len(seq):
        raise ValueError("weight uses more modes than the sequence has")
    tt = np.asarray(t, dtype=np.float64)
    out = np.ones_like(tt)
    for n, c in zip(seq.modes, spec.choices):
        if c is Choice.ONE:
            continue
        x = np.mod(n * tt, 2 * np.pi)
        out = out * _h_values(c, _phi_values(x, spec.k), spec.p)
    return out if out.ndim else float(out)


def grid_angles(n: int, M: int, idx: np.ndarray) -> np.ndarray:
    """``n * t`` reduced to [0, 2pi) at ``t = 2 pi idx / M``, with exact integer reduction."""
    if M >= 2**31:
        raise ValueError("grid too large for exact index reduction")
    r = (int(n) % M) * idx.astype(np.int64) % M
    return (2 * np.pi / M) * r


def weight_samples(spec: WeightSpec, seq: LacunarySeq, M: int, idx: Optional[np.ndarray] = None) -> np.ndarray:
    """Weight values at grid points ``2 pi idx / M`` (all M points by default)."""
    idx = np.arange(M, dtype=np.int64) if idx is None else np.asarray(idx, dtype=np.int64)
    out = np.ones(idx.shape, dtype=np.float64)
    for n, c in zip(seq.modes, spec.choices):
        if c is Choice.ONE:
            continue
        out *= _h_values(c, _phi_values(grid_angles(n, M, idx), spec.k), spec.p)
    return out


def riesz_samples(seq: LacunarySeq, N: int, M: int, idx: Optional[np.ndarray] = None, start: int = 1) -> np.ndarray:
    """Values of ``R_0, ..., R_N`` at grid points, shape ``(N+1, len(idx))``.

    With ``start > 1`` the rows are the partial products ``X_start ... X_k``
    instead (row 0 and rows below ``start`` are 1).
    """
    idx = np.arange(M, dtype=np.int64) if idx is None else np.asarray(idx, dtype=np.int64)
    out = np.empty((N + 1, idx.size), dtype=np.float64)
    out[0] = 1.0
    for j in range(1, N + 1):
        if j < start:
            out[j] = 1.0
            continue
        out[j] = out[j - 1] * (1.0 + np.cos(grid_angles(seq.modes[j - 1], M, idx)))
    return out
