"""The L^1 transfer from the torus to independent coordinates, and the i.i.d. twin.

Convolving ``sum_j v_j R_j`` in ``x`` against the shifted Riesz product
``prod (1 + cos(n_j x + psi_j))`` halves every nonconstant coefficient once
more, giving ``R~_j(psi, x) = prod (1 + cos(n_j x + psi_j) / 2)``.  Since the
shifted product is a probability density the L^1 norm can only drop.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from ..errors import HypothesisViolation
from ..lacunary import LacunarySeq
from ..moments import Method, MomentReport, adaptive_trapezoid_many
from ..riesz import grid_angles, riesz_product, riesz_samples, riesz_shifted, riesz_tilde
from ..trigpoly import vector_norm
from .results import CheckResult, compare, stream

MAX_POINTS = 2**22


def _rows(coeffs) -> np.ndarray:
    V = np.asarray(coeffs, dtype=np.float64)
    return V[:, None] if V.ndim == 1 else V


def _norm(vals: np.ndarray, e_norm: str) -> np.ndarray:
    return vector_norm(vals, e_norm) if vals.shape[-1] > 1 else np.abs(vals[..., 0])


def tilde_samples(seq: LacunarySeq, N: int, psi: Sequence[float], M: int, idx: np.ndarray) -> np.ndarray:
    """Values of ``R~_0(psi, .), ..., R~_N(psi, .)`` on grid points, shape ``(N+1, len(idx))``."""
    out = np.empty((N + 1, idx.size))
    out[0] = 1.0
    for j in range(1, N + 1):
        out[j] = out[j - 1] * (1.0 + 0.5 * np.cos(grid_angles(seq.modes[j - 1], M, idx) + psi[j - 1]))
    return out


def tilde_identity(seq: LacunarySeq, N: int, psi: Sequence[float], atol: float = 1e-12) -> bool:
    """Whether ``R_N * prod(1 + cos(n_j . + psi_j)) == prod(1 + cos(n_j . + psi_j)/2)`` coefficientwise."""
    conv = riesz_shifted(seq, N, psi).convolve_fourier(riesz_product(seq, N))
    return conv.allclose(riesz_tilde(seq, N, psi), atol=atol)


def check_l1_transfer(
    seq: LacunarySeq,
    N: int,
    coeffs,
    psi_samples: int = 10,
    seed: int = 0,
    e_norm: str = "l2",
    tol: float = 1e-8,
    psi: Optional[Sequence[Sequence[float]]] = None,
) -> CheckResult:
    """Contraction ``int ||sum v_j R~_j(psi, .)|| dm <= int ||sum v_j R_j|| dm``.

    Checked for ``psi_samples`` phase vectors drawn from ``stream(seed, i)``
    (or for the explicit ``psi`` list).  The record carries the worst
    instance; it fails if any contraction or any coefficient identity fails.
    """
    if seq.ratio_floor < 3:
        raise HypothesisViolation("needs ratio >= 3")
    V = _rows(coeffs)
    if V.shape[0] != N + 1:
        raise ValueError(f"need {N + 1} coefficient vectors")
    phases = [np.asarray(x, dtype=np.float64) for x in psi] if psi is not None else [stream(seed, i).uniform(0, 2 * np.pi, N) for i in range(psi_samples)]
    B = len(phases)

    def rows(M, idx):
        R = riesz_samples(seq, N, M, idx)
        out = [_norm(np.einsum("km,kc->cm", V, R), e_norm)]
        for ph in phases:
            out.append(_norm(np.einsum("km,kc->cm", V, tilde_samples(seq, N, ph, M, idx)), e_norm))
        return np.stack(out)

    vals, errs, M, conv = adaptive_trapezoid_many(rows, tol, max(64, 4 * seq.degree(N)), MAX_POINTS)
    rhs, lhs_all = vals[0], vals[1:]
    worst = int(np.argmax(lhs_all)) if B else 0
    identities = all(tilde_identity(seq, N, ph) for ph in phases) if N else True
    inst = {"seq": list(seq.modes[:N]), "N": N, "coeffs": V.tolist(), "e_norm": e_norm, "psi_samples": B}
    slack = max(10 * float(errs[0] + errs[1 + worst]), 1e-10) if B else 1e-10
    lhs = float(lhs_all[worst]) if B else float(rhs)
    note = f"{B} phase vectors; worst index {worst}"
    if not conv:
        note += f"; quadrature not converged at {M} points"
    res = compare("L1-transfer", inst, lhs, float(rhs), "<=", "QUADRATURE", slack, seed, note)
    if identities:
        return res
    return CheckResult(res.statement_id, res.instance, res.lhs, res.rhs, -math.inf, False, res.method, res.relation, seed, None, note + "; coefficient identity failed")


def montecarlo_iid(p: float, N: int, coeffs, e_norm: str = "l2", samples: int = 100_000, seed: int = 0, chunk: int = 1 << 16) -> MomentReport:
    """Monte-Carlo estimate of ``E ||sum_k v_k Rbar_k||^p`` with ``Rbar_k = prod_{j<=k} (1 + cos U_j)``.

    ``U_j`` are i.i.d. uniform on ``[0, 2 pi)``; draws come from
    ``stream(seed, 0)``.  The standard error is infinite for one sample.
    """
    if samples < 1:
        raise ValueError("samples must be positive")
    V = _rows(coeffs)
    if V.shape[0] != N + 1:
        raise ValueError(f"need {N + 1} coefficient vectors")
    rng = stream(seed, 0)
    total = total_sq = 0.0
    # shifted sums keep the variance computation stable
    shift = None
    done = 0
    while done < samples:
        n = min(chunk, samples - done)
        U = rng.uniform(0.0, 2 * np.pi, (n, N))
        R = np.ones((n, N + 1))
        if N:
            R[:, 1:] = np.cumprod(1.0 + np.cos(U), axis=1)
        vals = _norm(R @ V, e_norm) ** p
        if shift is None:
            shift = float(vals[0])
        y = vals - shift
        total += float(y.sum())
        total_sq += float(y @ y)
        done += n
    mean = shift + total / samples
    if samples == 1:
        se = math.inf
    else:
        var = max(total_sq - total * total / samples, 0.0) / (samples - 1)
        se = math.sqrt(var / samples)
    return MomentReport(mean, Method.MONTE_CARLO, se, samples, converged=True)


def iid_second_moment(a):
    """``E (sum_k a_k Rbar_k)^2 = sum_{k,l} a_k a_l (3/2)^{min(k,l)}`` (exact for rational input)."""
    vals = list(a)
    exact = all(isinstance(x, (int, Fraction)) for x in vals)
    three_halves = Fraction(3, 2) if exact else 1.5
    total = Fraction(0) if exact else 0.0
    for k, ak in enumerate(vals):
        for l, al in enumerate(vals):
            total += ak * al * three_halves ** min(k, l)
    return total
