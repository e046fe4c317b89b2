"""Polynomial approximants behind the weighted induction, and its constants.

* :func:`bernstein_approx` -- ``w_{eps,p}`` with ``f_p <= w <= (1+eps) f_p``
  on [0, 1], where ``f_p(t) = (1 - t^p / 2)^{1/p}``.
* :func:`weight_majorant` -- a trigonometric polynomial ``h`` with
  ``g <= h^p <= 2g`` for a weight ``g`` of the family.
* :func:`weierstrass_wp` -- ``w_p`` with ``x^{(p-1)/p} <= w_p(x)`` on [0, 2]
  and ``lambda_1(p) < 1``.
* :func:`lambda_constants` and :class:`ConstantLedger` -- the derived
  constants with their provenance.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np
from numpy.polynomial import chebyshev as C
from numpy.polynomial import polynomial as P
from scipy.stats import binom

from .errors import NoAdmissibleEps, RatioViolation, SandwichFailure
from .lacunary import LacunarySeq, ratio_at_least
from .moments import adaptive_trapezoid, x_moment, x_moment_closed_form
from .riesz import Choice, WeightSpec, phi_k, weight_samples
from .trigpoly import TrigPoly

SLACK = 1e-12
GRID_POINTS = 10_001
LN2 = math.log(2.0)


# --------------------------------------------------------------------------
# real polynomials
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class RealPoly:
    """Univariate real polynomial on an interval.

    ``basis`` is ``"monomial"``, ``"chebyshev"`` (numpy convention, on
    ``domain``) or ``"bernstein"`` (coefficient k multiplies
    ``C(n,k) s^k (1-s)^{n-k}`` with ``s`` the point mapped to [0, 1]).
    High-degree approximants are kept in the last two bases, where
    evaluation is well conditioned.
    """

    coef: np.ndarray
    basis: str = "monomial"
    domain: Tuple[float, float] = (0.0, 1.0)

    def __post_init__(self):
        coef = np.asarray(self.coef, dtype=np.float64).copy()
        if self.basis not in ("monomial", "chebyshev", "bernstein"):
            raise ValueError(f"unknown basis {self.basis!r}")
        if self.basis != "bernstein":
            nz = np.nonzero(coef)[0]
            coef = coef[: nz[-1] + 1] if nz.size else coef[:1]
        coef.setflags(write=False)
        object.__setattr__(self, "coef", coef)
        object.__setattr__(self, "domain", (float(self.domain[0]), float(self.domain[1])))

    @property
    def degree(self) -> int:
        return max(0, self.coef.size - 1)

    def _unit(self, x):
        a, b = self.domain
        return (np.asarray(x, dtype=np.float64) - a) / (b - a)

    def __call__(self, x):
        x = np.asarray(x, dtype=np.float64)
        if self.basis == "monomial":
            return P.polyval(x, self.coef)
        if self.basis == "chebyshev":
            return C.Chebyshev(self.coef, domain=list(self.domain))(x)
        return _bernstein_eval(self.coef, np.clip(self._unit(x), 0.0, 1.0))

    def monomial_coefficients(self) -> np.ndarray:
        """Coefficients in powers of ``x``; ill-conditioned beyond degree ~30."""
        if self.basis == "monomial":
            return self.coef.copy()
        if self.basis == "chebyshev":
            return C.Chebyshev(self.coef, domain=list(self.domain)).convert(kind=P.Polynomial).coef
        n = self.degree
        a, b = self.domain
        out = np.zeros(n + 1)
        # sum_k c_k C(n,k) s^k (1-s)^(n-k) expanded in s, then s = (x - a)/(b - a)
        for k, c in enumerate(self.coef):
            for i in range(n - k + 1):
                out[k + i] += c * math.comb(n, k) * math.comb(n - k, i) * (-1) ** i
        return P.Polynomial(out, domain=[a, b], window=[0, 1]).convert().coef


def _bernstein_eval(coef: np.ndarray, s: np.ndarray) -> np.ndarray:
    n = coef.size - 1
    flat = s.ravel()
    out = np.empty(flat.size)
    ks = np.arange(n + 1)
    chunk = max(1, 2_000_000 // (n + 1))
    for i in range(0, flat.size, chunk):
        ss = flat[i : i + chunk]
        out[i : i + chunk] = binom.pmf(ks[None, :], n, ss[:, None]) @ coef
    return out.reshape(s.shape)


# --------------------------------------------------------------------------
# Bernstein-operator approximant of f_p
# --------------------------------------------------------------------------


def f_p(t, p: float):
    """``(1 - t^p / 2)^{1/p}`` on [0, 1]."""
    t = np.asarray(t, dtype=np.float64)
    return (1.0 - 0.5 * t**p) ** (1.0 / p)


def bernstein_degree(eps: float) -> int:
    """``ceil(4 / eps^2)``, the order of the Bernstein operator."""
    return math.ceil(4.0 / eps**2 - 1e-9)


def _check_grid(p: float) -> np.ndarray:
    return np.unique(np.concatenate([np.linspace(0.0, 1.0, GRID_POINTS), np.geomspace(1e-12, 1e-2, 200), 1 - np.geomspace(1e-12, 1e-2, 200)]))


def bernstein_approx(p: float, eps: float, verify: bool = True) -> RealPoly:
    """``w = B_n f_p + 1/(2 sqrt n)`` with ``n = ceil(4 eps^-2)``.

    ``B_n f(t) = E f(S/n)`` for ``S ~ Binomial(n, t)``; in the Bernstein
    basis its coefficients are the samples ``f(k/n)``.  The sandwich
    ``f_p <= w <= (1 + eps) f_p`` is checked on a grid of [0, 1].

    Raises
    ------
    SandwichFailure
        If the grid check fails.
    """
    if p <= 1:
        raise ValueError("p must exceed 1")
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    n = bernstein_degree(eps)
    coef = f_p(np.arange(n + 1) / n, p) + 0.5 / math.sqrt(n)
    w = RealPoly(coef, "bernstein", (0.0, 1.0))
    if verify:
        t = _check_grid(p)
        wv, fv = w(t), f_p(t, p)
        lo = float(np.min(wv - fv))
        hi = float(np.max(wv - (1 + eps) * fv))
        if lo < -SLACK or hi > SLACK:
            raise SandwichFailure(f"p={p}, eps={eps}: lower margin {lo:.3g}, upper excess {hi:.3g}")
    return w


def sandwich_excess(w: RealPoly, p: float) -> float:
    """``max_t w(t) / f_p(t) - 1`` on the check grid."""
    t = _check_grid(p)
    return float(np.max(w(t) / f_p(t, p) - 1.0))


# --------------------------------------------------------------------------
# trigonometric majorant of a weight
# --------------------------------------------------------------------------


def _compose_phi(w: RealPoly, k: int) -> TrigPoly:
    """Fourier expansion of ``s -> w(phi_k(s))`` (degree ``deg(w) k``), via FFT samples."""
    deg = w.degree * k
    M = 1 << (2 * deg + 2).bit_length()
    s = 2 * np.pi * np.arange(M) / M
    vals = w(np.sin(0.5 * s) ** (2 * k))
    c = np.fft.rfft(vals) / M
    freqs = np.arange(deg + 1)
    pos = c[: deg + 1].real  # even function: real cosine coefficients
    coeffs = np.concatenate([pos[:0:-1], pos])
    f = np.concatenate([-freqs[:0:-1], freqs])
    return TrigPoly._make_float(f, coeffs.astype(np.complex128), real=True)


@dataclass(frozen=True)
class Majorant:
    """Result of :func:`weight_majorant`: ``h``, its degree and the checked margins."""

    h: TrigPoly
    degree: int
    degree_bound: float
    lower_margin: float
    upper_margin: float
    grid_points: int


def majorant_epsilons(l: int, p: float) -> Dict[int, float]:
    """``eps_j = (ln 2 / p) 2^{j-l-1}`` for ``j = 1..l``."""
    return {j: (LN2 / p) * 2.0 ** (j - l - 1) for j in range(1, l + 1)}


def weight_majorant(spec: WeightSpec, seq: LacunarySeq, verify: bool = True) -> Majorant:
    """Trigonometric ``h`` with ``g <= h^p <= 2g`` for the weight ``g`` of ``spec``.

    ``h = 2^{-|I1|/p} prod_{I1} phi_k(n_j t) prod_{I2} w_{eps_j,p}(phi_k(n_j t))``
    where ``I1`` collects ``HALF_PHI`` and ``I2`` collects
    ``ONE_MINUS_HALF_PHI`` indices.

    Raises
    ------
    RatioViolation
        If the sequence ratio is below 8 on the first ``l`` modes.
    SandwichFailure
        If the grid check fails.
    """
    l, p, k = spec.l, spec.p, spec.k
    if l > len(seq):
        raise ValueError("weight uses more modes than the sequence has")
    for lo, hi in zip(seq.modes[: l], seq.modes[1:l]):
        if not ratio_at_least(lo, hi, 8):
            raise RatioViolation(f"{hi}/{lo} < 8")
    eps = majorant_epsilons(l, p)
    h = TrigPoly.constant(1.0, exact=False)
    n_half = 0
    for j, (n, c) in enumerate(zip(seq.modes, spec.choices), start=1):
        if c is Choice.ONE:
            continue
        if c is Choice.HALF_PHI:
            factor = phi_k(k).to_float()
            n_half += 1
        else:
            factor = _compose_phi(bernstein_approx(p, eps[j], verify=False), k)
        h = h.multiply(factor.dilate(n))
    if n_half:
        h = h.scale(2.0 ** (-n_half / p))
    n_l = seq.modes[l - 1] if l else 1
    bound = (64 * p * p / LN2**2) * n_l * k
    lo_m = hi_m = 0.0
    M = 0
    if verify and not spec.trivial:
        M = 1 << max(14, (8 * h.degree).bit_length())
        hv = np.clip(h.sample(M), 0.0, None) ** p
        g = weight_samples(spec, seq, M)
        scale = max(1.0, float(np.max(g)))
        lo_m = float(np.min(hv - g)) / scale
        hi_m = float(np.min(2 * g - hv)) / scale
        if lo_m < -SLACK or hi_m < -SLACK:
            raise SandwichFailure(f"g <= h^p <= 2g violated: margins {lo_m:.3g}, {hi_m:.3g}")
    return Majorant(h, h.degree, bound, lo_m, hi_m, M)


# --------------------------------------------------------------------------
# w_p and lambda_1
# --------------------------------------------------------------------------


def _power_grid() -> np.ndarray:
    return np.unique(np.concatenate([np.linspace(0.0, 2.0, 20_001), np.geomspace(1e-16, 0.2, 4000)]))


@dataclass(frozen=True)
class WpResult:
    """``w_p`` with its measured sandwich width and the resulting ``lambda_1``."""

    w: RealPoly
    p: float
    eps: float
    width: float
    lambda1: float
    lambda1_error: float
    lower_envelope: float


def _wp_polynomial(p: float, eps: float, max_degree: int) -> Tuple[RealPoly, float]:
    a = (p - 1.0) / p
    x = _power_grid()
    target = x**a
    deg = 16
    while True:
        cheb = C.Chebyshev.interpolate(lambda s: np.clip(s, 0.0, None) ** a, deg, domain=[0.0, 2.0])
        vals = cheb(x)
        shift = max(0.0, float(np.max(target - vals))) + SLACK
        width = float(np.max(vals + shift - target))
        if width <= eps or deg >= max_degree:
            coef = cheb.coef.copy()
            coef[0] += shift
            return RealPoly(coef, "chebyshev", (0.0, 2.0)), width
        deg *= 2


def lambda1_of(w: RealPoly, p: float, tol: float = 1e-10) -> Tuple[float, float]:
    """``int w(X)^p dm / (int X^p dm)^{(p-1)/p}`` in pushforward form."""

    def sampler(M, idx):
        X = 2.0 * np.cos(np.pi * idx / M) ** 2
        return np.clip(w(X), 0.0, None) ** p

    rep = adaptive_trapezoid(sampler, tol, 256, 2**22)
    den = x_moment_closed_form(p) ** ((p - 1) / p)
    return rep.value / den, rep.error_estimate / den


def lambda1_envelope(p: float) -> float:
    """``int X^{p-1} / (int X^p)^{(p-1)/p}``, the infimum of ``lambda_1``."""
    return x_moment_closed_form(p - 1) / x_moment_closed_form(p) ** ((p - 1) / p)


def weierstrass_wp(p: float, eps: float = 0.25, min_eps: float = 1e-4, max_degree: int = 4096) -> WpResult:
    """Polynomial ``w_p >= x^{(p-1)/p}`` on [0, 2] with ``lambda_1(p) < 1``.

    ``w_p`` is a Chebyshev interpolant of ``x^{(p-1)/p}`` lifted by its
    measured deficit, with the degree doubled until the sandwich width
    ``max (w_p - x^{(p-1)/p})`` is at most ``eps``.  ``eps`` is halved until
    ``lambda_1 < 1``.

    Raises
    ------
    NoAdmissibleEps
        If ``lambda_1 >= 1`` at ``min_eps`` or at ``max_degree``.
    """
    if p <= 1:
        raise ValueError("p must exceed 1")
    env = lambda1_envelope(p)
    while True:
        w, width = _wp_polynomial(p, eps, max_degree)
        lam, err = lambda1_of(w, p)
        if lam < 1.0:
            return WpResult(w, p, eps, width, lam, err, env)
        if eps / 2 < min_eps or width > eps:
            raise NoAdmissibleEps(f"lambda_1({p}) = {lam:.6f} >= 1 at eps = {eps:.3g}")
        eps /= 2


# --------------------------------------------------------------------------
# constants
# --------------------------------------------------------------------------


def lambda2(lambda1: float, p: float, eps: float) -> float:
    """``(1 + eps) (1 - eps)^{(1-p)/p} lambda_1``."""
    return (1 + eps) * (1 - eps) ** ((1 - p) / p) * lambda1


class Tag(str, enum.Enum):
    PAPER_FORMULA = "PAPER_FORMULA"
    EMPIRICAL = "EMPIRICAL"
    UNSPECIFIED = "UNSPECIFIED"


@dataclass(frozen=True)
class ConstantRecord:
    """One constant with its provenance (formula text or search description)."""

    name: str
    value: Optional[float]
    tag: Tag
    source: str
    detail: Dict[str, object] = field(default_factory=dict)

    def __post_init__(self):
        if self.tag is not Tag.UNSPECIFIED and not self.source:
            raise ValueError("tagged constants need a provenance string")


UNSPECIFIED_NAMES = ("C3", "c3", "C5", "C6", "C7")


@dataclass
class ConstantLedger:
    """Constants keyed by ``p`` then by name."""

    entries: Dict[float, Dict[str, ConstantRecord]] = field(default_factory=dict)

    def put(self, p: float, record: ConstantRecord) -> None:
        self.entries.setdefault(float(p), {})[record.name] = record

    def get(self, p: float, name: str) -> Optional[ConstantRecord]:
        return self.entries.get(float(p), {}).get(name)

    def value(self, p: float, name: str) -> Optional[float]:
        rec = self.get(p, name)
        return None if rec is None else rec.value

    def formula(self, p: float, name: str, value: float, source: str, **detail) -> None:
        self.put(p, ConstantRecord(name, value, Tag.PAPER_FORMULA, source, detail))

    def empirical(self, p: float, name: str, value: float, source: str, **detail) -> None:
        self.put(p, ConstantRecord(name, value, Tag.EMPIRICAL, source, detail))

    def to_json(self) -> str:
        out = {}
        for p in sorted(self.entries):
            out[repr(p)] = {
                name: {"value": r.value, "tag": r.tag.value, "source": r.source, "detail": r.detail}
                for name, r in sorted(self.entries[p].items())
            }
        return json.dumps(out, indent=2, sort_keys=True, default=str)


def lambda_constants(p: float, eps: float = 0.5, lambda1: Optional[float] = None, ledger: Optional[ConstantLedger] = None, steps: int = 40) -> ConstantRecord:
    """``lambda_2(p)`` at the largest admissible ``eps`` of the grid ``eps 2^{-i}``.

    ``lambda_2`` is increasing in ``eps``, so scanning the grid downward
    returns the first (largest) ``eps`` with ``lambda_2 < 1``.

    Raises
    ------
    NoAdmissibleEps
        If ``lambda_1 >= 1`` or no grid point qualifies.
    """
    if lambda1 is None:
        res = weierstrass_wp(p)
        lambda1 = res.lambda1
        if ledger is not None:
            ledger.empirical(p, "lambda1", lambda1, "quadrature of w_p^p(X) / (int X^p)^{(p-1)/p}", eps=res.eps, degree=res.w.degree, width=res.width)
    if lambda1 >= 1:
        raise NoAdmissibleEps(f"lambda_1 = {lambda1} >= 1")
    e = eps
    for _ in range(steps):
        lam2 = lambda2(lambda1, p, e)
        if lam2 < 1:
            rec = ConstantRecord("lambda2", lam2, Tag.EMPIRICAL, "(1+eps)(1-eps)^{(1-p)/p} lambda_1 on the grid eps0 * 2^-i", {"eps": e, "lambda1": lambda1, "eps0": eps})
            if ledger is not None:
                ledger.put(p, rec)
            return rec
        e /= 2
    raise NoAdmissibleEps(f"lambda_2 >= 1 down to eps = {e}")


def upper_lambda(p: float) -> float:
    """``((int X^m)^{1/m} / (int X^p)^{1/p})^{p-1}`` with ``m = ceil(p) - 1``."""
    m = math.ceil(p) - 1
    return (x_moment_closed_form(m) ** (1 / m) / x_moment_closed_form(p) ** (1 / p)) ** (p - 1)


def phi_moment(k: int, p: float) -> float:
    """``int phi_k^p dm = Gamma(kp + 1/2) / (sqrt(pi) Gamma(kp + 1))``."""
    return x_moment_closed_form(k * p) / 2 ** (k * p)


def closed_form_constants(p: float, ledger: Optional[ConstantLedger] = None, d: Optional[float] = None, k: int = 1) -> ConstantLedger:
    """Fill the closed-form constants for ``p`` (and the given ``d``, ``k``).

    Constants that need unspecified inputs (``C3``..``C7``) are recorded as
    UNSPECIFIED unless already present.
    """
    ledger = ConstantLedger() if ledger is None else ledger
    if p > 1:
        ledger.formula(p, "C1", 64 * p * p / LN2**2, "64 p^2 / ln^2 2 (degree bound of the weight majorant)")
        lam = upper_lambda(p)
        ledger.formula(p, "lambda_p", lam, "((int X^m)^{1/m} / (int X^p)^{1/p})^{p-1}, m = ceil(p) - 1")
        if d is not None:
            ledger.formula(p, "eta_p", (1 + 2 * math.pi * p / (d - 1)) * lam, "(1 + 2 pi p/(d-1)) lambda_p", d=d)
        ledger.formula(p, "d_upper", 80 * p * p, "80 p^2")
        ledger.formula(p, "C_upper", (16 * p) ** (p + 1), "(16 p)^{p+1}")
        if p <= 2:
            ledger.formula(p, "d_lower", _safe_pow(1e12 / (p - 1), 3 / (p - 1)), "(10^12/(p-1))^{3/(p-1)}")
            ledger.formula(p, "c_lower", ((p - 1) / 1e13) ** (1 / (p - 1)), "((p-1)/10^13)^{1/(p-1)}")
        else:
            ledger.formula(p, "d_lower", _safe_pow(10.0, 10 * p * p), "10^{10 p^2}")
            ledger.formula(p, "c_lower", 10.0 ** (-8 * p), "10^{-8p}")
        alpha = phi_moment(k, p) / (16 * 3**p)
        ledger.formula(p, "alpha_p", alpha, "int phi_k^p dm / (16 3^p)", k=k)
        c3 = ledger.value(p, "c3")
        if c3 is not None:
            ledger.formula(p, "beta_p", c3 / 2 * alpha, "c3 alpha_p / 2", k=k)
        C7 = ledger.value(p, "C7")
        if C7 is not None:
            ledger.formula(p, "gamma_p", (16 * p * 3**p * C7) ** (p / (p - 1)) * alpha / k, "(16 p 3^p C7)^{p/(p-1)} alpha_p / k", k=k)
    else:
        ledger.formula(p, "c_lower", 2e-5, "lower floor for p = 1")
        ledger.formula(p, "C_upper", 1.0, "triangle inequality (p = 1)")
    for name in UNSPECIFIED_NAMES:
        if p > 1 and ledger.get(p, name) is None:
            ledger.put(p, ConstantRecord(name, None, Tag.UNSPECIFIED, ""))
    return ledger


def _safe_pow(base: float, e: float) -> float:
    try:
        return base**e
    except OverflowError:
        return math.inf


def c_pj(gamma: float, lam2: float, j: int) -> float:
    """``c_{p,j} = gamma_p sum_{i<j} lambda_2^i``."""
    return gamma * sum(lam2**i for i in range(j))
