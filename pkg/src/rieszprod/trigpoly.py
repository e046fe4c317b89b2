"""Sparse trigonometric polynomials on the torus R / 2piZ.

A :class:`TrigPoly` maps signed integer frequencies to coefficients,
``f(t) = sum_n c_n exp(i n t)``.  Two coefficient modes exist:

* **exact** -- every coefficient is a complex dyadic rational.  Numerators
  are Python integers over one shared power-of-two denominator, so products
  and sums are bit-exact (Riesz products never leave this mode).
* **float** -- complex128 coefficients held in sorted numpy arrays.

Mixing the two promotes to float and sets ``promoted`` on the result.
Products cost one operation per term pair, independent of how large the
frequencies are.
"""

from __future__ import annotations

import json
import math
import numbers
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Iterator, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import BudgetExceeded, FrequencyOverflow
from .lacunary import FREQ_LIMIT

PAIR_BUDGET = 50_000_000

E_NORMS = ("l1", "l2", "linf")


# --------------------------------------------------------------------------
# exact coefficient value
# --------------------------------------------------------------------------


def _twos(x: int) -> int:
    """Number of trailing zero bits of a nonzero integer."""
    return (x & -x).bit_length() - 1


class Dyadic:
    """Exact complex dyadic rational ``(re + i*im) / 2**k``, kept reduced."""

    __slots__ = ("re", "im", "k")

    def __init__(self, re: int = 0, im: int = 0, k: int = 0):
        re, im, k = int(re), int(im), int(k)
        if k < 0:
            re, im, k = re << -k, im << -k, 0
        if re == 0 and im == 0:
            k = 0
        else:
            t = min(_twos(x) for x in (re, im) if x)
            t = min(t, k)
            re, im, k = re >> t, im >> t, k - t
        self.re, self.im, self.k = re, im, k

    @classmethod
    def coerce(cls, value) -> Optional["Dyadic"]:
        """Exact conversion, or ``None`` when ``value`` is not a dyadic rational."""
        if isinstance(value, Dyadic):
            return value
        if isinstance(value, (bool, np.bool_)):
            return cls(int(value))
        if isinstance(value, (numbers.Integral,)):
            return cls(int(value))
        if isinstance(value, (float, np.floating)):
            if not math.isfinite(value):
                return None
            return cls._from_fraction(Fraction(float(value)))
        if isinstance(value, numbers.Rational):
            return cls._from_fraction(Fraction(value))
        return None

    @classmethod
    def _from_fraction(cls, fr: Fraction) -> Optional["Dyadic"]:
        den = fr.denominator
        if den & (den - 1):
            return None
        return cls(fr.numerator, 0, den.bit_length() - 1)

    @property
    def real(self) -> Fraction:
        return Fraction(self.re, 1 << self.k)

    @property
    def imag(self) -> Fraction:
        return Fraction(self.im, 1 << self.k)

    def __complex__(self) -> complex:
        return complex(self.real, self.imag) if self.im else complex(float(self.real))

    def __float__(self) -> float:
        return float(self.real)

    def __abs__(self) -> float:
        return abs(complex(self))

    def __eq__(self, other) -> bool:
        if isinstance(other, Dyadic):
            return (self.re, self.im, self.k) == (other.re, other.im, other.k)
        if isinstance(other, numbers.Rational):
            return self.im == 0 and self.real == other
        if isinstance(other, numbers.Complex):
            return complex(self) == complex(other)
        return NotImplemented

    def __hash__(self) -> int:
        if self.im == 0:
            return hash(self.real)
        return hash((self.re, self.im, self.k))

    def __repr__(self) -> str:
        if self.im == 0:
            return f"Dyadic({self.re}/2^{self.k})"
        return f"Dyadic(({self.re}{self.im:+d}i)/2^{self.k})"


# --------------------------------------------------------------------------
# helpers for the exact representation: int dicts over a shared denominator
# --------------------------------------------------------------------------


def _conv(a: Dict[int, int], b: Dict[int, int]) -> Dict[int, int]:
    out: Dict[int, int] = {}
    get = out.get
    bi = list(b.items())
    for fa, ca in a.items():
        for fb, cb in bi:
            f = fa + fb
            out[f] = get(f, 0) + ca * cb
    return out


def _axpy(out: Dict[int, int], a: Dict[int, int], sign: int = 1) -> None:
    get = out.get
    for f, c in a.items():
        out[f] = get(f, 0) + sign * c


def _prune(d: Dict[int, int]) -> Dict[int, int]:
    return {f: c for f, c in d.items() if c}


def _check_pairs(na: int, nb: int, budget: Optional[int]) -> None:
    budget = PAIR_BUDGET if budget is None else budget
    if na * nb > budget:
        raise BudgetExceeded(f"{na} x {nb} term pairs exceed the budget of {budget}")


def _check_span(fa_max: int, fb_max: int) -> None:
    if fa_max + fb_max >= FREQ_LIMIT:
        raise FrequencyOverflow("frequency sum exceeds the 62-bit range")


def _fold_sorted(freqs: np.ndarray, coefs: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Merge equal frequencies (deterministic order), drop exact zeros."""
    if freqs.size == 0:
        return freqs.astype(np.int64), coefs.astype(np.complex128)
    uniq, inv = np.unique(freqs, return_inverse=True)
    re = np.bincount(inv, weights=coefs.real, minlength=uniq.size)
    im = np.bincount(inv, weights=coefs.imag, minlength=uniq.size)
    out = re + 1j * im
    keep = out != 0
    return uniq[keep].astype(np.int64), out[keep]


# --------------------------------------------------------------------------
# TrigPoly
# --------------------------------------------------------------------------

Scalar = Union[int, float, complex, Fraction, Dyadic]


class TrigPoly:
    """Sparse trigonometric polynomial; immutable after construction.

    Build instances with :meth:`from_coeffs`, :meth:`constant`, :meth:`cos`,
    :meth:`sin` or by arithmetic on existing polynomials.
    """

    __slots__ = ("_re", "_im", "_shift", "_freqs", "_coefs", "exact", "real", "promoted", "__weakref__")

    # -- construction --------------------------------------------------------

    @classmethod
    def _make_exact(cls, re: Dict[int, int], im: Dict[int, int], shift: int, real: Optional[bool] = None, promoted=False):
        self = object.__new__(cls)
        re, im = _prune(re), _prune(im)
        if shift > 0:
            nums = [c for c in re.values()] + [c for c in im.values()]
            if nums:
                t = min(min(_twos(c) for c in nums), shift)
                if t:
                    re = {f: c >> t for f, c in re.items()}
                    im = {f: c >> t for f, c in im.items()}
                    shift -= t
            else:
                shift = 0
        self._re, self._im, self._shift = re, im, shift
        self._freqs = self._coefs = None
        self.exact = True
        self.promoted = promoted
        self.real = self._exact_symmetric() if real is None else bool(real)
        return self

    @classmethod
    def _make_float(cls, freqs: np.ndarray, coefs: np.ndarray, real: Optional[bool] = None, promoted=False, folded=False):
        self = object.__new__(cls)
        freqs = np.asarray(freqs, dtype=np.int64)
        coefs = np.asarray(coefs, dtype=np.complex128)
        if not folded:
            freqs, coefs = _fold_sorted(freqs, coefs)
        self._re = self._im = None
        self._shift = 0
        self._freqs, self._coefs = freqs, coefs
        self.exact = False
        self.promoted = promoted
        self.real = self._float_symmetric() if real is None else bool(real)
        return self

    @classmethod
    def from_coeffs(cls, coeffs: Union[Mapping[int, Scalar], Iterable[Tuple[int, Scalar]]], exact: Optional[bool] = None, real: Optional[bool] = None) -> "TrigPoly":
        """Polynomial from ``{frequency: coefficient}``.

        With ``exact=None`` the mode is exact when every coefficient is a
        dyadic rational (ints, power-of-two Fractions, :class:`Dyadic`) and
        float otherwise.  Python floats are dyadic too, but are only taken
        exactly when ``exact=True`` is requested.
        """
        items = list(coeffs.items()) if isinstance(coeffs, Mapping) else list(coeffs)
        for f, _ in items:
            if abs(int(f)) >= FREQ_LIMIT:
                raise FrequencyOverflow(f"frequency {f} outside the 62-bit range")
        if exact is None:
            exact = all(
                not isinstance(c, (float, complex, np.floating, np.complexfloating))
                and Dyadic.coerce(c) is not None
                for _, c in items
            )
        if exact:
            vals = []
            for f, c in items:
                d = Dyadic.coerce(c)
                if d is None and isinstance(c, (complex, np.complexfloating)):
                    dr, di = Dyadic.coerce(c.real), Dyadic.coerce(c.imag)
                    if dr is not None and di is not None:
                        k = max(dr.k, di.k)
                        d = Dyadic(dr.re << (k - dr.k), di.re << (k - di.k), k)
                if d is None:
                    raise ValueError(f"coefficient {c!r} is not a dyadic rational")
                vals.append((int(f), d))
            shift = max((d.k for _, d in vals), default=0)
            re: Dict[int, int] = {}
            im: Dict[int, int] = {}
            for f, d in vals:
                s = shift - d.k
                re[f] = re.get(f, 0) + (d.re << s)
                im[f] = im.get(f, 0) + (d.im << s)
            return cls._make_exact(re, im, shift, real)
        freqs = np.array([int(f) for f, _ in items], dtype=np.int64)
        coefs = np.array([complex(c) for _, c in items], dtype=np.complex128)
        return cls._make_float(freqs, coefs, real)

    @classmethod
    def zero(cls, exact: bool = True) -> "TrigPoly":
        if exact:
            return cls._make_exact({}, {}, 0, True)
        return cls._make_float(np.zeros(0, np.int64), np.zeros(0, np.complex128), True)

    @classmethod
    def constant(cls, c: Scalar = 1, exact: Optional[bool] = None) -> "TrigPoly":
        return cls.from_coeffs({0: c}, exact=exact)

    @classmethod
    def cos(cls, n: int, amplitude: Scalar = 1) -> "TrigPoly":
        """``amplitude * cos(n t)``."""
        if n == 0:
            return cls.constant(amplitude)
        d = Dyadic.coerce(amplitude)
        if d is not None and not isinstance(amplitude, float):
            half = Dyadic(d.re, d.im, d.k + 1)
            return cls.from_coeffs({n: half, -n: half})
        a = complex(amplitude) / 2
        return cls.from_coeffs({n: a, -n: a})

    @classmethod
    def sin(cls, n: int) -> "TrigPoly":
        """``sin(n t)`` as an exact polynomial."""
        if n == 0:
            return cls.zero()
        return cls.from_coeffs({n: Dyadic(0, -1, 1), -n: Dyadic(0, 1, 1)}, real=True)

    # -- inspection ----------------------------------------------------------

    def _exact_symmetric(self) -> bool:
        for f, c in self._re.items():
            if self._re.get(-f, 0) != c:
                return False
        for f, c in self._im.items():
            if self._im.get(-f, 0) != -c:
                return False
        return True

    def _float_symmetric(self, rtol: float = 1e-12) -> bool:
        if self._freqs.size == 0:
            return True
        scale = float(np.max(np.abs(self._coefs)))
        neg = -self._freqs[::-1]
        if not np.array_equal(neg, self._freqs):
            return False
        return bool(np.max(np.abs(self._coefs - np.conj(self._coefs[::-1]))) <= rtol * scale)

    def is_conjugate_symmetric(self, rtol: float = 1e-12) -> bool:
        """``c_{-n} == conj(c_n)`` for all n (exactly in exact mode)."""
        return self._exact_symmetric() if self.exact else self._float_symmetric(rtol)

    @property
    def frequencies(self) -> np.ndarray:
        if self.exact:
            return np.array(sorted(set(self._re) | set(self._im)), dtype=np.int64)
        return self._freqs.copy()

    @property
    def nterms(self) -> int:
        if self.exact:
            return len(set(self._re) | set(self._im))
        return int(self._freqs.size)

    def __len__(self) -> int:
        return self.nterms

    @property
    def degree(self) -> int:
        if self.exact:
            keys = set(self._re) | set(self._im)
            return max((abs(f) for f in keys), default=0)
        return int(np.max(np.abs(self._freqs))) if self._freqs.size else 0

    @property
    def log2_denominator(self) -> int:
        """Shared power-of-two denominator exponent (exact mode)."""
        return self._shift

    def coeff(self, n: int):
        """Coefficient at frequency ``n``; :class:`Dyadic` in exact mode, complex otherwise."""
        n = int(n)
        if self.exact:
            return Dyadic(self._re.get(n, 0), self._im.get(n, 0), self._shift)
        i = np.searchsorted(self._freqs, n)
        if i < self._freqs.size and self._freqs[i] == n:
            return complex(self._coefs[i])
        return 0j

    def __getitem__(self, n: int):
        return self.coeff(n)

    def items(self) -> Iterator[Tuple[int, object]]:
        for f in self.frequencies.tolist():
            yield f, self.coeff(f)

    def mean(self):
        """Integral against the normalised Haar measure, i.e. ``coeff(0)``."""
        return self.coeff(0)

    def arrays(self) -> Tuple[np.ndarray, np.ndarray]:
        """Sorted frequencies and complex128 coefficients (a float view)."""
        if not self.exact:
            return self._freqs, self._coefs
        if self._freqs is None:
            freqs = self.frequencies
            den = float(2.0 ** self._shift)
            re = np.array([_int_over(self._re.get(f, 0), self._shift) for f in freqs.tolist()])
            im = np.array([_int_over(self._im.get(f, 0), self._shift) for f in freqs.tolist()])
            del den
            self._freqs = freqs
            self._coefs = (re + 1j * im) if freqs.size else np.zeros(0, np.complex128)
        return self._freqs, self._coefs

    def to_float(self) -> "TrigPoly":
        if not self.exact:
            return self
        f, c = self.arrays()
        return TrigPoly._make_float(f.copy(), c.copy(), real=self.real, promoted=self.promoted, folded=True)

    # -- arithmetic ----------------------------------------------------------

    def _aligned(self, other: "TrigPoly"):
        s = max(self._shift, other._shift)
        ka, kb = s - self._shift, s - other._shift
        are = {f: c << ka for f, c in self._re.items()} if ka else self._re
        aim = {f: c << ka for f, c in self._im.items()} if ka else self._im
        bre = {f: c << kb for f, c in other._re.items()} if kb else other._re
        bim = {f: c << kb for f, c in other._im.items()} if kb else other._im
        return are, aim, bre, bim, s

    def __add__(self, other) -> "TrigPoly":
        if not isinstance(other, TrigPoly):
            other = TrigPoly.constant(other, exact=None if self.exact else False)
        real = self.real and other.real
        if self.exact and other.exact:
            are, aim, bre, bim, s = self._aligned(other)
            re, im = dict(are), dict(aim)
            _axpy(re, bre)
            _axpy(im, bim)
            return TrigPoly._make_exact(re, im, s, real)
        fa, ca = self.arrays()
        fb, cb = other.arrays()
        promoted = self.exact != other.exact or self.promoted or other.promoted
        return TrigPoly._make_float(np.concatenate([fa, fb]), np.concatenate([ca, cb]), real, promoted)

    __radd__ = __add__

    def __neg__(self) -> "TrigPoly":
        return self.scale(-1)

    def __sub__(self, other) -> "TrigPoly":
        if not isinstance(other, TrigPoly):
            other = TrigPoly.constant(other, exact=None if self.exact else False)
        return self + (-other)

    def __rsub__(self, other) -> "TrigPoly":
        return (-self) + other

    def scale(self, c: Scalar) -> "TrigPoly":
        """Multiply every coefficient by the scalar ``c``."""
        d = None if isinstance(c, (float, complex)) else Dyadic.coerce(c)
        if self.exact and d is not None:
            real = self.real and d.im == 0
            re = {f: x * d.re for f, x in self._re.items()}
            im = {f: x * d.re for f, x in self._im.items()}
            if d.im:
                _axpy(re, {f: x * d.im for f, x in self._im.items()}, -1)
                _axpy(im, {f: x * d.im for f, x in self._re.items()})
            return TrigPoly._make_exact(re, im, self._shift + d.k, real)
        c = complex(c)
        f, cf = self.arrays()
        promoted = self.promoted or self.exact
        return TrigPoly._make_float(f.copy(), cf * c, self.real and c.imag == 0, promoted, folded=True)._drop_zeros()

    def _drop_zeros(self) -> "TrigPoly":
        keep = self._coefs != 0
        if keep.all():
            return self
        return TrigPoly._make_float(self._freqs[keep], self._coefs[keep], self.real, self.promoted, folded=True)

    def multiply(self, other: "TrigPoly", budget: Optional[int] = None) -> "TrigPoly":
        """Sparse product (convolution of the coefficient maps).

        Raises
        ------
        BudgetExceeded
            If ``nterms(self) * nterms(other)`` exceeds ``budget``.
        FrequencyOverflow
            If a frequency sum leaves the 62-bit range.
        """
        _check_pairs(self.nterms, other.nterms, budget)
        _check_span(self.degree, other.degree)
        real = self.real and other.real
        if self.exact and other.exact:
            s = self._shift + other._shift
            re = _conv(self._re, other._re)
            im: Dict[int, int] = {}
            if self._im and other._im:
                _axpy(re, _conv(self._im, other._im), -1)
            if other._im:
                _axpy(im, _conv(self._re, other._im))
            if self._im:
                _axpy(im, _conv(self._im, other._re))
            return TrigPoly._make_exact(re, im, s, real)
        fa, ca = self.arrays()
        fb, cb = other.arrays()
        freqs = (fa[:, None] + fb[None, :]).ravel()
        coefs = (ca[:, None] * cb[None, :]).ravel()
        promoted = self.exact != other.exact or self.promoted or other.promoted
        return TrigPoly._make_float(freqs, coefs, real, promoted)

    def __mul__(self, other) -> "TrigPoly":
        if isinstance(other, TrigPoly):
            return self.multiply(other)
        return self.scale(other)

    __rmul__ = __mul__

    def __pow__(self, m: int) -> "TrigPoly":
        if int(m) != m or m < 0:
            raise ValueError("only nonnegative integer powers are polynomials")
        result = TrigPoly.constant(1, exact=self.exact)
        base = self
        m = int(m)
        while m:
            if m & 1:
                result = result.multiply(base)
            m >>= 1
            if m:
                base = base.multiply(base)
        return result

    def dilate(self, n: int) -> "TrigPoly":
        """``t -> f(n t)`` (frequencies multiplied by ``n``)."""
        n = int(n)
        if n == 0:
            return TrigPoly.constant(self.mean(), exact=self.exact)
        _check_span(self.degree * abs(n) - 1, 1)
        if self.exact:
            return TrigPoly._make_exact({f * n: c for f, c in self._re.items()}, {f * n: c for f, c in self._im.items()}, self._shift, self.real)
        f, c = self.arrays()
        return TrigPoly._make_float(f * n, c, self.real, self.promoted)

    def modulate(self, n: int) -> "TrigPoly":
        """``exp(i n t) * f(t)`` (frequencies shifted by ``n``)."""
        n = int(n)
        _check_span(self.degree, abs(n))
        if self.exact:
            return TrigPoly._make_exact({f + n: c for f, c in self._re.items()}, {f + n: c for f, c in self._im.items()}, self._shift, None)
        f, c = self.arrays()
        return TrigPoly._make_float(f + n, c, None, self.promoted, folded=True)

    def conj(self) -> "TrigPoly":
        """The complex-conjugate function ``t -> conj(f(t))``."""
        if self.exact:
            return TrigPoly._make_exact({-f: c for f, c in self._re.items()}, {-f: -c for f, c in self._im.items()}, self._shift, self.real)
        f, c = self.arrays()
        return TrigPoly._make_float(-f[::-1], np.conj(c[::-1]), self.real, self.promoted, folded=True)

    def derivative(self) -> "TrigPoly":
        """``f'``: the coefficient at n becomes ``i n c_n``."""
        _check_span(self.degree, self.degree)
        if self.exact:
            re = {f: -f * c for f, c in self._im.items()}
            im = {f: f * c for f, c in self._re.items()}
            return TrigPoly._make_exact(re, im, self._shift, self.real)
        f, c = self.arrays()
        return TrigPoly._make_float(f, 1j * f * c, self.real, self.promoted, folded=True)._drop_zeros()

    def convolve_fourier(self, other: "TrigPoly") -> "TrigPoly":
        """Circular convolution on the torus: ``c_n(f*g) = c_n(f) c_n(g)``."""
        real = self.real and other.real
        if self.exact and other.exact:
            keys = (set(self._re) | set(self._im)) & (set(other._re) | set(other._im))
            re, im = {}, {}
            for f in keys:
                ar, ai = self._re.get(f, 0), self._im.get(f, 0)
                br, bi = other._re.get(f, 0), other._im.get(f, 0)
                re[f] = ar * br - ai * bi
                im[f] = ar * bi + ai * br
            return TrigPoly._make_exact(re, im, self._shift + other._shift, real)
        fa, ca = self.arrays()
        fb, cb = other.arrays()
        common, ia, ib = np.intersect1d(fa, fb, assume_unique=True, return_indices=True)
        promoted = self.exact != other.exact or self.promoted or other.promoted
        return TrigPoly._make_float(common, ca[ia] * cb[ib], real, promoted, folded=True)._drop_zeros()

    # -- integrals -----------------------------------------------------------

    def plancherel(self):
        """``sum_n |c_n|^2``, the integral of ``|f|^2``; a Fraction in exact mode."""
        if self.exact:
            num = sum(c * c for c in self._re.values()) + sum(c * c for c in self._im.values())
            return Fraction(num, 1 << (2 * self._shift))
        return float(np.sum(np.abs(self._coefs) ** 2))

    def inner(self, other: "TrigPoly"):
        """``sum_n c_n(f) conj(c_n(g))``, the integral of ``f * conj(g)``."""
        if self.exact and other.exact:
            keys = (set(self._re) | set(self._im)) & (set(other._re) | set(other._im))
            re = im = 0
            for f in keys:
                ar, ai = self._re.get(f, 0), self._im.get(f, 0)
                br, bi = other._re.get(f, 0), -other._im.get(f, 0)
                re += ar * br - ai * bi
                im += ar * bi + ai * br
            return Dyadic(re, im, self._shift + other._shift)
        fa, ca = self.arrays()
        fb, cb = other.arrays()
        common, ia, ib = np.intersect1d(fa, fb, assume_unique=True, return_indices=True)
        return complex(np.sum(ca[ia] * np.conj(cb[ib])))

    # -- evaluation ----------------------------------------------------------

    def __call__(self, t):
        return evaluate(self, t)

    def sample(self, M: int) -> np.ndarray:
        """Values at the equispaced grid ``t_k = 2 pi k / M``.

        Frequencies are reduced modulo ``M`` with integer arithmetic before
        an inverse FFT, so the result has no phase error however large the
        frequencies are.
        """
        M = int(M)
        freqs, coefs = self.arrays()
        if self.real and M > 2 * self.degree:
            pos = freqs >= 0
            bins = np.zeros(M // 2 + 1, dtype=np.complex128)
            bins[freqs[pos]] = coefs[pos]
            return np.fft.irfft(bins, n=M) * M
        bins = np.zeros(M, dtype=np.complex128)
        np.add.at(bins, np.mod(freqs, M), coefs)
        vals = np.fft.ifft(bins) * M
        return vals.real.copy() if self.real else vals

    # -- comparison / serialisation ---------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, TrigPoly):
            return NotImplemented
        if self.exact and other.exact:
            return self._shift == other._shift and self._re == other._re and self._im == other._im
        fa, ca = self.arrays()
        fb, cb = other.arrays()
        return np.array_equal(fa, fb) and np.array_equal(ca, cb)

    __hash__ = None

    def allclose(self, other: "TrigPoly", atol: float = 1e-14) -> bool:
        """Coefficient-wise comparison with absolute tolerance."""
        diff = (self.to_float() - other.to_float())
        _, c = diff.arrays()
        return c.size == 0 or float(np.max(np.abs(c))) <= atol

    def to_json(self) -> str:
        """JSON list of ``[freq, num_re, num_im, log2_den]`` (exact) or ``[freq, re, im]``."""
        rows = []
        if self.exact:
            for f, d in self.items():
                rows.append([f, d.re, d.im, d.k])
        else:
            for f, c in zip(self._freqs.tolist(), self._coefs.tolist()):
                rows.append([f, c.real, c.imag])
        return json.dumps({"mode": "exact" if self.exact else "float", "real": self.real, "terms": rows})

    @classmethod
    def from_json(cls, text: str) -> "TrigPoly":
        data = json.loads(text)
        if data["mode"] == "exact":
            return cls.from_coeffs({f: Dyadic(a, b, k) for f, a, b, k in data["terms"]}, exact=True, real=data.get("real"))
        return cls.from_coeffs({f: complex(a, b) for f, a, b in data["terms"]}, exact=False, real=data.get("real"))

    def __repr__(self) -> str:
        mode = "exact" if self.exact else "float"
        return f"TrigPoly({mode}, nterms={self.nterms}, degree={self.degree}, real={self.real})"


def _int_over(num: int, shift: int) -> float:
    return float(Fraction(num, 1 << shift)) if shift else float(num)


# --------------------------------------------------------------------------
# vector-valued polynomials
# --------------------------------------------------------------------------


def vector_norm(values: np.ndarray, e_norm: str = "l2") -> np.ndarray:
    """Norm along the last axis: one of ``l1``, ``l2``, ``linf``."""
    values = np.asarray(values)
    if values.ndim == 1:
        return np.abs(values)
    if e_norm == "l1":
        return np.sum(np.abs(values), axis=-1)
    if e_norm == "l2":
        return np.sqrt(np.sum(np.abs(values) ** 2, axis=-1))
    if e_norm == "linf":
        return np.max(np.abs(values), axis=-1)
    raise ValueError(f"unknown norm {e_norm!r}; expected one of {E_NORMS}")


@dataclass(frozen=True)
class VecTrigPoly:
    """An ``R^m``-valued trigonometric polynomial with a norm on ``R^m``."""

    coords: Tuple[TrigPoly, ...]
    e_norm: str = "l2"

    def __post_init__(self):
        coords = tuple(self.coords)
        object.__setattr__(self, "coords", coords)
        if not coords:
            raise ValueError("need at least one coordinate")
        if self.e_norm not in E_NORMS:
            raise ValueError(f"unknown norm {self.e_norm!r}")
        if not all(c.real for c in coords):
            raise ValueError("vector-valued polynomials must have real coordinates")
        if len({c.exact for c in coords}) > 1:
            coords = tuple(c.to_float() for c in coords)
            object.__setattr__(self, "coords", coords)

    @property
    def dim(self) -> int:
        return len(self.coords)

    @property
    def exact(self) -> bool:
        return self.coords[0].exact

    @property
    def degree(self) -> int:
        return max(c.degree for c in self.coords)

    def __call__(self, t):
        return evaluate(self, t)

    def sample(self, M: int) -> np.ndarray:
        """Grid values, shape ``(M, m)``."""
        return np.stack([c.sample(M) for c in self.coords], axis=-1)

    def norm_sample(self, M: int) -> np.ndarray:
        return vector_norm(self.sample(M), self.e_norm)

    def derivative(self) -> "VecTrigPoly":
        return VecTrigPoly(tuple(c.derivative() for c in self.coords), self.e_norm)

    def with_norm(self, e_norm: str) -> "VecTrigPoly":
        return VecTrigPoly(self.coords, e_norm)


# --------------------------------------------------------------------------
# module-level operations
# --------------------------------------------------------------------------


def multiply(f: TrigPoly, g: TrigPoly, budget: Optional[int] = None) -> TrigPoly:
    """Sparse product ``f * g``; exact when both factors are exact."""
    return f.multiply(g, budget)


def _eval_points(freqs: np.ndarray, coefs: np.ndarray, t: np.ndarray) -> np.ndarray:
    out = np.zeros(t.shape, dtype=np.complex128)
    if freqs.size == 0:
        return out
    fl = freqs.astype(np.float64)
    chunk = max(1, 4_000_000 // freqs.size)
    flat_t = t.ravel()
    flat = out.ravel()
    for s in range(0, flat_t.size, chunk):
        tt = flat_t[s : s + chunk]
        # reduce n*t modulo 2pi before the exponential
        phase = np.mod(np.outer(tt, fl), 2 * np.pi)
        flat[s : s + chunk] = np.exp(1j * phase) @ coefs
    return flat.reshape(t.shape)


def evaluate(f: Union[TrigPoly, VecTrigPoly], t):
    """Value of ``f`` at ``t`` (scalar or array of radians).

    Real-flagged polynomials return real values; a :class:`VecTrigPoly`
    returns the coordinate vector along a trailing axis.
    """
    if isinstance(f, VecTrigPoly):
        vals = np.stack([np.asarray(evaluate(c, t)) for c in f.coords], axis=-1)
        return vals
    scalar = np.ndim(t) == 0
    tt = np.atleast_1d(np.asarray(t, dtype=np.float64))
    freqs, coefs = f.arrays()
    vals = _eval_points(freqs, coefs, tt)
    if f.real:
        vals = vals.real
    return vals[0] if scalar else vals


def derivative(f: TrigPoly) -> TrigPoly:
    return f.derivative()


def convolve_fourier(f: TrigPoly, g: TrigPoly) -> TrigPoly:
    return f.convolve_fourier(g)


def vpoussin_kernel(d: int) -> TrigPoly:
    """De la Vallee Poussin kernel ``V_d``.

    Coefficients are 1 for ``|n| <= d``, ``(2d - |n|)/d`` for ``d < |n| < 2d``
    and 0 beyond, so ``V_d`` has degree ``2d - 1`` and ``V_d(0) = 3d``.
    Float mode unless ``d`` is a power of two.
    """
    if d < 1:
        raise ValueError("d must be positive")
    coeffs = {}
    for n in range(-(2 * d - 1), 2 * d):
        coeffs[n] = Fraction(1) if abs(n) <= d else Fraction(2 * d - abs(n), d)
    exact = d & (d - 1) == 0
    if exact:
        return TrigPoly.from_coeffs(coeffs, exact=True)
    return TrigPoly.from_coeffs({n: float(c) for n, c in coeffs.items()}, exact=False, real=True)


def random_trigpoly(rng: np.random.Generator, degree: int, exact: bool = False, scale_bits: int = 8, density: float = 1.0) -> TrigPoly:
    """Random real trigonometric polynomial of the given degree.

    Exact mode draws integer numerators over ``2**scale_bits``.  Used by the
    checks and tests as an instance generator.
    """
    coeffs = {}
    for n in range(0, degree + 1):
        if n and n != degree and rng.random() > density:
            continue
        if exact:
            a = int(rng.integers(-(1 << scale_bits), (1 << scale_bits) + 1))
            b = int(rng.integers(-(1 << scale_bits), (1 << scale_bits) + 1)) if n else 0
            if n == degree and a == 0 and b == 0:
                a = 1
            c = Dyadic(a, b, scale_bits + 1)
            coeffs[n] = c
            if n:
                coeffs[-n] = Dyadic(a, -b, scale_bits + 1)
        else:
            a, b = rng.standard_normal(2)
            c = complex(a, b if n else 0.0) / 2
            coeffs[n] = c
            if n:
                coeffs[-n] = c.conjugate()
    return TrigPoly.from_coeffs(coeffs, exact=exact, real=True)
