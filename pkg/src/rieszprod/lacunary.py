"""Lacunary frequency sequences and the epsilon-lift of their signed sums.

A lacunary sequence is a strictly increasing list of positive integers
``n_1 < n_2 < ...`` whose consecutive ratios are bounded below by a rational
``d``.  Ratios are certified with integer arithmetic only.
"""

from __future__ import annotations

import functools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

import numpy as np

from .errors import FrequencyOverflow, NotDissociate, RatioViolation, TooLarge

# all frequencies reachable by the package stay strictly below this bound
FREQ_LIMIT = 2**62
# dissociation checks enumerate at most 2**ENUM_BITS sums
ENUM_BITS = 30

EpsVector = Tuple[int, ...]


def _as_fraction(value) -> Fraction:
    if isinstance(value, float):
        return Fraction(value).limit_denominator(10**9)
    return Fraction(value)


def ratio_at_least(lo: int, hi: int, ratio: Fraction) -> bool:
    """Exact test of ``hi / lo >= ratio`` without floating division."""
    return hi * ratio.denominator >= ratio.numerator * lo


@dataclass(frozen=True)
class LacunarySeq:
    """Validated increasing mode list with a certified ratio floor.

    Attributes
    ----------
    modes : tuple of int
        ``n_1, ..., n_L``.
    ratio_floor : Fraction
        The exact minimum of ``n_{j+1} / n_j`` (for ``L == 1`` the ratio the
        sequence was built with).
    """

    modes: Tuple[int, ...]
    ratio_floor: Fraction

    def __post_init__(self):
        modes = tuple(int(n) for n in self.modes)
        object.__setattr__(self, "modes", modes)
        object.__setattr__(self, "ratio_floor", _as_fraction(self.ratio_floor))
        if not modes:
            raise ValueError("a lacunary sequence needs at least one mode")
        if modes[0] < 1:
            raise ValueError("modes must be positive integers")
        for lo, hi in zip(modes, modes[1:]):
            if hi <= lo:
                raise ValueError(f"modes must be strictly increasing ({lo}, {hi})")
            if not ratio_at_least(lo, hi, self.ratio_floor):
                raise RatioViolation(
                    f"{hi}/{lo} < {self.ratio_floor} (claimed ratio floor)"
                )
        if sum(modes) >= FREQ_LIMIT:
            raise FrequencyOverflow("sum of modes exceeds the 62-bit frequency range")

    def __len__(self) -> int:
        return len(self.modes)

    def __getitem__(self, j):
        return self.modes[j]

    def prefix(self, N: int) -> "LacunarySeq":
        if not 1 <= N <= len(self):
            raise ValueError(f"prefix length {N} outside 1..{len(self)}")
        return LacunarySeq(self.modes[:N], self.ratio_floor)

    def degree(self, N: Optional[int] = None) -> int:
        """Degree of the Riesz product of the first ``N`` modes, i.e. their sum."""
        N = len(self) if N is None else N
        return sum(self.modes[:N])

    def to_json(self) -> str:
        num, den = self.ratio_floor.numerator, self.ratio_floor.denominator
        return json.dumps({"modes": list(self.modes), "ratio_floor": f"{num}/{den}"})

    @classmethod
    def from_json(cls, text: str) -> "LacunarySeq":
        data = json.loads(text)
        return cls(tuple(int(n) for n in data["modes"]), Fraction(data["ratio_floor"]))


def make_sequence(
    base: int = 1,
    ratio=3,
    length: int = 1,
    custom: Optional[Sequence[int]] = None,
) -> LacunarySeq:
    """Build a lacunary sequence.

    Without ``custom`` the modes are geometric, ``n_j = base * ceil(ratio)**(j-1)``.
    With ``custom`` the given list is validated against ``ratio``.  In both
    cases the returned ``ratio_floor`` is the exact minimum consecutive ratio.

    Raises
    ------
    RatioViolation
        If some ``n_{j+1}/n_j < ratio``.
    FrequencyOverflow
        If the sum of the modes leaves the 62-bit range.
    """
    ratio = _as_fraction(ratio)
    if ratio < 1:
        raise ValueError("ratio must be at least 1")
    if custom is not None:
        modes = tuple(int(n) for n in custom)
        length = len(modes)
    else:
        if length < 1 or base < 1:
            raise ValueError("base and length must be positive")
        step = math.ceil(ratio)
        modes = []
        n = base
        for _ in range(length):
            if n >= FREQ_LIMIT:
                raise FrequencyOverflow("geometric mode exceeds the 62-bit range")
            modes.append(n)
            n *= step
        modes = tuple(modes)
    if len(modes) >= 2:
        for lo, hi in zip(modes, modes[1:]):
            if not ratio_at_least(lo, hi, ratio):
                raise RatioViolation(f"{hi}/{lo} < {ratio}")
        floor = min(Fraction(hi, lo) for lo, hi in zip(modes, modes[1:]))
    else:
        floor = ratio
    return LacunarySeq(modes, floor)


def _check_budget(N: int, q: int) -> None:
    if N * math.log2(2 * q + 1) > ENUM_BITS:
        raise TooLarge(f"(2*{q}+1)^{N} sums exceed the 2^{ENUM_BITS} enumeration budget")


def _all_sums(modes: Tuple[int, ...], q: int) -> np.ndarray:
    # index of an entry encodes eps in base (2q+1), most significant digit = first mode
    digits = np.arange(-q, q + 1, dtype=np.int64)
    sums = np.zeros(1, dtype=np.int64)
    for n in modes:
        sums = (sums[:, None] + n * digits[None, :]).ravel()
    return sums


@functools.lru_cache(maxsize=256)
def _dissociate(modes: Tuple[int, ...], q: int) -> bool:
    sums = _all_sums(modes, q)
    return np.unique(sums).size == sums.size


def dissociation_check(seq: LacunarySeq, q: int = 1, prefix: Optional[int] = None) -> bool:
    """True iff ``eps -> sum_j eps_j n_j`` is injective on ``{-q..q}^N``.

    Decided by exhaustive enumeration with collision detection, so it also
    covers ``q >= 2`` where the classical ``sum_{k<=l} n_k < n_{l+1}``
    criterion is not the right one.
    """
    N = len(seq) if prefix is None else prefix
    if not 0 <= N <= len(seq):
        raise ValueError(f"prefix {N} outside 0..{len(seq)}")
    if q < 1:
        raise ValueError("q must be positive")
    _check_budget(N, q)
    if q * sum(seq.modes[:N]) >= FREQ_LIMIT:
        raise FrequencyOverflow("q * sum of modes exceeds the 62-bit range")
    return _dissociate(seq.modes[:N], q)


def find_collision(seq: LacunarySeq, q: int = 1, prefix: Optional[int] = None):
    """Return two distinct eps-vectors with equal sums, or ``None``."""
    N = len(seq) if prefix is None else prefix
    _check_budget(N, q)
    sums = _all_sums(seq.modes[:N], q)
    order = np.argsort(sums, kind="stable")
    hit = np.nonzero(np.diff(sums[order]) == 0)[0]
    if hit.size == 0:
        return None
    i, j = int(order[hit[0]]), int(order[hit[0] + 1])
    return _decode(i, N, q), _decode(j, N, q)


def _decode(index: int, N: int, q: int) -> EpsVector:
    base = 2 * q + 1
    eps = []
    for _ in range(N):
        index, r = divmod(index, base)
        eps.append(r - q)
    return tuple(reversed(eps))


@functools.lru_cache(maxsize=64)
def _lift_table(modes: Tuple[int, ...], q: int) -> dict:
    sums = _all_sums(modes, q)
    return {int(s): i for i, s in enumerate(sums)}


def lift_frequency(seq: LacunarySeq, n: int, q: int = 1, prefix: Optional[int] = None) -> Optional[EpsVector]:
    """The T-map: the unique eps in ``{-q..q}^N`` with ``sum eps_j n_j == n``.

    Digits are extracted greedily from the largest mode and the result is
    verified by reconstruction.  Greedy rounding is exact once the ratio
    floor reaches ``2q + 1``; below that a failed reconstruction is settled
    by the enumeration table.  Returns ``None`` when ``n`` has no
    representation.

    Raises
    ------
    NotDissociate
        If two eps-vectors share a sum, so the lift is ill-defined.
    """
    N = len(seq) if prefix is None else prefix
    if not dissociation_check(seq, q, N):
        a, b = find_collision(seq, q, N)
        raise NotDissociate(f"{a} and {b} have the same sum")
    modes = seq.modes[:N]
    eps = [0] * N
    rest = int(n)
    for j in range(N - 1, -1, -1):
        e = (2 * rest + modes[j]) // (2 * modes[j])
        e = max(-q, min(q, e))
        eps[j] = e
        rest -= e * modes[j]
    if rest == 0:
        return tuple(eps)
    if seq.ratio_floor >= 2 * q + 1:
        # rounding is exact here: q * (n_1 + ... + n_{j-1}) < n_j / 2
        return None
    idx = _lift_table(modes, q).get(int(n))
    if idx is None:
        return None
    eps = _decode(idx, N, q)
    assert sum(e * m for e, m in zip(eps, modes)) == n
    return eps


def eps_sum(seq: LacunarySeq, eps: Sequence[int]) -> int:
    """``sum_j eps_j n_j`` over the first ``len(eps)`` modes."""
    return sum(int(e) * m for e, m in zip(eps, seq.modes))
