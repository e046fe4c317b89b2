"""Empirical values for the constants the induction leaves implicit.

``C3`` and ``C5`` are ratio multipliers (the sequence ratio must be at least
``C k``), ``c3`` is the single-term lower constant, ``C6`` and ``C7`` are the
upper constants of the two cross-term estimates.  Each is measured on a
small instance grid: multipliers are the smallest grid value at which every
instance passes, ``c3`` the smallest observed ratio, ``C6``/``C7`` the
largest admissible constant.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from ..approx import ConstantLedger
from .lemmas import c3_floor, check_lemma

MULTIPLIERS = (2, 3, 4, 6, 8, 12, 16, 24, 32)


@dataclass(frozen=True)
class EmpiricalConstants:
    p: float
    C3: float
    c3: float
    C5: float
    C6: float
    C7: float
    instances: int = 0
    detail: Dict[str, object] = field(default_factory=dict)

    def as_dict(self) -> Dict[str, float]:
        return {"C3": self.C3, "c3": self.c3, "C5": self.C5, "C6": self.C6, "C7": self.C7}


def _geometric(ratio: int, length: int) -> List[int]:
    return [ratio**j for j in range(length)]


def _grid(p: float, mult: float, ks: Sequence[int], seeds: Sequence[int], extra: int = 0) -> List[dict]:
    """Weighted instances with sequence ratio ``ceil(mult * k)``."""
    out = []
    for k in ks:
        d = max(2, math.ceil(mult * k))
        for l, choices in ((0, []), (1, ["HALF_PHI"]), (1, ["ONE_MINUS_HALF_PHI"]), (2, ["HALF_PHI", "ONE_MINUS_HALF_PHI"])):
            for seed in seeds:
                out.append({"seq": _geometric(d, l + 1 + extra), "p": p, "k": k, "l": l, "choices": choices, "dim": 2, "seed": seed})
    return out


def _smallest_multiplier(statement_id: str, p: float, ks, seeds, tol: float) -> Optional[float]:
    for mult in MULTIPLIERS:
        if all(check_lemma(statement_id, inst, tol).passed for inst in _grid(p, mult, ks, seeds)):
            return float(mult)
    return None


@functools.lru_cache(maxsize=16)
def empirical_constants(p: float, ks: tuple = (1, 2), seeds: tuple = (1, 2, 3), tol: float = 1e-6) -> EmpiricalConstants:
    """Measure ``C3, c3, C5, C6, C7`` for one ``p > 1``.

    Not certified bounds: the values describe the instance grid only.
    """
    if p <= 1:
        raise ValueError("the implicit constants concern p > 1")
    C3 = _smallest_multiplier("L5.3", p, ks, seeds, tol)
    C5 = _smallest_multiplier("T5.5-1", p, ks, seeds, tol)
    C3 = float(MULTIPLIERS[-1]) if C3 is None else C3
    C5 = float(MULTIPLIERS[-1]) if C5 is None else C5
    mult = max(C3, C5, 8.0)
    c3 = min(check_lemma("L5.3", inst, tol).lhs for inst in _grid(p, mult, ks, seeds))
    C6 = C7 = 0.0
    count = 0
    for inst in _grid(p, mult, ks, seeds, extra=2):
        for N in range(inst["l"] + 1, len(inst["seq"]) + 1):
            case = dict(inst, N=N)
            C6 = max(C6, check_lemma("T5.5-2", case, tol).lhs)
            C7 = max(C7, check_lemma("T5.5-3", case, tol).lhs)
            count += 1
    detail = {"multipliers": list(MULTIPLIERS), "ks": list(ks), "seeds": list(seeds), "c3_floor": c3_floor(p)}
    return EmpiricalConstants(p, C3, c3, C5, C6, C7, count, detail)


def fill_ledger(p: float, ledger: Optional[ConstantLedger] = None, est: Optional[EmpiricalConstants] = None) -> ConstantLedger:
    """Record the empirical constants for ``p`` as EMPIRICAL ledger entries."""
    ledger = ConstantLedger() if ledger is None else ledger
    est = empirical_constants(p) if est is None else est
    src = "instance grid, k in {ks}, seeds {seeds}".format(**est.detail)
    ledger.empirical(p, "C3", est.C3, "smallest multiplier with single-term ratios >= 1/(2 6^p); " + src)
    ledger.empirical(p, "c3", est.c3, "smallest single-term ratio at ratio max(C3, C5, 8) k; " + src)
    ledger.empirical(p, "C5", est.C5, "smallest multiplier with the 1/4 factorisation bound; " + src)
    ledger.empirical(p, "C6", est.C6, "largest admissible constant over " + src)
    ledger.empirical(p, "C7", est.C7, "largest admissible constant over " + src)
    return ledger
