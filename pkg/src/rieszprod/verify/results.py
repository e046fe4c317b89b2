"""Result records shared by all checks."""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Optional, Tuple

import numpy as np

# relations: lhs <= rhs, lhs >= rhs, lhs == rhs, lhs < rhs (strict),
# |lhs - 1| <= rhs ("within"), and "estimate" (lhs is a measured constant)
RELATIONS = ("<=", ">=", "==", "<", "within", "estimate")


def stream(seed: int, index: int = 0) -> np.random.Generator:
    """Counter-based generator keyed by ``(seed, index)``; streams never overlap."""
    return np.random.Generator(np.random.Philox(key=np.array([int(seed) % 2**64, int(index) % 2**64], dtype=np.uint64)))


def canonical(obj: Any) -> str:
    """Stable JSON text of an instance description."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), default=_default)


def _default(o):
    if isinstance(o, Fraction):
        return f"{o.numerator}/{o.denominator}"
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    if hasattr(o, "value"):
        return o.value
    raise TypeError(f"not serialisable: {type(o).__name__}")


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one checked inequality on one instance.

    ``margin`` is oriented so that nonnegative means the statement holds:
    ``rhs - lhs`` for ``<=``, ``lhs - rhs`` for ``>=``, ``-|lhs - rhs|`` for
    ``==`` and ``rhs - |lhs - 1|`` for ``within``.  For ``estimate`` results
    ``lhs`` is the smallest admissible constant on the instance.
    """

    statement_id: str
    instance: str
    lhs: float
    rhs: float
    margin: float
    passed: bool
    method: str
    relation: str = "<="
    seed: Optional[int] = None
    exact: Optional[Tuple[Fraction, Fraction]] = None
    note: str = ""

    @property
    def instance_hash(self) -> str:
        return hashlib.sha256(f"{self.statement_id}|{self.instance}".encode()).hexdigest()[:16]

    def to_dict(self) -> Dict[str, Any]:
        d = {
            "statement_id": self.statement_id,
            "instance_hash": self.instance_hash,
            "instance": json.loads(self.instance) if self.instance.startswith(("{", "[")) else self.instance,
            "relation": self.relation,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "pass": self.passed,
            "method": self.method,
            "seed": self.seed,
        }
        if self.exact is not None:
            d["lhs_exact"], d["rhs_exact"] = self.exact
        if self.note:
            d["note"] = self.note
        return d


def margin_of(lhs: float, rhs: float, relation: str) -> float:
    if relation == "<=" or relation == "<":
        return rhs - lhs
    if relation == ">=":
        return lhs - rhs
    if relation == "==":
        return -abs(lhs - rhs)
    if relation == "within":
        return rhs - abs(lhs - 1.0)
    if relation == "estimate":
        return 0.0 if math.isfinite(lhs) else -math.inf
    raise ValueError(f"unknown relation {relation!r}")


def compare(
    statement_id: str,
    instance: Any,
    lhs,
    rhs,
    relation: str,
    method: str,
    tol: float = 0.0,
    seed: Optional[int] = None,
    note: str = "",
) -> CheckResult:
    """Build a :class:`CheckResult`; exact Fractions are compared exactly."""
    exact = None
    if isinstance(lhs, Fraction) and isinstance(rhs, Fraction):
        exact = (lhs, rhs)
        if relation in ("<=", ">=", "==", "<"):
            m = margin_of(lhs, rhs, relation)
            passed = m > 0 if relation == "<" else m >= 0
            return CheckResult(statement_id, canonical(instance), float(lhs), float(rhs), float(m), bool(passed), method, relation, seed, exact, note)
    lhs_f, rhs_f = float(lhs), float(rhs)
    m = margin_of(lhs_f, rhs_f, relation)
    passed = m > tol if relation == "<" else m >= -tol
    return CheckResult(statement_id, canonical(instance), lhs_f, rhs_f, float(m), bool(passed), method, relation, seed, exact, note)


@dataclass(frozen=True)
class ConstantEstimate:
    """Best-effort extreme ratios of the two-sided moment bound."""

    p: float
    N: int
    seq: Tuple[int, ...]
    e_norm: str
    empirical_lower: float
    empirical_upper: float
    argmin: np.ndarray
    argmax: np.ndarray
    budget: int
    evaluations: int
    strategy: str = "all"
    seed: int = 0

    def __post_init__(self):
        if self.empirical_lower > self.empirical_upper:
            raise ValueError("lower estimate exceeds upper estimate")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "p": self.p,
            "N": self.N,
            "seq": list(self.seq),
            "e_norm": self.e_norm,
            "empirical_lower": self.empirical_lower,
            "empirical_upper": self.empirical_upper,
            "argmin": np.asarray(self.argmin).tolist(),
            "argmax": np.asarray(self.argmax).tolist(),
            "budget": self.budget,
            "evaluations": self.evaluations,
            "strategy": self.strategy,
            "seed": self.seed,
        }
