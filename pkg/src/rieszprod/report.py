"""CSV and JSON-lines writers for check results and other record types.

Floats are written with 17 significant digits and exact rationals as
``num/2^k`` (or ``num/den`` for non-dyadic denominators), so reruns with the
same inputs are byte-identical.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from dataclasses import asdict, is_dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping, Sequence, Union

import numpy as np

from .errors import IoFailure
from .verify.results import CheckResult

SUMMARY_COLUMNS = ("statement_id", "instance_hash", "lhs", "rhs", "margin", "pass", "method", "seed")


def format_float(x: float) -> str:
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def format_rational(q: Fraction) -> str:
    """``num/2^k`` for dyadic denominators, ``num/den`` otherwise."""
    q = Fraction(q)
    den = q.denominator
    if den == 1:
        return str(q.numerator)
    if den & (den - 1) == 0:
        return f"{q.numerator}/2^{den.bit_length() - 1}"
    return f"{q.numerator}/{den}"


def format_value(x: Any) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, Fraction):
        return format_rational(x)
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format_float(x)
    if x is None:
        return ""
    if isinstance(x, (list, tuple, dict, np.ndarray)):
        return json.dumps(_jsonable(x), sort_keys=True, separators=(",", ":"))
    return str(x)


def _jsonable(x: Any) -> Any:
    if isinstance(x, Fraction):
        return format_rational(x)
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else format_float(x)
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, Mapping):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if hasattr(x, "value") and not isinstance(x, (str, bytes)):
        return _jsonable(x.value)
    return x


def summary_row(r: CheckResult) -> Dict[str, str]:
    """CSV row; exact results print their rationals, others 17-digit floats."""
    if r.exact is not None:
        lhs, rhs = r.exact
        margin = {"<=": rhs - lhs, "<": rhs - lhs, ">=": lhs - rhs, "==": -abs(lhs - rhs)}.get(r.relation)
        values = (format_rational(lhs), format_rational(rhs), format_rational(margin) if margin is not None else format_float(r.margin))
    else:
        values = (format_float(r.lhs), format_float(r.rhs), format_float(r.margin))
    seed = "" if r.seed is None else str(r.seed)
    return dict(zip(SUMMARY_COLUMNS, (r.statement_id, r.instance_hash, *values, "true" if r.passed else "false", r.method, seed)))


def _as_mapping(rec: Any) -> Dict[str, Any]:
    if isinstance(rec, CheckResult):
        return rec.to_dict()
    if hasattr(rec, "to_dict"):
        return rec.to_dict()
    if is_dataclass(rec):
        return asdict(rec)
    if isinstance(rec, Mapping):
        return dict(rec)
    raise TypeError(f"cannot report {type(rec).__name__}")


def render(results: Sequence[Any], fmt: str) -> str:
    """Text of the report; raises ``ValueError`` on empty input."""
    results = list(results)
    if not results:
        raise ValueError("no results to report")
    if fmt == "jsonl":
        lines = [json.dumps(_jsonable(_as_mapping(r)), sort_keys=True, separators=(",", ":"), allow_nan=False) for r in results]
        return "\n".join(lines) + "\n"
    if fmt != "csv":
        raise ValueError(f"unknown format {fmt!r}")
    if all(isinstance(r, CheckResult) for r in results):
        rows: List[Dict[str, str]] = [summary_row(r) for r in results]
        columns: Sequence[str] = SUMMARY_COLUMNS
    else:
        maps = [_as_mapping(r) for r in results]
        columns = list(maps[0])
        rows = [{c: format_value(m.get(c)) for c in columns} for m in maps]
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n", extrasaction="ignore")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def emit_report(results: Iterable[Any], fmt: str, path: Union[str, Path]) -> Path:
    """Write ``results`` as ``fmt`` ("csv" or "jsonl") to ``path`` atomically.

    Raises
    ------
    ValueError
        Empty results or unknown format; no file is created.
    IoFailure
        The file could not be written.
    """
    text = render(list(results), fmt)
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc
    return path
