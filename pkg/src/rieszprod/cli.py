"""Command-line front end.

Usage::

    rieszprod [common flags] <suite> [suite arguments]

Suites: ``riesz``, ``norms``, ``verify <statement_id|all>``,
``estimate-constants``, ``counterexample``, ``montecarlo``, ``transfer``.
Common flags (accepted before or after the suite name): ``--config``,
``--seed``, ``--threads``, ``--tol``, ``--budget-ms``, ``--out``.

Every run writes ``results.jsonl`` and ``summary.csv`` to the output
directory, plus plot-ready CSVs where the suite produces them.  Exit status
is 0 when every check passes, 1 when one fails and 2 for usage or
configuration errors (in which case nothing is written).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .errors import ConfigInvalid, IoFailure
from .report import emit_report
from .verify.suites import SUITES, VERIFY_IDS, build_tasks, run_tasks

E_NORMS = ("l1", "l2", "linf")
COEFF_KINDS = ("sign-sweep", "random", "explicit")


def _default_coeffs() -> List[dict]:
    return [{"kind": "sign-sweep"}, {"kind": "random", "m": 3, "count": 8}]


@dataclass
class RunConfig:
    """Validated run description; every field but ``command`` has a default."""

    command: str
    target: str = "all"
    seq: Dict[str, Any] = field(default_factory=lambda: {"base": 1, "custom": None})
    d_list: Tuple[int, ...] = (3, 4, 5)
    p_list: Tuple[float, ...] = (1.0, 1.5, 2.0, 3.0, 4.0)
    N: int = 5
    coeffs: List[dict] = field(default_factory=_default_coeffs)
    e_norms: Tuple[str, ...] = ("l2",)
    tol: float = 1e-9
    search_budget: int = 16
    strategy: str = "all"
    m: int = 3
    implicit_constants: bool = False
    even_p: Tuple[int, ...] = (2, 4, 6)
    x_p: Tuple[float, ...] = (0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 5.0)
    p_even: int = 4
    k_max: int = 3
    q: int = 4
    p_grid: Tuple[float, ...] = (1.0, 1.5, 2.0, 3.0, 4.0, 5.0)
    samples: int = 100_000
    mc_sets: int = 3
    psi_samples: int = 10
    transfer_sets: int = 3
    seed: int = 0
    threads: int = 1
    budget_ms: Optional[int] = None
    out: str = "results"

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        def bad(msg):
            raise ConfigInvalid(msg)

        if self.command not in SUITES:
            bad(f"unknown command {self.command!r}; expected one of {', '.join(SUITES)}")
        if self.command == "verify" and self.target != "all" and self.target not in VERIFY_IDS:
            bad(f"unknown statement id {self.target!r}")
        if not isinstance(self.seq, dict) or set(self.seq) - {"base", "custom"}:
            bad("seq must be an object with keys base and custom")
        self.seq = {"base": self.seq.get("base", 1), "custom": self.seq.get("custom")}
        if not _is_int(self.seq["base"]) or self.seq["base"] < 1:
            bad("seq.base must be a positive integer")
        custom = self.seq["custom"]
        if custom is not None and (not isinstance(custom, list) or not custom or not all(_is_int(n) and n > 0 for n in custom)):
            bad("seq.custom must be a nonempty list of positive integers")
        self.d_list = _ints(self.d_list, "d_list", 2)
        self.p_list = _reals(self.p_list, "p_list", 1.0)
        self.even_p = _ints(self.even_p, "even_p", 2)
        if any(p % 2 for p in self.even_p):
            bad("even_p entries must be even")
        self.x_p = _reals(self.x_p, "x_p", 0.0)
        self.p_grid = _reals(self.p_grid, "p_grid", 0.0)
        for name in ("N", "search_budget", "m", "k_max", "samples", "mc_sets", "psi_samples", "transfer_sets", "threads"):
            v = getattr(self, name)
            if not _is_int(v) or v < 1:
                bad(f"{name} must be a positive integer")
        if not _is_int(self.seed) or not 0 <= self.seed < 2**64:
            bad("seed must be an integer in [0, 2^64)")
        if self.budget_ms is not None and (not _is_int(self.budget_ms) or self.budget_ms < 0):
            bad("budget_ms must be a nonnegative integer")
        for name in ("p_even", "q"):
            v = getattr(self, name)
            if not _is_int(v) or v < 4 or v % 2:
                bad(f"{name} must be an even integer >= 4")
        if not _is_real(self.tol) or not 0 < self.tol < 1:
            bad("tol must lie in (0, 1)")
        if self.strategy not in ("signs", "random", "descent", "all"):
            bad(f"unknown strategy {self.strategy!r}")
        if not isinstance(self.implicit_constants, bool):
            bad("implicit_constants must be a boolean")
        norms = [self.e_norms] if isinstance(self.e_norms, str) else self.e_norms
        if not isinstance(norms, (list, tuple)) or not norms or any(n not in E_NORMS for n in norms):
            bad(f"e_norms must be drawn from {', '.join(E_NORMS)}")
        self.e_norms = tuple(norms)
        specs = [self.coeffs] if isinstance(self.coeffs, dict) else self.coeffs
        if not isinstance(specs, list) or not specs:
            bad("coeffs must be a spec object or a nonempty list of them")
        self.coeffs = [_coeff_spec(s, self.N) for s in specs]
        if not isinstance(self.out, str) or not self.out:
            bad("out must be a directory path")

    @classmethod
    def from_mapping(cls, data: Dict[str, Any]) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigInvalid(f"unknown config keys: {', '.join(sorted(unknown))}")
        if "command" not in data:
            raise ConfigInvalid("no command given")
        return cls(**data)


def _is_int(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def _is_real(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def _ints(values, name: str, lo: int) -> Tuple[int, ...]:
    if not isinstance(values, (list, tuple)) or not values or not all(_is_int(v) and v >= lo for v in values):
        raise ConfigInvalid(f"{name} must be a nonempty list of integers >= {lo}")
    return tuple(values)


def _reals(values, name: str, lo: float) -> Tuple[float, ...]:
    if not isinstance(values, (list, tuple)) or not values or not all(_is_real(v) and v >= lo for v in values):
        raise ConfigInvalid(f"{name} must be a nonempty list of numbers >= {lo}")
    return tuple(float(v) for v in values)


def _coeff_spec(spec, N: int) -> dict:
    if not isinstance(spec, dict) or spec.get("kind") not in COEFF_KINDS:
        raise ConfigInvalid(f"coefficient spec needs kind in {', '.join(COEFF_KINDS)}")
    kind = spec["kind"]
    allowed = {"sign-sweep": {"kind", "limit"}, "random": {"kind", "m", "count"}, "explicit": {"kind", "values"}}[kind]
    if set(spec) - allowed:
        raise ConfigInvalid(f"unexpected keys for {kind}: {', '.join(sorted(set(spec) - allowed))}")
    for key in ("limit", "m", "count"):
        if key in spec and (not _is_int(spec[key]) or spec[key] < 1):
            raise ConfigInvalid(f"coeffs.{key} must be a positive integer")
    if kind == "explicit":
        vals = spec.get("values")
        rows = vals if isinstance(vals, list) else None
        ok = rows is not None and rows and all(_is_real(x) or (isinstance(x, list) and x and all(_is_real(y) for y in x)) for x in rows)
        if not ok:
            raise ConfigInvalid("coeffs.values must be a list of numbers or of number lists")
        if any(isinstance(x, list) for x in rows) and len({len(x) if isinstance(x, list) else -1 for x in rows}) != 1:
            raise ConfigInvalid("coeffs.values rows must share one dimension")
    return dict(spec)


# --------------------------------------------------------------------------
# running
# --------------------------------------------------------------------------


def run_config(config: RunConfig) -> int:
    """Execute the configured suite and write its reports; returns the exit status."""
    tasks = build_tasks(config)
    outputs = run_tasks(tasks, config.threads, config.budget_ms)
    records = [r for o in outputs for r in o.records]
    plots: Dict[str, List[dict]] = {}
    ledgers = [o.ledger for o in outputs if o.ledger]
    for o in outputs:
        for name, rows in o.plots.items():
            plots.setdefault(name, []).extend(rows)
    out = Path(config.out)
    if not records:
        print("no checks were produced", file=sys.stderr)
        return 2
    emit_report(records, "jsonl", out / "results.jsonl")
    emit_report(records, "csv", out / "summary.csv")
    for name in sorted(plots):
        if plots[name]:
            emit_report(plots[name], "csv", out / f"{name}.csv")
    if ledgers:
        merged: Dict[str, Any] = {}
        for text in ledgers:
            merged.update(json.loads(text))
        try:
            (out / "ledger.json").write_text(json.dumps(merged, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        except OSError as exc:
            raise IoFailure(f"cannot write ledger: {exc}") from exc
    failed = sum(not r.passed for r in records)
    print(f"{config.command}: {len(records)} checks, {failed} failed -> {out}")
    return 1 if failed else 0


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigInvalid(message)


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=str, default=argparse.SUPPRESS, help="JSON run configuration")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="unsigned 64-bit seed")
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS, help="worker threads")
    common.add_argument("--tol", type=float, default=argparse.SUPPRESS, help="quadrature tolerance")
    common.add_argument("--budget-ms", dest="budget_ms", type=int, default=argparse.SUPPRESS, help="wall-clock budget in milliseconds")
    common.add_argument("--out", type=str, default=argparse.SUPPRESS, help="output directory")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="rieszprod", description="Numerical checks for weighted sums of Riesz products.", parents=[common])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    for name in SUITES:
        sp = sub.add_parser(name, parents=[common])
        if name == "verify":
            sp.add_argument("target", nargs="?", default=argparse.SUPPRESS, help="statement id or 'all'")
    return parser


def load_config(argv: Optional[Sequence[str]] = None) -> RunConfig:
    """Merge defaults, the ``--config`` file and command-line flags."""
    args = vars(build_parser().parse_args(argv))
    data: Dict[str, Any] = {}
    path = args.pop("config", None)
    if path is not None:
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except OSError as exc:
            raise ConfigInvalid(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigInvalid(f"malformed config {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigInvalid("config must be a JSON object")
    if args.get("command") is None:
        args.pop("command", None)
    data.update(args)
    return RunConfig.from_mapping(data)


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        config = load_config(argv)
    except ConfigInvalid as exc:
        print(f"rieszprod: {exc}", file=sys.stderr)
        return 2
    try:
        return run_config(config)
    except IoFailure as exc:
        print(f"rieszprod: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
