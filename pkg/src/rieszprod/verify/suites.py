"""Check suites behind the command line: task lists plus an ordered runner.

A suite is a list of :class:`Task` objects.  Each task evaluates one
instance (or one batch sharing a quadrature) and returns check records and
optional plot rows.  :func:`run_tasks` executes them on a thread pool but
collects results strictly in task order, so outputs do not depend on the
number of workers.
"""

from __future__ import annotations

import itertools
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..lacunary import LacunarySeq, make_sequence
from ..moments import lp_even_exact, lp_quadrature, x_moment, x_moment_closed_form
from ..riesz import riesz_factor, riesz_product
from .constants import empirical_constants, fill_ledger
from .lemmas import STATEMENT_IDS, check_lemma, default_instances
from .results import CheckResult, canonical, compare, stream
from .schneider import check_larger_inequality, check_p_discrepancy, check_schneider_counterexample
from .theorem import candidate_constants, check_theorem_batch, estimate_lower_constant, random_coefficients, sign_patterns
from .transfer import check_l1_transfer, iid_second_moment, montecarlo_iid

SUITES = ("riesz", "norms", "verify", "estimate-constants", "counterexample", "montecarlo", "transfer")
THEOREM_IDS = ("THM", "THM-upper")
VERIFY_IDS = THEOREM_IDS + STATEMENT_IDS


@dataclass
class Output:
    """Records of one task plus plot rows keyed by file stem."""

    records: List[CheckResult] = field(default_factory=list)
    plots: Dict[str, List[dict]] = field(default_factory=dict)
    ledger: Optional[str] = None


@dataclass(frozen=True)
class Task:
    statement_id: str
    instance: Dict[str, Any]
    fn: Callable[[], Output]


def failure(statement_id: str, instance: Any, method: str, note: str, seed: Optional[int] = None) -> CheckResult:
    """A failed record for an instance that could not be evaluated."""
    return CheckResult(statement_id, canonical(instance), math.nan, math.nan, -math.inf, False, method, "<=", seed, None, note)


def _guarded(task: Task, deadline: Optional[float]) -> Output:
    if deadline is not None and time.monotonic() > deadline:
        return Output([failure(task.statement_id, task.instance, "BUDGET", "wall-clock budget exhausted before this instance")])
    try:
        return task.fn()
    except Exception as exc:  # recorded per instance, the suite continues
        return Output([failure(task.statement_id, task.instance, "ERROR", f"{type(exc).__name__}: {exc}")])


def run_tasks(tasks: Sequence[Task], threads: int = 1, budget_ms: Optional[int] = None) -> List[Output]:
    """Run ``tasks`` with ``threads`` workers; results come back in task order.

    The wall-clock budget is checked before each task starts; tasks past it
    yield a failed ``BUDGET`` record instead of running.
    """
    deadline = None if budget_ms is None else time.monotonic() + budget_ms / 1000.0
    if threads <= 1:
        return [_guarded(t, deadline) for t in tasks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda t: _guarded(t, deadline), tasks))


# --------------------------------------------------------------------------
# shared pieces
# --------------------------------------------------------------------------


def sequences(cfg) -> List[Tuple[Optional[int], LacunarySeq]]:
    """``(d, seq)`` pairs: one geometric sequence per ratio, or the custom one."""
    if cfg.seq.get("custom"):
        return [(None, make_sequence(ratio=1, custom=cfg.seq["custom"]))]
    base = int(cfg.seq.get("base", 1))
    return [(d, make_sequence(base=base, ratio=d, length=max(cfg.N, 1))) for d in cfg.d_list]


def coefficient_sets(spec: dict, N: int, seed: int) -> List[Tuple[str, np.ndarray]]:
    """Coefficient batches ``(label, (B, N+1, m))`` described by one spec."""
    kind = spec["kind"]
    if kind == "sign-sweep":
        return [("signs", sign_patterns(N, 1, spec.get("limit")))]
    if kind == "random":
        m, count = int(spec.get("m", 3)), int(spec.get("count", 8))
        return [(f"random{m}", np.stack([random_coefficients(seed, i, N, m) for i in range(count)]))]
    V = np.asarray(spec["values"], dtype=np.float64)
    V = V[:, None] if V.ndim == 1 else V
    if V.shape[0] != N + 1:
        return []
    return [("explicit", V[None])]


def _n_values(cfg, seq: LacunarySeq, cap: Optional[int] = None) -> List[int]:
    top = min(cfg.N, len(seq)) if cap is None else min(cfg.N, len(seq), cap)
    return list(range(1, top + 1))


# --------------------------------------------------------------------------
# riesz: coefficient structure
# --------------------------------------------------------------------------


def check_structure(seq: LacunarySeq, N: int) -> List[CheckResult]:
    """Term count ``3^N`` and coefficients ``2^{-|supp eps|}`` of ``R_N``, exactly.

    Two records: ``RIESZ-terms`` (number of terms) and ``RIESZ-coeffs``
    (how many of the ``3^N`` sign vectors carry the expected coefficient,
    the constant term included).
    """
    R = riesz_product(seq, N)
    inst = {"seq": list(seq.modes[:N]), "N": N}
    total = 3**N
    good = 0
    for eps in itertools.product((-1, 0, 1), repeat=N):
        n = sum(e * m for e, m in zip(eps, seq.modes))
        c = R.coeff(n)
        support = sum(1 for e in eps if e)
        if c.im == 0 and Fraction(c.re, 2**c.k) == Fraction(1, 2**support):
            good += 1
    return [
        compare("RIESZ-terms", inst, Fraction(R.nterms), Fraction(total), "==", "DYADIC_EXACT"),
        compare("RIESZ-coeffs", inst, Fraction(good), Fraction(total), "==", "DYADIC_EXACT"),
    ]


def riesz_suite(cfg) -> List[Task]:
    tasks = []
    for d, seq in sequences(cfg):
        for N in _n_values(cfg, seq):
            tasks.append(Task("RIESZ-coeffs", {"seq": list(seq.modes[:N]), "N": N}, lambda seq=seq, N=N: Output(check_structure(seq, N))))
    return tasks


# --------------------------------------------------------------------------
# norms: exact against quadrature, closed form against quadrature
# --------------------------------------------------------------------------


def check_norm_oracle(seq: LacunarySeq, N: int, p: int, rel_tol: float = 1e-8) -> CheckResult:
    """Relative gap between the Plancherel and trapezoid values of ``int R_N^p``."""
    R = riesz_product(seq, N)
    exact = lp_even_exact(R, p // 2)
    quad = lp_quadrature(R.to_float(), float(p), tol=1e-12)
    gap = abs(quad.value - exact.value) / exact.value
    inst = {"seq": list(seq.modes[:N]), "N": N, "p": p}
    return compare("NORMS-oracle", inst, gap, rel_tol, "<=", "PLANCHEREL_VS_QUADRATURE", note=f"exact {exact.value:.17g}")


def check_x_moment_oracle(p: float, rel_tol: float = 1e-10) -> CheckResult:
    """Relative gap between quadrature and the Gamma closed form of ``int (1 + cos)^p``."""
    quad = x_moment(p, tol=1e-13)
    ref = x_moment_closed_form(p)
    gap = abs(quad.value - ref) / ref
    return compare("XMOM-oracle", {"p": p}, gap, rel_tol, "<=", "QUADRATURE_VS_GAMMA", note=f"closed form {ref:.17g}")


def norms_suite(cfg) -> List[Task]:
    tasks = []
    for d, seq in sequences(cfg):
        for N in _n_values(cfg, seq, 5):
            for p in cfg.even_p:
                tasks.append(Task("NORMS-oracle", {"seq": list(seq.modes[:N]), "p": p}, lambda seq=seq, N=N, p=p: Output([check_norm_oracle(seq, N, p)])))
    for p in cfg.x_p:
        tasks.append(Task("XMOM-oracle", {"p": p}, lambda p=p: Output([check_x_moment_oracle(p)])))
    return tasks


# --------------------------------------------------------------------------
# verify
# --------------------------------------------------------------------------


def _theorem_task(seq: LacunarySeq, d, p: float, N: int, label: str, V: np.ndarray, e_norm: str, tol: float, seed: int) -> Task:
    def run():
        recs = check_theorem_batch(seq, p, V, e_norm, tol, seed=seed)
        ratios = [r.lhs for r in recs[::2]]
        row = {"d": d, "p": p, "N": N, "coeffs": label, "e_norm": e_norm, "min_ratio": min(ratios), "max_ratio": max(ratios)}
        return Output(recs, {"ratios": [row]})

    return Task("THM", {"seq": list(seq.modes[:N]), "p": p, "N": N, "coeffs": label, "e_norm": e_norm}, run)


def theorem_suite(cfg) -> List[Task]:
    tasks = []
    for d, seq in sequences(cfg):
        for p in cfg.p_list:
            for N in _n_values(cfg, seq):
                for spec in cfg.coeffs:
                    for label, V in coefficient_sets(spec, N, cfg.seed):
                        for e_norm in cfg.e_norms if V.shape[2] > 1 else ("l2",):
                            tasks.append(_theorem_task(seq, d, p, N, label, V, e_norm, cfg.tol, cfg.seed))
    return tasks


def upper_suite(cfg) -> List[Task]:
    """Upper ratios at ratio ``ceil(80 p^2)`` for ``p > 1``, ``N <= 3``, base 1."""
    tasks = []
    for p in cfg.p_list:
        if p <= 1:
            continue
        d = math.ceil(80 * p * p)
        seq = make_sequence(base=1, ratio=d, length=3)
        for N in range(1, min(cfg.N, 3) + 1):
            for spec in cfg.coeffs:
                for label, V in coefficient_sets(spec, N, cfg.seed):
                    for e_norm in cfg.e_norms if V.shape[2] > 1 else ("l2",):
                        t = _theorem_task(seq, d, p, N, label, V, e_norm, cfg.tol, cfg.seed)
                        tasks.append(Task("THM-upper", t.instance, t.fn))
    return tasks


def lemma_tasks(statement_id: str, tol: float) -> List[Task]:
    return [Task(statement_id, inst, lambda inst=inst: Output([check_lemma(statement_id, inst, tol)])) for inst in default_instances(statement_id)]


def verify_suite(cfg) -> List[Task]:
    target = cfg.target
    ids = VERIFY_IDS if target == "all" else (target,)
    tasks: List[Task] = []
    for sid in ids:
        if sid == "THM":
            tasks += theorem_suite(cfg)
        elif sid == "THM-upper":
            tasks += upper_suite(cfg)
        else:
            tasks += lemma_tasks(sid, max(cfg.tol, 1e-10))
    return tasks


# --------------------------------------------------------------------------
# estimate-constants
# --------------------------------------------------------------------------


def _estimate_task(seq: LacunarySeq, d, p: float, N: int, e_norm: str, cfg) -> Task:
    def run():
        est = estimate_lower_constant(seq, p, N, e_norm, cfg.strategy, cfg.search_budget, cfg.seed, cfg.m, cfg.tol)
        c_lo, c_up, _ = candidate_constants(p)
        inst = {"seq": list(seq.modes[:N]), "p": p, "N": N, "e_norm": e_norm, "strategy": cfg.strategy, "budget": cfg.search_budget}
        recs = [
            compare("EST-lower", inst, est.empirical_lower, c_lo, ">=", "SEARCH", seed=cfg.seed),
            compare("EST-upper", inst, est.empirical_upper, c_up, "<=", "SEARCH", seed=cfg.seed),
        ]
        row = {"d": d, "p": p, "N": N, "e_norm": e_norm, "empirical_lower": est.empirical_lower, "empirical_upper": est.empirical_upper, "evaluations": est.evaluations}
        return Output(recs, {"estimates": [row]})

    return Task("EST-lower", {"seq": list(seq.modes[:N]), "p": p, "N": N, "e_norm": e_norm}, run)


def _implicit_task(p: float) -> Task:
    def run():
        est = empirical_constants(p)
        inst = {"p": p, "ks": est.detail["ks"], "seeds": est.detail["seeds"]}
        recs = [compare(f"EST-{name}", inst, value, value, "estimate", "INSTANCE_GRID") for name, value in est.as_dict().items()]
        return Output(recs, ledger=fill_ledger(p, est=est).to_json())

    return Task("EST-implicit", {"p": p}, run)


def estimate_suite(cfg) -> List[Task]:
    tasks = []
    for d, seq in sequences(cfg):
        for p in cfg.p_list:
            for N in _n_values(cfg, seq):
                for e_norm in cfg.e_norms:
                    tasks.append(_estimate_task(seq, d, p, N, e_norm, cfg))
    if cfg.implicit_constants:
        tasks += [_implicit_task(p) for p in cfg.p_list if p > 1]
    return tasks


# --------------------------------------------------------------------------
# counterexample
# --------------------------------------------------------------------------


def _growth_task(p: int, k_max: int) -> Task:
    def run():
        recs = check_schneider_counterexample(p, k_max)
        rows = []
        for r in recs:
            if r.statement_id == "SCH-growth":
                k = len(rows) + 1
                rows.append({"k": k, "ratio_power": r.exact[1], "ratio": float(r.exact[1]) ** (1.0 / p)})
        return Output(recs, {"growth": rows})

    return Task("SCH-growth", {"p": p, "k_max": k_max}, run)


def _discrepancy_task(q: int, p_grid: Sequence[float], tol: float) -> Task:
    def run():
        rows = check_p_discrepancy(q, list(p_grid) + ([float(q)] if float(q) not in p_grid else []), tol)
        at_q = next(r for r in rows if r.p == q)
        rec = compare("SCH-discrepancy", {"q": q, "p": q}, at_q.product, at_q.torus, "<", "PLANCHEREL_EXACT")
        return Output([rec], {"discrepancy": [dict(r.to_dict(), q=q) for r in rows]})

    return Task("SCH-discrepancy", {"q": q}, run)


def counterexample_suite(cfg) -> List[Task]:
    g = riesz_factor(1)
    return [
        _growth_task(cfg.p_even, cfg.k_max),
        _discrepancy_task(cfg.q, cfg.p_grid, max(cfg.tol, 1e-10)),
        Task("SCH-larger", {"qs": [1, 3, 9]}, lambda: Output([check_larger_inequality(g, [1, 3, 9])])),
        Task("SCH-larger", {"qs": [1, 2, 3]}, lambda: Output([check_larger_inequality(g, [1, 2, 3])])),
    ]


# --------------------------------------------------------------------------
# montecarlo and transfer
# --------------------------------------------------------------------------


def mc_coefficients(seed: int, index: int, N: int) -> List[int]:
    """Small integer coefficients, nonzero last entry."""
    a = stream(seed, 1000 + index).integers(-3, 4, N + 1).tolist()
    a[-1] = a[-1] or 1
    return [int(x) for x in a]


def check_second_moment(a: Sequence[int], samples: int, seed: int) -> CheckResult:
    """Monte-Carlo ``E (sum a_k Rbar_k)^2`` within three standard errors of the exact value."""
    N = len(a) - 1
    rep = montecarlo_iid(2.0, N, a, "l2", samples, seed)
    exact = iid_second_moment(list(a))
    inst = {"a": list(a), "samples": samples}
    return compare("MC-second-moment", inst, abs(rep.value - float(exact)), 3 * rep.error_estimate, "<=", "MONTE_CARLO", seed=seed, note=f"estimate {rep.value:.17g}, exact {exact}")


def check_unit_mean(N: int, samples: int, seed: int) -> CheckResult:
    """Monte-Carlo ``E Rbar_N = 1`` within three standard errors."""
    a = [0] * N + [1]
    rep = montecarlo_iid(1.0, N, a, "l2", samples, seed)
    return compare("MC-unit-mean", {"N": N, "samples": samples}, abs(rep.value - 1.0), 3 * rep.error_estimate, "<=", "MONTE_CARLO", seed=seed, note=f"estimate {rep.value:.17g}")


def montecarlo_suite(cfg) -> List[Task]:
    tasks = []
    for i in range(cfg.mc_sets):
        a = mc_coefficients(cfg.seed, i, cfg.N)
        tasks.append(Task("MC-second-moment", {"a": a}, lambda a=a, i=i: Output([check_second_moment(a, cfg.samples, cfg.seed + i)])))
    tasks.append(Task("MC-unit-mean", {"N": cfg.N}, lambda: Output([check_unit_mean(cfg.N, cfg.samples, cfg.seed)])))
    return tasks


def transfer_suite(cfg) -> List[Task]:
    tasks = []
    for d, seq in sequences(cfg):
        if seq.ratio_floor < 3:
            continue
        for N in _n_values(cfg, seq):
            batches = []
            for spec in cfg.coeffs:
                if spec["kind"] == "sign-sweep":
                    spec = dict(spec, limit=spec.get("limit") or cfg.transfer_sets)
                elif spec["kind"] == "random":
                    spec = dict(spec, count=min(int(spec.get("count", 8)), cfg.transfer_sets))
                batches += coefficient_sets(spec, N, cfg.seed)
            for label, V in batches:
                for j, v in enumerate(V):
                    v = v if v.shape[1] > 1 else v[:, 0]
                    for e_norm in cfg.e_norms if v.ndim == 2 else ("l2",):
                        inst = {"seq": list(seq.modes[:N]), "N": N, "coeffs": label, "index": j, "e_norm": e_norm}
                        tasks.append(Task("L1-transfer", inst, lambda seq=seq, N=N, v=v, e_norm=e_norm: Output([check_l1_transfer(seq, N, v, cfg.psi_samples, cfg.seed, e_norm)])))
    return tasks


BUILDERS: Dict[str, Callable[[Any], List[Task]]] = {
    "riesz": riesz_suite,
    "norms": norms_suite,
    "verify": verify_suite,
    "estimate-constants": estimate_suite,
    "counterexample": counterexample_suite,
    "montecarlo": montecarlo_suite,
    "transfer": transfer_suite,
}


def build_tasks(cfg) -> List[Task]:
    return BUILDERS[cfg.command](cfg)
