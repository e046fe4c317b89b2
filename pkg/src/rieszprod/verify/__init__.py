"""Checks of the two-sided moment bound, its lemmas and the counterexamples."""

from .constants import EmpiricalConstants, empirical_constants, fill_ledger
from .lemmas import ESTIMATORS, STATEMENT_IDS, check_lemma, default_instances, run_statement
from .results import CheckResult, ConstantEstimate, compare, stream
from .schneider import DiscrepancyRow, check_larger_inequality, check_p_discrepancy, check_schneider_counterexample, discrepancy_table
from .theorem import check_main_theorem, check_theorem_batch, estimate_lower_constant, moment_ratios, sign_patterns
from .transfer import check_l1_transfer, iid_second_moment, montecarlo_iid

__all__ = [
    "CheckResult",
    "ConstantEstimate",
    "DiscrepancyRow",
    "ESTIMATORS",
    "EmpiricalConstants",
    "STATEMENT_IDS",
    "check_l1_transfer",
    "check_larger_inequality",
    "check_lemma",
    "check_main_theorem",
    "check_p_discrepancy",
    "check_schneider_counterexample",
    "check_theorem_batch",
    "compare",
    "default_instances",
    "discrepancy_table",
    "empirical_constants",
    "estimate_lower_constant",
    "fill_ledger",
    "iid_second_moment",
    "moment_ratios",
    "montecarlo_iid",
    "run_statement",
    "sign_patterns",
    "stream",
]
