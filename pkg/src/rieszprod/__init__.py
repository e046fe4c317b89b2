"""Riesz products on the circle: exact arithmetic, moments and numerical checks.

The core pieces are :class:`LacunarySeq`, exact :class:`TrigPoly`
arithmetic, Riesz products and weights, moment backends (exact Plancherel
and adaptive trapezoid) and the approximants behind the weighted induction.
Checks live in :mod:`rieszprod.verify`; the batch front end is
:mod:`rieszprod.cli`.
"""

from .approx import ConstantLedger, bernstein_approx, lambda_constants, closed_form_constants, weierstrass_wp, weight_majorant
from .errors import (
    BudgetExceeded,
    ConfigInvalid,
    FrequencyOverflow,
    HypothesisViolation,
    IoFailure,
    NoAdmissibleEps,
    NoConvergence,
    NotDissociate,
    RatioViolation,
    RieszError,
    SandwichFailure,
    TooLarge,
)
from .lacunary import LacunarySeq, dissociation_check, lift_frequency, make_sequence
from .moments import MomentReport, lp_even_exact, lp_quadrature, riesz_moment, x_moment
from .report import emit_report
from .riesz import Choice, WeightSpec, riesz_product, weight_eval, weighted_sum
from .trigpoly import TrigPoly, VecTrigPoly, evaluate

__version__ = "0.1.0"
