"""Exception hierarchy shared by every module of the package."""


class RieszError(Exception):
    """Base class for all errors raised by rieszprod."""


class RatioViolation(RieszError, ValueError):
    """A consecutive mode ratio falls below the required floor."""


class FrequencyOverflow(RieszError, OverflowError):
    """A frequency (or a sum of frequencies) left the signed 62-bit range."""


class TooLarge(RieszError):
    """An exhaustive enumeration would exceed its budget."""


class NotDissociate(RieszError):
    """The sequence has two distinct epsilon-vectors with the same sum."""


class BudgetExceeded(RieszError):
    """A sparse product would enumerate more term pairs than allowed."""


class NoConvergence(RieszError):
    """Adaptive quadrature hit its point cap before meeting the tolerance.

    The partially converged report is attached as ``report``.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class SandwichFailure(RieszError):
    """A constructed approximant violated its two-sided bound on the check grid."""


class NoAdmissibleEps(RieszError):
    """No epsilon on the search grid produced a constant below one."""


class HypothesisViolation(RieszError, ValueError):
    """An instance does not satisfy the hypotheses of the statement it is checked against."""


class ConfigInvalid(RieszError, ValueError):
    """A run configuration failed validation."""


class IoFailure(RieszError, OSError):
    """A report file could not be written."""
