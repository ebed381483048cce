"""Exact exponent bookkeeping for L-infinity regularity of elliptic systems."""

from .exponents import (
    INF,
    ExtRational,
    SolutionKind,
    SystemParams,
    conjugate_exponent,
    critical_exponent,
    ext,
    fmt,
    is_smoothing_admissible,
    scaling_indices,
    smoothing_gap,
)
from .classifier import ConditionReport, Verdict, VerdictTag, classify, feasibility_kstar
from .bootstrap import (
    Certificate,
    PlanningError,
    Step,
    ValidationReport,
    case_of,
    plan,
    select_parameters,
    validate,
)

__version__ = "0.1.0"
