"""Utility-based financial arithmetic.

Present value is the utility of a flow, future value is the capital-inverse of
that utility, and NPV is its additive extension to investments (finite
multisets of flows). :mod:`utilflow.audit` certifies utility models against
the properties such a utility must have.
"""

__version__ = "0.1.0"

from .audit import AuditReport, CheckResult, DomainSpec, Verdict, audit, classify, run_check
from .errors import (
    ConvergenceError,
    DomainError,
    EmptyInvestment,
    IncompleteReport,
    ParamError,
    ParseError,
    UtilflowError,
)
from .flows import (
    FinancialFlow,
    Investment,
    PartialOrdering,
    combine,
    compare_flows,
    make_flow,
    portfolio_info,
)
from .kernels import BACKEND
from .models import (
    Family,
    UtilityFunction,
    UtilityModel,
    capital_aware,
    classical,
    evaluate,
    hyperbolic,
    parse_model_spec,
    validate_params,
)
from .valuation import (
    Ranking,
    ValuationResult,
    appreciation_factor,
    discount_factor,
    equivalent_flow,
    future_value,
    npv,
    present_value,
    rank,
)

__all__ = [
    "AuditReport",
    "BACKEND",
    "CheckResult",
    "ConvergenceError",
    "DomainError",
    "DomainSpec",
    "EmptyInvestment",
    "Family",
    "FinancialFlow",
    "IncompleteReport",
    "Investment",
    "ParamError",
    "ParseError",
    "PartialOrdering",
    "Ranking",
    "UtilflowError",
    "UtilityFunction",
    "UtilityModel",
    "ValuationResult",
    "appreciation_factor",
    "audit",
    "capital_aware",
    "classical",
    "classify",
    "combine",
    "compare_flows",
    "discount_factor",
    "equivalent_flow",
    "evaluate",
    "future_value",
    "hyperbolic",
    "make_flow",
    "npv",
    "parse_model_spec",
    "portfolio_info",
    "present_value",
    "rank",
    "run_check",
    "validate_params",
]
