"""Present value, future value, factors, equivalents, NPV and ranking.

Present value *is* the utility of a flow. Future value is the capital-inverse
of the utility at a fixed moment: ``FV(t, C)`` is the unique ``x`` with
``U(t, x) == C``. Capital-linear families invert in closed form; everything
else goes through bracketing bisection with residual bound
``FV_REL_TOL * max(1, |C|)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Hashable, Sequence

import numpy as np

from . import _pykernels, kernels
from .errors import ConvergenceError, DomainError
from .flows import FinancialFlow, Investment
from .models import UtilityFunction, UtilityModel

FV_REL_TOL = 1e-12
MAX_ITER = 200
RANK_REL_EQ = 1e-9


@dataclass(frozen=True)
class ValuationResult:
    """A computed amount plus the absolute residual bound it was computed under.

    ``abs_tolerance`` is 0 for direct evaluations (PV, NPV). For inverted
    quantities it bounds ``|U(t, value) - C|``.
    """

    value: float
    abs_tolerance: float = 0.0

    def __post_init__(self) -> None:
        if not self.abs_tolerance >= 0:
            raise ValueError("abs_tolerance must be >= 0")

    def __float__(self) -> float:
        return self.value


def _moment(model: UtilityFunction, t: float) -> float:
    t = float(t)
    if not math.isfinite(t) or t < 0 or t > model.t_max:
        raise DomainError(f"moment {t!r} outside [0, {model.t_max!r}]")
    return t


def _amount(c: float) -> float:
    c = float(c)
    if not math.isfinite(c):
        raise DomainError(f"nominal value must be finite, got {c!r}")
    return c


def fv_tolerance(c: float) -> float:
    return FV_REL_TOL * max(1.0, abs(c))


def utility(model: UtilityFunction, t: float, c: float) -> float:
    t = _moment(model, t)
    c = _amount(c)
    if isinstance(model, UtilityModel):
        p = model.kernel_params
        return kernels.utility(model.kernel_code, p[0], p[1], p[2], p[3], t, c)
    return float(model.evaluate(t, c))


def present_value(model: UtilityFunction, flow: FinancialFlow) -> ValuationResult:
    return ValuationResult(utility(model, flow.moment, flow.amount))


def future_value(model: UtilityFunction, t: float, c: float) -> ValuationResult:
    t = _moment(model, t)
    c = _amount(c)
    tol = fv_tolerance(c)
    if isinstance(model, UtilityModel):
        p = model.kernel_params
        x, res, n = kernels.future_value(model.kernel_code, p[0], p[1], p[2], p[3], t, c, tol, MAX_ITER)
    else:
        f = lambda v: float(model.evaluate(t, v))  # noqa: E731
        x, res, n = _pykernels.solve_increasing(f, c, tol, MAX_ITER, f(0.0))
    if n < 0:
        raise ConvergenceError(
            f"future value at t={t!r} for C={c!r} did not reach residual {tol:.3g} "
            f"within {MAX_ITER} evaluations (last residual {res:.3g}); "
            "the model may not be increasing in capital"
        )
    return ValuationResult(x, tol)


def _nonzero(c: float) -> float:
    c = _amount(c)
    if c == 0:
        raise DomainError("factor is undefined for a zero nominal value")
    return c


def discount_factor(model: UtilityFunction, t: float, c: float) -> float:
    """``PV(t, c) / c``."""
    c = _nonzero(c)
    return utility(model, t, c) / c


def appreciation_factor(model: UtilityFunction, t: float, c: float) -> float:
    """``FV(t, c) / c``."""
    c = _nonzero(c)
    return future_value(model, t, c).value / c


def equivalent_flow(model: UtilityFunction, flow: FinancialFlow, target_t: float) -> FinancialFlow:
    """The flow at ``target_t`` with the same utility as ``flow``."""
    target_t = _moment(model, target_t)
    u = utility(model, flow.moment, flow.amount)
    if target_t == flow.moment:
        return flow
    return FinancialFlow(target_t, future_value(model, target_t, u).value)


def npv(model: UtilityFunction, x: Investment) -> ValuationResult:
    """Sum of member present values, each weighted by multiplicity.

    Summation runs over the canonical flow order with :func:`math.fsum`, so
    the result does not depend on how the investment was assembled. Each
    ``n * u`` enters as the exact terms ``u * 2**k`` for the set bits of ``n``,
    which makes the NPV of a combination the correctly rounded sum of the
    parts' summands.
    """
    terms = []
    for f, n in x.items():
        u = utility(model, f.moment, f.amount)
        terms.extend(math.ldexp(u, k) for k in range(n.bit_length()) if n >> k & 1)
    return ValuationResult(math.fsum(terms))


@dataclass(frozen=True)
class RankEntry:
    id: Hashable
    npv: float


@dataclass(frozen=True)
class Ranking:
    entries: tuple[RankEntry, ...]
    classes: tuple[tuple[Hashable, ...], ...]
    eps_eq: float

    @property
    def ids(self) -> list:
        return [e.id for e in self.entries]


def rank(model: UtilityFunction, xs: Sequence[tuple[Hashable, Investment]]) -> Ranking:
    """Order investments by descending NPV and group near-equal NPVs.

    Exact ties keep input order. An equivalence class collects consecutive
    entries within ``eps_eq`` of the class's first (highest) member, where
    ``eps_eq = 1e-9 * max(1, max |npv|)``.
    """
    if not xs:
        raise DomainError("rank needs at least one investment")
    values = [(ident, npv(model, inv).value) for ident, inv in xs]
    order = sorted(range(len(values)), key=lambda i: -values[i][1])
    entries = tuple(RankEntry(values[i][0], values[i][1]) for i in order)
    eps = RANK_REL_EQ * max(1.0, max(abs(v) for _, v in values))
    classes: list[list] = []
    leader = None
    for e in entries:
        if leader is not None and leader - e.npv <= eps:
            classes[-1].append(e.id)
        else:
            classes.append([e.id])
            leader = e.npv
    return Ranking(entries, tuple(tuple(c) for c in classes), eps)


def pv_many(model: UtilityFunction, ts, cs) -> np.ndarray:
    """Vectorised utility over paired arrays of moments and amounts."""
    ts = np.asarray(ts, dtype=float)
    cs = np.asarray(cs, dtype=float)
    _check_arrays(model, ts, cs)
    if isinstance(model, UtilityModel):
        return kernels.utility_many(model.kernel_code, model.kernel_params, ts, cs)
    return np.array([float(model.evaluate(float(t), float(c))) for t, c in zip(ts, cs)])


def fv_many(model: UtilityFunction, ts, cs) -> np.ndarray:
    """Vectorised :func:`future_value`; raises :class:`ConvergenceError` on the first failure."""
    ts = np.asarray(ts, dtype=float)
    cs = np.asarray(cs, dtype=float)
    _check_arrays(model, ts, cs)
    if isinstance(model, UtilityModel):
        xs, _, ok = kernels.future_value_many(
            model.kernel_code, model.kernel_params, ts, cs, FV_REL_TOL, MAX_ITER
        )
        if not ok.all():
            i = int(np.argmin(ok))
            raise ConvergenceError(f"future value at t={ts[i]!r} for C={cs[i]!r} did not converge")
        return xs
    return np.array([future_value(model, t, c).value for t, c in zip(ts, cs)])


def _check_arrays(model: UtilityFunction, ts: np.ndarray, cs: np.ndarray) -> None:
    if ts.shape != cs.shape or ts.ndim != 1:
        raise ValueError("moments and amounts must be 1-d arrays of equal length")
    if ts.size == 0:
        return
    if not (np.isfinite(ts).all() and np.isfinite(cs).all()):
        raise DomainError("moments and amounts must be finite")
    if ts.min() < 0 or ts.max() > model.t_max:
        raise DomainError(f"moments outside [0, {model.t_max!r}]")
