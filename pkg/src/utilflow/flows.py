"""Financial flows, investments, and the multicriteria flow preference.

A flow is a dated nominal amount ``(t, C)`` with ``t`` in years. Positive
amounts are receivables, negative amounts liabilities, and a zero flow is
both. An :class:`Investment` is a finite multiset of flows.

Flow preference is a *partial* preorder:

* receivables: earlier and larger is better (``t1 <= t2 and C1 >= C2 >= 0``);
* liabilities: later and smaller in magnitude is better
  (``t1 >= t2 and 0 >= C1 >= C2``);
* any receivable is at least as good as any liability.

Comparisons use exact float equality; tolerance handling lives in the auditor.
"""

from __future__ import annotations

import enum
import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, NamedTuple

from .errors import DomainError, EmptyInvestment


@dataclass(frozen=True, order=True)
class FinancialFlow:
    """A payment of ``amount`` at moment ``moment`` (years, >= 0)."""

    moment: float
    amount: float

    def __post_init__(self) -> None:
        t, c = self.moment, self.amount
        if not (math.isfinite(t) and math.isfinite(c)):
            raise DomainError(f"flow fields must be finite, got ({t!r}, {c!r})")
        if t < 0:
            raise DomainError(f"flow moment must be >= 0, got {t!r}")
        # -0.0 would break canonical ordering and equality of multisets
        object.__setattr__(self, "moment", float(t) + 0.0)
        object.__setattr__(self, "amount", float(c) + 0.0)

    @property
    def is_receivable(self) -> bool:
        return self.amount >= 0

    @property
    def is_liability(self) -> bool:
        return self.amount <= 0

    def __iter__(self) -> Iterator[float]:
        yield self.moment
        yield self.amount


def make_flow(t: float, amount: float) -> FinancialFlow:
    """Build a validated flow; raises :class:`DomainError` for ``t < 0`` or non-finite input."""
    try:
        return FinancialFlow(float(t), float(amount))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, DomainError):
            raise
        raise DomainError(f"cannot build flow from ({t!r}, {amount!r})") from exc


class PartialOrdering(enum.Enum):
    FIRST_PREFERRED = "FirstPreferred"
    SECOND_PREFERRED = "SecondPreferred"
    INDIFFERENT = "Indifferent"
    INCOMPARABLE = "Incomparable"


def weakly_prefers(a: FinancialFlow, b: FinancialFlow) -> bool:
    """``a`` is at least as good as ``b`` under the multicriteria preorder."""
    t1, c1 = a.moment, a.amount
    t2, c2 = b.moment, b.amount
    return (
        (t1 >= t2 and 0 >= c1 >= c2)
        or (t1 <= t2 and c1 >= c2 >= 0)
        or (c1 >= 0 >= c2)
    )


def strictly_prefers(a: FinancialFlow, b: FinancialFlow) -> bool:
    """Strict part of the preorder, written out clause by clause.

    Equivalent to ``weakly_prefers(a, b) and not weakly_prefers(b, a)``; kept
    as an independent formulation so the two can be cross-checked.
    """
    t1, c1 = a.moment, a.amount
    t2, c2 = b.moment, b.amount
    if c1 == 0 and c2 == 0:
        # all zero flows are mutually indifferent, whatever their moments
        return False
    return (
        (t1 >= t2 and 0 >= c1 > c2)
        or (t1 > t2 and 0 >= c1 >= c2)
        or (t1 <= t2 and c1 > c2 >= 0)
        or (t1 < t2 and c1 >= c2 >= 0)
        or (c1 >= 0 >= c2)
    )


def compare_flows(a: FinancialFlow, b: FinancialFlow) -> PartialOrdering:
    ab = weakly_prefers(a, b)
    ba = weakly_prefers(b, a)
    if ab and ba:
        return PartialOrdering.INDIFFERENT
    if ab:
        return PartialOrdering.FIRST_PREFERRED
    if ba:
        return PartialOrdering.SECOND_PREFERRED
    return PartialOrdering.INCOMPARABLE


class Investment:
    """Immutable finite multiset of :class:`FinancialFlow`.

    Stored as a canonical, sorted tuple of ``(flow, multiplicity)`` pairs, so
    equality and hashing ignore insertion order.

    >>> x = Investment([make_flow(1, 100), make_flow(1, 100)])
    >>> x.multiplicity(make_flow(1, 100)), len(x)
    (2, 2)
    """

    __slots__ = ("_items",)

    def __init__(self, flows: Iterable[FinancialFlow] = ()):
        counts = Counter()
        for f in flows:
            if not isinstance(f, FinancialFlow):
                f = make_flow(*f)
            counts[f] += 1
        self._items = tuple(sorted(counts.items()))

    @classmethod
    def from_counts(cls, counts: Mapping[FinancialFlow, int] | Iterable[tuple[FinancialFlow, int]]) -> "Investment":
        pairs = counts.items() if isinstance(counts, Mapping) else counts
        merged: Counter = Counter()
        for flow, n in pairs:
            if isinstance(n, bool) or not isinstance(n, int) or n < 1:
                raise DomainError(f"multiplicity must be a positive integer, got {n!r}")
            merged[flow] += n
        inv = cls.__new__(cls)
        inv._items = tuple(sorted(merged.items()))
        return inv

    def items(self) -> tuple[tuple[FinancialFlow, int], ...]:
        """Distinct flows with their multiplicities, in canonical order."""
        return self._items

    def distinct(self) -> tuple[FinancialFlow, ...]:
        return tuple(f for f, _ in self._items)

    def multiplicity(self, flow: FinancialFlow) -> int:
        for f, n in self._items:
            if f == flow:
                return n
        return 0

    def __iter__(self) -> Iterator[FinancialFlow]:
        for f, n in self._items:
            for _ in range(n):
                yield f

    def __len__(self) -> int:
        return sum(n for _, n in self._items)

    def __bool__(self) -> bool:
        return bool(self._items)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Investment):
            return NotImplemented
        return self._items == other._items

    def __hash__(self) -> int:
        return hash(self._items)

    def __add__(self, other: "Investment") -> "Investment":
        if not isinstance(other, Investment):
            return NotImplemented
        return combine(self, other)

    def __repr__(self) -> str:
        body = ", ".join(
            f"({f.moment!r}, {f.amount!r})" + (f"x{n}" if n > 1 else "") for f, n in self._items
        )
        return f"Investment({{{body}}})"


def combine(x: Investment, y: Investment) -> Investment:
    """Multiset sum: multiplicities add."""
    return Investment.from_counts(list(x.items()) + list(y.items()))


class Portfolio(NamedTuple):
    maturity: float
    future_value: float


def portfolio_info(x: Investment) -> Portfolio | None:
    """Maturity and net nominal value when every flow shares one moment, else ``None``."""
    if not x:
        raise EmptyInvestment("portfolio_info needs a non-empty investment")
    moments = {f.moment for f in x.distinct()}
    if len(moments) != 1:
        return None
    total = math.fsum(f.amount * n for f, n in x.items())
    return Portfolio(moments.pop(), total)
