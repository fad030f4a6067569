"""Sample-based certification of utility models.

Every property of a well-behaved financial-flow utility is a universally
quantified statement; the auditor tests each on a deterministic sample of the
model's domain and reports a verdict:

``Pass``
    the relation holds on every sampled instance (with margin
    ``eps_strict * scale`` where the relation is strict);
``Equality``
    the relation holds only as an equality everywhere it was tested; this is
    how capital-linear ("diversification neutral") models show up;
``Fail``
    otherwise, with a witness instance.

The sample always includes the grid points, so the ``t = 0`` and ``C = 0``
rows are never missed. Strict capital-shape relations (concavity, factor
monotonicity, capital synergy) are sampled on ``t > 0`` only: the calibration
``U(0, C) = C`` makes every model linear at ``t = 0``.

Verdicts certify the sampled domain only; the report records that domain.
"""

from __future__ import annotations

import enum
import math
import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

import numpy as np

from .errors import DomainError, IncompleteReport
from .flows import FinancialFlow, PartialOrdering, compare_flows
from .models import UtilityFunction, UtilityModel
from .valuation import fv_many, pv_many

CHECK_IDS = (
    "boundaries",
    "monotonicity",
    "preorder_consistency",
    "gossen_concavity",
    "factor_capital_monotonicity",
    "capital_synergy",
    "diversification",
    "synergy_fv",
    "reciprocity",
    "additivity_neutrality",
    "appreciation_neutrality",
)

PECCATI_CLASSICAL = "PeccatiClassical"
VARIANT_A = "VariantA"
VARIANT_B = "VariantB"
VARIANT_C = "VariantC"
DIVERSIFICATION_NEUTRAL = "DiversificationNeutral"
GOSSEN_COMPLIANT = "GossenCompliant"
SYNERGY_EXHIBITING = "SynergyExhibiting"
LABELS = (
    PECCATI_CLASSICAL,
    VARIANT_A,
    VARIANT_B,
    VARIANT_C,
    DIVERSIFICATION_NEUTRAL,
    GOSSEN_COMPLIANT,
    SYNERGY_EXHIBITING,
)

DEFAULT_C_GRID = (-1e4, -1e3, -1e2, -10.0, -1.0, 0.0, 1.0, 10.0, 1e2, 1e3, 1e4)
# strict capital-shape checks compare amounts at least this ratio apart
MIN_CAPITAL_RATIO = 1.25
# random mixing weights for the concavity test stay away from 0 and 1
ALPHA_RANGE = (0.05, 0.95)
EXTRA_ALPHAS = 10


class Verdict(str, enum.Enum):
    PASS = "Pass"
    FAIL = "Fail"
    EQUALITY = "Equality"


@dataclass(frozen=True)
class DomainSpec:
    """Sampled domain for an audit.

    ``t_grid`` and ``c_grid`` must be strictly increasing and contain 0;
    ``c_grid`` must reach both signs. Random samples are drawn on top of the
    grids from a generator seeded by ``(seed, check_id)``.
    """

    t_grid: tuple[float, ...]
    c_grid: tuple[float, ...] = DEFAULT_C_GRID
    samples: int = 2000
    seed: int = 0
    eps_strict: float = 1e-9
    eps_eq: float = 1e-9

    def __post_init__(self) -> None:
        t_grid = tuple(float(t) for t in self.t_grid)
        c_grid = tuple(float(c) for c in self.c_grid)
        object.__setattr__(self, "t_grid", t_grid)
        object.__setattr__(self, "c_grid", c_grid)
        for name, grid in (("t_grid", t_grid), ("c_grid", c_grid)):
            if not all(math.isfinite(v) for v in grid):
                raise DomainError(f"{name} must be finite")
            if 0.0 not in grid:
                raise DomainError(f"{name} must contain 0")
            if any(b <= a for a, b in zip(grid, grid[1:])):
                raise DomainError(f"{name} must be strictly increasing")
        if t_grid[0] < 0:
            raise DomainError("t_grid must be non-negative")
        if len(t_grid) < 2:
            raise DomainError("t_grid needs a positive moment besides 0")
        if c_grid[0] >= 0 or c_grid[-1] <= 0:
            raise DomainError("c_grid must span negative and positive amounts")
        mags = [abs(c) for c in c_grid if c != 0]
        if max(mags) < MIN_CAPITAL_RATIO * min(mags):
            raise DomainError(
                f"c_grid magnitudes must span a ratio of at least {MIN_CAPITAL_RATIO} "
                "so capital-shape checks can draw separated amounts"
            )
        if isinstance(self.samples, bool) or not isinstance(self.samples, int) or self.samples <= 0:
            raise DomainError(f"samples must be a positive integer, got {self.samples!r}")
        if not (self.eps_strict > 0 and self.eps_eq > 0):
            raise DomainError("tolerances must be positive")

    @classmethod
    def for_model(cls, model: UtilityFunction, t_points: int = 21, **kwargs) -> "DomainSpec":
        if t_points < 2:
            raise DomainError("t_points must be >= 2")
        grid = tuple(float(t) for t in np.linspace(0.0, model.t_max, t_points))
        return cls(t_grid=grid, **kwargs)

    def describe(self) -> dict:
        return {
            "t_grid": list(self.t_grid),
            "c_grid": list(self.c_grid),
            "samples": self.samples,
            "seed": self.seed,
            "eps_strict": self.eps_strict,
            "eps_eq": self.eps_eq,
        }


@dataclass(frozen=True)
class CheckResult:
    check_id: str
    verdict: Verdict
    witness: Mapping | None = None
    instances: int = 0
    # smallest (lhs - rhs) / scale over inequality instances; None for identity checks
    min_margin: float | None = None

    def __post_init__(self) -> None:
        if self.verdict is not Verdict.PASS and self.witness is None:
            raise ValueError(f"{self.verdict.value} verdict needs a witness")


@dataclass(frozen=True)
class CrossCheck:
    name: str
    consistent: bool
    detail: str
    witnesses: tuple = ()


@dataclass(frozen=True)
class AuditReport:
    model: Mapping
    domain: DomainSpec
    checks: tuple[CheckResult, ...]
    classification: frozenset = field(default_factory=frozenset)
    cross_checks: tuple[CrossCheck, ...] = ()

    def check(self, check_id: str) -> CheckResult:
        for c in self.checks:
            if c.check_id == check_id:
                return c
        raise KeyError(check_id)

    @property
    def verdicts(self) -> dict[str, Verdict]:
        return {c.check_id: c.verdict for c in self.checks}

    @property
    def consistent(self) -> bool:
        return all(x.consistent for x in self.cross_checks)


# --------------------------------------------------------------------------
# relation blocks


STRICT = "strict"  # lhs > rhs by more than eps_strict * scale
WEAK = "weak"  # lhs >= rhs within eps_eq * scale
IDENTITY = "identity"  # lhs == rhs within eps_eq * scale

_REQUIREMENT = {STRICT: "lhs > rhs", WEAK: "lhs >= rhs", IDENTITY: "lhs == rhs"}


@dataclass
class _Block:
    relation: str
    kind: str
    lhs: np.ndarray
    rhs: np.ndarray
    inputs: dict[str, np.ndarray]
    scale: np.ndarray | None = None

    def __post_init__(self) -> None:
        self.lhs = np.asarray(self.lhs, dtype=float)
        self.rhs = np.asarray(self.rhs, dtype=float)
        if self.scale is None:
            self.scale = np.maximum(1.0, np.maximum(np.abs(self.lhs), np.abs(self.rhs)))
        self.margin = (self.lhs - self.rhs) / self.scale

    def __len__(self) -> int:
        return len(self.lhs)

    def witness(self, i: int) -> dict:
        w = {"relation": self.relation, "requirement": _REQUIREMENT[self.kind]}
        for k, v in self.inputs.items():
            w[k] = float(v[i])
        w["lhs"] = float(self.lhs[i])
        w["rhs"] = float(self.rhs[i])
        w["scale"] = float(self.scale[i])
        return w


def _verdict(check_id: str, blocks: list[_Block], spec: DomainSpec, identity_verdict: Verdict | None) -> CheckResult:
    blocks = [b for b in blocks if len(b)]
    n = sum(len(b) for b in blocks)
    eps_eq, eps_strict = spec.eps_eq, spec.eps_strict

    # worst hard violation across all blocks
    worst = None
    for b in blocks:
        if b.kind == IDENTITY:
            bad = np.abs(b.margin) - eps_eq
        else:
            bad = -b.margin - eps_eq
        bad = np.where(np.isnan(bad), np.inf, bad)  # undefined values never pass
        i = int(np.argmax(bad))
        if bad[i] > 0 and (worst is None or bad[i] > worst[0]):
            worst = (float(bad[i]), b, i)

    ineq = [b for b in blocks if b.kind != IDENTITY]
    min_margin = min((float(b.margin.min()) for b in ineq), default=None)

    if identity_verdict is not None:
        if worst is not None:
            return CheckResult(check_id, Verdict.FAIL, worst[1].witness(worst[2]), n, min_margin)
        if identity_verdict is Verdict.PASS:
            return CheckResult(check_id, Verdict.PASS, None, n, min_margin)
        return CheckResult(check_id, identity_verdict, blocks[0].witness(0), n, min_margin)

    if worst is not None:
        return CheckResult(check_id, Verdict.FAIL, worst[1].witness(worst[2]), n, min_margin)
    if ineq and all(np.all(np.abs(b.margin) <= eps_eq) for b in ineq):
        return CheckResult(check_id, Verdict.EQUALITY, ineq[0].witness(0), n, min_margin)
    weakest = None
    for b in ineq:
        if b.kind != STRICT:
            continue
        i = int(np.argmin(b.margin))
        if b.margin[i] <= eps_strict and (weakest is None or b.margin[i] < weakest[0]):
            weakest = (float(b.margin[i]), b, i)
    if weakest is not None:
        return CheckResult(check_id, Verdict.FAIL, weakest[1].witness(weakest[2]), n, min_margin)
    return CheckResult(check_id, Verdict.PASS, None, n, min_margin)


# --------------------------------------------------------------------------
# sampling


class _Sampler:
    def __init__(self, spec: DomainSpec, t_max: float, check_id: str):
        self.spec = spec
        self.t_max = float(t_max)
        self.n = spec.samples
        self.rng = random.Random(f"{spec.seed}:{check_id}")
        self.t_pos_grid = [t for t in spec.t_grid if t > 0]
        self.t_lo = self.t_pos_grid[0]
        mags = sorted({abs(c) for c in spec.c_grid if c != 0})
        self.c_lo, self.c_hi = mags[0], mags[-1]
        self.c_pos_grid = [c for c in spec.c_grid if c > 0]
        self.c_neg_grid = [c for c in spec.c_grid if c < 0]

    def t_any(self) -> float:
        return self.rng.uniform(0.0, self.t_max)

    def t_pos(self) -> float:
        return self.rng.uniform(self.t_lo, self.t_max)

    def c_pos(self) -> float:
        if self.c_lo == self.c_hi:
            return self.c_lo
        return math.exp(self.rng.uniform(math.log(self.c_lo), math.log(self.c_hi)))

    def c_any(self) -> float:
        return self.c_pos() if self.rng.random() < 0.5 else -self.c_pos()

    def separated_pair(self, draw: Callable[[], float], ratio: float) -> tuple[float, float]:
        """Two draws, ordered, whose magnitudes differ by at least ``ratio`` (same sign) or that differ in sign."""
        while True:
            a, b = draw(), draw()
            if a > b:
                a, b = b, a
            if a * b <= 0 or max(abs(a), abs(b)) >= ratio * min(abs(a), abs(b)):
                return a, b

    def t_pair(self) -> tuple[float, float]:
        gap = 1e-3 * self.t_max
        while True:
            a, b = sorted((self.t_any(), self.t_any()))
            if b - a >= gap:
                return a, b

    def alpha(self) -> float:
        return self.rng.uniform(*ALPHA_RANGE)


def _arr(xs: Iterable[float]) -> np.ndarray:
    return np.fromiter(xs, dtype=float)


# --------------------------------------------------------------------------
# checks


def _check_boundaries(model, spec, s: _Sampler) -> list[_Block]:
    cs = _arr(list(spec.c_grid) + [s.c_any() for _ in range(s.n)])
    ts = _arr(list(spec.t_grid) + [s.t_any() for _ in range(s.n)])
    zeros_c = np.zeros_like(cs)
    zeros_t = np.zeros_like(ts)
    nz = cs[cs != 0]
    zt = np.zeros_like(nz)
    return [
        _Block("utility_at_time_zero_is_nominal", IDENTITY, pv_many(model, zeros_c, cs), cs,
               {"t": zeros_c, "c": cs}),
        _Block("utility_of_zero_amount_is_zero", IDENTITY, pv_many(model, ts, zeros_t), zeros_t,
               {"t": ts, "c": zeros_t}),
        _Block("fv_at_time_zero_is_nominal", IDENTITY, fv_many(model, zeros_c, cs), cs,
               {"t": zeros_c, "c": cs}),
        _Block("fv_of_zero_amount_is_zero", IDENTITY, fv_many(model, ts, zeros_t), zeros_t,
               {"t": ts, "c": zeros_t}),
        _Block("discount_factor_at_time_zero_is_one", IDENTITY, pv_many(model, zt, nz) / nz,
               np.ones_like(nz), {"t": zt, "c": nz}),
        _Block("appreciation_factor_at_time_zero_is_one", IDENTITY, fv_many(model, zt, nz) / nz,
               np.ones_like(nz), {"t": zt, "c": nz}),
    ]


def _check_monotonicity(model, spec, s: _Sampler) -> list[_Block]:
    # capital pairs c1 < c2 at a moment
    t_c, c1, c2 = [], [], []
    for t in spec.t_grid:
        for a, b in zip(spec.c_grid, spec.c_grid[1:]):
            t_c.append(t), c1.append(a), c2.append(b)
    for _ in range(s.n):
        a, b = s.separated_pair(s.c_any, 1.001)
        t_c.append(s.t_any()), c1.append(a), c2.append(b)
    t_c, c1, c2 = _arr(t_c), _arr(c1), _arr(c2)

    # time pairs t1 < t2 at an amount, split by sign
    def time_pairs(grid_cs, draw_c):
        t1, t2, cc = [], [], []
        for c in grid_cs:
            for a, b in zip(spec.t_grid, spec.t_grid[1:]):
                t1.append(a), t2.append(b), cc.append(c)
        for _ in range(s.n):
            a, b = s.t_pair()
            t1.append(a), t2.append(b), cc.append(draw_c())
        return _arr(t1), _arr(t2), _arr(cc)

    r1, r2, rc = time_pairs(s.c_pos_grid, s.c_pos)
    l1, l2, lc = time_pairs(s.c_neg_grid, lambda: -s.c_pos())

    ts_sign = _arr(list(spec.t_grid) * len(spec.c_grid) + [s.t_any() for _ in range(s.n)])
    cs_sign = _arr([c for c in spec.c_grid for _ in spec.t_grid] + [s.c_any() for _ in range(s.n)])
    keep = cs_sign != 0
    ts_sign, cs_sign = ts_sign[keep], cs_sign[keep]
    u_sign = pv_many(model, ts_sign, cs_sign)

    return [
        _Block("utility_increasing_in_capital", STRICT, pv_many(model, t_c, c2), pv_many(model, t_c, c1),
               {"t": t_c, "c1": c1, "c2": c2}),
        _Block("fv_increasing_in_capital", STRICT, fv_many(model, t_c, c2), fv_many(model, t_c, c1),
               {"t": t_c, "c1": c1, "c2": c2}),
        _Block("receivable_utility_decreasing_in_time", STRICT, pv_many(model, r1, rc), pv_many(model, r2, rc),
               {"t1": r1, "t2": r2, "c": rc}),
        _Block("liability_utility_increasing_in_time", STRICT, pv_many(model, l2, lc), pv_many(model, l1, lc),
               {"t1": l1, "t2": l2, "c": lc}),
        _Block("receivable_fv_increasing_in_time", STRICT, fv_many(model, r2, rc), fv_many(model, r1, rc),
               {"t1": r1, "t2": r2, "c": rc}),
        _Block("liability_fv_decreasing_in_time", STRICT, fv_many(model, l1, lc), fv_many(model, l2, lc),
               {"t1": l1, "t2": l2, "c": lc}),
        _Block("utility_sign_matches_amount", STRICT, np.sign(cs_sign) * u_sign, np.zeros_like(u_sign),
               {"t": ts_sign, "c": cs_sign}),
    ]


def _check_preorder(model, spec, s: _Sampler) -> list[_Block]:
    pairs: list[tuple[tuple[float, float], tuple[float, float]]] = []
    for t in spec.t_grid:
        for i, a in enumerate(spec.c_grid):
            for b in spec.c_grid[i:]:
                pairs.append(((t, a), (t, b)))
    for c in spec.c_grid:
        for i, a in enumerate(spec.t_grid):
            for b in spec.t_grid[i + 1:]:
                pairs.append(((a, c), (b, c)))
    pool = [(t, c) for t in spec.t_grid for c in spec.c_grid]
    pool += [(s.t_any(), s.c_any()) for _ in range(s.n)]
    for _ in range(s.n):
        pairs.append((s.rng.choice(pool), s.rng.choice(pool)))

    strict_hi, strict_lo, indiff_a, indiff_b = [], [], [], []
    for a, b in pairs:
        order = compare_flows(FinancialFlow(*a), FinancialFlow(*b))
        if order is PartialOrdering.FIRST_PREFERRED:
            strict_hi.append(a), strict_lo.append(b)
        elif order is PartialOrdering.SECOND_PREFERRED:
            strict_hi.append(b), strict_lo.append(a)
        elif order is PartialOrdering.INDIFFERENT:
            indiff_a.append(a), indiff_b.append(b)

    def cols(flows):
        return _arr(f[0] for f in flows), _arr(f[1] for f in flows)

    ht, hc = cols(strict_hi)
    lt, lc = cols(strict_lo)
    at, ac = cols(indiff_a)
    bt, bc = cols(indiff_b)
    return [
        _Block("utility_respects_strict_preference", STRICT, pv_many(model, ht, hc), pv_many(model, lt, lc),
               {"t_preferred": ht, "c_preferred": hc, "t_other": lt, "c_other": lc}),
        _Block("utility_equal_for_indifferent_flows", IDENTITY, pv_many(model, at, ac), pv_many(model, bt, bc),
               {"t1": at, "c1": ac, "t2": bt, "c2": bc}),
    ]


def _receivable_pairs(spec, s: _Sampler) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Moments t > 0 and well-separated receivables c1 < c2."""
    ts, c1, c2 = [], [], []
    for t in s.t_pos_grid:
        for a, b in zip(s.c_pos_grid, s.c_pos_grid[1:]):
            ts.append(t), c1.append(a), c2.append(b)
    for _ in range(s.n):
        a, b = s.separated_pair(s.c_pos, MIN_CAPITAL_RATIO)
        ts.append(s.t_pos()), c1.append(a), c2.append(b)
    return _arr(ts), _arr(c1), _arr(c2)


def _check_gossen(model, spec, s: _Sampler) -> list[_Block]:
    ts, c1, c2 = _receivable_pairs(spec, s)
    n_grid = len(ts) - s.n
    rows_t, rows_1, rows_2, rows_a = [], [], [], []
    for i in range(len(ts)):
        alphas = [0.5] if i < n_grid else [0.5] + [s.alpha() for _ in range(EXTRA_ALPHAS)]
        for a in alphas:
            rows_t.append(ts[i]), rows_1.append(c1[i]), rows_2.append(c2[i]), rows_a.append(a)
    t, a1, a2, al = _arr(rows_t), _arr(rows_1), _arr(rows_2), _arr(rows_a)
    mix = al * a1 + (1 - al) * a2
    chord = al * pv_many(model, t, a1) + (1 - al) * pv_many(model, t, a2)
    return [
        _Block("pv_strictly_concave_on_receivables", STRICT, pv_many(model, t, mix), chord,
               {"t": t, "c1": a1, "c2": a2, "alpha": al}),
    ]


def _check_factor_monotonicity(model, spec, s: _Sampler) -> list[_Block]:
    ts, lo, hi = _receivable_pairs(spec, s)
    return [
        _Block("discount_factor_decreasing_in_receivable_capital", STRICT,
               pv_many(model, ts, lo) / lo, pv_many(model, ts, hi) / hi,
               {"t": ts, "c_small": lo, "c_large": hi}),
    ]


def _check_capital_synergy(model, spec, s: _Sampler) -> list[_Block]:
    ts, lo, hi = _receivable_pairs(spec, s)
    return [
        _Block("appreciation_factor_increasing_in_receivable_capital", STRICT,
               fv_many(model, ts, hi) / hi, fv_many(model, ts, lo) / lo,
               {"t": ts, "c_small": lo, "c_large": hi}),
    ]


def _split_samples(spec, s: _Sampler):
    """(t, c1, c2) receivable triples and (t, c) mirror pairs, all t in [0, t_max]."""
    ts, c1, c2 = [], [], []
    for t in spec.t_grid:
        for i, a in enumerate(s.c_pos_grid):
            for b in s.c_pos_grid[i:]:
                ts.append(t), c1.append(a), c2.append(b)
    for _ in range(s.n):
        ts.append(s.t_any()), c1.append(s.c_pos()), c2.append(s.c_pos())
    mt = list(spec.t_grid) * len(s.c_pos_grid)
    mc = [c for c in s.c_pos_grid for _ in spec.t_grid]
    for _ in range(s.n):
        mt.append(s.t_any()), mc.append(s.c_pos())
    return _arr(ts), _arr(c1), _arr(c2), _arr(mt), _arr(mc)


def _check_diversification(model, spec, s: _Sampler) -> list[_Block]:
    ts, c1, c2, mt, mc = _split_samples(spec, s)
    p_pos = pv_many(model, mt, mc)
    p_neg = pv_many(model, mt, -mc)
    mirror_scale = np.maximum(1.0, np.maximum(np.abs(p_pos), np.abs(p_neg)))
    return [
        _Block("pv_subadditive_on_receivables", WEAK,
               pv_many(model, ts, c1) + pv_many(model, ts, c2), pv_many(model, ts, c1 + c2),
               {"t": ts, "c1": c1, "c2": c2}),
        _Block("pv_of_offsetting_flows_nonnegative", WEAK, p_pos + p_neg, np.zeros_like(mt),
               {"t": mt, "c": mc}, scale=mirror_scale),
        _Block("liability_discount_at_least_as_strong", WEAK, p_pos / mc, p_neg / -mc,
               {"t": mt, "c": mc}),
    ]


def _check_synergy_fv(model, spec, s: _Sampler) -> list[_Block]:
    ts, c1, c2, mt, mc = _split_samples(spec, s)
    f_pos = fv_many(model, mt, mc)
    f_neg = fv_many(model, mt, -mc)
    mirror_scale = np.maximum(1.0, np.maximum(np.abs(f_pos), np.abs(f_neg)))
    return [
        _Block("fv_superadditive_on_receivables", WEAK,
               fv_many(model, ts, c1 + c2), fv_many(model, ts, c1) + fv_many(model, ts, c2),
               {"t": ts, "c1": c1, "c2": c2}),
        _Block("fv_of_offsetting_flows_nonpositive", WEAK, np.zeros_like(mt), f_pos + f_neg,
               {"t": mt, "c": mc}, scale=mirror_scale),
        _Block("liability_appreciation_at_least_receivable", WEAK, f_neg / -mc, f_pos / mc,
               {"t": mt, "c": mc}),
    ]


def _any_sign_samples(spec, s: _Sampler) -> tuple[np.ndarray, np.ndarray]:
    nz = [c for c in spec.c_grid if c != 0]
    ts = list(spec.t_grid) * len(nz)
    cs = [c for c in nz for _ in spec.t_grid]
    for _ in range(s.n):
        ts.append(s.t_any()), cs.append(s.c_any())
    return _arr(ts), _arr(cs)


def _check_reciprocity(model, spec, s: _Sampler) -> list[_Block]:
    ts, cs = _any_sign_samples(spec, s)
    fv = fv_many(model, ts, cs)
    pv_of_fv = pv_many(model, ts, fv)
    pv = pv_many(model, ts, cs)
    return [
        _Block("appreciation_times_discount_of_fv_is_one", IDENTITY, (fv / cs) * (pv_of_fv / fv),
               np.ones_like(cs), {"t": ts, "c": cs}),
        _Block("pv_of_fv_roundtrip", IDENTITY, pv_of_fv, cs, {"t": ts, "c": cs}),
        _Block("fv_of_pv_roundtrip", IDENTITY, fv_many(model, ts, pv), cs, {"t": ts, "c": cs}),
    ]


def _mixed_pairs(spec, s: _Sampler):
    ts, c1, c2 = [], [], []
    for t in spec.t_grid:
        for a in spec.c_grid:
            for b in spec.c_grid:
                if a <= b:
                    ts.append(t), c1.append(a), c2.append(b)
    for _ in range(s.n):
        ts.append(s.t_any()), c1.append(s.c_any()), c2.append(s.c_any())
    return _arr(ts), _arr(c1), _arr(c2)


def _additivity_scale(a, b, c):
    return np.maximum.reduce([np.ones_like(a), np.abs(a), np.abs(b), np.abs(c)])


def _check_additivity(model, spec, s: _Sampler) -> list[_Block]:
    ts, c1, c2 = _mixed_pairs(spec, s)
    p1, p2, p12 = pv_many(model, ts, c1), pv_many(model, ts, c2), pv_many(model, ts, c1 + c2)
    f1, f2, f12 = fv_many(model, ts, c1), fv_many(model, ts, c2), fv_many(model, ts, c1 + c2)
    nz = (c1 != 0) & (c2 != 0)
    return [
        _Block("pv_additive", IDENTITY, p1 + p2, p12, {"t": ts, "c1": c1, "c2": c2},
               scale=_additivity_scale(p1, p2, p12)),
        _Block("fv_additive", IDENTITY, f1 + f2, f12, {"t": ts, "c1": c1, "c2": c2},
               scale=_additivity_scale(f1, f2, f12)),
        _Block("discount_factor_capital_independent", IDENTITY, p1[nz] / c1[nz], p2[nz] / c2[nz],
               {"t": ts[nz], "c1": c1[nz], "c2": c2[nz]}),
    ]


def _check_appreciation_neutrality(model, spec, s: _Sampler) -> list[_Block]:
    ts, c1, c2 = _mixed_pairs(spec, s)
    nz = (c1 != 0) & (c2 != 0)
    ts, c1, c2 = ts[nz], c1[nz], c2[nz]
    return [
        _Block("appreciation_factor_capital_independent", IDENTITY,
               fv_many(model, ts, c1) / c1, fv_many(model, ts, c2) / c2,
               {"t": ts, "c1": c1, "c2": c2}),
    ]


_CHECKS: dict[str, tuple[Callable, Verdict | None]] = {
    "boundaries": (_check_boundaries, Verdict.PASS),
    "monotonicity": (_check_monotonicity, None),
    "preorder_consistency": (_check_preorder, None),
    "gossen_concavity": (_check_gossen, None),
    "factor_capital_monotonicity": (_check_factor_monotonicity, None),
    "capital_synergy": (_check_capital_synergy, None),
    "diversification": (_check_diversification, None),
    "synergy_fv": (_check_synergy_fv, None),
    "reciprocity": (_check_reciprocity, Verdict.PASS),
    "additivity_neutrality": (_check_additivity, Verdict.EQUALITY),
    "appreciation_neutrality": (_check_appreciation_neutrality, Verdict.EQUALITY),
}


def _validate_against(model: UtilityFunction, spec: DomainSpec) -> None:
    if spec.t_grid[-1] > model.t_max:
        raise DomainError(f"t_grid reaches {spec.t_grid[-1]!r}, beyond model t_max {model.t_max!r}")


def run_check(model: UtilityFunction, check_id: str, spec: DomainSpec | None = None) -> CheckResult:
    """Run one named check; deterministic for a given ``spec.seed``."""
    if check_id not in _CHECKS:
        raise KeyError(f"unknown check {check_id!r}; expected one of {', '.join(CHECK_IDS)}")
    if spec is None:
        spec = DomainSpec.for_model(model)
    _validate_against(model, spec)
    build, identity_verdict = _CHECKS[check_id]
    with np.errstate(divide="ignore", invalid="ignore"):
        blocks = build(model, spec, _Sampler(spec, model.t_max, check_id))
    return _verdict(check_id, blocks, spec, identity_verdict)


def _labels(verdicts: Mapping[str, Verdict]) -> frozenset:
    v = verdicts
    labels = set()
    variant_a = v["boundaries"] is Verdict.PASS and v["monotonicity"] is Verdict.PASS
    if variant_a:
        labels.add(VARIANT_A)
        if v["diversification"] in (Verdict.PASS, Verdict.EQUALITY):
            labels.add(VARIANT_B)
        if v["gossen_concavity"] is Verdict.PASS:
            labels.add(VARIANT_C)
    if v["additivity_neutrality"] is Verdict.EQUALITY:
        labels.add(DIVERSIFICATION_NEUTRAL)
        if variant_a:
            labels.add(PECCATI_CLASSICAL)
    if v["gossen_concavity"] is Verdict.PASS:
        labels.add(GOSSEN_COMPLIANT)
    if v["capital_synergy"] is Verdict.PASS:
        labels.add(SYNERGY_EXHIBITING)
    return frozenset(labels)


def classify(report: AuditReport) -> frozenset:
    """Classification labels implied by the report's verdicts."""
    verdicts = report.verdicts
    missing = [c for c in CHECK_IDS if c not in verdicts]
    if missing:
        raise IncompleteReport(f"report lacks check(s): {', '.join(missing)}")
    return _labels(verdicts)


def _cross_checks(results: Mapping[str, CheckResult]) -> tuple[CrossCheck, ...]:
    def wits(*ids):
        return tuple({"check_id": i, **results[i].witness} for i in ids if results[i].witness is not None)

    g = results["gossen_concavity"].verdict
    f = results["factor_capital_monotonicity"].verdict
    syn = results["capital_synergy"].verdict
    d = results["diversification"].verdict
    sfv = results["synergy_fv"].verdict
    return (
        CrossCheck(
            "gossen_iff_capital_synergy",
            (g is Verdict.PASS) == (syn is Verdict.PASS),
            f"gossen_concavity={g.value}, capital_synergy={syn.value}",
            wits("gossen_concavity", "capital_synergy") if (g is Verdict.PASS) != (syn is Verdict.PASS) else (),
        ),
        CrossCheck(
            "gossen_matches_discount_factor_monotonicity",
            g is f,
            f"gossen_concavity={g.value}, factor_capital_monotonicity={f.value}",
            wits("gossen_concavity", "factor_capital_monotonicity") if g is not f else (),
        ),
        CrossCheck(
            "diversification_implies_fv_superadditivity",
            not (d is Verdict.PASS and sfv is not Verdict.PASS),
            f"diversification={d.value}, synergy_fv={sfv.value}",
            wits("synergy_fv") if d is Verdict.PASS and sfv is not Verdict.PASS else (),
        ),
    )


def describe_model(model: UtilityFunction) -> dict:
    if isinstance(model, UtilityModel):
        return model.describe()
    return {"family": type(model).__name__, "t_max": float(model.t_max)}


def audit(model: UtilityFunction, spec: DomainSpec | None = None) -> AuditReport:
    """Run every check, classify the model, and record the cross-check findings."""
    if spec is None:
        spec = DomainSpec.for_model(model)
    results = {cid: run_check(model, cid, spec) for cid in CHECK_IDS}
    return AuditReport(
        model=describe_model(model),
        domain=spec,
        checks=tuple(results[c] for c in CHECK_IDS),
        classification=_labels({k: r.verdict for k, r in results.items()}),
        cross_checks=_cross_checks(results),
    )
