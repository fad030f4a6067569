"""Financial-flow utility models.

A utility model maps a flow ``(t, C)`` to a real number ``U(t, C)`` that is

* calibrated so ``U(0, C) == C`` and ``U(t, 0) == 0``,
* strictly increasing in ``C`` at every fixed ``t``,
* strictly decreasing in ``t`` for receivables and increasing for liabilities,
* sign-preserving.

Three built-in families are provided:

``classical``
    ``U = C * (1 + r) ** -t``: annual compounding, capital-linear.
``hyperbolic``
    ``U = C / (1 + k t)``: hyperbolic time preference, still capital-linear.
``capital_aware``
    ``U = C * exp(-t * (delta0 + beta * ln(1 + |C|/kappa) + lam * [C < 0]))``.
    Larger receivables are discounted harder (``beta``) and liabilities carry
    an extra rate ``lam``. ``beta * t_max < 1`` is required, otherwise the
    utility stops being increasing in ``C`` for large amounts.

Anything with a ``t_max`` attribute and an ``evaluate(t, c)`` method satisfies
the :class:`UtilityFunction` protocol and can be valued and audited; only the
built-in families get the compiled kernels.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Protocol, Union, runtime_checkable

from . import kernels
from .errors import DomainError, ParamError

DEFAULT_T_MAX = 10.0


class Family(str, enum.Enum):
    CLASSICAL = "classical"
    HYPERBOLIC = "hyperbolic"
    CAPITAL_AWARE = "capital_aware"


@dataclass(frozen=True)
class ClassicalParams:
    r: float


@dataclass(frozen=True)
class HyperbolicParams:
    k: float


@dataclass(frozen=True)
class CapitalAwareParams:
    delta0: float
    beta: float
    kappa: float
    lam: float = 0.0


ModelParams = Union[ClassicalParams, HyperbolicParams, CapitalAwareParams]

_PARAM_TYPES = {
    Family.CLASSICAL: ClassicalParams,
    Family.HYPERBOLIC: HyperbolicParams,
    Family.CAPITAL_AWARE: CapitalAwareParams,
}
_KERNEL_CODES = {
    Family.CLASSICAL: kernels.CLASSICAL,
    Family.HYPERBOLIC: kernels.HYPERBOLIC,
    Family.CAPITAL_AWARE: kernels.CAPITAL_AWARE,
}


@runtime_checkable
class UtilityFunction(Protocol):
    """The in-process model contract accepted by valuation and audit."""

    t_max: float

    def evaluate(self, t: float, c: float) -> float: ...


def _finite(name: str, value: float) -> float:
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise ParamError(f"{name} must be a real number, got {value!r}") from None
    if not math.isfinite(value):
        raise ParamError(f"{name} must be finite, got {value!r}")
    return value


def _check(family: Family, params: ModelParams, t_max: float) -> None:
    if not isinstance(params, _PARAM_TYPES[family]):
        raise ParamError(
            f"family {family.value!r} needs {_PARAM_TYPES[family].__name__}, "
            f"got {type(params).__name__}"
        )
    for name, value in vars(params).items():
        _finite(name, value)
    if not t_max > 0:
        raise ParamError(f"t_max must be > 0, got {t_max!r}")
    if family is Family.CLASSICAL:
        if not params.r > 0:
            raise ParamError(f"r must be > 0, got {params.r!r}")
    elif family is Family.HYPERBOLIC:
        if not params.k > 0:
            raise ParamError(f"k must be > 0, got {params.k!r}")
    else:
        if not params.delta0 > 0:
            raise ParamError(f"delta0 must be > 0, got {params.delta0!r}")
        if not params.beta >= 0:
            raise ParamError(f"beta must be >= 0, got {params.beta!r}")
        if not params.kappa > 0:
            raise ParamError(f"kappa must be > 0, got {params.kappa!r}")
        if not params.lam >= 0:
            raise ParamError(f"lambda must be >= 0, got {params.lam!r}")
        if not params.beta * t_max < 1:
            raise ParamError(
                f"beta * t_max must be < 1 for utility to increase with capital, "
                f"got {params.beta!r} * {t_max!r} = {params.beta * t_max!r}"
            )


@dataclass(frozen=True)
class UtilityModel:
    """A validated built-in utility model. Construction raises :class:`ParamError` on bad input."""

    family: Family
    params: ModelParams
    t_max: float = DEFAULT_T_MAX
    _kernel: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        try:
            family = Family(self.family)
        except ValueError:
            raise ParamError(f"unknown model family {self.family!r}") from None
        object.__setattr__(self, "family", family)
        object.__setattr__(self, "t_max", _finite("t_max", self.t_max))
        _check(family, self.params, self.t_max)
        p = self.params
        if family is Family.CAPITAL_AWARE:
            flat = (float(p.delta0), float(p.beta), float(p.kappa), float(p.lam))
        elif family is Family.CLASSICAL:
            flat = (float(p.r), 0.0, 0.0, 0.0)
        else:
            flat = (float(p.k), 0.0, 0.0, 0.0)
        object.__setattr__(self, "_kernel", (_KERNEL_CODES[family], flat))

    @property
    def kernel_code(self) -> int:
        return self._kernel[0]

    @property
    def kernel_params(self) -> tuple[float, float, float, float]:
        return self._kernel[1]

    def check_moment(self, t: float) -> float:
        t = float(t)
        if not math.isfinite(t) or t < 0 or t > self.t_max:
            raise DomainError(f"moment {t!r} outside [0, {self.t_max!r}]")
        return t

    def evaluate(self, t: float, c: float) -> float:
        return evaluate(self, t, c)

    def to_spec(self) -> str:
        """Inverse of :func:`parse_model_spec`."""
        parts = [f"family={self.family.value}"]
        for name, value in vars(self.params).items():
            parts.append(f"{'lambda' if name == 'lam' else name}={value!r}")
        parts.append(f"t_max={self.t_max!r}")
        return " ".join(parts)

    def describe(self) -> dict:
        d = {"family": self.family.value}
        for name, value in vars(self.params).items():
            d["lambda" if name == "lam" else name] = value
        d["t_max"] = self.t_max
        return d


def evaluate(model: UtilityModel, t: float, c: float) -> float:
    """``U(t, c)`` for a built-in model; ``t`` must lie in ``[0, model.t_max]``."""
    t = model.check_moment(t)
    c = float(c)
    if not math.isfinite(c):
        raise DomainError(f"nominal value must be finite, got {c!r}")
    code, p = model._kernel
    return kernels.utility(code, p[0], p[1], p[2], p[3], t, c)


def validate_params(family: Family | str, params: ModelParams, t_max: float = DEFAULT_T_MAX) -> UtilityModel:
    return UtilityModel(family, params, t_max)


def classical(r: float, t_max: float = DEFAULT_T_MAX) -> UtilityModel:
    return UtilityModel(Family.CLASSICAL, ClassicalParams(r), t_max)


def hyperbolic(k: float, t_max: float = DEFAULT_T_MAX) -> UtilityModel:
    return UtilityModel(Family.HYPERBOLIC, HyperbolicParams(k), t_max)


def capital_aware(
    delta0: float, beta: float, kappa: float, lam: float = 0.0, t_max: float = DEFAULT_T_MAX
) -> UtilityModel:
    return UtilityModel(Family.CAPITAL_AWARE, CapitalAwareParams(delta0, beta, kappa, lam), t_max)


_SPEC_KEYS = {
    Family.CLASSICAL: {"r": "r"},
    Family.HYPERBOLIC: {"k": "k"},
    Family.CAPITAL_AWARE: {"delta0": "delta0", "beta": "beta", "kappa": "kappa", "lambda": "lam"},
}
_FAMILY_ALIASES = {
    "classical": Family.CLASSICAL,
    "classical_compound": Family.CLASSICAL,
    "hyperbolic": Family.HYPERBOLIC,
    "hyperbolic_neutral": Family.HYPERBOLIC,
    "capital_aware": Family.CAPITAL_AWARE,
}


def parse_model_spec(text: str) -> UtilityModel:
    """Parse ``key=value`` pairs separated by whitespace or newlines.

    ``#`` starts a comment. Example::

        family=capital_aware delta0=0.05 beta=0.1 kappa=100 lambda=0.02 t_max=5
    """
    pairs: dict[str, str] = {}
    for line in text.splitlines():
        line = line.split("#", 1)[0]
        for token in line.split():
            key, sep, value = token.partition("=")
            if not sep or not key or not value:
                raise ParamError(f"expected key=value, got {token!r}")
            if key in pairs:
                raise ParamError(f"duplicate key {key!r}")
            pairs[key] = value
    if "family" not in pairs:
        raise ParamError("model spec needs family=<classical|hyperbolic|capital_aware>")
    family = _FAMILY_ALIASES.get(pairs.pop("family").lower())
    if family is None:
        raise ParamError(f"unknown model family; expected one of {sorted(_FAMILY_ALIASES)}")
    t_max = _finite("t_max", pairs.pop("t_max")) if "t_max" in pairs else DEFAULT_T_MAX
    keys = _SPEC_KEYS[family]
    unknown = sorted(set(pairs) - set(keys))
    if unknown:
        raise ParamError(f"unknown parameter(s) for {family.value}: {', '.join(unknown)}")
    kwargs = {}
    for key, attr in keys.items():
        if key in pairs:
            kwargs[attr] = _finite(key, pairs[key])
        elif not (family is Family.CAPITAL_AWARE and key == "lambda"):
            raise ParamError(f"missing parameter {key!r} for {family.value}")
    return UtilityModel(family, _PARAM_TYPES[family](**kwargs), t_max)


def load_model_spec(path: str | Path) -> UtilityModel:
    return parse_model_spec(Path(path).read_text(encoding="utf-8"))
