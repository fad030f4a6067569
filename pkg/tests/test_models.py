import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from utilflow.errors import DomainError, ParamError
from utilflow.flows import PartialOrdering, compare_flows, make_flow
from utilflow.models import (
    CapitalAwareParams,
    ClassicalParams,
    Family,
    HyperbolicParams,
    UtilityFunction,
    UtilityModel,
    capital_aware,
    classical,
    evaluate,
    hyperbolic,
    load_model_spec,
    parse_model_spec,
    validate_params,
)

from conftest import builtin_models

EPS = 1e-9


def test_evaluate_examples(classical_model, capital_model):
    assert evaluate(classical_model, 0, 250) == 250
    assert evaluate(classical_model, 1, 110) == 100
    # mpmath reference at 40 digits
    assert math.isclose(evaluate(capital_model, 1, 100), 88.75284355797368829, rel_tol=1e-15)
    assert math.isclose(evaluate(capital_model, 1, 100), 100 * math.exp(-(0.05 + 0.1 * math.log(2))), rel_tol=1e-15)
    for m in builtin_models():
        assert evaluate(m, 3, 0) == 0


@pytest.mark.parametrize("t", [-0.1, 10.5, float("nan"), float("inf")])
def test_evaluate_rejects_moment(classical_model, t):
    with pytest.raises(DomainError):
        evaluate(classical_model, t, 1)


def test_models_satisfy_protocol(any_model):
    assert isinstance(any_model, UtilityFunction)


def test_validate_params_examples():
    m = validate_params(Family.CAPITAL_AWARE, CapitalAwareParams(0.05, 0.1, 100, 0.02), 5)
    assert m.family is Family.CAPITAL_AWARE
    with pytest.raises(ParamError, match="beta"):
        validate_params("capital_aware", CapitalAwareParams(0.05, 0.3, 100, 0.0), 5)
    with pytest.raises(ParamError):
        validate_params(Family.CLASSICAL, ClassicalParams(-0.05), 5)


def _raw_capital_aware(t, c, d0, beta, kappa, lam):
    return c * math.exp(-t * (d0 + beta * math.log1p(abs(c) / kappa) + lam * (c < 0)))


def test_rejected_beta_really_breaks_capital_monotonicity():
    # beta * t = 1.5 > 1: utility eventually falls as capital grows
    u = [_raw_capital_aware(5, c, 0.05, 0.3, 100, 0) for c in (1e3, 1e4, 1e5)]
    assert u[2] < u[1] < u[0]


@pytest.mark.parametrize(
    "family, params, t_max",
    [
        (Family.CLASSICAL, ClassicalParams(0.0), 5),
        (Family.HYPERBOLIC, HyperbolicParams(-1.0), 5),
        (Family.HYPERBOLIC, HyperbolicParams(float("nan")), 5),
        (Family.CAPITAL_AWARE, CapitalAwareParams(0.0, 0.1, 100, 0), 5),
        (Family.CAPITAL_AWARE, CapitalAwareParams(0.05, -0.1, 100, 0), 5),
        (Family.CAPITAL_AWARE, CapitalAwareParams(0.05, 0.1, 0, 0), 5),
        (Family.CAPITAL_AWARE, CapitalAwareParams(0.05, 0.1, 100, -0.01), 5),
        (Family.CAPITAL_AWARE, CapitalAwareParams(0.05, 0.2, 100, 0), 5),
        (Family.CLASSICAL, ClassicalParams(0.1), 0),
        (Family.CLASSICAL, ClassicalParams(0.1), float("inf")),
        (Family.CLASSICAL, HyperbolicParams(0.1), 5),
    ],
)
def test_invalid_params(family, params, t_max):
    with pytest.raises(ParamError):
        UtilityModel(family, params, t_max)


def _grid(model, n=50):
    ts = np.linspace(0, model.t_max, n)
    cs = np.concatenate([-np.logspace(4, -2, n // 2), np.logspace(-2, 4, n - n // 2)])
    return ts, np.sort(cs)


def test_invariant_grid(any_model):
    m = any_model
    ts, cs = _grid(m)
    U = np.array([[evaluate(m, t, c) for c in cs] for t in ts])
    assert np.array_equal(U[0], cs)  # U(0, C) = C
    assert all(evaluate(m, t, 0.0) == 0.0 for t in ts)
    assert np.array_equal(np.sign(U), np.sign(np.broadcast_to(cs, U.shape)))
    scale = np.maximum(1.0, np.abs(U))
    # strictly increasing in capital
    assert (np.diff(U, axis=1) > EPS * np.minimum(scale[:, 1:], scale[:, :-1])).all()
    # strictly monotone in time, direction by sign; tiny amounts only need a sign
    dt = np.diff(U, axis=0) * np.sign(cs)
    big = np.abs(cs) >= 1
    assert (-dt[:, big] > EPS * scale[1:, big]).all()
    assert (-dt[:, cs != 0] > 0).all()


def test_time_strictness_margin(any_model):
    # separation by margin on the grid where amounts are meaningful (|C| >= 1)
    m = any_model
    ts = np.linspace(0, m.t_max, 50)
    for c in (1.0, 37.0, 1e3, 1e4, -1.0, -37.0, -1e4):
        u = np.array([evaluate(m, t, c) for t in ts])
        d = np.diff(u) * np.sign(c)
        assert (-d > EPS * np.maximum(1, np.abs(u[1:]))).all()


def test_zero_beta_lambda_is_continuous_compounding():
    m = capital_aware(0.07, 0.0, 50, 0.0, t_max=8)
    rng = np.random.default_rng(3)
    for t, c in zip(rng.uniform(0, 8, 500), rng.uniform(-1e4, 1e4, 500)):
        assert math.isclose(evaluate(m, t, c), c * math.exp(-0.07 * t), rel_tol=1e-12)


@settings(max_examples=300)
@given(st.floats(0.01, 5), st.floats(0, 1e4), st.floats(0, 1e4), st.floats(0.01, 0.99))
def test_capital_aware_concave_on_receivables(t, c1, c2, a):
    m = capital_aware(0.05, 0.19, 100, 0.02, t_max=5)
    mix = evaluate(m, t, a * c1 + (1 - a) * c2)
    chord = a * evaluate(m, t, c1) + (1 - a) * evaluate(m, t, c2)
    assert mix >= chord - 1e-12 * max(1.0, abs(mix))


def test_capital_aware_midpoint_strict():
    m = capital_aware(0.05, 0.1, 100, 0.02, t_max=5)
    for t in (0.5, 1, 5):
        for c1, c2 in ((1, 100), (10, 1e4), (100, 200)):
            mid = evaluate(m, t, (c1 + c2) / 2)
            chord = (evaluate(m, t, c1) + evaluate(m, t, c2)) / 2
            assert mid - chord > EPS * max(1, mid)


# moments in thousandths of a year and amounts in cents: preferences between
# flows closer than float resolution cannot be reflected by any utility
_moments = st.integers(0, 5000).map(lambda n: n / 1000)
_amounts = st.integers(-10**6, 10**6).map(lambda n: n / 100)


@settings(max_examples=500)
@given(_moments, _amounts, _moments, _amounts)
def test_utility_respects_preorder(t1, c1, t2, c2):
    a, b = make_flow(t1, c1), make_flow(t2, c2)
    rel = compare_flows(a, b)
    for m in builtin_models():
        ua, ub = evaluate(m, t1, c1), evaluate(m, t2, c2)
        if rel is PartialOrdering.FIRST_PREFERRED:
            assert ua > ub
        elif rel is PartialOrdering.INDIFFERENT:
            assert ua == ub


def test_parse_model_spec():
    m = parse_model_spec("family=capital_aware delta0=0.05 beta=0.1 kappa=100 lambda=0.02 t_max=5")
    assert m == capital_aware(0.05, 0.1, 100, 0.02, t_max=5)
    assert parse_model_spec("family=classical r=0.1") == classical(0.1)
    assert parse_model_spec("# comment\nfamily=hyperbolic\nk=0.3  # rate\n t_max=4\n") == hyperbolic(0.3, 4)
    assert parse_model_spec("family=capital_aware delta0=0.05 beta=0.1 kappa=100 t_max=5").params.lam == 0.0


def test_spec_round_trip(any_model):
    assert parse_model_spec(any_model.to_spec()) == any_model


@pytest.mark.parametrize(
    "text",
    [
        "r=0.1",
        "family=bogus r=0.1",
        "family=classical",
        "family=classical r=0.1 k=2",
        "family=classical r=0.1 r=0.2",
        "family=classical r",
        "family=classical r=abc",
        "family=classical r=nan",
        "family=capital_aware delta0=0.05 beta=0.3 kappa=100 lambda=0 t_max=5",
    ],
)
def test_parse_model_spec_errors(text):
    with pytest.raises(ParamError):
        parse_model_spec(text)


def test_load_model_spec(tmp_path):
    p = tmp_path / "m.cfg"
    p.write_text("family=classical\nr=0.1\n")
    assert load_model_spec(p) == classical(0.1)
