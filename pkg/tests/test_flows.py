import pytest
from hypothesis import given, strategies as st

from utilflow.errors import DomainError, EmptyInvestment
from utilflow.flows import (
    FinancialFlow,
    Investment,
    PartialOrdering,
    combine,
    compare_flows,
    make_flow,
    portfolio_info,
    strictly_prefers,
    weakly_prefers,
)

FP = PartialOrdering.FIRST_PREFERRED
SP = PartialOrdering.SECOND_PREFERRED
IND = PartialOrdering.INDIFFERENT
INC = PartialOrdering.INCOMPARABLE

# small discrete pools make ties and equal coordinates common
moments = st.sampled_from([0.0, 0.5, 1.0, 2.0, 3.5])
receivables = st.builds(FinancialFlow, moments, st.sampled_from([0.0, 1.0, 7.0, 50.0, 100.0]))
liabilities = st.builds(FinancialFlow, moments, st.sampled_from([0.0, -1.0, -7.0, -50.0, -100.0]))
flows = st.one_of(receivables, liabilities)
investments = st.lists(flows, max_size=6).map(Investment)


def test_make_flow():
    f = make_flow(0, 100)
    assert (f.moment, f.amount) == (0.0, 100.0)
    g = make_flow(2.5, -40)
    assert g.is_liability and not g.is_receivable


@pytest.mark.parametrize("t, c", [(-1, 100), (float("nan"), 1), (1, float("inf")), (float("inf"), 1)])
def test_make_flow_rejects(t, c):
    with pytest.raises(DomainError):
        make_flow(t, c)


def test_zero_flow_is_both():
    f = make_flow(3, 0)
    assert f.is_receivable and f.is_liability


def test_negative_zero_normalised():
    assert make_flow(1, -0.0) == make_flow(1, 0.0)
    assert Investment([make_flow(1, -0.0)]) == Investment([make_flow(1, 0.0)])


@pytest.mark.parametrize(
    "a, b, expected",
    [
        ((1, 100), (2, 100), FP),
        ((1, 100), (2, 200), INC),
        ((3, 7), (3, 7), IND),
        ((1, -50), (2, -50), SP),
        ((5, 1), (0, -1), FP),
        ((1, 0), (4, 0), IND),
        ((2, 10), (2, 5), FP),
        ((2, -10), (1, -5), INC),
        ((2, -5), (1, -10), FP),
    ],
)
def test_compare_flows_examples(a, b, expected):
    assert compare_flows(make_flow(*a), make_flow(*b)) is expected


@given(flows)
def test_reflexive(a):
    assert compare_flows(a, a) is IND


@given(st.one_of(st.tuples(receivables, receivables, receivables), st.tuples(liabilities, liabilities, liabilities)))
def test_transitive_within_sign(abc):
    a, b, c = abc
    if weakly_prefers(a, b) and weakly_prefers(b, c):
        assert weakly_prefers(a, c)


@given(flows, flows, flows)
def test_transitive_across_signs(a, b, c):
    if weakly_prefers(a, b) and weakly_prefers(b, c):
        assert weakly_prefers(a, c)


@given(flows, flows)
def test_strict_part_antisymmetric(a, b):
    assert not (compare_flows(a, b) is FP and compare_flows(b, a) is FP)
    if compare_flows(a, b) is FP:
        assert compare_flows(b, a) is SP


@given(flows, flows)
def test_clause_form_matches_strict_part(a, b):
    derived = weakly_prefers(a, b) and not weakly_prefers(b, a)
    assert strictly_prefers(a, b) == derived


@given(liabilities, liabilities)
def test_liability_duality(a, b):
    mirrored = compare_flows(FinancialFlow(b.moment, -b.amount), FinancialFlow(a.moment, -a.amount))
    assert compare_flows(a, b) is mirrored


def test_combine_examples():
    x = Investment([make_flow(1, 100)])
    both = combine(x, x)
    assert both == Investment.from_counts({make_flow(1, 100): 2})
    assert len(both) == 2
    assert combine(x, Investment()) == x
    y = combine(Investment([make_flow(0, -5)]), Investment([make_flow(2, 9)]))
    assert y.items() == ((make_flow(0, -5), 1), (make_flow(2, 9), 1))


@given(investments, investments)
def test_combine_commutative_and_sized(x, y):
    assert combine(x, y) == combine(y, x)
    assert len(combine(x, y)) == len(x) + len(y)


@given(investments, investments, investments)
def test_combine_associative(x, y, z):
    assert combine(combine(x, y), z) == combine(x, combine(y, z))


@given(investments)
def test_empty_is_identity(x):
    assert combine(x, Investment()) == x == combine(Investment(), x)


@given(st.lists(flows, max_size=8), st.randoms())
def test_equality_ignores_insertion_order(fs, rnd):
    shuffled = list(fs)
    rnd.shuffle(shuffled)
    assert Investment(fs) == Investment(shuffled)
    assert hash(Investment(fs)) == hash(Investment(shuffled))


def test_from_counts_rejects_bad_multiplicity():
    with pytest.raises(DomainError):
        Investment.from_counts({make_flow(1, 1): 0})
    with pytest.raises(DomainError):
        Investment.from_counts({make_flow(1, 1): 1.5})


def test_portfolio_info():
    assert portfolio_info(Investment([make_flow(2, 50), make_flow(2, -20)])) == (2.0, 30.0)
    assert portfolio_info(Investment([make_flow(1, 10), make_flow(2, 10)])) is None
    triple = Investment.from_counts({make_flow(0, 7): 3})
    # enumerate members one by one
    assert portfolio_info(triple) == (0.0, sum(f.amount for f in triple))
    assert portfolio_info(triple).future_value == 21.0
    with pytest.raises(EmptyInvestment):
        portfolio_info(Investment())


@given(moments, st.lists(st.integers(-50, 50), min_size=1, max_size=5),
       st.lists(st.integers(-50, 50), min_size=1, max_size=5))
def test_portfolio_of_combination_adds(t, xs, ys):
    x = Investment(make_flow(t, a) for a in xs)
    y = Investment(make_flow(t, a) for a in ys)
    info = portfolio_info(combine(x, y))
    assert info == (t, portfolio_info(x).future_value + portfolio_info(y).future_value)


def test_iteration_repeats_multiplicity():
    x = Investment.from_counts({make_flow(0, 7): 3, make_flow(1, 2): 1})
    assert list(x) == [make_flow(0, 7)] * 3 + [make_flow(1, 2)]
    assert x.multiplicity(make_flow(0, 7)) == 3
    assert x.multiplicity(make_flow(5, 5)) == 0
