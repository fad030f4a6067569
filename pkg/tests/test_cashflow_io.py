import io
import json
import math

import pytest
from hypothesis import given, strategies as st

from utilflow.audit import DomainSpec, audit
from utilflow.cashflow_io import (
    CurveTable,
    FlowRecord,
    audit_from_dict,
    audit_to_dict,
    emit_curve,
    parse_investment,
    ranking_from_dict,
    ranking_to_dict,
    serialize_investment,
    write_report,
)
from utilflow.errors import DomainError, ParseError
from utilflow.flows import Investment, make_flow
from utilflow.valuation import ValuationResult, rank

from conftest import builtin_models


def test_parse_csv_examples():
    x = parse_investment(b"t,amount\n0,-100\n1,110", "csv")
    assert x == Investment([make_flow(0, -100), make_flow(1, 110)])
    y = parse_investment("t,amount\n1,100\n1,100\n", "csv")
    assert y == Investment.from_counts({make_flow(1, 100): 2})
    with pytest.raises(DomainError):
        parse_investment("t,amount\n-1,5", "csv")


def test_parse_csv_counts_and_streams():
    x = parse_investment(io.BytesIO(b"\xef\xbb\xbft,amount,count\n2,5,3\n2,5,1\n\n0, -1 ,1\n"), "csv")
    assert x.items() == ((make_flow(0, -1), 1), (make_flow(2, 5), 4))
    assert parse_investment("t,amount\n", "csv") == Investment()


@pytest.mark.parametrize(
    "text, line, field",
    [
        ("", 1, None),
        ("time,amount\n1,2", 1, None),
        ("t,amount\n1,abc", 2, "amount"),
        ("t,amount\n1,2\nx,3", 3, "t"),
        ("t,amount\n1,2,3", 2, None),
        ("t,amount,count\n1,2,1.5", 2, "count"),
        ("t,amount\n1,inf", 2, "amount"),
    ],
)
def test_parse_csv_errors_carry_locus(text, line, field):
    with pytest.raises(ParseError) as info:
        parse_investment(text, "csv")
    assert info.value.line == line
    assert info.value.field == field


def test_parse_csv_count_below_one():
    with pytest.raises(DomainError):
        parse_investment("t,amount,count\n1,2,0", "csv")


def test_parse_json():
    x = parse_investment(b'{"flows": [{"t": 0, "amount": -100, "count": 1}, {"t": 1, "amount": 110}]}', "json")
    assert x == Investment([make_flow(0, -100), make_flow(1, 110)])


@pytest.mark.parametrize(
    "text",
    [
        "{",
        "[]",
        '{"flows": 3}',
        '{"flows": [1]}',
        '{"flows": [{"t": 1}]}',
        '{"flows": [{"t": 1, "amount": "x"}]}',
        '{"flows": [{"t": 1, "amount": true}]}',
        '{"flows": [{"t": 1, "amount": 2, "extra": 0}]}',
        '{"flows": [{"t": 1, "amount": 2, "count": 1.5}]}',
    ],
)
def test_parse_json_errors(text):
    with pytest.raises(ParseError):
        parse_investment(text, "json")


def test_parse_rejects_bad_bytes_and_format():
    with pytest.raises(ParseError):
        parse_investment(b"t,amount\n\xff,1", "csv")
    with pytest.raises(ValueError):
        parse_investment("t,amount", "xml")


def test_flow_record_validation():
    assert FlowRecord(1.0, -2.0).count == 1
    for bad in ((-1, 1, 1), (1, math.nan, 1), (1, 1, 0), (1, 1, True)):
        with pytest.raises(DomainError):
            FlowRecord(*bad)


_flows = st.builds(make_flow, st.floats(0, 1e3), st.floats(-1e9, 1e9))
_investments = st.lists(_flows, max_size=10).map(Investment)


@given(_investments)
def test_json_round_trip(x):
    assert parse_investment(serialize_investment(x, "json"), "json") == x


@given(_investments)
def test_csv_round_trip(x):
    assert parse_investment(serialize_investment(x, "csv"), "csv") == x


def test_emit_curve_examples(classical_model):
    c = emit_curve(classical_model, 100, "pv", [0, 1, 2])
    assert c.rows[0] == (0.0, 100.0)
    assert math.isclose(c.rows[1][1], 90.909090909090909, rel_tol=1e-15)
    assert math.isclose(c.rows[2][1], 82.644628099173553719, rel_tol=1e-15)
    for m in builtin_models():
        assert emit_curve(m, -3.5, "fv", [0, 1]).rows[0] == (0.0, -3.5)


def test_emit_curve_liability_magnitude(capital_model):
    grid = [i / 4 for i in range(21)]
    pos = emit_curve(capital_model, 100, "pv", grid)
    neg = emit_curve(capital_model, -100, "pv", grid)
    for (_, p), (_, n) in zip(pos.rows, neg.rows):
        assert abs(n) <= p


def test_emit_curve_direction(any_model):
    grid = [any_model.t_max * i / 10 for i in range(11)]
    for amount in (250.0, -250.0):
        s = 1 if amount > 0 else -1
        pv = [v for _, v in emit_curve(any_model, amount, "pv", grid).rows]
        fv = [v for _, v in emit_curve(any_model, amount, "fv", grid).rows]
        assert all(s * (b - a) < 0 for a, b in zip(pv, pv[1:]))
        assert all(s * (b - a) > 0 for a, b in zip(fv, fv[1:]))


@pytest.mark.parametrize("amount, kind, grid", [(0, "pv", [0, 1]), (1, "pv", [1, 2]), (1, "xx", [0]), (1, "pv", [0, 2, 1])])
def test_emit_curve_errors(classical_model, amount, kind, grid):
    with pytest.raises(DomainError):
        emit_curve(classical_model, amount, kind, grid)


@pytest.fixture(scope="module")
def classical_report():
    m = builtin_models()[0]
    return audit(m, DomainSpec.for_model(m, samples=200))


def test_audit_json(classical_report):
    raw = write_report(classical_report, "json")
    doc = json.loads(raw)
    assert "DiversificationNeutral" in doc["classification"]
    assert raw == write_report(classical_report, "json")
    assert audit_from_dict(doc) == classical_report
    assert audit_to_dict(audit_from_dict(doc)) == doc


def test_audit_round_trip_with_failures(capital_model):
    r = audit(capital_model, DomainSpec.for_model(capital_model, samples=100))
    assert audit_from_dict(json.loads(write_report(r, "json"))) == r


def test_audit_text(classical_report):
    text = write_report(classical_report, "text").decode()
    assert "domain.samples: 200" in text
    assert "classification: DiversificationNeutral, PeccatiClassical, VariantA, VariantB" in text
    assert "additivity_neutrality" in text and "witnesses:" in text
    assert "gossen_iff_capital_synergy: consistent" in text


def test_ranking_serialization(classical_model):
    r = rank(classical_model, [("solo", Investment([make_flow(1, 11)]))])
    doc = json.loads(write_report(r, "json"))
    assert doc["ranking"] == [{"id": "solo", "npv": 10.000000000000002}] or len(doc["ranking"]) == 1
    assert ranking_from_dict(doc) == r
    assert ranking_to_dict(r) == doc
    text = write_report(r, "text").decode().splitlines()
    assert len(text) == 3 and text[1].split()[-1] == "solo"


def test_valuation_and_curve_reports(classical_model):
    assert write_report(ValuationResult(110.00000000000001, 1e-10), "text") == "110 ± 1e-10\n".encode()
    assert json.loads(write_report(ValuationResult(0.1, 0), "json")) == {"value": 0.1, "abs_tolerance": 0}
    c = emit_curve(classical_model, 100, "pv", [0, 1])
    assert write_report(c, "text").decode().splitlines()[:2] == ["t\tpv", "0\t100"]
    assert json.loads(write_report(c, "json"))["rows"][0] == [0.0, 100.0]


def test_lossless_floats():
    v = 0.1 + 0.2
    assert json.loads(write_report(ValuationResult(v), "json"))["value"] == v


def test_write_report_rejects():
    with pytest.raises(ValueError):
        write_report(ValuationResult(1.0), "xml")
    with pytest.raises(TypeError):
        write_report(object(), "json")


def test_curve_table_validates():
    with pytest.raises(DomainError):
        CurveTable("pv", 1.0, ((1.0, 1.0),))
