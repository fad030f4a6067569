"""Reading investments, writing reports, and tabulating value curves.

CSV investments have the header ``t,amount[,count]`` (UTF-8, ``.`` decimal
point, no thousands separators). JSON investments look like::

    {"flows": [{"t": 0, "amount": -100, "count": 1}, ...]}

``count`` defaults to 1; duplicate ``(t, amount)`` rows merge by adding counts.
Floats are written in shortest round-trip form, which reproduces every double
exactly on reading.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from typing import IO, Iterable, Sequence, Union

from .audit import AuditReport, CheckResult, CrossCheck, DomainSpec, Verdict
from .errors import DomainError, ParseError
from .flows import FinancialFlow, Investment
from .models import UtilityFunction
from .valuation import Ranking, RankEntry, ValuationResult, future_value, utility


@dataclass(frozen=True)
class FlowRecord:
    t: float
    amount: float
    count: int = 1

    def __post_init__(self) -> None:
        if not (math.isfinite(self.t) and math.isfinite(self.amount)):
            raise DomainError("flow record fields must be finite")
        if self.t < 0:
            raise DomainError(f"flow moment must be >= 0, got {self.t!r}")
        if isinstance(self.count, bool) or not isinstance(self.count, int) or self.count < 1:
            raise DomainError(f"count must be an integer >= 1, got {self.count!r}")


def _as_text(data: Union[bytes, str, IO]) -> str:
    if hasattr(data, "read"):
        data = data.read()
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8-sig")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not valid UTF-8: {exc}") from None
    return data


def _number(text: str, line: int, name: str) -> float:
    try:
        value = float(text.strip())
    except ValueError:
        raise ParseError(f"not a number: {text!r}", line, name) from None
    if not math.isfinite(value):
        raise ParseError(f"non-finite value {text!r}", line, name)
    return value


def _count(raw, line: int) -> int:
    if isinstance(raw, bool):
        raise ParseError(f"count must be an integer, got {raw!r}", line, "count")
    if isinstance(raw, int):
        return raw
    if isinstance(raw, float):
        if raw.is_integer():
            return int(raw)
        raise ParseError(f"count must be an integer, got {raw!r}", line, "count")
    try:
        return int(str(raw).strip())
    except ValueError:
        raise ParseError(f"count must be an integer, got {raw!r}", line, "count") from None


def _records_to_investment(records: Iterable[FlowRecord]) -> Investment:
    return Investment.from_counts([(FinancialFlow(r.t, r.amount), r.count) for r in records])


def _record(t: float, amount: float, count: int, line: int) -> FlowRecord:
    try:
        return FlowRecord(t, amount, count)
    except DomainError as exc:
        raise DomainError(f"{exc} (line {line})") from None


def parse_csv_records(text: str) -> list[FlowRecord]:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        raise ParseError("empty CSV input", 1)
    header = [h.strip() for h in rows[0]]
    if header not in (["t", "amount"], ["t", "amount", "count"]):
        raise ParseError(f"expected header t,amount[,count], got {','.join(header)!r}", 1)
    records = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != len(header):
            raise ParseError(f"expected {len(header)} fields, got {len(row)}", lineno)
        t = _number(row[0], lineno, "t")
        amount = _number(row[1], lineno, "amount")
        count = _count(row[2], lineno) if len(header) == 3 else 1
        records.append(_record(t, amount, count, lineno))
    return records


def parse_json_records(text: str) -> list[FlowRecord]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno) from None
    if not isinstance(doc, dict) or not isinstance(doc.get("flows"), list):
        raise ParseError('expected an object with a "flows" array', field="flows")
    records = []
    for i, item in enumerate(doc["flows"]):
        where = f"flows[{i}]"
        if not isinstance(item, dict):
            raise ParseError(f"{where} must be an object", field=where)
        extra = set(item) - {"t", "amount", "count"}
        if extra:
            raise ParseError(f"{where} has unknown key(s) {sorted(extra)}", field=where)
        values = {}
        for key in ("t", "amount"):
            if key not in item:
                raise ParseError(f"{where} lacks {key!r}", field=f"{where}.{key}")
            v = item[key]
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                raise ParseError(f"{where}.{key} must be a finite number", field=f"{where}.{key}")
            values[key] = float(v)
        count = _count(item.get("count", 1), i + 1)
        try:
            records.append(FlowRecord(values["t"], values["amount"], count))
        except DomainError as exc:
            raise DomainError(f"{exc} ({where})") from None
    return records


def parse_investment(data: Union[bytes, str, IO], format: str = "csv") -> Investment:
    """Parse an investment from CSV or JSON bytes/text/stream.

    Raises :class:`ParseError` for malformed input and :class:`DomainError`
    for a negative moment or a count below 1.
    """
    text = _as_text(data)
    if format == "csv":
        return _records_to_investment(parse_csv_records(text))
    if format == "json":
        return _records_to_investment(parse_json_records(text))
    raise ValueError(f"unknown investment format {format!r}")


def serialize_investment(x: Investment, format: str = "json") -> bytes:
    if format == "json":
        doc = {"flows": [{"t": f.moment, "amount": f.amount, "count": n} for f, n in x.items()]}
        return (json.dumps(doc, indent=2) + "\n").encode("utf-8")
    if format == "csv":
        out = io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["t", "amount", "count"])
        for f, n in x.items():
            w.writerow([repr(f.moment), repr(f.amount), n])
        return out.getvalue().encode("utf-8")
    raise ValueError(f"unknown investment format {format!r}")


@dataclass(frozen=True)
class CurveTable:
    kind: str
    amount: float
    rows: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        ts = [t for t, _ in self.rows]
        if not ts or ts[0] != 0.0:
            raise DomainError("curve grid must start at t = 0")
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise DomainError("curve grid must be strictly increasing")


def emit_curve(model: UtilityFunction, amount: float, kind: str, t_grid: Sequence[float]) -> CurveTable:
    """Tabulate ``PV(t, amount)`` or ``FV(t, amount)`` over ``t_grid`` (which must start at 0)."""
    amount = float(amount)
    if not math.isfinite(amount) or amount == 0:
        raise DomainError("curve amount must be finite and non-zero")
    if kind not in ("pv", "fv"):
        raise DomainError(f"curve kind must be 'pv' or 'fv', got {kind!r}")
    ts = [float(t) for t in t_grid]
    if not ts or ts[0] != 0.0:
        raise DomainError("curve grid must start at t = 0")
    if kind == "pv":
        rows = tuple((t, utility(model, t, amount)) for t in ts)
    else:
        rows = tuple((t, future_value(model, t, amount).value) for t in ts)
    return CurveTable(kind, amount, rows)


# --------------------------------------------------------------------------
# report serialization


def audit_to_dict(report: AuditReport) -> dict:
    return {
        "model": dict(report.model),
        "domain": report.domain.describe(),
        "checks": [
            {
                "check_id": c.check_id,
                "verdict": c.verdict.value,
                "instances": c.instances,
                "min_margin": c.min_margin,
                "witness": dict(c.witness) if c.witness is not None else None,
            }
            for c in report.checks
        ],
        "classification": sorted(report.classification),
        "cross_checks": [
            {
                "name": x.name,
                "consistent": x.consistent,
                "detail": x.detail,
                "witnesses": [dict(w) for w in x.witnesses],
            }
            for x in report.cross_checks
        ],
    }


def audit_from_dict(doc: dict) -> AuditReport:
    d = doc["domain"]
    return AuditReport(
        model=doc["model"],
        domain=DomainSpec(
            t_grid=tuple(d["t_grid"]),
            c_grid=tuple(d["c_grid"]),
            samples=d["samples"],
            seed=d["seed"],
            eps_strict=d["eps_strict"],
            eps_eq=d["eps_eq"],
        ),
        checks=tuple(
            CheckResult(c["check_id"], Verdict(c["verdict"]), c["witness"], c["instances"], c["min_margin"])
            for c in doc["checks"]
        ),
        classification=frozenset(doc["classification"]),
        cross_checks=tuple(
            CrossCheck(x["name"], x["consistent"], x["detail"], tuple(x["witnesses"]))
            for x in doc["cross_checks"]
        ),
    )


def ranking_to_dict(ranking: Ranking) -> dict:
    return {
        "ranking": [{"id": str(e.id), "npv": e.npv} for e in ranking.entries],
        "classes": [[str(i) for i in cls] for cls in ranking.classes],
        "eps_eq": ranking.eps_eq,
    }


def ranking_from_dict(doc: dict) -> Ranking:
    return Ranking(
        tuple(RankEntry(e["id"], e["npv"]) for e in doc["ranking"]),
        tuple(tuple(c) for c in doc["classes"]),
        doc["eps_eq"],
    )


def _fmt(x: float | None) -> str:
    if x is None:
        return "-"
    return format(x, ".12g")


def _audit_text(report: AuditReport) -> str:
    lines = ["# utility model audit", ""]
    for k, v in report.model.items():
        lines.append(f"model.{k}: {v}")
    d = report.domain
    lines += [
        f"domain.t: [{_fmt(d.t_grid[0])}, {_fmt(d.t_grid[-1])}] ({len(d.t_grid)} grid points)",
        f"domain.c_grid: {', '.join(_fmt(c) for c in d.c_grid)}",
        f"domain.samples: {d.samples}",
        f"domain.seed: {d.seed}",
        f"domain.eps_strict: {_fmt(d.eps_strict)}",
        f"domain.eps_eq: {_fmt(d.eps_eq)}",
        "note: verdicts certify the sampled domain only",
        "",
        f"{'check':<30} {'verdict':<9} {'instances':>9}  min_margin",
    ]
    for c in report.checks:
        lines.append(f"{c.check_id:<30} {c.verdict.value:<9} {c.instances:>9}  {_fmt(c.min_margin)}")
    lines += ["", "classification: " + (", ".join(sorted(report.classification)) or "(none)"), ""]
    lines.append("cross-checks:")
    for x in report.cross_checks:
        state = "consistent" if x.consistent else "INCONSISTENT"
        lines.append(f"  {x.name}: {state} ({x.detail})")
    witnessed = [c for c in report.checks if c.witness is not None]
    if witnessed:
        lines += ["", "witnesses:"]
        keys = sorted({k for c in witnessed for k in c.witness if k not in ("relation", "requirement")})
        lines.append("  " + "\t".join(["check", "verdict", "relation", "requirement"] + keys))
        for c in witnessed:
            w = c.witness
            cells = [c.check_id, c.verdict.value, w["relation"], w["requirement"]]
            cells += [_fmt(w[k]) if k in w else "" for k in keys]
            lines.append("  " + "\t".join(cells))
    return "\n".join(lines) + "\n"


def _ranking_text(r: Ranking) -> str:
    lines = [f"{'rank':>4}  {'class':>5}  {'npv':>20}  id"]
    cls_of = {i: n for n, cls in enumerate(r.classes, 1) for i in cls}
    for pos, e in enumerate(r.entries, 1):
        lines.append(f"{pos:>4}  {cls_of[e.id]:>5}  {_fmt(e.npv):>20}  {e.id}")
    lines.append(f"equivalence tolerance: {_fmt(r.eps_eq)}")
    return "\n".join(lines) + "\n"


def write_report(
    report: Union[AuditReport, Ranking, ValuationResult, CurveTable], format: str = "json"
) -> bytes:
    """Serialize a report deterministically as JSON or human-readable text."""
    if format not in ("json", "text"):
        raise ValueError(f"unknown report format {format!r}")
    if isinstance(report, AuditReport):
        if format == "text":
            return _audit_text(report).encode("utf-8")
        doc = audit_to_dict(report)
    elif isinstance(report, Ranking):
        if format == "text":
            return _ranking_text(report).encode("utf-8")
        doc = ranking_to_dict(report)
    elif isinstance(report, ValuationResult):
        if format == "text":
            return f"{_fmt(report.value)} ± {report.abs_tolerance:.3g}\n".encode("utf-8")
        doc = {"value": report.value, "abs_tolerance": report.abs_tolerance}
    elif isinstance(report, CurveTable):
        if format == "text":
            body = "\n".join(f"{_fmt(t)}\t{_fmt(v)}" for t, v in report.rows)
            return f"t\t{report.kind}\n{body}\n".encode("utf-8")
        doc = {"kind": report.kind, "amount": report.amount, "rows": [list(r) for r in report.rows]}
    else:
        raise TypeError(f"cannot serialize {type(report).__name__}")
    return (json.dumps(doc, indent=2) + "\n").encode("utf-8")
