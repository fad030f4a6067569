"""``utilflow`` command-line front end.

Exit status: 0 on success, 1 on domain/parameter/parse errors (including bad
usage), 2 when a numeric inversion fails to converge. Results go to stdout,
diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__
from .audit import DomainSpec, audit
from .cashflow_io import emit_curve, parse_investment, write_report
from .errors import ConvergenceError, UtilflowError
from .flows import make_flow
from .models import load_model_spec, parse_model_spec
from .valuation import ValuationResult, equivalent_flow, future_value, npv, present_value, rank


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit 2, which is reserved for convergence
        raise _UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="utilflow", description="Utility-based present/future value, NPV and model audit.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--model", help='inline model spec, e.g. "family=classical r=0.1"')
    p.add_argument("--model-file", type=Path, help="model spec file, one key=value per line")
    p.add_argument("--json", action="store_true", help="machine-readable JSON output")
    p.add_argument("--seed", type=int, default=0, help="audit sampling seed (default 0)")
    p.add_argument("--samples", type=int, default=2000, help="random instances per audit check")
    p.add_argument("--t-points", type=int, default=21, help="audit moment-grid size")
    p.add_argument("--c-grid", help="comma-separated audit amount grid (must include 0)")
    sub = p.add_subparsers(dest="command", metavar="COMMAND", required=True)

    s = sub.add_parser("pv", help="present value of a flow")
    s.add_argument("t", type=float)
    s.add_argument("amount", type=float)

    s = sub.add_parser("fv", help="future value of an immediate amount")
    s.add_argument("t", type=float)
    s.add_argument("amount", type=float)

    s = sub.add_parser("npv", help="net present value of an investment file")
    s.add_argument("file", type=Path)
    s.add_argument("--format", choices=("csv", "json"), help="input format (default: from suffix)")

    s = sub.add_parser("rank", help="rank investment files by NPV")
    s.add_argument("files", type=Path, nargs="+")
    s.add_argument("--format", choices=("csv", "json"), help="input format (default: from suffix)")

    s = sub.add_parser("equiv", help="equivalent of a flow at another moment")
    s.add_argument("t", type=float)
    s.add_argument("amount", type=float)
    s.add_argument("target_t", type=float)

    sub.add_parser("audit", help="certify the model against the utility axioms")

    s = sub.add_parser("curve", help="tabulate PV or FV of an amount over time")
    s.add_argument("kind", choices=("pv", "fv"))
    s.add_argument("amount", type=float)
    s.add_argument("--t-max", type=float, help="last moment (default: model t_max)")
    s.add_argument("--points", type=int, default=11, help="number of grid points (default 11)")
    return p


def _load_model(args):
    if args.model is not None and args.model_file is not None:
        raise _UsageError("give either --model or --model-file, not both")
    if args.model is not None:
        return parse_model_spec(args.model)
    if args.model_file is not None:
        return load_model_spec(args.model_file)
    raise _UsageError("a model is required (--model or --model-file)")


def _read_investment(path: Path, fmt: str | None):
    if fmt is None:
        fmt = "json" if path.suffix.lower() == ".json" else "csv"
    return parse_investment(path.read_bytes(), fmt)


def _run(args, out) -> None:
    model = _load_model(args)
    fmt = "json" if args.json else "text"
    cmd = args.command
    if cmd == "pv":
        result = present_value(model, make_flow(args.t, args.amount))
    elif cmd == "fv":
        result = future_value(model, args.t, args.amount)
    elif cmd == "npv":
        result = npv(model, _read_investment(args.file, args.format))
    elif cmd == "equiv":
        flow = equivalent_flow(model, make_flow(args.t, args.amount), args.target_t)
        if args.json:
            out.write(f'{{"t": {flow.moment!r}, "amount": {flow.amount!r}}}\n')
        else:
            out.write(f"{flow.moment:.12g}\t{flow.amount:.12g}\n")
        return
    elif cmd == "rank":
        xs = [(str(f), _read_investment(f, args.format)) for f in args.files]
        result = rank(model, xs)
    elif cmd == "audit":
        kwargs = {"samples": args.samples, "seed": args.seed}
        if args.c_grid:
            kwargs["c_grid"] = tuple(float(c) for c in args.c_grid.split(","))
        result = audit(model, DomainSpec.for_model(model, t_points=args.t_points, **kwargs))
    elif cmd == "curve":
        t_max = model.t_max if args.t_max is None else args.t_max
        if args.points < 2:
            raise _UsageError("--points must be >= 2")
        grid = [float(t) for t in np.linspace(0.0, t_max, args.points)]
        result = emit_curve(model, args.amount, args.kind, grid)
    else:  # pragma: no cover - argparse restricts choices
        raise _UsageError(f"unknown command {cmd!r}")
    out.write(write_report(result, fmt).decode("utf-8"))


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    """Run the CLI and return the exit code instead of exiting."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        _run(args, stdout)
    except _UsageError as exc:
        stderr.write(f"error: {exc}\n")
        return 1
    except ConvergenceError as exc:
        stderr.write(f"convergence error: {exc}\n")
        return 2
    except UtilflowError as exc:
        stderr.write(f"{type(exc).__name__}: {exc}\n")
        return 1
    except OSError as exc:
        stderr.write(f"error: {exc}\n")
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
