"""Compare the compiled kernels with the pure-Python fallback.

    python benchmarks/bench_kernels.py [--n 20000] [--repeat 3]

Times vectorised utility and future value per family, then a full audit in a
subprocess per backend (the backend is fixed at import time).
"""

from __future__ import annotations

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from utilflow import _pykernels
from utilflow.valuation import FV_REL_TOL, MAX_ITER

try:
    from utilflow import _ckernels
except ImportError:  # extension not built
    _ckernels = None

FAMILIES = {
    "classical": (_pykernels.CLASSICAL, (0.1, 0.0, 0.0, 0.0)),
    "hyperbolic": (_pykernels.HYPERBOLIC, (0.3, 0.0, 0.0, 0.0)),
    "capital_aware": (_pykernels.CAPITAL_AWARE, (0.05, 0.1, 100.0, 0.02)),
}

AUDIT = (
    "import time, utilflow;"
    "m = utilflow.capital_aware(0.05, 0.1, 100, 0.02, t_max=5);"
    "s = time.perf_counter(); utilflow.audit(m);"
    "print(utilflow.BACKEND, time.perf_counter() - s)"
)


def best(fn, repeat: int) -> float:
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def audit_time(pure: bool) -> tuple[str, float]:
    env = dict(os.environ)
    env.pop("UTILFLOW_PURE_PYTHON", None)
    if pure:
        env["UTILFLOW_PURE_PYTHON"] = "1"
    out = subprocess.run([sys.executable, "-c", AUDIT], env=env, capture_output=True, text=True, check=True)
    backend, seconds = out.stdout.split()
    return backend, float(seconds)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=20000, help="points per kernel call")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    if _ckernels is None:
        print("compiled extension not built; run `pip install -e . --no-build-isolation` first")
        sys.exit(1)

    rng = np.random.default_rng(0)
    ts = rng.uniform(0, 5, args.n)
    cs = rng.uniform(-1e4, 1e4, args.n)

    print(f"{'kernel':<28} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    for name, (code, params) in FAMILIES.items():
        for label, call in (
            ("utility", lambda k: k.utility_many(code, params, ts, cs)),
            ("future_value", lambda k: k.future_value_many(code, params, ts, cs, FV_REL_TOL, MAX_ITER)),
        ):
            a, b = call(_pykernels), call(_ckernels)
            assert all(np.array_equal(x, y) for x, y in zip(a if isinstance(a, tuple) else (a,),
                                                            b if isinstance(b, tuple) else (b,)))
            py = best(lambda: call(_pykernels), args.repeat)
            cy = best(lambda: call(_ckernels), args.repeat)
            print(f"{name + ' ' + label:<28} {py:>10.4f} {cy:>10.4f} {py / cy:>7.1f}x")

    _, py = audit_time(pure=True)
    backend, cy = audit_time(pure=False)
    print(f"{'full audit (capital_aware)':<28} {py:>10.4f} {cy:>10.4f} {py / cy:>7.1f}x  [{backend}]")


if __name__ == "__main__":
    main()
