#!/usr/bin/env python3
"""Benchmark: compiled phase kernel vs pure-Python fallback.

Times the dense RK4 phase integration (the hot loop behind eigenvalue
shooting and nodal extraction) for a grid of exponents and eigenvalue
indices, then a full eigenvalue solve.  Run from the repo root:

    python benchmarks/bench_kernel.py
"""

from __future__ import annotations

import math
import time

import numpy as np

from pnodal import CoefficientPair, CosinePotential, PParameters, PolynomialPotential, build_table
from pnodal._kernel import _phase_py
from pnodal.pruefer import DEFAULT_STEP_SCALE, _kernel_args

try:
    from pnodal._kernel import _phase_cy
except ImportError:
    _phase_cy = None


def bench_integration(reps: int = 3) -> None:
    print(f"{'p':>4} {'n':>5} {'steps':>7} {'python':>12} {'cython':>12} {'speedup':>8}")
    for p in (2.0, 3.0):
        params = PParameters.from_exponent(p)
        table = build_table(params)
        pair = CoefficientPair(
            CosinePotential(1.0, 1), PolynomialPotential((0.0, 1.0, -1.0))
        )
        args = _kernel_args(table, pair)
        for n in (10, 40, 160):
            lam = (n * params.pi_p) ** (p / 2.0)
            n_steps = max(32, int(math.ceil(lam ** (2.0 / p) / DEFAULT_STEP_SCALE)))
            t_py = _time(_phase_py.integrate_phase_kernel, args, lam, n_steps, reps)
            if _phase_cy is None:
                print(f"{p:4.1f} {n:5d} {n_steps:7d} {t_py:12.4f} {'n/a':>12} {'n/a':>8}")
                continue
            t_cy = _time(_phase_cy.integrate_phase_kernel, args, lam, n_steps, reps)
            xs_p, th_p, *_ = _phase_py.integrate_phase_kernel(*args, lam, n_steps)
            xs_c, th_c, *_ = _phase_cy.integrate_phase_kernel(*args, lam, n_steps)
            drift = float(np.max(np.abs(th_p - th_c)))
            print(
                f"{p:4.1f} {n:5d} {n_steps:7d} {t_py:12.4f} {t_cy:12.4f} "
                f"{t_py / t_cy:8.1f}   max|dtheta|={drift:.1e}"
            )


def _time(fn, args, lam, n_steps, reps: int) -> float:
    best = math.inf
    for _ in range(reps):
        t0 = time.perf_counter()
        fn(*args, lam, n_steps)
        best = min(best, time.perf_counter() - t0)
    return best


def bench_eigensolve() -> None:
    import os
    import subprocess
    import sys

    print("\nfull eigenvalue solve (n=80, p=2), one process per kernel:", flush=True)
    code = (
        "import time, pnodal;"
        "pp=pnodal.PParameters.from_exponent(2.0);tab=pnodal.build_table(pp);"
        "pair=pnodal.CoefficientPair(pnodal.CosinePotential(1.0,1),"
        "pnodal.PolynomialPotential((0.0,1.0,-1.0)));"
        "t0=time.perf_counter();"
        "lam=pnodal.find_eigenvalue(pp,pair,80,table=tab);"
        "print(f'  {pnodal.kernel_impl():>7}: {time.perf_counter()-t0:.3f} s"
        "  lambda_80={lam:.12f}')"
    )
    for env_extra in ({}, {"PNODAL_PURE_PY": "1"}):
        env = dict(os.environ, **env_extra)
        subprocess.run([sys.executable, "-c", code], env=env, check=True)


if __name__ == "__main__":
    bench_integration()
    bench_eigensolve()
