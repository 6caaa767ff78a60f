"""Pure-Python phase-integration kernel.

Reference implementation of the hot loops: classical fixed-step RK4 on
the phase equation

    theta'(x) = 1 - (q(x)/lam^2 + 2 r(x)/lam) * |S_p(Lam * theta)|^p,

with Lam = lam^(2/p), plus the local re-integration used to polish
nodal points.  The compiled extension in ``_phase_cy`` implements the
same arithmetic in the same order; this module is the import-time
fallback and the baseline for the benchmark.

Status codes returned by the stepping routines:

    0  success
    1  right-hand side fell below the stall threshold (non-monotone phase)
    2  target phase not reached inside the allowed x range

A stalled phase never crosses its equilibrium, so "RHS <= 0" is tested
against a tiny positive threshold: trajectories this close to the
equilibrium manifold signal an inadmissible eigen-parameter.
"""

from __future__ import annotations

import math

import numpy as np

OK = 0
NONPOSITIVE_RHS = 1
TARGET_NOT_REACHED = 2

#: positivity margin below which the phase counts as stalled
STALL_TOL = 1e-8


def _coef_eval(kind: int, pars, xs, ys, x: float) -> float:
    if kind == 0:
        return 0.0
    if kind == 1:
        return pars[0]
    if kind == 2:
        acc = 0.0
        for i in range(len(pars) - 1, -1, -1):
            acc = acc * x + pars[i]
        return acc
    if kind == 3:
        return pars[0] * math.cos(2.0 * math.pi * pars[1] * x)
    if kind == 4:
        y = (x - pars[1]) / pars[2]
        if not -1.0 < y < 1.0:
            return 0.0
        return pars[0] * math.exp(1.0 - 1.0 / (1.0 - y * y))
    # sampled, piecewise linear
    n = len(xs)
    lo, hi = 0, n - 1
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if xs[mid] <= x:
            lo = mid
        else:
            hi = mid
    x0 = xs[lo]
    return ys[lo] + (ys[lo + 1] - ys[lo]) * (x - x0) / (xs[lo + 1] - x0)


def _abs_sp_pow(p: float, pi_p: float, nodes, values, slopes, phase: float) -> float:
    """|S_p(phase)|^p via fold to the quarter period and Hermite eval."""
    two = 2.0 * pi_p
    y = math.fmod(phase, two)
    if y < 0.0:
        y += two
    if y >= pi_p:
        y -= pi_p
    if y > 0.5 * pi_p:
        y = pi_p - y
    n = len(nodes)
    lo, hi = 0, n - 1
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if nodes[mid] <= y:
            lo = mid
        else:
            hi = mid
    h = nodes[lo + 1] - nodes[lo]
    t = (y - nodes[lo]) / h
    t2 = t * t
    t3 = t2 * t
    v = (
        (2.0 * t3 - 3.0 * t2 + 1.0) * values[lo]
        + (t3 - 2.0 * t2 + t) * h * slopes[lo]
        + (-2.0 * t3 + 3.0 * t2) * values[lo + 1]
        + (t3 - t2) * h * slopes[lo + 1]
    )
    if v <= 0.0:
        return 0.0
    if v >= 1.0:
        return 1.0
    return v**p


def _rhs(p, pi_p, nodes, values, slopes, qk, qp, qx, qy, rk, rp, rx, ry,
         lam, lam_pow, x, theta) -> float:
    w = _abs_sp_pow(p, pi_p, nodes, values, slopes, lam_pow * theta)
    qv = _coef_eval(qk, qp, qx, qy, x)
    rv = _coef_eval(rk, rp, rx, ry, x)
    return 1.0 - (qv / (lam * lam) + 2.0 * rv / lam) * w


def integrate_phase_kernel(p, pi_p, nodes, values, slopes,
                           qk, qp, qx, qy, rk, rp, rx, ry,
                           lam, n_steps):
    """Fixed-step RK4 from (0, 0) to x = 1 with dense output.

    Returns (xs, thetas, status, x_fail).  xs[k] = k/n_steps exactly; a
    non-positive RHS at any stage aborts with status 1.
    """
    lam_pow = lam ** (2.0 / p)
    h = 1.0 / n_steps
    xs = np.empty(n_steps + 1)
    thetas = np.empty(n_steps + 1)
    xs[0] = 0.0
    thetas[0] = 0.0
    theta = 0.0
    args = (p, pi_p, nodes, values, slopes, qk, qp, qx, qy, rk, rp, rx, ry,
            lam, lam_pow)
    for k in range(n_steps):
        x = k * h
        k1 = _rhs(*args, x, theta)
        k2 = _rhs(*args, x + 0.5 * h, theta + 0.5 * h * k1)
        k3 = _rhs(*args, x + 0.5 * h, theta + 0.5 * h * k2)
        k4 = _rhs(*args, x + h, theta + h * k3)
        if k1 < STALL_TOL or k2 < STALL_TOL or k3 < STALL_TOL or k4 < STALL_TOL:
            return xs[: k + 1], thetas[: k + 1], NONPOSITIVE_RHS, x
        theta += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        xs[k + 1] = (k + 1) * h
        thetas[k + 1] = theta
    xs[n_steps] = 1.0
    return xs, thetas, OK, 0.0


def advance_to_phase_kernel(p, pi_p, nodes, values, slopes,
                            qk, qp, qx, qy, rk, rp, rx, ry,
                            lam, x0, theta0, theta_target, h, x_cap):
    """March RK4 from (x0, theta0) until theta crosses theta_target.

    Small fixed steps of size h bracket the crossing, then Newton steps
    (single RK4 substeps of the Newton increment) polish it.  Returns
    (x, theta, status).
    """
    lam_pow = lam ** (2.0 / p)
    args = (p, pi_p, nodes, values, slopes, qk, qp, qx, qy, rk, rp, rx, ry,
            lam, lam_pow)

    def step(x, theta, dx):
        k1 = _rhs(*args, x, theta)
        k2 = _rhs(*args, x + 0.5 * dx, theta + 0.5 * dx * k1)
        k3 = _rhs(*args, x + 0.5 * dx, theta + 0.5 * dx * k2)
        k4 = _rhs(*args, x + dx, theta + dx * k3)
        if k1 < STALL_TOL or k2 < STALL_TOL or k3 < STALL_TOL or k4 < STALL_TOL:
            return theta, NONPOSITIVE_RHS
        return theta + (dx / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4), OK

    x, theta = x0, theta0
    guard = x_cap + 2.0 * h
    while theta < theta_target:
        if x > guard:
            return x, theta, TARGET_NOT_REACHED
        nxt, st = step(x, theta, h)
        if st != OK:
            return x, theta, st
        x += h
        theta = nxt
    for _ in range(8):
        resid = theta_target - theta
        if abs(resid) < 1e-15:
            break
        slope = _rhs(*args, x, theta)
        if slope < STALL_TOL:
            return x, theta, NONPOSITIVE_RHS
        dx = resid / slope
        theta, st = step(x, theta, dx)
        if st != OK:
            return x, theta, st
        x += dx
    return x, theta, OK
