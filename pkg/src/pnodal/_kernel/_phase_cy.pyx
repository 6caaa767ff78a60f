# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled phase-integration kernel.

Same stepping arithmetic, in the same order, as the pure-Python
fallback in ``_phase_py``; see that module for the contract.  The RK4
loops run without the GIL so per-index work can thread.
"""

import numpy as np

from libc.math cimport cos, exp, fmod, pow

OK = 0
NONPOSITIVE_RHS = 1
TARGET_NOT_REACHED = 2

DEF _OK = 0
DEF _NONPOSITIVE = 1
DEF _NOT_REACHED = 2

cdef double TWO_PI = 6.283185307179586476925287
cdef double STALL_TOL = 1e-8


cdef inline double _coef_eval(int kind, double[::1] pars, double[::1] xs,
                              double[::1] ys, double x) nogil:
    cdef int lo, hi, mid, i
    cdef double acc, y, x0
    if kind == 0:
        return 0.0
    if kind == 1:
        return pars[0]
    if kind == 2:
        acc = 0.0
        for i in range(pars.shape[0] - 1, -1, -1):
            acc = acc * x + pars[i]
        return acc
    if kind == 3:
        return pars[0] * cos(TWO_PI * pars[1] * x)
    if kind == 4:
        y = (x - pars[1]) / pars[2]
        if y <= -1.0 or y >= 1.0:
            return 0.0
        return pars[0] * exp(1.0 - 1.0 / (1.0 - y * y))
    lo = 0
    hi = xs.shape[0] - 1
    while hi - lo > 1:
        mid = (lo + hi) >> 1
        if xs[mid] <= x:
            lo = mid
        else:
            hi = mid
    x0 = xs[lo]
    return ys[lo] + (ys[lo + 1] - ys[lo]) * (x - x0) / (xs[lo + 1] - x0)


cdef inline double _abs_sp_pow(double p, double pi_p, double[::1] nodes,
                               double[::1] values, double[::1] slopes,
                               double phase) nogil:
    cdef double two = 2.0 * pi_p
    cdef double y = fmod(phase, two)
    cdef int lo, hi, mid
    cdef double h, t, t2, t3, v
    if y < 0.0:
        y += two
    if y >= pi_p:
        y -= pi_p
    if y > 0.5 * pi_p:
        y = pi_p - y
    lo = 0
    hi = nodes.shape[0] - 1
    while hi - lo > 1:
        mid = (lo + hi) >> 1
        if nodes[mid] <= y:
            lo = mid
        else:
            hi = mid
    h = nodes[lo + 1] - nodes[lo]
    t = (y - nodes[lo]) / h
    t2 = t * t
    t3 = t2 * t
    v = ((2.0 * t3 - 3.0 * t2 + 1.0) * values[lo]
         + (t3 - 2.0 * t2 + t) * h * slopes[lo]
         + (-2.0 * t3 + 3.0 * t2) * values[lo + 1]
         + (t3 - t2) * h * slopes[lo + 1])
    if v <= 0.0:
        return 0.0
    if v >= 1.0:
        return 1.0
    return pow(v, p)


cdef inline double _rhs(double p, double pi_p, double[::1] nodes,
                        double[::1] values, double[::1] slopes,
                        int qk, double[::1] qp, double[::1] qx, double[::1] qy,
                        int rk, double[::1] rp, double[::1] rx, double[::1] ry,
                        double lam, double lam_pow, double x, double theta) nogil:
    cdef double w = _abs_sp_pow(p, pi_p, nodes, values, slopes, lam_pow * theta)
    cdef double qv = _coef_eval(qk, qp, qx, qy, x)
    cdef double rv = _coef_eval(rk, rp, rx, ry, x)
    return 1.0 - (qv / (lam * lam) + 2.0 * rv / lam) * w


def integrate_phase_kernel(double p, double pi_p, double[::1] nodes,
                           double[::1] values, double[::1] slopes,
                           int qk, double[::1] qp, double[::1] qx, double[::1] qy,
                           int rk, double[::1] rp, double[::1] rx, double[::1] ry,
                           double lam, int n_steps):
    """Fixed-step RK4 from (0, 0) to x = 1 with dense output."""
    cdef double lam_pow = pow(lam, 2.0 / p)
    cdef double h = 1.0 / n_steps
    xs_arr = np.empty(n_steps + 1)
    th_arr = np.empty(n_steps + 1)
    cdef double[::1] xs = xs_arr
    cdef double[::1] thetas = th_arr
    cdef double theta = 0.0
    cdef double x, k1, k2, k3, k4
    cdef int k, status = _OK
    cdef double x_fail = 0.0
    xs[0] = 0.0
    thetas[0] = 0.0
    with nogil:
        for k in range(n_steps):
            x = k * h
            k1 = _rhs(p, pi_p, nodes, values, slopes, qk, qp, qx, qy,
                      rk, rp, rx, ry, lam, lam_pow, x, theta)
            k2 = _rhs(p, pi_p, nodes, values, slopes, qk, qp, qx, qy,
                      rk, rp, rx, ry, lam, lam_pow, x + 0.5 * h,
                      theta + 0.5 * h * k1)
            k3 = _rhs(p, pi_p, nodes, values, slopes, qk, qp, qx, qy,
                      rk, rp, rx, ry, lam, lam_pow, x + 0.5 * h,
                      theta + 0.5 * h * k2)
            k4 = _rhs(p, pi_p, nodes, values, slopes, qk, qp, qx, qy,
                      rk, rp, rx, ry, lam, lam_pow, x + h, theta + h * k3)
            if k1 < STALL_TOL or k2 < STALL_TOL or k3 < STALL_TOL or k4 < STALL_TOL:
                status = _NONPOSITIVE
                x_fail = x
                break
            theta += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            xs[k + 1] = (k + 1) * h
            thetas[k + 1] = theta
    if status != _OK:
        return xs_arr[: k + 1], th_arr[: k + 1], NONPOSITIVE_RHS, x_fail
    xs[n_steps] = 1.0
    return xs_arr, th_arr, OK, 0.0


def advance_to_phase_kernel(double p, double pi_p, double[::1] nodes,
                            double[::1] values, double[::1] slopes,
                            int qk, double[::1] qp, double[::1] qx, double[::1] qy,
                            int rk, double[::1] rp, double[::1] rx, double[::1] ry,
                            double lam, double x0, double theta0,
                            double theta_target, double h, double x_cap):
    """March RK4 until theta crosses theta_target, then Newton-polish."""
    cdef double lam_pow = pow(lam, 2.0 / p)
    cdef double x = x0
    cdef double theta = theta0
    cdef double guard = x_cap + 2.0 * h
    cdef double k1, k2, k3, k4, nxt, resid, slope, dx
    cdef int status = _OK
    cdef int i
    with nogil:
        while theta < theta_target:
            if x > guard:
                status = _NOT_REACHED
                break
            k1 = _rhs(p, pi_p, nodes, values, slopes, qk, qp, qx, qy,
                      rk, rp, rx, ry, lam, lam_pow, x, theta)
            k2 = _rhs(p, pi_p, nodes, values, slopes, qk, qp, qx, qy,
                      rk, rp, rx, ry, lam, lam_pow, x + 0.5 * h,
                      theta + 0.5 * h * k1)
            k3 = _rhs(p, pi_p, nodes, values, slopes, qk, qp, qx, qy,
                      rk, rp, rx, ry, lam, lam_pow, x + 0.5 * h,
                      theta + 0.5 * h * k2)
            k4 = _rhs(p, pi_p, nodes, values, slopes, qk, qp, qx, qy,
                      rk, rp, rx, ry, lam, lam_pow, x + h, theta + h * k3)
            if k1 < STALL_TOL or k2 < STALL_TOL or k3 < STALL_TOL or k4 < STALL_TOL:
                status = _NONPOSITIVE
                break
            theta += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            x += h
        if status == _OK:
            for i in range(8):
                resid = theta_target - theta
                if resid < 1e-15 and resid > -1e-15:
                    break
                slope = _rhs(p, pi_p, nodes, values, slopes, qk, qp, qx, qy,
                             rk, rp, rx, ry, lam, lam_pow, x, theta)
                if slope < STALL_TOL:
                    status = _NONPOSITIVE
                    break
                dx = resid / slope
                k1 = slope
                k2 = _rhs(p, pi_p, nodes, values, slopes, qk, qp, qx, qy,
                          rk, rp, rx, ry, lam, lam_pow, x + 0.5 * dx,
                          theta + 0.5 * dx * k1)
                k3 = _rhs(p, pi_p, nodes, values, slopes, qk, qp, qx, qy,
                          rk, rp, rx, ry, lam, lam_pow, x + 0.5 * dx,
                          theta + 0.5 * dx * k2)
                k4 = _rhs(p, pi_p, nodes, values, slopes, qk, qp, qx, qy,
                          rk, rp, rx, ry, lam, lam_pow, x + dx, theta + dx * k3)
                if k1 < STALL_TOL or k2 < STALL_TOL or k3 < STALL_TOL or k4 < STALL_TOL:
                    status = _NONPOSITIVE
                    break
                theta += (dx / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
                x += dx
    if status == _NONPOSITIVE:
        return x, theta, NONPOSITIVE_RHS
    if status == _NOT_REACHED:
        return x, theta, TARGET_NOT_REACHED
    return x, theta, OK
