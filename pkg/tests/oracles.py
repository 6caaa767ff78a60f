"""Independent numerical oracles for the test suite.

Every oracle here reaches the quantity under test by a different route
than the library: tanh-sinh quadrature instead of graded Gauss panels,
a finite-difference matrix pencil instead of phase shooting, and direct
second-order integration of the eigenfunction instead of the phase
equation.  Keeping them in the test tree stops any accidental sharing
of code paths with the implementation.
"""

from __future__ import annotations

import math

import numpy as np


def pi_p_quadrature(p: float, n: int = 481, width: float = 4.0) -> float:
    """pi_p from its defining integral, by tanh-sinh quadrature on [0, 1].

    The integrand blows up at t = 1, so the distance 1 - t is carried
    through the double-exponential map in a cancellation-free form and
    1 - t^p is evaluated as -expm1(p*log1p(-(1 - t))).
    """
    u = np.linspace(-width, width, n)
    su = 0.5 * math.pi * np.sinh(u)
    # t = (1 + tanh(su))/2, dist = 1 - t = 1/(1 + exp(2 su)), both stable
    dist = 1.0 / (1.0 + np.exp(2.0 * su))
    t = 1.0 - dist
    w = 0.25 * math.pi * np.cosh(u) / np.cosh(su) ** 2
    with np.errstate(divide="ignore"):
        one_minus_tp = np.where(
            dist < 1.0, -np.expm1(p * np.log1p(-np.minimum(dist, 1.0 - 1e-17))), 1.0
        )
    vals = one_minus_tp ** (-1.0 / p)
    keep = (dist > 0.0) & (t > 0.0)
    return 2.0 * float(np.sum(vals[keep] * w[keep]) * (u[1] - u[0]))


def constant_pencil_eigenvalue(n: int, c1: float, c2: float) -> float:
    """Closed form for p = 2, q = c1, r = c2: the positive pencil root."""
    return c2 + math.sqrt(c2 * c2 + c1 + (n * math.pi) ** 2)


def _sturm_count(qf, rf, lam: float, m: int) -> int:
    """Number of pencil eigenvalues below lam on an m-cell mesh (p = 2).

    Counts negative pivots of the LDL^T factorization of the shifted
    tridiagonal finite-difference matrix; monotone in lam once lam
    exceeds sup r.
    """
    h = 1.0 / m
    xs = np.arange(1, m) * h
    diag = 2.0 / h**2 + qf(xs) + 2.0 * lam * rf(xs) - lam * lam
    e2 = 1.0 / h**4
    tiny = 1e-300
    count = 0
    t = diag[0]
    if t == 0.0:
        t = tiny
    if t < 0.0:
        count += 1
    for i in range(1, m - 1):
        t = diag[i] - e2 / t
        if t == 0.0:
            t = tiny
        if t < 0.0:
            count += 1
    return count


def fd_pencil_eigenvalue(qf, rf, n: int, mesh: int = 2000,
                         richardson: bool = True) -> float:
    """n-th p = 2 pencil eigenvalue from the finite-difference matrix.

    Scan-and-bisect on the Sturm count at the given mesh; with
    ``richardson`` the mesh/2 value extrapolates away the leading h^2
    discretization error.
    """

    def solve(m: int) -> float:
        lo = 0.5 * n * math.pi
        hi = (n + 2.0) * math.pi + 10.0
        while _sturm_count(qf, rf, lo, m) > n - 1:
            lo *= 0.5
            if lo < 1e-6:
                break
        while _sturm_count(qf, rf, hi, m) < n:
            hi *= 1.5
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            if _sturm_count(qf, rf, mid, m) >= n:
                hi = mid
            else:
                lo = mid
            if hi - lo < 1e-11 * hi:
                break
        return 0.5 * (lo + hi)

    lam_fine = solve(mesh)
    if not richardson:
        return lam_fine
    lam_coarse = solve(mesh // 2)
    return (4.0 * lam_fine - lam_coarse) / 3.0


def shoot_eigenfunction(qf, rf, lam: float, m: int = 8000):
    """Integrate -u'' + (q + 2 lam r) u = lam^2 u, u(0)=0, u'(0)=1 (p = 2).

    Classical RK4 on (u, u').  Returns (nodes, u1): interior zeros by
    sign change with linear interpolation, and the boundary value u(1).
    """
    h = 1.0 / m

    def acc(x: float, u: float) -> float:
        return (qf(x) + 2.0 * lam * rf(x) - lam * lam) * u

    u, v = 0.0, 1.0
    nodes = []
    for i in range(m):
        x = i * h
        k1u, k1v = v, acc(x, u)
        k2u, k2v = v + 0.5 * h * k1v, acc(x + 0.5 * h, u + 0.5 * h * k1u)
        k3u, k3v = v + 0.5 * h * k2v, acc(x + 0.5 * h, u + 0.5 * h * k2u)
        k4u, k4v = v + h * k3v, acc(x + h, u + h * k3u)
        nu = u + (h / 6.0) * (k1u + 2.0 * k2u + 2.0 * k3u + k4u)
        nv = v + (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
        if i > 0 and nu != u and ((u > 0.0) != (nu > 0.0) or nu == 0.0):
            nodes.append(x + h * u / (u - nu))
        u, v = nu, nv
    return np.array(nodes), u


def shoot_eigenvalue(qf, rf, n: int, seed: float, m: int = 8000) -> float:
    """Eigenvalue by secant on the shooting boundary value u(1; lam)."""
    la, lb = seed - 0.05, seed + 0.05
    _, fa = shoot_eigenfunction(qf, rf, la, m)
    _, fb = shoot_eigenfunction(qf, rf, lb, m)
    for _ in range(60):
        if fb == fa:
            break
        lc = lb - fb * (lb - la) / (fb - fa)
        _, fc = shoot_eigenfunction(qf, rf, lc, m)
        la, fa, lb, fb = lb, fb, lc, fc
        if abs(lb - la) < 1e-12 * lb:
            break
    return lb
