"""Generalized sine S_p and friends for the one-dimensional p-Laplacian.

For an exponent p > 1 the generalized sine S_p is the inverse of

    x(s) = int_0^s (1 - t^p)^(-1/p) dt,        0 <= s <= 1,

extended from the quarter period [0, pi_p/2] to the real line by the
reflection S_p(pi_p - x) = S_p(x), the half-period flip
S_p(x + pi_p) = -S_p(x), and oddness about 0.  Here

    pi_p = 2 int_0^1 (1 - t^p)^(-1/p) dt = 2*pi / (p*sin(pi/p))

is the half period.  S_p and its derivative satisfy the pythagorean-type
identity |S_p|^p + |S_p'|^p = 1, which this module uses to recover S_p'
from tabulated S_p values.  For p = 2 the functions reduce to sin and cos.

Evaluation goes through a quarter-period lookup table built once per
exponent: node positions are computed by per-interval Gauss-Legendre
quadrature after the substitution t = 1 - u^(p/(p-1)) that removes the
endpoint singularity of the integrand, and values are interpolated with a
shape-preserving cubic Hermite rule using the analytically known slopes
S_p'(x_k) = (1 - s_k^p)^(1/p).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "PParameters",
    "SpTable",
    "QuadratureError",
    "compute_pi_p",
    "build_table",
    "sp",
    "sp_prime",
    "g_product",
    "signed_power",
]

#: grading exponent of the s-grid toward the singular endpoint s = 1
_GRADING = 3.0

#: the defining integral is split at this s; left of it the raw integrand
#: is integrated in t, right of it the desingularized u-form is used
_SPLIT = 0.5


class QuadratureError(RuntimeError):
    """Raised when a table quadrature fails its internal error estimate."""


def _gauss_rule(order: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(order)


def _raw_integrand(t: np.ndarray, p: float) -> np.ndarray:
    """(1 - t^p)^(-1/p), usable away from the singular endpoint t = 1."""
    t = np.asarray(t, dtype=float)
    return (1.0 - t**p) ** (-1.0 / p)


def _desingularized_integrand(u: np.ndarray, p: float) -> np.ndarray:
    """Integrand of x(s) after t = 1 - u^(p/(p-1)), smooth at u = 0.

    1 - (1 - w)^p is evaluated via expm1/log1p to avoid cancellation for
    small w = u^(p/(p-1)).
    """
    u = np.asarray(u, dtype=float)
    w = u ** (p / (p - 1.0))
    one_minus_tp = -np.expm1(p * np.log1p(-w))
    return (p / (p - 1.0)) * u ** (1.0 / (p - 1.0)) * one_minus_tp ** (-1.0 / p)


def _panel_integrals(breaks: np.ndarray, fn, p: float, order: int) -> np.ndarray:
    """Per-panel Gauss-Legendre integrals of fn between consecutive breaks."""
    nodes, weights = _gauss_rule(order)
    a = breaks[:-1][:, None]
    b = breaks[1:][:, None]
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    vals = fn(mid + half * nodes[None, :], p)
    return (half[:, 0]) * (vals @ weights)


def _geometric_breaks(upper: float, levels: int = 48) -> np.ndarray:
    """Panel breaks on [0, upper], geometrically refined toward 0."""
    return upper * np.concatenate(([0.0], 2.0 ** -np.arange(levels, -1.0, -1.0)))


def _u_of_s(s: np.ndarray, p: float) -> np.ndarray:
    """Image of s under the substitution variable u = (1 - s)^((p-1)/p)."""
    return np.asarray(1.0 - np.asarray(s, dtype=float), dtype=float) ** ((p - 1.0) / p)


def compute_pi_p(p: float) -> float:
    """Half period pi_p = 2*pi/(p*sin(pi/p)) of the generalized sine.

    The closed form is returned; the integral definition
    2*int_0^1 (1-t^p)^(-1/p) dt is evaluated by graded Gauss-Legendre
    panels as a cross-check and a QuadratureError is raised if the two
    disagree beyond 1e-10.  The t^p kink at t = 0 and the blow-up at
    t = 1 each get their own treatment: geometric grading on the left,
    the u-substitution plus grading on the right.
    """
    if not p > 1.0:
        raise ValueError(f"exponent p must exceed 1, got {p}")
    closed = 2.0 * math.pi / (p * math.sin(math.pi / p))
    left = np.sum(_panel_integrals(_geometric_breaks(_SPLIT), _raw_integrand, p, 48))
    u_split = float(_u_of_s(np.array(_SPLIT), p))
    right = np.sum(
        _panel_integrals(_geometric_breaks(u_split), _desingularized_integrand, p, 48)
    )
    quad = 2.0 * float(left + right)
    if abs(quad - closed) > 1e-10:
        raise QuadratureError(
            f"pi_p quadrature cross-check failed for p={p}: "
            f"closed form {closed!r} vs quadrature {quad!r}"
        )
    return closed


@dataclass(frozen=True)
class PParameters:
    """Exponent p > 1 together with its derived period constants.

    Attributes
    ----------
    p : float
        The p-Laplacian exponent, p > 1.
    pi_p : float
        Half period of S_p, equal to 2*pi/(p*sin(pi/p)).
    quarter : float
        Quarter period pi_p/2, the length of the monotone branch.
    table_size : int
        Number of lookup-table intervals on the quarter period.
    """

    p: float
    pi_p: float
    quarter: float
    table_size: int = 4096

    def __post_init__(self) -> None:
        if not self.p > 1.0:
            raise ValueError(f"exponent p must exceed 1, got {self.p}")
        closed = 2.0 * math.pi / (self.p * math.sin(math.pi / self.p))
        if abs(self.pi_p - closed) > 1e-12 * closed:
            raise ValueError(f"pi_p={self.pi_p!r} inconsistent with p={self.p!r}")
        if abs(self.quarter - 0.5 * self.pi_p) > 1e-15 * self.pi_p:
            raise ValueError("quarter period must equal pi_p/2")
        if self.table_size < 256:
            raise ValueError("table_size must be at least 256")

    @classmethod
    def from_exponent(cls, p: float, table_size: int = 4096) -> "PParameters":
        pi_p = compute_pi_p(p)
        return cls(p=float(p), pi_p=pi_p, quarter=0.5 * pi_p, table_size=table_size)


@dataclass(frozen=True)
class SpTable:
    """Quarter-period lookup table for S_p.

    ``nodes`` are phase values increasing from 0 to pi_p/2, ``values`` the
    corresponding S_p in [0, 1], and ``slopes`` the exact derivatives
    (1 - s^p)^(1/p) used by the cubic Hermite interpolant.
    """

    params: PParameters
    nodes: np.ndarray
    values: np.ndarray
    slopes: np.ndarray
    built_by: str

    def kernel_args(self) -> tuple:
        """Flat argument pack consumed by the phase-integration kernels."""
        return (
            self.params.p,
            self.params.pi_p,
            self.nodes,
            self.values,
            self.slopes,
        )


def build_table(params: PParameters) -> SpTable:
    """Tabulate the quarter period of S_p by cumulative quadrature.

    The s-grid is graded toward s = 1 with exponent 3 so that, after the
    desingularizing substitution, panel integrands stay uniformly easy and
    the node spacing shrinks where S_p loses smoothness (p != 2).  Each
    panel carries a Gauss 16/32 point error estimate; a panel that fails
    the estimate aborts the build.
    """
    p = params.p
    n = params.table_size
    k = np.arange(n + 1)
    km = (n - k) / n                     # 1 - k/n, exact at both ends
    one_minus_s = km ** _GRADING
    s = 1.0 - one_minus_s
    s[0] = 0.0
    s[-1] = 1.0

    # per-interval integrals: raw integrand in t below the split node, the
    # desingularized u-form above it (u descends as s ascends)
    k_split = int(np.searchsorted(s, _SPLIT))
    u = _u_of_s(s[k_split:], p)
    u_sorted = u[::-1].copy()
    seg_hi = np.empty(n)
    seg_lo = np.empty(n)
    seg_hi[:k_split] = _panel_integrals(s[: k_split + 1], _raw_integrand, p, 32)
    seg_lo[:k_split] = _panel_integrals(s[: k_split + 1], _raw_integrand, p, 16)
    seg_hi[k_split:] = _panel_integrals(u_sorted, _desingularized_integrand, p, 32)[::-1]
    seg_lo[k_split:] = _panel_integrals(u_sorted, _desingularized_integrand, p, 16)[::-1]
    err = np.abs(seg_hi - seg_lo)
    bad = np.nonzero(err > 1e-13 * (1.0 + np.abs(seg_hi)))[0]
    if bad.size:
        i = int(bad[0])
        raise QuadratureError(
            f"quadrature did not converge on s-subinterval "
            f"[{s[i]!r}, {s[i + 1]!r}] for p={p}"
        )

    nodes = np.concatenate(([0.0], np.cumsum(seg_hi)))
    total = nodes[-1]
    if abs(total - params.quarter) > 1e-10:
        raise QuadratureError(
            f"quarter-period quadrature {total!r} disagrees with pi_p/2 "
            f"= {params.quarter!r} for p={p}"
        )

    # exact slopes; 1 - s^p via expm1/log1p since s -> 1 on the graded end
    with np.errstate(divide="ignore"):
        log1m = np.log1p(-one_minus_s)   # log(s); -inf at s=0 is harmless
    one_minus_sp = np.where(s > 0.0, -np.expm1(p * log1m), 1.0)
    slopes = one_minus_sp ** (1.0 / p)
    slopes[-1] = 0.0

    # Fritsch-Carlson safeguard; a no-op for this concave data but keeps
    # the interpolant provably monotone.
    delta = np.diff(s) / np.diff(nodes)
    with np.errstate(divide="ignore", invalid="ignore"):
        alpha = slopes[:-1] / delta
        beta = slopes[1:] / delta
        radius = np.hypot(alpha, beta)
    limit = np.nonzero(radius > 3.0)[0]
    for i in limit:
        tau = 3.0 / radius[i]
        slopes[i] = tau * alpha[i] * delta[i]
        slopes[i + 1] = tau * beta[i] * delta[i]

    if not np.all(np.diff(s) > 0.0):
        raise QuadratureError("table values are not strictly increasing")
    if not np.all(np.diff(nodes) > 0.0):
        raise QuadratureError("table nodes are not strictly increasing")

    return SpTable(
        params=params,
        nodes=nodes,
        values=s,
        slopes=slopes,
        built_by="graded-gauss-legendre",
    )


def _hermite_quarter(table: SpTable, y: np.ndarray) -> np.ndarray:
    """Cubic Hermite evaluation of S_p on quarter-period phases y."""
    nodes = table.nodes
    idx = np.searchsorted(nodes, y, side="right") - 1
    idx = np.clip(idx, 0, len(nodes) - 2)
    x0 = nodes[idx]
    h = nodes[idx + 1] - x0
    t = (y - x0) / h
    t2 = t * t
    t3 = t2 * t
    h00 = 2.0 * t3 - 3.0 * t2 + 1.0
    h10 = t3 - 2.0 * t2 + t
    h01 = -2.0 * t3 + 3.0 * t2
    h11 = t3 - t2
    v = (
        h00 * table.values[idx]
        + h10 * h * table.slopes[idx]
        + h01 * table.values[idx + 1]
        + h11 * h * table.slopes[idx + 1]
    )
    return np.clip(v, 0.0, 1.0)


def _fold(table: SpTable, phase: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Reduce phases to the quarter period; return (|S_p| argument, sign)."""
    pi_p = table.params.pi_p
    y = np.mod(phase, 2.0 * pi_p)
    sign = np.where(y < pi_p, 1.0, -1.0)
    y = np.where(y >= pi_p, y - pi_p, y)
    y = np.where(y > table.params.quarter, pi_p - y, y)
    return y, sign


def sp(table: SpTable, phase) -> float | np.ndarray:
    """S_p at any real phase, via range reduction and the quarter table."""
    arr = np.asarray(phase, dtype=float)
    y, sign = _fold(table, arr)
    out = sign * _hermite_quarter(table, y)
    return float(out) if np.isscalar(phase) or arr.ndim == 0 else out


def sp_prime(table: SpTable, phase) -> float | np.ndarray:
    """S_p' recovered from the identity |S_p|^p + |S_p'|^p = 1.

    The sign convention matches cos: positive on phases reduced into
    (-pi_p/2, pi_p/2) and negative on (pi_p/2, 3*pi_p/2).
    """
    p = table.params.p
    pi_p = table.params.pi_p
    arr = np.asarray(phase, dtype=float)
    y, _ = _fold(table, arr)
    mag = (1.0 - _hermite_quarter(table, y) ** p) ** (1.0 / p)
    yy = np.mod(arr, 2.0 * pi_p)
    sign = np.where((yy < table.params.quarter) | (yy > 1.5 * pi_p), 1.0, -1.0)
    out = sign * mag
    return float(out) if np.isscalar(phase) or arr.ndim == 0 else out


def signed_power(w, exponent: float):
    """Sign-preserving power sgn(w)*|w|^exponent (real for any base)."""
    arr = np.asarray(w, dtype=float)
    out = np.sign(arr) * np.abs(arr) ** exponent
    return float(out) if np.isscalar(w) or arr.ndim == 0 else out


def g_product(table: SpTable, phase) -> float | np.ndarray:
    """The product G = S_p * (S_p')^(p-1) with sign-preserving power.

    G vanishes at every quarter-period phase, is pi_p-periodic with zero
    mean, and its derivative equals 1 - p|S_p|^p.
    """
    s = sp(table, phase)
    c = sp_prime(table, phase)
    return s * signed_power(c, table.params.p - 1.0)
