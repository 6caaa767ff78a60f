"""Eigenvalues and nodal data by shooting on the boundary phase.

The n-th Dirichlet eigenvalue is the root of

    mismatch(lam) = lam^(2/p) * theta(1; lam) - n * pi_p,

seeded from the leading terms of the eigenvalue expansion and refined
by a safeguarded secant iteration inside a sign-change bracket.  Nodal
points are the phase levels lam^(2/p) theta(x) = j pi_p, j = 1..n-1,
bracketed on the dense trajectory and polished by local re-integration
with a 10x smaller step, so their accuracy is independent of any
interpolation of theta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernel
from .gentrig import PParameters, SpTable, build_table
from .potentials import CoefficientPair
from .pruefer import (
    DEFAULT_STEP_SCALE,
    NonMonotonePhaseError,
    PhaseSolution,
    integrate_phase,
)

__all__ = [
    "NodalData",
    "BracketError",
    "MissingNodeError",
    "boundary_mismatch",
    "find_eigenvalue",
    "extract_nodes",
    "nodal_data",
    "N_MIN_DEFAULT",
]

#: below this index the positivity of the phase RHS is probed explicitly
#: before any root search is attempted
N_MIN_DEFAULT = 3


class BracketError(RuntimeError):
    """No sign change found for the boundary mismatch near the seed."""


class MissingNodeError(RuntimeError):
    """The trajectory contains fewer interior phase crossings than n - 1."""


@dataclass
class NodalData:
    """Nodal description of the n-th eigenfunction.

    ``nodal_points`` are the n - 1 interior zeros; ``nodal_lengths`` the
    n gaps between consecutive points of {0, x_1, ..., x_{n-1}, 1}.
    """

    n: int
    lambda_n: float
    nodal_points: np.ndarray
    nodal_lengths: np.ndarray
    params: PParameters = field(repr=False)
    root_tol: float = 1e-10
    phase_tol: float = 1e-10

    def __post_init__(self) -> None:
        if len(self.nodal_points) != self.n - 1:
            raise MissingNodeError(
                f"expected {self.n - 1} interior nodes, got {len(self.nodal_points)}"
            )
        total = float(np.sum(self.nodal_lengths))
        if abs(total - 1.0) > 1e-10:
            raise MissingNodeError(
                f"nodal lengths sum to {total!r}, expected 1 within 1e-10"
            )

    @property
    def lambda_pow(self) -> float:
        """lambda_n^(2/p)."""
        return self.lambda_n ** (2.0 / self.params.p)


def boundary_mismatch(params: PParameters, pair: CoefficientPair, lam: float,
                      n: int, *, table: SpTable | None = None,
                      step_scale: float = DEFAULT_STEP_SCALE) -> float:
    """lam^(2/p) * theta(1; lam) - n*pi_p; zero exactly at lambda_n."""
    sol = integrate_phase(params, pair, lam, table=table, step_scale=step_scale)
    return sol.lam_pow * sol.theta_end - n * params.pi_p


def _seed(params: PParameters, pair: CoefficientPair, n: int) -> float:
    """Invert the leading expansion terms for a starting lambda.

    Uses Lam = n pi_p + int q / (p (n pi_p)^(p-1)) + 2 int r /
    (p (n pi_p)^((p-2)/2)), the proof-consistent truncation after the
    r term, then lambda = Lam^(p/2).
    """
    p = params.p
    base = n * params.pi_p
    lam_pow = (
        base
        + pair.integral_q / (p * base ** (p - 1.0))
        + 2.0 * pair.integral_r / (p * base ** ((p - 2.0) / 2.0))
    )
    if lam_pow <= 0.0:
        raise BracketError(f"expansion seed non-positive for n={n}")
    return lam_pow ** (p / 2.0)


def find_eigenvalue(params: PParameters, pair: CoefficientPair, n: int,
                    *, table: SpTable | None = None, root_tol: float = 1e-10,
                    step_scale: float = DEFAULT_STEP_SCALE,
                    max_expand: int = 8) -> float:
    """Locate lambda_n as the root of the boundary mismatch.

    The search brackets a sign change around the expansion seed (growing
    the window geometrically up to ``max_expand`` times), then runs a
    secant iteration safeguarded by bisection until |mismatch| < root_tol.
    For n below N_MIN_DEFAULT the phase positivity at the seed is probed
    first so an inadmissible index surfaces as NonMonotonePhaseError
    rather than a confusing bracket failure.
    """
    if n < 1:
        raise ValueError(f"eigenvalue index must be >= 1, got {n}")
    if table is None:
        table = build_table(params)
    lam0 = _seed(params, pair, n)

    def mismatch(lam: float) -> float:
        return boundary_mismatch(params, pair, lam, n, table=table,
                                 step_scale=step_scale)

    if n < N_MIN_DEFAULT:
        # explicit positivity probe; raises NonMonotonePhaseError if the
        # pencil coefficients are too large for this index
        integrate_phase(params, pair, lam0, table=table, step_scale=step_scale)

    # half an index gap in lambda, from d(lambda)/d(Lam) = (p/2) Lam^(p/2-1)
    p = params.p
    lam_pow0 = lam0 ** (2.0 / p)
    gap = 0.5 * p / 2.0 * lam_pow0 ** (p / 2.0 - 1.0) * params.pi_p

    f0 = mismatch(lam0)
    if abs(f0) < root_tol:
        return lam0
    width = 0.45 * gap
    a = b = lam0
    fa = fb = f0
    for _ in range(max_expand):
        if f0 > 0.0:
            a = max(b - width, 1e-8)
            fa = mismatch(a)
            if fa < 0.0:
                break
        else:
            b = a + width
            fb = mismatch(b)
            if fb > 0.0:
                break
        width *= 1.7
    else:
        raise BracketError(
            f"no bracket found for n={n} after expanding to width {width:.3e}; "
            "coefficients may be too large for this index"
        )
    if f0 > 0.0:
        b, fb = lam0, f0
    else:
        a, fa = lam0, f0

    # safeguarded secant: secant proposal clipped into the bracket,
    # bisection fallback on stagnation
    x0, f0_, x1, f1 = a, fa, b, fb
    for _ in range(80):
        if f1 == f0_:
            x2 = 0.5 * (a + b)
        else:
            x2 = x1 - f1 * (x1 - x0) / (f1 - f0_)
            if not a < x2 < b:
                x2 = 0.5 * (a + b)
        f2 = mismatch(x2)
        if abs(f2) < root_tol:
            return x2
        if f2 < 0.0:
            a, fa = x2, f2
        else:
            b, fb = x2, f2
        x0, f0_, x1, f1 = x1, f1, x2, f2
        if b - a < 1e-15 * max(1.0, b):
            break
    raise BracketError(
        f"secant iteration failed to reach |mismatch| < {root_tol:.1e} for n={n}"
    )


def extract_nodes(params: PParameters, phase: PhaseSolution, n: int,
                  *, phase_tol: float = 1e-10,
                  root_tol: float = 1e-10) -> NodalData:
    """Read nodal points and nodal lengths off a phase trajectory.

    ``phase`` must have been integrated at lambda = lambda_n.  Each
    interior node solves lam^(2/p) theta(x) = j pi_p; the crossing is
    bracketed on the stored steps and then re-integrated from the left
    bracket endpoint with a 10x smaller step.  The accepted residual
    |lam^(2/p) theta(x_j) - j pi_p| must stay below ``phase_tol``.
    """
    if n < 1:
        raise ValueError(f"index must be >= 1, got {n}")
    lam_pow = phase.lam_pow
    targets = np.arange(1, n) * params.pi_p / lam_pow
    thetas = phase.thetas
    if targets.size and targets[-1] >= thetas[-1]:
        raise MissingNodeError(
            f"missing node: theta(1)={thetas[-1]!r} never reaches the "
            f"{n - 1}-th interior phase level; lambda={phase.lam!r} is not "
            f"the index-{n} eigenvalue at this tolerance"
        )
    from .pruefer import _kernel_args

    args = _kernel_args(phase.table, phase.pair)
    h_small = phase.step_size / 10.0
    points = np.empty(n - 1)
    idx = np.searchsorted(thetas, targets, side="left")
    for j, (tgt, i) in enumerate(zip(targets, idx), start=1):
        x0 = phase.xs[i - 1]
        th0 = thetas[i - 1]
        x, th, status = _kernel.advance_to_phase_kernel(
            *args, phase.lam, x0, th0, tgt, h_small, float(phase.xs[i])
        )
        if status != _kernel.OK:
            raise MissingNodeError(
                f"node polish failed for j={j} (kernel status {status})"
            )
        resid = abs(lam_pow * th - j * params.pi_p)
        if resid > phase_tol:
            raise MissingNodeError(
                f"phase residual {resid:.3e} above tolerance at node j={j}"
            )
        points[j - 1] = x
    cuts = np.concatenate(([0.0], points, [1.0]))
    lengths = np.diff(cuts)
    if np.any(lengths <= 0.0):
        raise MissingNodeError("nodal points are not strictly increasing in (0, 1)")
    return NodalData(
        n=n, lambda_n=phase.lam, nodal_points=points, nodal_lengths=lengths,
        params=params, root_tol=root_tol, phase_tol=phase_tol,
    )


def nodal_data(params: PParameters, pair: CoefficientPair, n: int,
               *, table: SpTable | None = None, root_tol: float = 1e-10,
               phase_tol: float = 1e-10,
               step_scale: float = DEFAULT_STEP_SCALE) -> NodalData:
    """Convenience pipeline: eigenvalue, phase trajectory, nodal data."""
    if table is None:
        table = build_table(params)
    lam = find_eigenvalue(params, pair, n, table=table, root_tol=root_tol,
                          step_scale=step_scale)
    sol = integrate_phase(params, pair, lam, table=table, step_scale=step_scale)
    return extract_nodes(params, sol, n, phase_tol=phase_tol, root_tol=root_tol)
