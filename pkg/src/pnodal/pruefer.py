"""Modified Pruefer phase equation for the p-Laplacian pencil.

Writing the eigenfunction in generalized polar form
u = c(x) S_p(lam^(2/p) theta(x)), u' = lam^(2/p) c(x) S_p'(lam^(2/p) theta(x)),
the eigenvalue problem collapses to a first-order equation for the
phase alone:

    theta'(x) = 1 - (q(x)/lam^2) |S_p|^p - (2 r(x)/lam) |S_p|^p,
    theta(0) = 0,

with S_p evaluated at lam^(2/p) theta(x).  Everything downstream
(eigenvalues, nodal points, nodal lengths) reads off this phase, so the
amplitude c(x) is never integrated.

Integration is classical fixed-step RK4 with the step tied to the phase
velocity: lam^(2/p) * h is held at a fixed small fraction of an S_p
period, which keeps the truncation error uniform across eigenvalue
indices and makes runs reproducible bit for bit.  Dense output is kept
at every step so nodal points can be bracketed without re-integration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernel
from .gentrig import PParameters, SpTable, build_table
from .potentials import CoefficientPair

__all__ = [
    "PhaseSolution",
    "NonMonotonePhaseError",
    "StepUnderflowError",
    "AccuracyError",
    "phase_rhs",
    "integrate_phase",
    "DEFAULT_STEP_SCALE",
]

#: default value of lam^(2/p) * step_size; about 300 RK4 steps per S_p
#: half-period, far inside the <= 0.1 admissible range
DEFAULT_STEP_SCALE = 0.01


class NonMonotonePhaseError(RuntimeError):
    """The phase RHS became non-positive: lam is below the monotone regime."""


class StepUnderflowError(RuntimeError):
    """Step control drove the step size below 1e-12."""


class AccuracyError(RuntimeError):
    """Self-convergence check failed: halving the step moved theta(1) too much."""


@dataclass
class PhaseSolution:
    """Dense trajectory of the Pruefer phase at a fixed eigen-parameter.

    ``xs`` runs from 0 to 1 inclusive with uniform spacing ``step_size``;
    ``thetas`` holds theta at those points with theta(0) = 0.  The
    coefficient pair and S_p table used for the run are carried along so
    nodal extraction can re-integrate locally.
    """

    lam: float
    params: PParameters
    xs: np.ndarray
    thetas: np.ndarray
    step_size: float
    tol: float
    pair: CoefficientPair
    table: SpTable
    impl: str = _kernel.IMPL

    @property
    def lam_pow(self) -> float:
        """lam^(2/p), the scale factor between theta and the S_p phase."""
        return self.lam ** (2.0 / self.params.p)

    @property
    def theta_end(self) -> float:
        return float(self.thetas[-1])


def phase_rhs(params: PParameters, pair: CoefficientPair, lam: float,
              x: float, theta: float, table: SpTable | None = None) -> float:
    """Right-hand side 1 - [q/lam^2 + 2 r/lam] |S_p(lam^(2/p) theta)|^p.

    Reference scalar implementation; the integration kernels inline the
    same arithmetic.
    """
    if lam <= 0.0:
        raise ValueError(f"eigen-parameter lambda must be positive, got {lam}")
    if table is None:
        table = build_table(params)
    from .gentrig import sp

    w = abs(sp(table, lam ** (2.0 / params.p) * theta)) ** params.p
    return 1.0 - (pair.q(x) / lam**2 + 2.0 * pair.r(x) / lam) * w


def _kernel_args(table: SpTable, pair: CoefficientPair) -> tuple:
    qk, qp, qx, qy = pair.q.kernel_spec()
    rk, rp, rx, ry = pair.r.kernel_spec()
    return table.kernel_args() + (qk, qp, qx, qy, rk, rp, rx, ry)


def _steps_for(params: PParameters, lam: float, step_scale: float) -> int:
    lam_pow = lam ** (2.0 / params.p)
    h_target = step_scale / lam_pow
    if h_target < 1e-12:
        raise StepUnderflowError(
            f"required step {h_target:.3e} below 1e-12 at lambda={lam!r}"
        )
    return max(32, int(math.ceil(1.0 / h_target)))


def integrate_phase(params: PParameters, pair: CoefficientPair, lam: float,
                    *, table: SpTable | None = None,
                    step_scale: float = DEFAULT_STEP_SCALE,
                    tol: float = 1e-9, verify: bool = False) -> PhaseSolution:
    """Integrate the phase equation from theta(0) = 0 across [0, 1].

    Parameters
    ----------
    lam : float
        Eigen-parameter, must keep the RHS positive throughout; a
        NonMonotonePhaseError reports the first failing x otherwise.
    step_scale : float
        Bound on lam^(2/p) * step_size.  Must not exceed 0.1.
    verify : bool
        When true, re-integrate at half the step and require theta(1)
        to move by less than ``tol`` (Richardson self-convergence).
    """
    if lam <= 0.0:
        raise ValueError(f"eigen-parameter lambda must be positive, got {lam}")
    if step_scale > 0.1:
        raise ValueError("step_scale must not exceed 0.1")
    if table is None:
        table = build_table(params)
    args = _kernel_args(table, pair)
    n_steps = _steps_for(params, lam, step_scale)
    xs, thetas, status, x_fail = _kernel.integrate_phase_kernel(*args, lam, n_steps)
    if status == _kernel.NONPOSITIVE_RHS:
        raise NonMonotonePhaseError(
            f"non-monotone phase: RHS <= 0 near x={x_fail:.6f} at lambda={lam!r}; "
            "the eigen-parameter is below the admissible range"
        )
    sol = PhaseSolution(
        lam=lam, params=params, xs=xs, thetas=thetas,
        step_size=1.0 / n_steps, tol=tol, pair=pair, table=table,
    )
    if verify:
        _, thetas2, status2, _ = _kernel.integrate_phase_kernel(*args, lam, 2 * n_steps)
        if status2 != _kernel.OK:
            raise NonMonotonePhaseError(
                f"non-monotone phase at half step, lambda={lam!r}"
            )
        drift = abs(float(thetas2[-1]) - sol.theta_end)
        if drift > tol:
            raise AccuracyError(
                f"step-halving moved theta(1) by {drift:.3e} > tol={tol:.1e} "
                f"at lambda={lam!r}"
            )
    return sol
