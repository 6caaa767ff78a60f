"""pnodal: forward and inverse nodal solver for the p-Laplacian pencil.

Forward path: generalized-sine tables (``gentrig``), the modified
Pruefer phase equation (``pruefer``), eigenvalues and nodal data by
shooting (``spectrum``).  Analysis path: closed-form expansions and
residual decay measurement (``asymptotics``), reconstruction of the
potential from nodal lengths (``reconstruct``).  The ``cli`` module
drives config-file experiments with CSV/JSON output.

The hot integration loops live in a compiled extension with a
pure-Python fallback; ``pnodal.kernel_impl()`` reports which one is
active (set PNODAL_PURE_PY=1 to force the fallback).
"""

from ._kernel import IMPL as _KERNEL_IMPL
from .asymptotics import (
    ExpansionReport,
    eigenvalue_coefficients,
    eigenvalue_expansion,
    nodal_length_expansion,
    nodal_point_expansion,
    residual_report,
)
from .gentrig import (
    PParameters,
    SpTable,
    build_table,
    compute_pi_p,
    g_product,
    sp,
    sp_prime,
)
from .potentials import (
    BumpPotential,
    CoefficientPair,
    ConstantPotential,
    CosinePotential,
    PolynomialPotential,
    Potential,
    SampledPotential,
    ZeroPotential,
    make_potential,
    potential_from_csv,
)
from .pruefer import PhaseSolution, integrate_phase, phase_rhs
from .reconstruct import (
    ReconstructionResult,
    error_metrics,
    extrapolate_ladder,
    reconstruct_q,
    reconstruct_r_leading,
)
from .spectrum import (
    NodalData,
    boundary_mismatch,
    extract_nodes,
    find_eigenvalue,
    nodal_data,
)

__version__ = "0.1.0"


def kernel_impl() -> str:
    """Name of the active integration kernel: 'cython' or 'python'."""
    return _KERNEL_IMPL


__all__ = [
    "PParameters",
    "SpTable",
    "compute_pi_p",
    "build_table",
    "sp",
    "sp_prime",
    "g_product",
    "Potential",
    "ZeroPotential",
    "ConstantPotential",
    "PolynomialPotential",
    "CosinePotential",
    "BumpPotential",
    "SampledPotential",
    "CoefficientPair",
    "make_potential",
    "potential_from_csv",
    "PhaseSolution",
    "phase_rhs",
    "integrate_phase",
    "NodalData",
    "boundary_mismatch",
    "find_eigenvalue",
    "extract_nodes",
    "nodal_data",
    "ExpansionReport",
    "eigenvalue_coefficients",
    "eigenvalue_expansion",
    "nodal_point_expansion",
    "nodal_length_expansion",
    "residual_report",
    "ReconstructionResult",
    "reconstruct_q",
    "reconstruct_r_leading",
    "error_metrics",
    "extrapolate_ladder",
    "kernel_impl",
    "__version__",
]
