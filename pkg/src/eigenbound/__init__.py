"""Numerical experiments on eigenvalue bounds for Schroedinger operators with complex potentials."""

from .bounds import (
    BetaQ,
    BoundCertificate,
    cert_aad_1d,
    cert_corollary1,
    cert_corollary2,
    cert_davies_nath_1d,
    cert_frank,
    cert_theorem1,
    davies_nath_F,
    dist_to_ray,
    ls_ratio,
)
from .birman_schwinger import (
    BSDiscretization,
    NormEstimate,
    bs_grid,
    cert_bs_bound,
    discretize_bs,
    operator_norm,
    schur_bound,
    verify_bs_scaling,
    weighted_resolvent_norm,
)
from .eigensolvers import (
    GridOperator1D,
    RadialSolution3D,
    SquareWellSolution1D,
    construct_radial_3d,
    grid_eigensolve_1d,
    radial_grid_eigensolve,
    solve_square_well_1d,
)
from .errors import EigenboundError
from .kernels import SpectralPoint, free_resolvent_kernel, hankel0_h1, sqrt_upper
from .potentials import (
    ConstantBox,
    GridSpec,
    IonescuJerison,
    RadialStep3D,
    RectangularWell,
    Sampled,
    SquareWell1D,
)
from .quasimode import Quasimode, gaussian_quasimode, truncated_quasimode
from .sweep import FittedConstant, SlopeFit, fit_constant, fit_slope, log_correct

__version__ = "0.1.0"
