"""Scattering of a plane wave by a Dirichlet periodic surface.

The scattered field is represented by outgoing quasiperiodic solutions
(layer Green's functions anchored below the boundary, or outgoing modes)
whose coefficients are fitted to the incident trace on the boundary by
truncated-SVD least squares.  The boundary residual then bounds the field
error everywhere above the surface.
"""

from .config import RunConfig
from .errors import (
    BadCount,
    CoincidentPoints,
    DegenerateMatrix,
    GratingError,
    NotAGraph,
    NotConverged,
    PoleOutsideRegion,
    WoodAnomaly,
)
from .geometry import (
    Discretization,
    Profile,
    boundary_height,
    default_poles,
    discretize,
    load_tabulated_profile,
    profile_height,
    profile_nodes,
)
from .greens import GreensConfig, greens_g, greens_matrix, mode_kernel, psi_j
from .modes import (
    ModeSystem,
    ScatterParams,
    basis_phi,
    incident_field,
    lambda_j,
    mu_j,
    propagating_set,
    quasiperiodicity_factor,
    radiating_mode,
)
from .solver import (
    LeastSquaresSystem,
    MrcSolution,
    PoleDictionary,
    RayleighDictionary,
    ScatterConfig,
    assemble,
    assemble_rayleigh,
    diffraction_efficiencies,
    discrete_norm,
    energy_balance,
    evaluate_field,
    mrc_solve,
    rayleigh_coefficients,
    solve_tsvd,
)

__version__ = "0.1.0"
