"""Heat content asymptotics for Dirac-type operators under spectral boundary conditions."""
from .clifford import CliffordRep, build_rep, dual_endo, relation_defect
from .coeffs import (
    CONSTANTS,
    CoefficientResult,
    beta_closed,
    beta_mixed,
    beta_spectral,
    equivalent_mixed_S,
    greens_defect,
    lift_dimension,
    lift_field,
    recursion_defect,
    symmetry_defect,
)
from .errors import (
    BoundaryIncompatible,
    IllConditioned,
    ImaginaryAxisEigenvalue,
    MathDomainError,
    NonConvergence,
    SingularConstraint,
)
from .fields import DualField, Field, integrate_boundary, integrate_M
from .model import (
    CircleModel,
    DiracModel,
    WarpProfile,
    assemble_flat_model,
    assemble_warped_model,
    christoffel,
    flip_sign,
    second_ff,
)
from .oracle import RadialGrid, TimeSpec, compare, fit_asymptotics, solve_circle, solve_heat
from .spectral import (
    SpectralProjector,
    apply_B,
    apply_D,
    apply_P,
    apply_P_dual,
    boundary_A,
    dual_model,
    pos_projector,
    sharp_A,
)

__version__ = "0.1.0"
