"""Local symmetry of left-invariant Riemannian metrics on 3-dimensional Lie groups."""
from .algebra import (
    MetricLieAlgebra,
    MetricMatrix,
    StructureTensor,
    bracket,
    change_basis,
    jacobi_residual,
    unimodularity,
)
from .classification import (
    ClassificationVerdict,
    FamilyTag,
    HaLeeMetric,
    SymmetryResiduals,
    classify_algebra,
    classify_halee,
    grid_verify,
    nonunimodular_residuals,
    solution_family,
    unimodular_residuals,
)
from .curvature import (
    closed_form_R_nonunimodular,
    closed_form_R_unimodular,
    connection,
    curvature,
    frame_pipeline,
    is_locally_symmetric,
    nabla_R,
)
from .errors import (
    DegenerateMetric,
    DivisionByZero,
    DomainExceeded,
    InvalidStep,
    LieSymError,
    NotALieAlgebra,
    NotASolution,
    NotOrthonormal,
    ParamOutOfRange,
    SingularBasisChange,
)
from .geodesics import (
    AlgebraVector,
    CoverPoint,
    GeodesicPath,
    GroupPoint,
    closed_geodesic,
    euler_arnold_rhs,
    exp_e,
    group_inv,
    group_mul,
    integrate_geodesic,
    is_symmetric_space_E02,
    lifts,
    log_e,
    project,
    symmetry_based,
    symmetry_cover,
    symmetry_welldefined,
)
from .milnor import MilnorFrame, identify_family, milnor_D, milnor_frame

__version__ = "0.1.0"
