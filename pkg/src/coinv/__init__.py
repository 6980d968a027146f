"""Coincidence invariants of smooth maps between closed oriented manifolds.

Computes Lefschetz coincidence numbers by the cohomological trace formula,
local coincidence indices as mapping degrees of g - f, and verifies that the
global invariant equals the sum of the local contributions, on exact
simplicial models and on analytic torus/sphere models.
"""

from .exact_linalg import Rational, RationalMatrix, kernel_basis, rref, solve
from .simplicial import (
    OrientedComplex,
    SimplicialMapSpec,
    boundary_matrix,
    build_complex,
    csaszar_torus,
    fundamental_cycle,
    octahedron,
    tetrahedron_boundary,
    validate_simplicial_map,
)
from .cohomology import (
    CohomologyBasis,
    CohomologyModel,
    PairingMatrix,
    betti_numbers,
    cohomology_basis,
    cup_pairing,
    induced_map,
    simplicial_cohomology_model,
)
from .analytic import (
    ChartExpr,
    CirclePower,
    ManifoldDescriptor,
    SmoothMapSpec,
    SphereRational,
    TorusLinear,
    eval_map,
    jacobian,
    parse_map_expr,
    sphere,
    sphere_cohomology_model,
    torus,
    torus_cohomology_model,
)
from .degree import (
    AngularFormSpec,
    DegreeConfig,
    DegreeResult,
    LocalZeroProblem,
    local_degree_jacobian,
    local_degree_kronecker,
    local_degree_oracle,
    sphere_area,
    winding_number,
)
from .coincidence import (
    CoincidenceOptions,
    CoincidenceReport,
    ComponentResult,
    IsolatedPoint,
    SubmanifoldComponent,
    find_coincidence_components,
    lefschetz_coincidence_number,
    local_coincidence_index,
    submanifold_class_coefficient,
    verify_residue_formula,
)

__version__ = "0.1.0"
