from .principal import PLaplace, flux_coefficient, p_laplace_apply, p_laplace_jacobian
from .nemytskii import (
    Nemytskii,
    derive_c6,
    derive_c8,
    g_derivative,
    g_values,
    nemytskii_apply,
    nemytskii_jacobian,
)
from .convection import Convection, convection_apply, convection_jacobian
from .forcing import assemble_rhs, bump, shape_pairings, taylor_green
from .family import (
    OperatorFamily,
    StructuralConstants,
    build_family,
    derive_constants,
    family_apply,
)
from .util import finite_difference_jacobian, on_space
