from .space import (
    DiscreteField,
    SpectralSpace,
    basis_field,
    default_quad_order,
    dual_norm_Zstar,
    eval_on_quad,
    evaluate_at,
    gradient_magnitude,
    make_space,
    mass_pairing,
    norm_H,
    norm_V,
    norm_Z,
    project,
    project_function,
    prolong,
    zero_field,
)
