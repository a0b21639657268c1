import math

import numpy as np

from app.exceptions import KindError
from app.operators import taylor_green
from app.spaces import DiscreteField, project_function, zero_field
from models.data_type import InitialKind, SpaceKind
from models.problem import InitialSpec


# Sine coefficients of x(1-x): 4 sqrt(2) / (k pi)^3 for odd k, 0 for even k
def _parabola_coefficients(modes):
    k = modes.astype(float)
    factors = np.where(k % 2 == 1, 4.0 * math.sqrt(2.0) / (k * math.pi) ** 3, 0.0)
    return np.prod(factors, axis=1)


# One draw per mode index, so every level sees the same numbers for its modes
def _random_coefficients(space, seed, decay):
    draws = np.array(
        [np.random.default_rng([seed, index]).standard_normal() for index in range(space.size)]
    )
    return draws * space.omega ** (-decay / 2.0)


# (Public) u_{0,n} = P_n u0 for a named initial profile
def project_initial(space, level, u0_spec: InitialSpec) -> DiscreteField:
    space = space.at_level(level)
    kind = u0_spec.kind
    if kind == InitialKind.ZERO:
        return zero_field(space)
    if kind == InitialKind.MODE:
        coeffs = np.zeros(space.size)
        if u0_spec.index <= space.size:
            coeffs[u0_spec.index - 1] = u0_spec.amplitude
        return DiscreteField(space, coeffs)
    if kind == InitialKind.PARABOLA:
        if space.kind != SpaceKind.DIRICHLET_SINE:
            raise KindError("parabola initial data needs a dirichlet-sine space")
        return DiscreteField(space, u0_spec.amplitude * _parabola_coefficients(space.modes))
    if kind == InitialKind.TAYLOR_GREEN:
        if space.kind != SpaceKind.TORUS_DIVFREE:
            raise KindError("taylor_green initial data needs a torus-divfree space")
        return u0_spec.amplitude * project_function(space, taylor_green)
    return DiscreteField(
        space, u0_spec.amplitude * _random_coefficients(space, u0_spec.seed, u0_spec.decay)
    )
