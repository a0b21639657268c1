from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from config import config
from app.exceptions import ConfigurationError
from app.spaces import eval_on_quad, gradient_magnitude
from models.data_type import StressStructure
from .util import on_space


def _check_exponent(p, delta):
    p = float(p)
    if not p > 1.0:
        raise ConfigurationError(f"p-Laplace exponent must exceed 1, got {p}")
    if delta < 0:
        raise ConfigurationError(f"delta must be nonnegative, got {delta}")
    return p


# a(|G|) in flux = a(|G|) G; the flux is taken as 0 wherever G vanishes
def flux_coefficient(magnitude, p, delta=0.0, structure=StressStructure.REGULARIZED):
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        if structure == StressStructure.SHIFTED:
            coef = (delta + magnitude) ** (p - 2.0)
        else:
            coef = (delta**2 + magnitude**2) ** ((p - 2.0) / 2.0)
    return np.where(magnitude > 0, coef, 0.0)


# (Public) <B u, phi_k> = int a(|grad u|) grad u : grad phi_k for every basis phi_k
def p_laplace_apply(space, u, p, delta=0.0, structure=StressStructure.REGULARIZED):
    p = _check_exponent(p, delta)
    u = on_space(space, u)
    _, grads = eval_on_quad(u)
    flux = flux_coefficient(gradient_magnitude(grads), p, delta, structure) * grads
    return np.einsum("bcdn,cdn,n->b", space.grads, flux, space.weights, optimize=True)


def p_laplace_jacobian(space, u, p, delta=0.0, structure=StressStructure.REGULARIZED):
    p = _check_exponent(p, delta)
    u = on_space(space, u)
    _, grads = eval_on_quad(u)
    nb, nn = space.size, space.weights.shape[0]
    G = grads.reshape(-1, nn)
    basis = space.grads.reshape(nb, -1, nn)
    magnitude = gradient_magnitude(grads)
    singular = delta == 0.0 and p < 2.0
    floored = np.maximum(magnitude, config.JACOBIAN_FLOOR) if singular else magnitude
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        if structure == StressStructure.SHIFTED:
            a = (delta + floored) ** (p - 2.0)
            b = (p - 2.0) * (delta + floored) ** (p - 3.0) / floored
        else:
            a = (delta**2 + floored**2) ** ((p - 2.0) / 2.0)
            b = (p - 2.0) * (delta**2 + floored**2) ** ((p - 4.0) / 2.0)
    a = np.nan_to_num(a, nan=0.0, posinf=0.0)
    b = np.where(magnitude > 0, np.nan_to_num(b, nan=0.0, posinf=0.0, neginf=0.0), 0.0)

    flat = basis.reshape(nb, -1)
    weighted = (basis * (space.weights * a)[None, None, :]).reshape(nb, -1)
    jac = weighted @ flat.T
    directional = np.einsum("bmn,mn->bn", basis, G)
    jac += (directional * (space.weights * b)) @ directional.T
    return jac


@dataclass(frozen=True)
class PLaplace:
    """Principal part: p-Laplace or a (p, delta)-structure."""

    p: Fraction
    delta: float = 0.0
    structure: StressStructure = StressStructure.REGULARIZED
    name: str = "principal"

    def __post_init__(self):
        _check_exponent(self.p, self.delta)

    def apply(self, space, u, t=0.0):
        return p_laplace_apply(space, u, self.p, self.delta, self.structure)

    def jacobian(self, space, u, t=0.0):
        return p_laplace_jacobian(space, u, self.p, self.delta, self.structure)
