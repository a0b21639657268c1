from dataclasses import dataclass

import numpy as np

from config import config
from app.exceptions import KindError
from app.spaces import eval_on_quad
from models.data_type import SpaceKind
from models.problem import NemytskiiSpec
from .forcing import bump
from .util import on_space

## Lower-order superposition term u -> g(t, x, u(x))


##### Pointwise g #####


# (Public) g(t, x, s) on arrays of s and the matching points
def g_values(spec: NemytskiiSpec, t, points, s):
    out = np.zeros_like(s, dtype=float)
    if spec.has_power:
        out += spec.a * np.sign(s) * np.abs(s) ** (float(spec.r) - 1.0)
    if spec.has_saturating:
        out += spec.c * s / (1.0 + s**2)
    c7 = spec.c7.value_at(t)
    if c7 != 0.0:
        out += c7 * bump(points)
    return out


# dg/ds, |s| floored where r < 2 makes the power derivative singular at 0
def g_derivative(spec: NemytskiiSpec, s):
    out = np.zeros_like(s, dtype=float)
    if spec.has_power:
        r = float(spec.r)
        magnitude = np.abs(s)
        if r < 2.0:
            magnitude = np.maximum(magnitude, config.JACOBIAN_FLOOR)
        out += spec.a * (r - 1.0) * magnitude ** (r - 2.0)
    if spec.has_saturating:
        out += spec.c * (1.0 - s**2) / (1.0 + s**2) ** 2
    return out


##### Derived constants #####


# C8(t) with g(t,x,s) s >= -C8(t): |c| from the saturating part,
# Young's inequality for the profile term against the power term
def derive_c8(spec: NemytskiiSpec, t) -> float:
    c8 = abs(spec.c) if spec.has_saturating else 0.0
    c7 = spec.c7.value_at(t)
    if c7 != 0.0:
        r = float(spec.r)
        c8 += (1.0 - 1.0 / r) * abs(c7) ** (r / (r - 1.0)) * (spec.a * r) ** (-1.0 / (r - 1.0))
    return c8


# c6 with |g(t,x,s)| <= c6 (1 + |s|^(r-1)) + C7(t)
def derive_c6(spec: NemytskiiSpec) -> float:
    a = spec.a if spec.has_power else 0.0
    c = abs(spec.c) / 2.0 if spec.has_saturating else 0.0
    return max(a, c)


##### Assembly #####


def _check_space(space):
    if space.kind != SpaceKind.DIRICHLET_SINE:
        raise KindError(f"Nemytskii terms need a dirichlet-sine space, got {space.kind.value}")


# (Public) <B4(t) u, phi_k> = int g(t, x, u) phi_k
def nemytskii_apply(space, u, spec: NemytskiiSpec, t=0.0):
    _check_space(space)
    u = on_space(space, u)
    values, _ = eval_on_quad(u)
    g = g_values(spec, t, space.points, values)
    return np.einsum("bcn,cn,n->b", space.values, g, space.weights, optimize=True)


def nemytskii_jacobian(space, u, spec: NemytskiiSpec, t=0.0):
    _check_space(space)
    u = on_space(space, u)
    values, _ = eval_on_quad(u)
    dg = g_derivative(spec, values)[0]
    basis = space.values[:, 0, :]
    return (basis * (space.weights * dg)) @ basis.T


@dataclass(frozen=True)
class Nemytskii:
    spec: NemytskiiSpec
    name: str = "nemytskii"

    def apply(self, space, u, t=0.0):
        return nemytskii_apply(space, u, self.spec, t)

    def jacobian(self, space, u, t=0.0):
        return nemytskii_jacobian(space, u, self.spec, t)
