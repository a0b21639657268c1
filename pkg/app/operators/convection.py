from dataclasses import dataclass

import numpy as np

from app.exceptions import KindError
from app.spaces import eval_on_quad
from models.data_type import SpaceKind
from .util import on_space


def _check_space(space):
    if space.kind != SpaceKind.TORUS_DIVFREE:
        raise KindError(f"convection needs a torus-divfree space, got {space.kind.value}")


# (Public) <B2 u, phi_k> = -int (u (x) u) : grad phi_k
def convection_apply(space, u):
    _check_space(space)
    u = on_space(space, u)
    values, _ = eval_on_quad(u)
    return -np.einsum(
        "bijn,in,jn,n->b", space.grads, values, values, space.weights, optimize=True
    )


# d/dc_m of the pairings: -int (phi_m (x) u + u (x) phi_m) : grad phi_k
def convection_jacobian(space, u):
    _check_space(space)
    u = on_space(space, u)
    values, _ = eval_on_quad(u)
    weighted = space.values * space.weights
    transport = np.einsum("bijn,jn->bin", space.grads, values, optimize=True)
    stretch = np.einsum("bijn,in->bjn", space.grads, values, optimize=True)
    return -(
        np.einsum("bin,min->bm", transport, weighted, optimize=True)
        + np.einsum("bjn,mjn->bm", stretch, weighted, optimize=True)
    )


@dataclass(frozen=True)
class Convection:
    name: str = "convection"

    def apply(self, space, u, t=0.0):
        return convection_apply(space, u)

    def jacobian(self, space, u, t=0.0):
        return convection_jacobian(space, u)
