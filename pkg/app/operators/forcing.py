import functools

import numpy as np

from app.spaces import project_function
from models.data_type import ForcingKind


##### Fixed spatial shapes #####


# b(x) = prod sin(pi x_i), |b| <= 1 on the unit box
def bump(points):
    return np.prod(np.sin(np.pi * points), axis=1)[None, :]


# Taylor-Green vortex (sin x cos y, -cos x sin y), divergence free on the torus
def taylor_green(points):
    x, y = points[:, 0], points[:, 1]
    return np.stack([np.sin(x) * np.cos(y), -np.cos(x) * np.sin(y)])


SHAPES = {
    "bump": bump,
    "taylor_green": taylor_green,
}


# Pairings of a fixed shape against the basis of `space`
@functools.lru_cache(maxsize=64)
def shape_pairings(space, shape):
    pairings = project_function(space, SHAPES[shape]).coeffs
    pairings.setflags(write=False)
    return pairings


# (Public) <f(t), phi_k> for every basis phi_k
def assemble_rhs(space, f_spec, t):
    if f_spec.kind == ForcingKind.ZERO:
        return np.zeros(space.size)
    amplitude = f_spec.profile.value_at(t)
    if f_spec.kind == ForcingKind.MODE:
        rhs = np.zeros(space.size)
        if f_spec.index <= space.size:
            rhs[f_spec.index - 1] = amplitude
        return rhs
    return amplitude * shape_pairings(space, f_spec.shape)
