import numpy as np

from config import config
from app.exceptions import KindError, LevelError
from app.spaces import DiscreteField, prolong


# Bring u onto the level of `space` (coarser fields are zero padded)
def on_space(space, u):
    if u.space.family != space.family:
        raise KindError("field and space belong to different space families")
    if u.level > space.level:
        raise LevelError(f"field of level {u.level} does not live in level {space.level}")
    if u.level < space.level:
        u = prolong(u, space.level)
    if u.space is not space:
        # same level, other quadrature order
        u = DiscreteField(space, u.coeffs)
    return u


# Forward differences of a vector map, h_j = FD_STEP * (1 + |x_j|)
def finite_difference_jacobian(fn, x, base=None):
    x = np.asarray(x, dtype=float)
    base = fn(x) if base is None else base
    jac = np.empty((base.shape[0], x.shape[0]))
    for j in range(x.shape[0]):
        h = config.FD_STEP * (1.0 + abs(x[j]))
        shifted = x.copy()
        shifted[j] += h
        jac[:, j] = (fn(shifted) - base) / h
    return jac
