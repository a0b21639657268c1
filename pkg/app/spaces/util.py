import math

import numpy as np
from numpy.polynomial.legendre import leggauss

from models.data_type import QuadRule

SQRT2 = math.sqrt(2.0)
# L2-normalisation of cos(k.x) a / sin(k.x) a on the 2pi-periodic square
TORUS_AMPLITUDE = 1.0 / (SQRT2 * math.pi)
TORUS_LENGTH = 2.0 * math.pi


##### Quadrature #####


# 1D rule with n_points nodes on [0, length)
def quadrature_1d(rule, n_points, length=1.0):
    if rule == QuadRule.GAUSS:
        x, w = leggauss(n_points)
        return 0.5 * length * (x + 1.0), 0.5 * length * w
    if rule == QuadRule.MIDPOINT:
        nodes = (np.arange(n_points) + 0.5) * (length / n_points)
    else:
        nodes = np.arange(n_points) * (length / n_points)
    return nodes, np.full(n_points, length / n_points)


# Tensor product of a 1D rule, points shaped (npts, dim)
def tensor_grid(nodes, weights, dim):
    if dim == 1:
        return nodes[:, None].copy(), weights.copy()
    grids = np.meshgrid(*([nodes] * dim), indexing="ij")
    points = np.stack([g.ravel() for g in grids], axis=1)
    w = weights
    for _ in range(dim - 1):
        w = np.multiply.outer(w, weights)
    return points, w.ravel()


##### Mode enumeration #####


# Sine modes k in {1..level}^dim, ordered shell by shell so each level is a prefix of the next
def sine_modes(dim, level):
    ranges = [range(1, level + 1)] * dim
    modes = np.array(np.meshgrid(*ranges, indexing="ij")).reshape(dim, -1).T
    order = sorted(range(len(modes)), key=lambda i: (modes[i].max(), *modes[i]))
    return modes[order]


# Torus wavevectors in a half plane with |k|_inf <= level, each carrying a cos and a sin field
def torus_modes(level):
    rows = []
    for k1 in range(-level, level + 1):
        for k2 in range(-level, level + 1):
            if k1 > 0 or (k1 == 0 and k2 > 0):
                for trig in (0, 1):
                    rows.append((max(abs(k1), abs(k2)), k1, k2, trig))
    rows.sort()
    table = np.array(rows, dtype=int)
    return table[:, 1:3], table[:, 3]


##### Basis tables #####


# Values (nb, 1, npts) and gradients (nb, 1, dim, npts) of sqrt(2)^d prod sin(k_i pi x_i)
def sine_tables(modes, points):
    arg = math.pi * modes[:, None, :] * points[None, :, :]
    s = SQRT2 * np.sin(arg)
    c = SQRT2 * math.pi * modes[:, None, :] * np.cos(arg)
    dim = modes.shape[1]
    values = np.prod(s, axis=2)
    grads = np.empty((modes.shape[0], dim, points.shape[0]))
    for j in range(dim):
        others = [i for i in range(dim) if i != j]
        grads[:, j, :] = c[:, :, j] * (np.prod(s[:, :, others], axis=2) if others else 1.0)
    return values[:, None, :], grads[:, None, :, :]


# Values (nb, 2, npts) and gradients (nb, 2, 2, npts) of the divergence-free Fourier fields
def torus_tables(modes, trig, points):
    norms = np.sqrt((modes**2).sum(axis=1))
    direction = np.stack([-modes[:, 1], modes[:, 0]], axis=1) / norms[:, None]
    phase = modes @ points.T
    is_cos = (trig == 0)[:, None]
    f = np.where(is_cos, np.cos(phase), np.sin(phase))
    df = np.where(is_cos, -np.sin(phase), np.cos(phase))
    values = TORUS_AMPLITUDE * direction[:, :, None] * f[:, None, :]
    grads = (
        TORUS_AMPLITUDE
        * direction[:, :, None, None]
        * modes[:, None, :, None]
        * df[:, None, None, :]
    )
    return values, grads
