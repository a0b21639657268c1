import functools
import math
from dataclasses import dataclass, field

import numpy as np

from app.exceptions import ConfigurationError, FieldError, KindError, LevelError
from models.data_type import QuadRule, SpaceKind
from .util import (
    TORUS_LENGTH,
    quadrature_1d,
    sine_modes,
    sine_tables,
    tensor_grid,
    torus_modes,
    torus_tables,
)

DEFAULT_SMOOTHNESS = 2.0


@dataclass(frozen=True)
class SpectralSpace:
    """
    Level-n trial space V_n with cached quadrature and basis tables.

    Basis functions are L2-orthonormal and level n is a prefix of level n+1,
    so truncation of coefficients is the self-adjoint projection P_n.
    """

    kind: SpaceKind
    dim: int
    level: int
    s: float
    quad_order: int
    quad_rule: QuadRule
    modes: np.ndarray = field(init=False, repr=False, compare=False)
    trig: np.ndarray = field(init=False, repr=False, compare=False)
    eigenvalues: np.ndarray = field(init=False, repr=False, compare=False)
    points: np.ndarray = field(init=False, repr=False, compare=False)
    weights: np.ndarray = field(init=False, repr=False, compare=False)
    values: np.ndarray = field(init=False, repr=False, compare=False)
    grads: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.kind == SpaceKind.DIRICHLET_SINE:
            modes = sine_modes(self.dim, self.level)
            trig = np.zeros(len(modes), dtype=int)
            eigenvalues = math.pi**2 * (modes**2).sum(axis=1)
            length = 1.0
        else:
            modes, trig = torus_modes(self.level)
            eigenvalues = (modes**2).sum(axis=1).astype(float)
            length = TORUS_LENGTH
        nodes, weights = quadrature_1d(self.quad_rule, self.quad_order, length)
        points, weights = tensor_grid(nodes, weights, self.dim)
        values, grads = self._tables(modes, trig, points)
        for name, array in (
            ("modes", modes),
            ("trig", trig),
            ("eigenvalues", eigenvalues),
            ("points", points),
            ("weights", weights),
            ("values", values),
            ("grads", grads),
        ):
            array.setflags(write=False)
            object.__setattr__(self, name, array)

    def _tables(self, modes, trig, points):
        if self.kind == SpaceKind.DIRICHLET_SINE:
            return sine_tables(modes, points)
        return torus_tables(modes, trig, points)

    @property
    def size(self) -> int:
        return len(self.modes)

    @property
    def ncomp(self) -> int:
        return 1 if self.kind == SpaceKind.DIRICHLET_SINE else 2

    @property
    def family(self) -> tuple:
        return (self.kind, self.dim, self.s, self.quad_rule)

    # |Omega|: unit box or the 2pi-periodic square
    @property
    def measure(self) -> float:
        if self.kind == SpaceKind.DIRICHLET_SINE:
            return 1.0
        return TORUS_LENGTH**2

    # H1-weight base omega_k = 1 + lambda_k of each mode
    @property
    def omega(self) -> np.ndarray:
        return 1.0 + self.eigenvalues

    def at_level(self, level: int) -> "SpectralSpace":
        if level == self.level:
            return self
        if level < self.level:
            quad_order = self.quad_order
        else:
            quad_order = max(self.quad_order, default_quad_order(self.kind, level))
        return make_space(self.kind, self.dim, level, self.s, quad_order, self.quad_rule)

    def tables_at(self, points):
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if points.shape[1] != self.dim:
            points = points.reshape(-1, self.dim)
        return self._tables(self.modes, self.trig, points)


def default_quad_order(kind, level) -> int:
    if kind == SpaceKind.TORUS_DIVFREE:
        return 3 * level + 2
    return 2 * level + 2


# (Public) Build (or reuse) the level-n space of a family
def make_space(kind, dim, level, s=DEFAULT_SMOOTHNESS, quad_order=None, quad_rule=None):
    try:
        kind = SpaceKind(kind)
    except ValueError:
        raise ConfigurationError(f"unsupported space kind {kind!r}")
    if kind == SpaceKind.DIRICHLET_SINE and dim not in (1, 2):
        raise ConfigurationError(f"dirichlet-sine spaces support dim 1 or 2, got {dim}")
    if kind == SpaceKind.TORUS_DIVFREE and dim != 2:
        raise ConfigurationError(f"torus-divfree spaces support dim 2 only, got {dim}")
    if int(level) != level or level < 1:
        raise ConfigurationError(f"level must be an integer >= 1, got {level}")
    if not s > 0:
        raise ConfigurationError(f"smoothness index s must be positive, got {s}")
    if quad_order is None:
        quad_order = default_quad_order(kind, level)
    if quad_order < 2 * level + 2:
        raise ConfigurationError(
            f"quad_order {quad_order} below the oversampling bound 2*level+2 = {2 * level + 2}"
        )
    if quad_rule is None:
        quad_rule = QuadRule.MIDPOINT if kind == SpaceKind.DIRICHLET_SINE else QuadRule.TRAPEZOID
    quad_rule = QuadRule(quad_rule)
    if (kind == SpaceKind.TORUS_DIVFREE) != (quad_rule == QuadRule.TRAPEZOID):
        raise ConfigurationError(f"quadrature rule {quad_rule.value} does not fit {kind.value}")
    return _build_space(kind, int(dim), int(level), float(s), int(quad_order), quad_rule)


@functools.lru_cache(maxsize=64)
def _build_space(kind, dim, level, s, quad_order, quad_rule):
    return SpectralSpace(kind, dim, level, s, quad_order, quad_rule)


@dataclass(frozen=True, eq=False)
class DiscreteField:
    """Coefficient vector of a function in V_n."""

    space: SpectralSpace
    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.array(self.coeffs, dtype=float).reshape(-1)
        if coeffs.shape[0] != self.space.size:
            raise FieldError(
                f"expected {self.space.size} coefficients for level {self.space.level}, "
                f"got {coeffs.shape[0]}"
            )
        if not np.all(np.isfinite(coeffs)):
            raise FieldError("field coefficients must be finite")
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def level(self) -> int:
        return self.space.level

    def __add__(self, other):
        u, v = _align(self, other)
        return DiscreteField(u.space, u.coeffs + v.coeffs)

    def __sub__(self, other):
        u, v = _align(self, other)
        return DiscreteField(u.space, u.coeffs - v.coeffs)

    def __mul__(self, scalar):
        return DiscreteField(self.space, float(scalar) * self.coeffs)

    __rmul__ = __mul__

    def __neg__(self):
        return DiscreteField(self.space, -self.coeffs)


def zero_field(space) -> DiscreteField:
    return DiscreteField(space, np.zeros(space.size))


# phi_index, 1-based in the space's mode order
def basis_field(space, index) -> DiscreteField:
    if not 1 <= index <= space.size:
        raise LevelError(f"basis index {index} outside 1..{space.size}")
    coeffs = np.zeros(space.size)
    coeffs[index - 1] = 1.0
    return DiscreteField(space, coeffs)


# (Public) P_n: keep the first coefficients of the target level
def project(u: DiscreteField, target_level: int) -> DiscreteField:
    if target_level > u.level:
        raise LevelError(f"cannot project level {u.level} field onto finer level {target_level}")
    if target_level < 1:
        raise LevelError(f"target level must be >= 1, got {target_level}")
    target = u.space.at_level(target_level)
    return DiscreteField(target, u.coeffs[: target.size])


# Embed a field into a finer level of its family by zero padding
def prolong(u: DiscreteField, target_level: int) -> DiscreteField:
    if target_level < u.level:
        raise LevelError(f"cannot prolong level {u.level} field to coarser level {target_level}")
    target = u.space.at_level(target_level)
    coeffs = np.zeros(target.size)
    coeffs[: u.space.size] = u.coeffs
    return DiscreteField(target, coeffs)


def _align(u, v):
    if u.space.family != v.space.family:
        raise KindError("fields live in different space families")
    level = max(u.level, v.level)
    return prolong(u, level), prolong(v, level)


# (Public) (u, v)_H, exact in coefficients by orthonormality
def mass_pairing(u: DiscreteField, v: DiscreteField) -> float:
    u, v = _align(u, v)
    return float(u.coeffs @ v.coeffs)


def norm_H(u: DiscreteField) -> float:
    return float(np.linalg.norm(u.coeffs))


# (Public) Values (ncomp, npts) and gradients (ncomp, dim, npts) at the quadrature nodes
def eval_on_quad(u: DiscreteField):
    space = u.space
    values = np.tensordot(u.coeffs, space.values, axes=(0, 0))
    grads = np.tensordot(u.coeffs, space.grads, axes=(0, 0))
    return values, grads


# Exact basis summation at arbitrary points (npts, dim)
def evaluate_at(u: DiscreteField, points):
    values, grads = u.space.tables_at(points)
    return np.tensordot(u.coeffs, values, axes=(0, 0)), np.tensordot(u.coeffs, grads, axes=(0, 0))


# |grad u| at every node, Frobenius norm for vector fields
def gradient_magnitude(grads) -> np.ndarray:
    return np.sqrt(np.sum(grads**2, axis=tuple(range(grads.ndim - 1))))


# (Public) ||grad u||_{L^p}, the V-norm (Poincare makes the seminorm a norm here)
def norm_V(u: DiscreteField, p) -> float:
    p = float(p)
    if not 1.0 < p < math.inf:
        raise ConfigurationError(f"exponent p must lie in (1, inf), got {p}")
    _, grads = eval_on_quad(u)
    magnitude = gradient_magnitude(grads)
    return float(np.sum(u.space.weights * magnitude**p) ** (1.0 / p))


# ||u||_{H^s} = (sum omega_k^s c_k^2)^(1/2)
def norm_Z(u: DiscreteField, s=None) -> float:
    s = u.space.s if s is None else s
    return float(np.sqrt(np.sum(u.space.omega**s * u.coeffs**2)))


# (Public) Z*-norm of a functional given by its pairings g_k against the basis
def dual_norm_Zstar(g, space, s=None) -> float:
    s = space.s if s is None else s
    g = np.asarray(g, dtype=float)
    if g.shape[0] != space.size:
        raise FieldError(f"expected {space.size} pairings, got {g.shape[0]}")
    return float(np.sqrt(np.sum(space.omega ** (-s) * g**2)))


# L2 projection of a function given on points, fn(points) -> (ncomp, npts)
def project_function(space, fn) -> DiscreteField:
    samples = np.asarray(fn(space.points), dtype=float).reshape(space.ncomp, -1)
    coeffs = np.einsum("bcn,cn,n->b", space.values, samples, space.weights)
    return DiscreteField(space, coeffs)
