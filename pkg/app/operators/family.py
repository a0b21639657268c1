"""
Operator families A(t)
======================
A(t) is the sum of its parts (principal p-Laplace, Nemytskii term, convection),
each returning pairings <part u, phi_k> against the basis of the level.
The structural constants (c1, C2, c3, c4, q, C5) travel with the family; any
constant a problem file leaves out is derived from the part parameters here,
except c4 for families with lower-order parts, which is fitted by the growth
checker and left as None until then.
"""

import dataclasses
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from config import logger
from app.exceptions import ConfigurationError
from app.spaces import DiscreteField
from models.data_type import JacobianMode, StressStructure
from models.problem import OperatorSpec
from .convection import Convection
from .nemytskii import Nemytskii, derive_c8
from .principal import PLaplace
from .util import finite_difference_jacobian, on_space


@dataclass(frozen=True)
class StructuralConstants:
    """c1, c3, c4, q as numbers; C2, C5 as nonnegative functions of t."""

    c1: float
    c2: Callable[[float], float]
    c3: float
    c4: Optional[float]
    q: float
    c5: Callable[[float], float]

    def __post_init__(self):
        if not self.c1 > 0 or not self.c3 > 0:
            raise ConfigurationError("constants c1 and c3 must be positive")
        if self.c4 is not None and self.c4 < 0:
            raise ConfigurationError("constant c4 must be nonnegative")
        if self.q < 0:
            raise ConfigurationError("exponent q must be nonnegative")

    def with_c4(self, c4) -> "StructuralConstants":
        return dataclasses.replace(self, c4=float(c4))

    def to_dict(self, times=()) -> dict:
        return {
            "c1": self.c1,
            "c3": self.c3,
            "c4": self.c4,
            "q": self.q,
            "C2": [self.c2(t) for t in times],
            "C5": [self.c5(t) for t in times],
        }


@dataclass(frozen=True)
class OperatorFamily:
    p: Fraction
    delta: float
    parts: tuple
    constants: StructuralConstants
    jacobian_mode: JacobianMode = JacobianMode.ANALYTIC

    def __post_init__(self):
        if not self.parts:
            raise ConfigurationError("an operator family needs at least one part")
        if not float(self.p) > 1.0 or not math.isfinite(float(self.p)):
            raise ConfigurationError(f"growth exponent p must lie in (1, inf), got {self.p}")

    @property
    def part_names(self) -> tuple:
        return tuple(part.name for part in self.parts)

    @property
    def principal(self) -> Optional[PLaplace]:
        return next((part for part in self.parts if isinstance(part, PLaplace)), None)

    @property
    def has_lower_order(self) -> bool:
        return any(not isinstance(part, PLaplace) for part in self.parts)

    def with_constants(self, constants) -> "OperatorFamily":
        return dataclasses.replace(self, constants=constants)

    def apply(self, space, u, t=0.0):
        return family_apply(self, space, t, u)

    # d/dc of the pairings; finite differences for parts without an analytic Jacobian
    def jacobian(self, space, u, t=0.0):
        u = on_space(space, u)
        jac = np.zeros((space.size, space.size))
        for part in self.parts:
            analytic = getattr(part, "jacobian", None)
            if analytic is not None and self.jacobian_mode == JacobianMode.ANALYTIC:
                jac += analytic(space, u, t)
            else:
                jac += finite_difference_jacobian(
                    lambda c, part=part: part.apply(space, DiscreteField(space, c), t), u.coeffs
                )
        return jac


# (Public) Sum of the parts' pairings <A(t) u, phi_k>
def family_apply(A: OperatorFamily, space, t, u):
    u = on_space(space, u)
    out = np.zeros(space.size)
    for part in A.parts:
        out += part.apply(space, u, t)
    return out


# (Public) Assemble the family an OperatorSpec describes, deriving missing constants
def build_family(
    op_spec: OperatorSpec, measure, q_default=0.0, jacobian_mode=JacobianMode.ANALYTIC
):
    parts = [PLaplace(op_spec.p, op_spec.delta, op_spec.structure)]
    if op_spec.nemytskii is not None:
        parts.append(Nemytskii(op_spec.nemytskii))
    if op_spec.convection:
        parts.append(Convection())
    constants = derive_constants(op_spec, measure, q_default)
    logger.debug(f"Operator family {[part.name for part in parts]} with p = {op_spec.p}")
    return OperatorFamily(op_spec.p, op_spec.delta, tuple(parts), constants, jacobian_mode)


def _structure_factor(p, structure):
    if structure == StressStructure.SHIFTED:
        return 2.0 ** (p - 2.0)
    return 2.0 ** ((p - 2.0) / 2.0)


def derive_constants(op_spec: OperatorSpec, measure, q_default=0.0) -> StructuralConstants:
    p, delta = float(op_spec.p), op_spec.delta
    declared = op_spec.constants
    g_spec = op_spec.nemytskii

    # ---- coercivity: <A x, x> >= c1 |x|_V^p - C2(t) ----
    below_two = p < 2.0 and delta > 0.0
    c1 = _structure_factor(p, op_spec.structure) if below_two else 1.0
    c2_principal = c1 * delta**p * measure if below_two else 0.0

    def c2_derived(t):
        extra = derive_c8(g_spec, t) * measure if g_spec is not None else 0.0
        return c2_principal + extra

    # ---- growth: |A x|_* <= c3 |x|_V^(p-1) + c4 |x|_H^q |x|_V^(p-1) + C5(t) ----
    kappa = 1.0 if p < 2.0 or delta == 0.0 else _structure_factor(p, op_spec.structure)
    p_conj = p / (p - 1.0)
    c5_principal = kappa * delta ** (p - 1.0) * measure ** (1.0 / p_conj)
    c5_saturating = abs(g_spec.c) / 2.0 if g_spec is not None and g_spec.has_saturating else 0.0

    def c5_derived(t):
        c7 = g_spec.c7.value_at(t) if g_spec is not None else 0.0
        return c5_principal + c5_saturating + c7

    lower_order = g_spec is not None or op_spec.convection
    if declared.c4 is not None:
        c4 = declared.c4
    else:
        c4 = None if lower_order else 0.0

    return StructuralConstants(
        c1=declared.c1 if declared.c1 is not None else c1,
        c2=declared.c2.value_at if declared.c2 is not None else c2_derived,
        c3=declared.c3 if declared.c3 is not None else kappa,
        c4=c4,
        q=declared.q if declared.q is not None else max(0.0, float(q_default)),
        c5=declared.c5.value_at if declared.c5 is not None else c5_derived,
    )
