"""
Problem-file schema
===================
One JSON document describes a complete evolution problem: the discrete space
family, the operator family A(t), forcing f, initial data u0, the time grid and
the checker settings. Rational exponents are written as strings ("11/5").
"""

import math
from fractions import Fraction
from typing import Annotated, Literal, Optional

from pydantic import (
    BaseModel,
    BeforeValidator,
    ConfigDict,
    Field,
    PlainSerializer,
    field_validator,
    model_validator,
)
from pydantic_core import PydanticCustomError

from .data_type import (
    ForcingKind,
    InitialKind,
    JacobianMode,
    NemytskiiKind,
    ProfileKind,
    QuadRule,
    SpaceKind,
    StressStructure,
)


# Convert ints, floats and "a/b" strings to an exact Fraction.
# Floats go through their repr so 2.2 becomes 11/5 rather than its binary expansion.
def to_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError("expected a number or a rational string, got a boolean")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError("rational values must be finite")
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"cannot read {value!r} as a rational number")
    raise ValueError(f"cannot read {value!r} as a rational number")


Rational = Annotated[
    Fraction,
    BeforeValidator(to_fraction),
    PlainSerializer(lambda q: str(q), return_type=str),
]

_STRICT = ConfigDict(
    extra="forbid",
    frozen=True,
    allow_inf_nan=False,
    arbitrary_types_allowed=True,
)


def _unsupported(message):
    return PydanticCustomError("unsupported_combination", message)


class TimeProfile(BaseModel):
    """Named piecewise-continuous profile of t."""

    model_config = _STRICT

    kind: ProfileKind = ProfileKind.ZERO
    value: float = 0.0
    rate: float = 0.0
    slope: float = 0.0
    t0: float = 0.0
    after: float = 0.0
    omega: float = 1.0

    def value_at(self, t: float) -> float:
        if self.kind == ProfileKind.ZERO:
            return 0.0
        if self.kind == ProfileKind.CONSTANT:
            return self.value
        if self.kind == ProfileKind.EXPONENTIAL:
            return self.value * math.exp(-self.rate * t)
        if self.kind == ProfileKind.LINEAR:
            return self.value + self.slope * t
        if self.kind == ProfileKind.STEP:
            return self.value if t < self.t0 else self.after
        return self.value * (1.0 + math.sin(self.omega * t))

    def is_zero(self) -> bool:
        if self.kind == ProfileKind.ZERO:
            return True
        if self.kind == ProfileKind.STEP:
            return self.value == 0.0 and self.after == 0.0
        if self.kind == ProfileKind.LINEAR:
            return self.value == 0.0 and self.slope == 0.0
        return self.value == 0.0

    # Exact minimum over [0, T]
    def minimum(self, T: float) -> float:
        if self.kind == ProfileKind.ZERO:
            return 0.0
        if self.kind == ProfileKind.CONSTANT:
            return self.value
        if self.kind == ProfileKind.EXPONENTIAL:
            return min(self.value, self.value * math.exp(-self.rate * T))
        if self.kind == ProfileKind.LINEAR:
            return min(self.value, self.value + self.slope * T)
        if self.kind == ProfileKind.STEP:
            return min(self.value, self.after) if self.t0 <= T else self.value
        return 0.0 if self.value >= 0 else 2.0 * self.value


ZERO_PROFILE = TimeProfile()


class SpaceSpec(BaseModel):
    model_config = _STRICT

    kind: SpaceKind
    dim: Literal[1, 2]
    s: float = Field(2.0, gt=0)
    quad_order: Optional[int] = Field(None, ge=4)
    quad_rule: Optional[QuadRule] = None

    @model_validator(mode="after")
    def _check_kind_dim(self):
        if self.kind == SpaceKind.TORUS_DIVFREE and self.dim != 2:
            raise _unsupported("torus-divfree spaces exist only for dim = 2")
        torus = self.kind == SpaceKind.TORUS_DIVFREE
        if torus and self.quad_rule not in (None, QuadRule.TRAPEZOID):
            raise _unsupported("torus-divfree spaces use the trapezoid rule")
        if self.kind == SpaceKind.DIRICHLET_SINE and self.quad_rule == QuadRule.TRAPEZOID:
            raise _unsupported("dirichlet-sine spaces use the midpoint or gauss rule")
        return self


class NemytskiiSpec(BaseModel):
    """g(t, x, s) = a|s|^(r-2)s and/or c s/(1+s^2), plus C7(t) b(x)."""

    model_config = _STRICT

    kind: NemytskiiKind
    a: float = Field(0.0, ge=0)
    r: Rational = Fraction(2)
    c: float = 0.0
    c7: TimeProfile = Field(default_factory=TimeProfile)

    @field_validator("r")
    @classmethod
    def _r_at_least_one(cls, r):
        if r < 1:
            raise ValueError("growth exponent r must satisfy r >= 1")
        return r

    @property
    def has_power(self) -> bool:
        return self.kind in (NemytskiiKind.POWER, NemytskiiKind.SUM) and self.a > 0

    @property
    def has_saturating(self) -> bool:
        return self.kind in (NemytskiiKind.SATURATING, NemytskiiKind.SUM) and self.c != 0

    @model_validator(mode="after")
    def _profile_needs_power(self):
        if not self.c7.is_zero() and not (self.has_power and self.r > 1):
            raise ValueError(
                "an additive C7 profile needs a power term with a > 0 and r > 1 "
                "to keep g(t,x,s) s bounded below"
            )
        return self


class ConstantsSpec(BaseModel):
    """Declared structural constants; anything left out is derived."""

    model_config = _STRICT

    c1: Optional[float] = Field(None, gt=0)
    c2: Optional[TimeProfile] = None
    c3: Optional[float] = Field(None, gt=0)
    c4: Optional[float] = Field(None, ge=0)
    q: Optional[float] = Field(None, ge=0)
    c5: Optional[TimeProfile] = None


class OperatorSpec(BaseModel):
    model_config = _STRICT

    p: Rational
    delta: float = Field(0.0, ge=0)
    structure: StressStructure = StressStructure.REGULARIZED
    nemytskii: Optional[NemytskiiSpec] = None
    convection: bool = False
    constants: ConstantsSpec = Field(default_factory=ConstantsSpec)

    @field_validator("p")
    @classmethod
    def _p_above_one(cls, p):
        if p <= 1:
            raise ValueError("growth exponent p must lie in (1, inf)")
        return p


class ForcingSpec(BaseModel):
    model_config = _STRICT

    kind: ForcingKind = ForcingKind.ZERO
    profile: TimeProfile = Field(
        default_factory=lambda: TimeProfile(kind=ProfileKind.CONSTANT, value=1.0)
    )
    shape: Literal["bump", "taylor_green"] = "bump"
    index: int = Field(1, ge=1)


class InitialSpec(BaseModel):
    model_config = _STRICT

    kind: InitialKind
    index: int = Field(1, ge=1)
    amplitude: float = 1.0
    seed: int = 0
    decay: float = Field(2.0, ge=0)


class CheckSettings(BaseModel):
    model_config = _STRICT

    seed: int = 0
    field_samples: int = Field(20, ge=1)
    t_samples: int = Field(3, ge=1)
    pair_samples: int = Field(100, ge=1)
    tolerance: float = Field(1e-8, gt=0)
    dual_norm_starts: int = Field(8, ge=1)
    test_modes: tuple[int, ...] = (1,)


class ProblemConfig(BaseModel):
    model_config = _STRICT

    space: SpaceSpec
    operator: OperatorSpec
    forcing: ForcingSpec = Field(default_factory=ForcingSpec)
    initial: InitialSpec
    T: float = Field(gt=0)
    nsteps: int = Field(ge=0)
    level: int = Field(4, ge=1)
    newton_tol: float = Field(1e-10, gt=0)
    newton_maxit: int = Field(50, ge=1)
    jacobian: JacobianMode = JacobianMode.ANALYTIC
    checks: CheckSettings = Field(default_factory=CheckSettings)

    @model_validator(mode="after")
    def _check_combinations(self):
        torus = self.space.kind == SpaceKind.TORUS_DIVFREE
        if self.operator.convection and not torus:
            raise _unsupported("convection needs a torus-divfree space")
        if self.operator.nemytskii is not None and torus:
            raise _unsupported("Nemytskii terms are defined on dirichlet-sine spaces only")
        if self.initial.kind == InitialKind.TAYLOR_GREEN and not torus:
            raise _unsupported("taylor_green initial data needs a torus-divfree space")
        if self.initial.kind == InitialKind.PARABOLA and torus:
            raise _unsupported("parabola initial data needs a dirichlet-sine space")
        if self.forcing.kind == ForcingKind.SEPARABLE:
            wanted = "taylor_green" if torus else "bump"
            if self.forcing.shape != wanted:
                raise _unsupported(f"separable forcing on this space uses shape {wanted!r}")
        return self

    @model_validator(mode="after")
    def _check_profiles(self):
        profiles = {}
        if self.operator.nemytskii is not None:
            profiles["C7"] = self.operator.nemytskii.c7
        if self.operator.constants.c2 is not None:
            profiles["C2"] = self.operator.constants.c2
        if self.operator.constants.c5 is not None:
            profiles["C5"] = self.operator.constants.c5
        for name, profile in profiles.items():
            if profile.minimum(self.T) < 0:
                raise ValueError(f"profile {name} must be nonnegative on [0, T]")
        return self
