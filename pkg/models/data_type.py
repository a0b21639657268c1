from enum import Enum


class SpaceKind(Enum):
    DIRICHLET_SINE = "dirichlet-sine"
    TORUS_DIVFREE = "torus-divfree"


class QuadRule(Enum):
    MIDPOINT = "midpoint"
    GAUSS = "gauss"
    TRAPEZOID = "trapezoid"


class StressStructure(Enum):
    # (delta^2 + |grad u|^2)^((p-2)/2) grad u
    REGULARIZED = "regularized"
    # (delta + |grad u|)^(p-2) grad u
    SHIFTED = "shifted"


class NemytskiiKind(Enum):
    POWER = "power"
    SATURATING = "saturating"
    SUM = "sum"


class ProfileKind(Enum):
    ZERO = "zero"
    CONSTANT = "constant"
    EXPONENTIAL = "exponential"
    LINEAR = "linear"
    STEP = "step"
    OSCILLATING = "oscillating"


class ForcingKind(Enum):
    ZERO = "zero"
    SEPARABLE = "separable"
    MODE = "mode"


class InitialKind(Enum):
    ZERO = "zero"
    MODE = "mode"
    PARABOLA = "parabola"
    TAYLOR_GREEN = "taylor_green"
    RANDOM = "random"


class JacobianMode(Enum):
    ANALYTIC = "analytic"
    FINITE_DIFFERENCE = "finite-difference"
