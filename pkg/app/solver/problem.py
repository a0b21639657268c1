from dataclasses import dataclass
from typing import Optional

from app.operators import OperatorFamily, build_family
from app.spaces import SpectralSpace, make_space
from app.verify.exponents import exponent_report
from models.problem import ProblemConfig


@dataclass(frozen=True)
class Problem:
    """A ProblemConfig resolved at one level: space, operator family and data."""

    config: ProblemConfig
    space: SpectralSpace
    family: OperatorFamily

    @property
    def level(self) -> int:
        return self.space.level


# Default interpolation exponent q of the growth bound
def default_q(config: ProblemConfig) -> float:
    operator = config.operator
    if operator.nemytskii is not None:
        report = exponent_report(config.space.dim, operator.p)
        if report.lam is None:
            return 0.0
        return max(0.0, float((report.r0 - 1) * (1 - report.lam)))
    if operator.convection:
        return max(0.0, 3.0 - float(operator.p))
    return 0.0


# (Public) Space and operator family of a config at `level` (config.level by default)
def build_problem(config: ProblemConfig, level: Optional[int] = None) -> Problem:
    level = config.level if level is None else level
    space = make_space(
        config.space.kind,
        config.space.dim,
        level,
        config.space.s,
        config.space.quad_order,
        config.space.quad_rule,
    )
    family = build_family(config.operator, space.measure, default_q(config), config.jacobian)
    return Problem(config, space, family)
