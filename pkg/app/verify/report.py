from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np


@dataclass(frozen=True)
class CheckReport:
    """
    Outcome of one hypothesis check.

    Margins are slacks (>= 0 means the inequality holds). `tolerance` is the
    absolute tolerance at the worst sample, so passed <=> worst_margin >= -tolerance.
    """

    name: str
    passed: bool
    samples: int
    worst_margin: float
    worst_witness: dict = field(default_factory=dict)
    fitted_constants: Optional[dict] = None
    tolerance: float = 0.0

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "samples": self.samples,
            "worst_margin": self.worst_margin,
            "worst_witness": self.worst_witness,
            "fitted_constants": self.fitted_constants,
            "tolerance": self.tolerance,
        }


# Fold per-sample margins and tolerances into a report; the worst sample minimises margin + tol
def summarize(name, margins, tolerances, witnesses, fitted_constants=None) -> CheckReport:
    margins = np.asarray(margins, dtype=float)
    tolerances = np.broadcast_to(np.asarray(tolerances, dtype=float), margins.shape)
    if margins.size == 0:
        return CheckReport(name, True, 0, 0.0, {}, fitted_constants, 0.0)
    worst = int(np.argmin(margins + tolerances))
    passed = bool(np.all(margins >= -tolerances))
    return CheckReport(
        name=name,
        passed=passed,
        samples=int(margins.size),
        worst_margin=float(margins[worst]),
        worst_witness=witnesses[worst],
        fitted_constants=fitted_constants,
        tolerance=float(tolerances[worst]),
    )


def _rational(value):
    return None if value is None else str(value)


@dataclass(frozen=True)
class ExponentReport:
    """Exact exponent arithmetic for dimension d and growth exponent p; sigma None means +inf."""

    d: int
    p: Fraction
    sigma: Optional[Fraction]
    sigma_conj: Fraction
    r0: Fraction
    r_fluid: Optional[Fraction]
    two_pprime: Fraction
    lam: Optional[Fraction]
    flags: dict

    @property
    def admissible_scalar(self) -> bool:
        return self.flags["p_above_2d_over_d_plus_2"]

    @property
    def admissible_fluid(self) -> bool:
        return self.flags["two_pprime_le_r_fluid"] and self.flags["p_at_least_11_5"]

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "p": _rational(self.p),
            "sigma": _rational(self.sigma),
            "sigma_conj": _rational(self.sigma_conj),
            "r0": _rational(self.r0),
            "r_fluid": _rational(self.r_fluid),
            "two_pprime": _rational(self.two_pprime),
            "lambda": _rational(self.lam),
            "lambda_times_r0_minus_1": _rational(
                None if self.lam is None else self.lam * (self.r0 - 1)
            ),
            "flags": dict(self.flags),
        }
