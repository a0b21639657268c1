from fractions import Fraction

from config import logger
from app.exceptions import ExponentError
from models.problem import to_fraction
from .report import ExponentReport

FLUID_LOWER_BOUND = Fraction(11, 5)


# Fluid growth exponent 12p / (-5p^2 + 17p - 6); None where the denominator is not positive
def fluid_exponent(p: Fraction):
    denominator = -5 * p**2 + 17 * p - 6
    if denominator <= 0:
        return None
    return 12 * p / denominator


# (Public) sigma, r0, r_fluid, 2p', lambda and admissibility flags, all in exact rationals
def exponent_report(d, p) -> ExponentReport:
    try:
        p = to_fraction(p)
    except ValueError as e:
        raise ExponentError(str(e))
    if int(d) != d or d < 1:
        raise ExponentError(f"dimension must be a positive integer, got {d}")
    if p <= 1:
        raise ExponentError(f"growth exponent p must exceed 1, got {p}")
    d = int(d)

    # Sobolev exponent, +inf (None) once p >= d
    sigma = Fraction(d) * p / (d - p) if p < d else None
    sigma_conj = sigma / (sigma - 1) if sigma is not None else Fraction(1)
    inv_sigma = 1 / sigma if sigma is not None else Fraction(0)

    r0 = p * (d + 2) / d
    r_fluid = fluid_exponent(p)
    two_pprime = 2 * p / (p - 1)

    # 1 / ((r0 - 1) sigma') = (1 - lambda) / 2 + lambda / sigma
    # undefined at the borderline sigma = 2, p = 2d / (d + 2)
    lam = None
    if inv_sigma != Fraction(1, 2):
        lam = (1 / ((r0 - 1) * sigma_conj) - Fraction(1, 2)) / (inv_sigma - Fraction(1, 2))

    flags = {
        "two_pprime_le_r_fluid": r_fluid is not None and two_pprime <= r_fluid,
        "p_at_least_11_5": p >= FLUID_LOWER_BOUND,
        "p_above_2d_over_d_plus_2": p > Fraction(2 * d, d + 2),
        "interpolation": lam is not None and lam * (r0 - 1) <= p - 1,
        "sigma_above_r0": sigma is None or sigma > r0,
        "lambda_in_unit_interval": lam is not None and 0 <= lam <= 1,
    }
    logger.debug(f"Exponents d = {d}, p = {p}: r0 = {r0}, lambda = {lam}, r_fluid = {r_fluid}")
    return ExponentReport(d, p, sigma, sigma_conj, r0, r_fluid, two_pprime, lam, flags)
