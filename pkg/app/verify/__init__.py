from .report import CheckReport, ExponentReport, summarize
from .exponents import exponent_report, fluid_exponent
from .sampling import dual_norm_estimate, random_field, random_fields
from .hypotheses import (
    check_cancellation,
    check_coercivity,
    check_growth,
    check_monotone,
    resolve_growth_constants,
)
from .certify import certify_g
from .audit import audit_trajectory
