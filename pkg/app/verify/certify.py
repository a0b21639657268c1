import numpy as np

from config import config, logger
from app.operators import derive_c6, derive_c8, g_values
from models.problem import NemytskiiSpec, to_fraction
from .report import CheckReport, summarize

# |s| sampled on 10^-3 .. 10^3, both signs, plus s = 0
S_GRID = np.concatenate([[0.0], np.logspace(-3, 3, 25), -np.logspace(-3, 3, 25)])
POINTS_PER_DIM = 9


def _point_grid(d):
    nodes = (np.arange(POINTS_PER_DIM) + 0.5) / POINTS_PER_DIM
    grids = np.meshgrid(*([nodes] * d), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1)


# Exact test 1 <= r <= p (d + 2) / d
def _g2_report(spec: NemytskiiSpec, p, d) -> CheckReport:
    r0 = p * (d + 2) / d
    r = spec.r
    margin = min(r0 - r, r - 1)
    return CheckReport(
        name="g2-admissibility",
        passed=bool(1 <= r <= r0),
        samples=1,
        worst_margin=float(margin),
        worst_witness={"r": str(r), "r0": str(r0), "p": str(p), "d": d},
        fitted_constants={"c6": derive_c6(spec)},
        tolerance=0.0,
    )


# g(t, x, s) s >= -C8(t) on a (t, x, s) grid
def _g3_report(spec: NemytskiiSpec, d, times, tolerance) -> CheckReport:
    points = _point_grid(d)
    margins, tolerances, witnesses = [], [], []
    for t in times:
        c8 = derive_c8(spec, t)
        for s in S_GRID:
            values = np.full((1, points.shape[0]), s)
            product = g_values(spec, t, points, values)[0] * s
            worst = int(np.argmin(product))
            margins.append(product[worst] + c8)
            tolerances.append(tolerance * (1.0 + abs(product[worst]) + c8))
            witnesses.append({"t": t, "s": float(s), "x": points[worst].tolist(), "C8": c8})
    fitted = {"C8": [derive_c8(spec, t) for t in times]}
    return summarize("g3-lower-bound", margins, tolerances, witnesses, fitted)


# (Public) (g2) admissibility of r in exact rationals and the sampled (g3) lower bound
def certify_g(spec: NemytskiiSpec, p, d, times=(0.0,), tolerance=None) -> list:
    tolerance = config.CHECK_TOLERANCE if tolerance is None else tolerance
    p = to_fraction(p)
    reports = [_g2_report(spec, p, int(d)), _g3_report(spec, int(d), times, tolerance)]
    for report in reports:
        if not report.passed:
            logger.warning(f"Check {report.name}: FAILED, witness {report.worst_witness}")
    return reports
