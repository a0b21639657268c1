"""
Trajectory audit
================
Replays the discrete estimates on a stored trajectory, recomputing every
pairing from the stored fields rather than trusting the solver's records:

* energy-inequality: per step,
  1/2 |u^{k+1}|^2 - 1/2 |u^k|^2 + tau <A u^{k+1}, u^{k+1}> <= tau <f, u^{k+1}>
* a-priori-bound: max_m |u^m|^2 + c1 sum_{k<=m} tau |u^k|_V^p
  <= |u^0|^2 + 2 (2/c1)^(p'-1) sum tau |f^k|_*^p' + 2 sum tau C2(t^k)
  (Young's inequality with eps = c1 / 2 on <f, u>)
* induced-operator-bound: |A u|_{L^p'(V*)} <= c3 |u|_{L^p(V)}^(p-1)
  + c4 |u|_{L^inf(H)}^q |u|_{L^p(V)}^(p-1) + |C5|_{L^p'}
* initial-data: u^0 = P_n u0, when the expected field is supplied
"""

import numpy as np

from config import config, logger
from app.operators import assemble_rhs
from app.spaces import norm_H, norm_V
from .hypotheses import resolve_growth_constants
from .report import summarize
from .sampling import dual_norm_estimate


def _energy_report(traj, A, f_spec, tolerance):
    space = traj.space
    margins, witnesses = [], []
    for k in range(traj.nsteps):
        t_next = traj.times[k + 1]
        tau = t_next - traj.times[k]
        u0, u1 = traj.fields[k], traj.fields[k + 1]
        dissipation = float(A.apply(space, u1, t_next) @ u1.coeffs)
        work = float(assemble_rhs(space, f_spec, t_next) @ u1.coeffs)
        lhs = 0.5 * norm_H(u1) ** 2 - 0.5 * norm_H(u0) ** 2 + tau * dissipation
        margins.append(tau * work - lhs)
        witnesses.append({"step": k + 1, "t": t_next})
    return summarize("energy-inequality", margins, tolerance, witnesses)


def _apriori_report(traj, A, constants, dual_norms_f, tolerance):
    p = float(A.p)
    p_conj = p / (p - 1.0)
    c1 = constants.c1
    steps = traj.steps
    times = traj.times

    h_sq = np.array([norm_H(u) ** 2 for u in traj.fields])
    v_p = np.array([norm_V(u, p) ** p for u in traj.fields[1:]])
    lhs = h_sq.copy()
    lhs[1:] += c1 * np.cumsum(steps * v_p)

    forcing = 2.0 * (2.0 / c1) ** (p_conj - 1.0) * np.sum(steps * dual_norms_f**p_conj)
    c2_term = 2.0 * np.sum(steps * np.array([constants.c2(t) for t in times[1:]]))
    rhs = h_sq[0] + forcing + c2_term

    margins = rhs - lhs
    tolerances = tolerance * (1.0 + abs(rhs))
    witnesses = [
        {"m": m, "t": times[m], "lhs": float(lhs[m]), "rhs": float(rhs)} for m in range(len(lhs))
    ]
    return summarize("a-priori-bound", margins, tolerances, witnesses, {"c1": c1})


def _induced_operator_report(traj, A, constants, tolerance, starts):
    space = traj.space
    p = float(A.p)
    p_conj = p / (p - 1.0)
    steps = traj.steps
    fields, times = traj.fields[1:], traj.times[1:]

    dual_A = np.array(
        [
            dual_norm_estimate(A.apply(space, u, t), space, p, starts=starts, hint=u.coeffs)
            for u, t in zip(fields, times)
        ]
    )
    v_p = np.array([norm_V(u, p) ** p for u in fields])
    c5 = np.array([constants.c5(t) for t in times])

    lhs = float(np.sum(steps * dual_A**p_conj) ** (1.0 / p_conj))
    norm_LpV = float(np.sum(steps * v_p) ** (1.0 / p))
    norm_LinfH = max(norm_H(u) for u in traj.fields)
    norm_C5 = float(np.sum(steps * c5**p_conj) ** (1.0 / p_conj))
    rhs = (
        constants.c3 * norm_LpV ** (p - 1.0)
        + constants.c4 * norm_LinfH**constants.q * norm_LpV ** (p - 1.0)
        + norm_C5
    )
    witness = {"lhs": lhs, "norm_LpV": norm_LpV, "norm_LinfH": norm_LinfH, "norm_C5": norm_C5}
    return summarize(
        "induced-operator-bound",
        [rhs - lhs],
        [tolerance * (1.0 + lhs + rhs)],
        [witness],
        {"c3": constants.c3, "c4": constants.c4, "q": constants.q},
    )


def _initial_report(traj, expected, tolerance):
    distance = norm_H(traj.fields[0] - expected)
    return summarize(
        "initial-data",
        [-distance],
        [tolerance * (1.0 + norm_H(expected))],
        [{"distance": distance}],
    )


# (Public) Energy, a priori, induced-operator and (optionally) initial-data checks
def audit_trajectory(
    traj,
    A,
    f_spec,
    constants=None,
    expected_initial=None,
    tolerance=None,
    energy_tolerance=None,
    starts=1,
) -> list:
    tolerance = config.CHECK_TOLERANCE if tolerance is None else tolerance
    energy_tolerance = config.ENERGY_TOLERANCE if energy_tolerance is None else energy_tolerance
    space = traj.space
    if constants is not None:
        A = A.with_constants(constants)
    if A.constants.c4 is None:
        A = resolve_growth_constants(A, space, [traj.times[0], traj.times[-1]])
    constants = A.constants

    p = float(A.p)
    dual_norms_f = np.array(
        [
            dual_norm_estimate(assemble_rhs(space, f_spec, t), space, p, starts=starts)
            for t in traj.times[1:]
        ]
    )
    reports = [
        _energy_report(traj, A, f_spec, energy_tolerance),
        _apriori_report(traj, A, constants, dual_norms_f, tolerance),
        _induced_operator_report(traj, A, constants, tolerance, starts),
    ]
    if expected_initial is not None:
        reports.append(_initial_report(traj, expected_initial, tolerance))

    for report in reports:
        if report.passed:
            logger.info(f"Audit {report.name}: passed, worst margin {report.worst_margin:.3e}")
        else:
            logger.warning(
                f"Audit {report.name}: FAILED, worst margin {report.worst_margin:.3e} "
                f"at {report.worst_witness}"
            )
    return reports
