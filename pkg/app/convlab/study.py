"""
Multi-level convergence studies
===============================
Solves one problem on a ladder of levels n_1 < ... < n_L, takes the finest
solution u_N as the stand-in for the unavailable weak limit and measures, on
the level-N space:

* e_V = |u_n - u_N|_{L^p(0,T;V)} and e_H = sup_t |u_n - u_N|_H
* h_n = sum_k tau <A(t^k) u_n^k, u_n^k - u_N^k>
* w_n = sum_k tau <A(t^k) u_n^k - A(t^k) u_N^k, phi> per fixed test field phi

Time integrals use left-endpoint weights (tau_{k+1} on the value at t^k).
"""

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import pandas as pd

from config import config, logger
from app.exceptions import StudyError
from app.operators import on_space
from app.solver import build_problem, solve_trajectory
from app.spaces import basis_field, norm_H, norm_V
from models.problem import ProblemConfig


@dataclass
class LevelStudy:
    config: ProblemConfig
    levels: tuple
    trajectories: dict
    e_V: np.ndarray
    e_H: np.ndarray
    h: Optional[np.ndarray] = None
    w: dict = field(default_factory=dict)

    @property
    def reference(self) -> int:
        return self.levels[-1]

    @property
    def reference_trajectory(self):
        return self.trajectories[self.reference]

    # One row per level: n, e_V, e_H, h_n, then w_<mode> per test field
    def to_frame(self) -> pd.DataFrame:
        columns = dict(zip(config.STUDY_COLUMNS, [list(self.levels), self.e_V, self.e_H]))
        h = self.h if self.h is not None else np.full(len(self.levels), np.nan)
        columns[config.STUDY_COLUMNS[3]] = h
        for name, values in self.w.items():
            columns[name] = values
        return pd.DataFrame(columns)


def _check_ladder(levels):
    levels = tuple(int(n) for n in levels)
    if not levels:
        raise StudyError("a study needs at least one level")
    if any(n < 1 for n in levels):
        raise StudyError(f"levels must be >= 1, got {levels}")
    if any(b <= a for a, b in zip(levels, levels[1:])):
        raise StudyError(f"levels must be strictly increasing, got {levels}")
    return levels


# Left-endpoint weights: tau_{k+1} on the value at t^k, zero on the final time
def _left_weights(times):
    weights = np.zeros(len(times))
    weights[:-1] = np.diff(np.asarray(times, dtype=float))
    return weights


# (Public) Solve at every level and measure the distance to the finest solution
def cauchy_study(problem_config: ProblemConfig, levels, threads=None) -> LevelStudy:
    levels = _check_ladder(levels)
    threads = config.GALERKIN_THREADS if threads is None else threads
    start = time.perf_counter()
    with ThreadPoolExecutor(max_workers=max(1, min(threads, len(levels)))) as pool:
        futures = {n: pool.submit(solve_trajectory, problem_config, n) for n in levels}
        trajectories = {n: futures[n].result() for n in levels}
    logger.info(f"Solved levels {list(levels)} in {time.perf_counter() - start:.2f}s")

    reference = trajectories[levels[-1]]
    for n in levels:
        if not np.array_equal(trajectories[n].times, reference.times):
            raise StudyError(f"level {n} ran on a different time grid than level {levels[-1]}")

    p = float(problem_config.operator.p)
    weights = _left_weights(reference.times)
    ref_space = reference.space
    e_V, e_H = [], []
    for n in levels:
        diffs = [
            on_space(ref_space, u) - u_ref
            for u, u_ref in zip(trajectories[n].fields, reference.fields)
        ]
        v_p = np.array([norm_V(d, p) ** p for d in diffs])
        e_V.append(float(np.sum(weights * v_p) ** (1.0 / p)))
        e_H.append(max(norm_H(d) for d in diffs))
    study = LevelStudy(problem_config, levels, trajectories, np.array(e_V), np.array(e_H))
    logger.info(f"Cauchy errors e_V = {study.e_V.tolist()}")
    return study


def _reference_family(study, A):
    if A is not None:
        return A
    return build_problem(study.config, study.reference).family


# (Public) h_n = sum_k tau <A u_n^k, u_n^k - u_N^k>, with u_N standing in for the limit
def hirano_diagnostic(study: LevelStudy, A=None) -> np.ndarray:
    A = _reference_family(study, A)
    reference = study.reference_trajectory
    space = reference.space
    weights = _left_weights(reference.times)
    h = []
    for n in study.levels:
        total = 0.0
        fields = zip(weights, reference.times, study.trajectories[n].fields, reference.fields)
        for weight, t, u, u_ref in fields:
            if weight == 0.0:
                continue
            u = on_space(space, u)
            total += weight * float(A.apply(space, u, t) @ (u - u_ref).coeffs)
        h.append(total)
    study.h = np.array(h)
    logger.info(f"Limit-identification diagnostic h_n = {study.h.tolist()}")
    return study.h


# (Public) w_n = sum_k tau <A u_n^k - A u_N^k, phi> for fixed test fields (basis modes by default)
def weak_limit_check(study: LevelStudy, A=None, test_fields=None) -> dict:
    A = _reference_family(study, A)
    reference = study.reference_trajectory
    space = reference.space
    if test_fields is None:
        modes = [m for m in study.config.checks.test_modes if m <= space.size]
        test_fields = {f"w_{m}": basis_field(space, m) for m in modes}
    weights = _left_weights(reference.times)

    # A u_N^k is shared by every level
    reference_pairings = [
        A.apply(space, u_ref, t) if weight != 0.0 else None
        for weight, t, u_ref in zip(weights, reference.times, reference.fields)
    ]
    results = {name: [] for name in test_fields}
    for n in study.levels:
        totals = dict.fromkeys(test_fields, 0.0)
        fields = zip(weights, reference.times, study.trajectories[n].fields)
        for k, (weight, t, u) in enumerate(fields):
            if weight == 0.0:
                continue
            delta = A.apply(space, on_space(space, u), t) - reference_pairings[k]
            for name, phi in test_fields.items():
                totals[name] += weight * float(delta @ on_space(space, phi).coeffs)
        for name in test_fields:
            results[name].append(totals[name])
    study.w = {name: np.array(values) for name, values in results.items()}
    return study.w
