import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import pandas as pd

from config import config, logger
from app.exceptions import StepError, TrajectoryError
from app.operators import assemble_rhs
from app.spaces import SpectralSpace, dual_norm_Zstar, norm_H
from models.problem import ProblemConfig
from .initial import project_initial
from .problem import build_problem
from .stepping import euler_newton


@dataclass
class Trajectory:
    """Time grid t^0..t^K, fields u^0..u^K and per-step pairing records."""

    space: SpectralSpace
    p: Fraction
    times: list = field(default_factory=list)
    fields: list = field(default_factory=list)
    pairing_A: list = field(default_factory=list)
    pairing_f: list = field(default_factory=list)
    newton_iterations: list = field(default_factory=list)

    @property
    def level(self) -> int:
        return self.space.level

    @property
    def nsteps(self) -> int:
        return len(self.fields) - 1

    @property
    def steps(self) -> np.ndarray:
        return np.diff(np.asarray(self.times, dtype=float))

    @property
    def coefficients(self) -> np.ndarray:
        return np.array([u.coeffs for u in self.fields]).reshape(len(self.fields), self.space.size)

    def append(self, t, u, pairing_A, pairing_f, iterations):
        self.times.append(float(t))
        self.fields.append(u)
        self.pairing_A.append(float(pairing_A))
        self.pairing_f.append(float(pairing_f))
        self.newton_iterations.append(int(iterations))

    # step, t, c_1..c_N, norm_H, pairing_A, pairing_f, newton_iterations
    def to_frame(self) -> pd.DataFrame:
        df = pd.DataFrame(
            self.coefficients, columns=[f"c_{i + 1}" for i in range(self.space.size)]
        )
        df.insert(0, "t", self.times)
        df.insert(0, "step", np.arange(len(self.fields)))
        records = dict(
            zip(
                config.TRAJECTORY_RECORD_COLUMNS,
                [
                    [norm_H(u) for u in self.fields],
                    self.pairing_A,
                    self.pairing_f,
                    self.newton_iterations,
                ],
            )
        )
        return df.assign(**records)


def _record(traj, problem, t, u, iterations):
    space, family = problem.space, problem.family
    pairing_A = float(family.apply(space, u, t) @ u.coeffs)
    pairing_f = float(assemble_rhs(space, problem.config.forcing, t) @ u.coeffs)
    traj.append(t, u, pairing_A, pairing_f, iterations)


# Advance by tau, halving the step on Newton failure; returns [(t, u, iterations), ...]
def _advance(problem, u, t, tau, depth=0):
    cfg = problem.config
    try:
        u_next, iterations, _ = euler_newton(
            problem.space,
            problem.family,
            cfg.forcing,
            u,
            t + tau,
            tau,
            cfg.newton_tol,
            cfg.newton_maxit,
        )
        return [(t + tau, u_next, iterations)]
    except StepError as e:
        if depth >= config.MAX_BISECTIONS:
            raise
        logger.debug(f"Bisecting step at t = {t:.6g}: tau {tau:.3e} -> {tau / 2:.3e} ({e})")
        first = _advance(problem, u, t, tau / 2.0, depth + 1)
        t_mid, u_mid, _ = first[-1]
        return first + _advance(problem, u_mid, t_mid, tau / 2.0, depth + 1)


# (Public) project_initial followed by nsteps implicit Euler steps on [0, T]
def solve_trajectory(problem_config: ProblemConfig, level=None, problem=None) -> Trajectory:
    problem = build_problem(problem_config, level) if problem is None else problem
    space = problem.space
    start = time.perf_counter()
    traj = Trajectory(space, problem_config.operator.p)
    u = project_initial(space, space.level, problem_config.initial)
    _record(traj, problem, 0.0, u, 0)

    grid = np.linspace(0.0, problem_config.T, problem_config.nsteps + 1)
    for k in range(problem_config.nsteps):
        t = traj.times[-1]
        tau = grid[k + 1] - t
        try:
            accepted = _advance(problem, u, t, tau)
        except StepError as e:
            raise TrajectoryError(f"step {k + 1} failed: {e}", k + 1, e.residual)
        for t_next, u, iterations in accepted:
            _record(traj, problem, t_next, u, iterations)
    logger.info(
        f"Level {space.level}: {traj.nsteps} steps to T = {problem_config.T} "
        f"in {time.perf_counter() - start:.2f}s"
    )
    return traj


@dataclass(frozen=True)
class DerivativeNorms:
    per_step: np.ndarray
    composite: float


# (Public) |(u^{k+1} - u^k) / tau|_{Z*} per step and their L^{p'}(0, T; Z*) norm
def time_derivative_pairings(traj: Trajectory, space=None, s=None) -> DerivativeNorms:
    space = traj.space if space is None else space
    coefficients = traj.coefficients
    steps = traj.steps
    if steps.size == 0:
        return DerivativeNorms(np.zeros(0), 0.0)
    per_step = np.array(
        [
            dual_norm_Zstar((coefficients[k + 1] - coefficients[k]) / steps[k], space, s)
            for k in range(steps.size)
        ]
    )
    p = float(traj.p)
    p_conj = p / (p - 1.0)
    composite = float(np.sum(steps * per_step**p_conj) ** (1.0 / p_conj))
    return DerivativeNorms(per_step, composite)
