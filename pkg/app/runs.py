"""
Run orchestration
=================
* Reads and validates problem files (pydantic errors become SchemaError or
  ConfigValueError carrying the JSON pointer of the offending entry)
* Drives solver, checkers and convergence studies for each subcommand
* Writes CSV traces, JSON reports and a manifest per run
"""

import contextlib
import json
import os
import time

import numpy as np
import psutil
from pydantic import ValidationError

from config import config, logger
from app.convlab import cauchy_study, hirano_diagnostic, weak_limit_check
from app.exceptions import ConfigValueError, SchemaError, TrajectoryError
from app.solver import (
    build_problem,
    project_initial,
    solve_trajectory,
    time_derivative_pairings,
)
from app.utils import digest, write_csv, write_json
from app.verify import (
    audit_trajectory,
    certify_g,
    check_cancellation,
    check_coercivity,
    check_growth,
    check_monotone,
    exponent_report,
    resolve_growth_constants,
)
from models.problem import ProblemConfig

# =============================================================================
# Problem files
# =============================================================================
# pydantic error types reported as value errors; everything else is a schema error
VALUE_ERROR_TYPES = {
    "value_error",
    "finite_number",
    "greater_than",
    "greater_than_equal",
    "less_than",
    "less_than_equal",
}


def _reject_constant(name):
    raise ConfigValueError(f"non-finite number {name} is not allowed")


def _pointer(loc) -> str:
    return "/" + "/".join(str(part) for part in loc) if loc else ""


# (Public) Validate a decoded problem document
def load_config(data) -> ProblemConfig:
    try:
        problem_config = ProblemConfig.model_validate(data)
    except ValidationError as e:
        error = e.errors()[0]
        error_class = ConfigValueError if error["type"] in VALUE_ERROR_TYPES else SchemaError
        raise error_class(error["msg"], _pointer(error["loc"]))
    _warn_inadmissible(problem_config)
    return problem_config


# (Public) Read, decode and validate a problem file
def parse_config(path) -> ProblemConfig:
    try:
        with open(path, encoding="utf-8") as f:
            text = f.read()
    except OSError as e:
        raise SchemaError(f"cannot read problem file: {e}")
    try:
        data = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as e:
        raise SchemaError(f"invalid JSON: {e}")
    problem_config = load_config(data)
    logger.info(f"Loaded problem file {path}")
    return problem_config


def serialize_config(problem_config: ProblemConfig) -> dict:
    return problem_config.model_dump(mode="json")


# Exponent flags are advisory: inadmissible combinations are logged, not rejected
def _warn_inadmissible(problem_config):
    operator = problem_config.operator
    report = exponent_report(problem_config.space.dim, operator.p)
    g_spec = operator.nemytskii
    if g_spec is not None:
        if not report.admissible_scalar:
            logger.warning(f"p = {operator.p} is not above 2d/(d+2) for d = {report.d}")
        if g_spec.has_power and g_spec.r > report.r0:
            logger.warning(f"Nemytskii growth r = {g_spec.r} exceeds r0 = {report.r0}")
    if operator.convection and not report.admissible_fluid:
        logger.warning(f"p = {operator.p} is outside the admissible fluid range [11/5, 3)")


# =============================================================================
# Shared helpers
# =============================================================================


@contextlib.contextmanager
def _timed(timings, phase):
    start = time.perf_counter()
    try:
        yield
    finally:
        timings[phase] = time.perf_counter() - start
        logger.info(f"Phase {phase} took {timings[phase]:.2f}s")


def _memory_mb():
    try:
        return psutil.Process().memory_info().rss / 1024**2
    except Exception:
        logger.debug("psutil not available or error getting memory usage")
        return None


def _manifest(problem_config, seed, artifacts, timings, **extra):
    return {
        "version": config.VERSION,
        "config_digest": digest(serialize_config(problem_config)),
        "seed": seed,
        "artifacts": artifacts,
        "timings": timings,
        "rss_mb": _memory_mb(),
        **extra,
    }


def _check_times(problem_config):
    return np.linspace(0.0, problem_config.T, problem_config.checks.t_samples).tolist()


def _with_seed(problem_config, seed):
    if seed is None:
        return problem_config
    checks = problem_config.checks.model_copy(update={"seed": seed})
    return problem_config.model_copy(update={"checks": checks})


def _artifact(out_dir, name):
    return os.path.join(out_dir, config.ARTIFACT_NAMES[name])


# =============================================================================
# Subcommands
# =============================================================================


# (Public) Solve, audit, write trajectory.csv + audit.json + manifest.json; 0 iff all audits pass
def run_solve(config_path, level=None, out_dir=os.path.join("runs", "solve")) -> int:
    problem_config = parse_config(config_path)
    checks = problem_config.checks
    timings = {}
    with _timed(timings, "solve"):
        problem = build_problem(problem_config, level)
        try:
            traj = solve_trajectory(problem_config, problem=problem)
        except TrajectoryError as e:
            logger.error(f"Solve failed at step {e.step_index}: {e}")
            return 1

    with _timed(timings, "audit"):
        times = _check_times(problem_config)
        family = resolve_growth_constants(
            problem.family,
            problem.space,
            times,
            checks.field_samples,
            checks.seed,
            checks.dual_norm_starts,
        )
        expected = project_initial(problem.space, problem.level, problem_config.initial)
        reports = audit_trajectory(
            traj,
            family,
            problem_config.forcing,
            expected_initial=expected,
            tolerance=checks.tolerance,
        )
        derivative = time_derivative_pairings(traj)
    passed = all(report.passed for report in reports)

    artifacts = {name: _artifact(out_dir, name) for name in ("trajectory", "audit", "manifest")}
    write_csv(artifacts["trajectory"], traj.to_frame())
    write_json(
        artifacts["audit"],
        {
            "level": problem.level,
            "passed": passed,
            "constants": family.constants.to_dict(times),
            "reports": [report.to_dict() for report in reports],
            # |(u^{k+1} - u^k) / tau|_{Z*} per step and in L^{p'}(0, T; Z*)
            "time_derivative": {
                "s": traj.space.s,
                "per_step": derivative.per_step,
                "composite": derivative.composite,
            },
        },
    )
    write_json(
        artifacts["manifest"],
        _manifest(problem_config, checks.seed, artifacts, timings, level=problem.level),
    )
    logger.info(f"Solve {'passed' if passed else 'FAILED'} audits; artifacts in {out_dir}")
    return 0 if passed else 1


# (Public) Hypothesis checks; returns (exit code, report bundle)
def run_check(config_path, seed=None, out_dir=None):
    problem_config = _with_seed(parse_config(config_path), seed)
    checks = problem_config.checks
    timings = {}
    with _timed(timings, "check"):
        problem = build_problem(problem_config)
        family, space = problem.family, problem.space
        times = _check_times(problem_config)
        reports = [
            check_coercivity(
                family,
                space,
                times,
                checks.field_samples,
                seed=checks.seed,
                tolerance=checks.tolerance,
            ),
            check_growth(
                family,
                space,
                times,
                checks.field_samples,
                seed=checks.seed,
                tolerance=checks.tolerance,
                fit=family.constants.c4 is None,
                starts=checks.dual_norm_starts,
            ),
            check_monotone(family.principal, space, checks.pair_samples, seed=checks.seed),
        ]
        if problem_config.operator.convection:
            reports.append(check_cancellation(space, checks.field_samples, seed=checks.seed))
        g_spec = problem_config.operator.nemytskii
        if g_spec is not None:
            reports.extend(
                certify_g(g_spec, problem_config.operator.p, space.dim, times, checks.tolerance)
            )
    passed = all(report.passed for report in reports)
    bundle = {
        "config_digest": digest(serialize_config(problem_config)),
        "seed": checks.seed,
        "level": problem.level,
        "passed": passed,
        "exponents": exponent_report(space.dim, problem_config.operator.p).to_dict(),
        "reports": [report.to_dict() for report in reports],
    }
    if out_dir is not None:
        artifacts = {name: _artifact(out_dir, name) for name in ("report", "manifest")}
        write_json(artifacts["report"], bundle)
        manifest = _manifest(problem_config, checks.seed, artifacts, timings)
        write_json(artifacts["manifest"], manifest)
    failed = [report.name for report in reports if not report.passed]
    if failed:
        logger.warning(f"Failed checks: {failed}")
    return (0 if passed else 1), bundle


# (Public) Level ladder study, writes study.csv + manifest.json
def run_converge(config_path, levels, out_dir=os.path.join("runs", "converge")) -> int:
    problem_config = parse_config(config_path)
    timings = {}
    with _timed(timings, "converge"):
        try:
            study = cauchy_study(problem_config, levels)
        except TrajectoryError as e:
            logger.error(f"Study failed at step {e.step_index}: {e}")
            return 1
        hirano_diagnostic(study)
        weak_limit_check(study)
    if np.any(np.diff(study.e_V) > 1e-10):
        logger.warning(f"Cauchy errors are not monotone over levels {list(study.levels)}")

    artifacts = {name: _artifact(out_dir, name) for name in ("study", "manifest")}
    write_csv(artifacts["study"], study.to_frame())
    write_json(
        artifacts["manifest"],
        _manifest(
            problem_config,
            problem_config.checks.seed,
            artifacts,
            timings,
            levels=list(study.levels),
        ),
    )
    return 0


# (Public) Exponent report as a JSON-ready dict
def run_exponents(d, p) -> dict:
    return exponent_report(d, p).to_dict()
