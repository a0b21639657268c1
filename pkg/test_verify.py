import dataclasses
from fractions import Fraction

import numpy as np
import pytest

from app.operators import PLaplace, build_family, p_laplace_apply
from app.solver import build_problem, project_initial, solve_trajectory
from app.spaces import DiscreteField, make_space, norm_V
from app.verify import (
    audit_trajectory,
    certify_g,
    check_cancellation,
    check_coercivity,
    check_growth,
    check_monotone,
    dual_norm_estimate,
    random_fields,
    resolve_growth_constants,
    summarize,
)
from models.data_type import SpaceKind
from models.problem import NemytskiiSpec, OperatorSpec

SINE = SpaceKind.DIRICHLET_SINE
TORUS = SpaceKind.TORUS_DIVFREE


@dataclasses.dataclass(frozen=True)
class ReversedLaplace:
    """Negated p-Laplace."""

    p: float
    name: str = "reversed"

    def apply(self, space, u, t=0.0):
        return -p_laplace_apply(space, u, self.p)


# ---- reports ----


def test_summarize_picks_the_worst_sample():
    report = summarize("demo", [0.5, -1e-12, -0.2], [1e-10, 1e-10, 0.1], ["a", "b", "c"])
    assert not report.passed
    assert report.worst_witness == "c"
    assert report.worst_margin == -0.2
    assert report.tolerance == 0.1
    assert report.samples == 3


def test_summarize_without_samples_passes():
    report = summarize("empty", [], [], [])
    assert report.passed and report.samples == 0


# ---- sampling ----


def test_random_fields_cycle_scales_and_smoothness():
    space = make_space(SINE, 1, 6)
    samples = random_fields(space, np.random.default_rng(0), 10, scales=(1.0, 10.0))
    assert [meta["scale"] for _, meta in samples[:4]] == [1.0, 10.0, 1.0, 10.0]
    assert samples[1][1]["alpha"] != samples[3][1]["alpha"]
    assert np.linalg.norm(samples[1][0].coeffs) == pytest.approx(10.0)


def test_dual_norm_is_exact_for_p2():
    space = make_space(SINE, 1, 5)
    w = np.arange(1.0, 6.0)
    expected = np.sqrt(np.sum(w**2 / space.eigenvalues))
    assert dual_norm_estimate(w, space, 2) == pytest.approx(expected)


@pytest.mark.parametrize("p", [1.5, 3.0])
def test_dual_norm_of_p_laplace_image(p):
    # <B v, v> = |v|_V^p attains the supremum, so |B v|_* = |v|_V^(p-1)
    space = make_space(SINE, 1, 6)
    v = DiscreteField(space, np.random.default_rng(1).standard_normal(6) / np.arange(1, 7))
    w = p_laplace_apply(space, v, p)
    estimate = dual_norm_estimate(w, space, p, starts=3)
    assert estimate == pytest.approx(norm_V(v, p) ** (p - 1), rel=1e-6)


def test_dual_norm_of_zero_functional():
    space = make_space(SINE, 1, 3)
    assert dual_norm_estimate(np.zeros(3), space, 3) == 0.0


# ---- coercivity ----


def test_coercivity_of_scalar_family(make_config):
    problem = build_problem(make_config("scalar"))
    report = check_coercivity(problem.family, problem.space, [0.0, 0.25, 0.5], 20)
    assert report.passed
    assert report.samples == 63
    assert report.fitted_constants == {"c1": 1.0}


def test_coercivity_detects_an_inflated_constant():
    space = make_space(SINE, 1, 4)
    family = build_family(OperatorSpec(p=2), space.measure)
    report = check_coercivity(family, space, [0.0], 10, c1=10.0)
    assert not report.passed
    assert report.worst_margin < 0


@pytest.mark.parametrize("p, delta", [("3/2", 0.1), (3, 0.1), ("5/2", 0.0)])
def test_coercivity_with_derived_constants(p, delta):
    space = make_space(SINE, 2, 3)
    family = build_family(OperatorSpec(p=p, delta=delta), space.measure)
    assert check_coercivity(family, space, [0.0], 40, seed=3).passed


# ---- growth ----


def test_growth_of_the_heat_operator():
    space = make_space(SINE, 1, 6)
    family = build_family(OperatorSpec(p=2), space.measure)
    assert check_growth(family, space, [0.0], 20).passed

    weak = build_family(OperatorSpec(p=2, constants={"c3": 0.5}), space.measure)
    report = check_growth(weak, space, [0.0], 20)
    assert not report.passed


def test_growth_of_p_laplace_with_derived_constants():
    space = make_space(SINE, 1, 5)
    family = build_family(OperatorSpec(p=3), space.measure)
    assert check_growth(family, space, [0.0], 15, starts=3).passed


def test_growth_fit_for_lower_order_terms(make_config):
    problem = build_problem(make_config("scalar", level=5))
    family, space = problem.family, problem.space
    assert family.constants.c4 is None
    with pytest.raises(ValueError):
        check_growth(family, space, [0.0], 5)
    report = check_growth(family, space, [0.0, 0.5], 10, fit=True, starts=2)
    assert report.passed
    assert report.fitted_constants["c4"] >= 0.0

    resolved = resolve_growth_constants(family, space, [0.0, 0.5], 10, starts=2)
    assert resolved.constants.c4 == pytest.approx(4.0 * report.fitted_constants["c4"])
    assert check_growth(resolved, space, [0.0, 0.5], 10, starts=2).passed


# ---- monotonicity ----


@pytest.mark.parametrize("p", [Fraction(3, 2), Fraction(2), Fraction(3)])
@pytest.mark.parametrize("delta", [0.0, 0.1])
def test_p_laplace_is_monotone(p, delta):
    space = make_space(SINE, 2, 3)
    report = check_monotone(PLaplace(p, delta), space, 1000, seed=11)
    assert report.passed
    assert report.samples == 1000


def test_monotonicity_check_catches_a_decreasing_operator():
    space = make_space(SINE, 1, 4)
    report = check_monotone(ReversedLaplace(2.0), space, 20)
    assert not report.passed


# ---- convection ----


def test_convection_cancellation_suite():
    report = check_cancellation(make_space(TORUS, 2, 3), 500, seed=5)
    assert report.passed
    assert report.samples == 500


# ---- Nemytskii certification ----


def test_certify_admissible_g():
    spec = NemytskiiSpec(kind="sum", a=1.0, r=4, c=-1.5, c7={"kind": "constant", "value": 0.5})
    g2, g3 = certify_g(spec, 3, 1, times=(0.0, 1.0))
    assert g2.name == "g2-admissibility" and g2.passed
    assert g2.fitted_constants == {"c6": 1.0}
    assert g3.name == "g3-lower-bound" and g3.passed
    assert len(g3.fitted_constants["C8"]) == 2


def test_certify_rejects_growth_beyond_r0():
    g2, _ = certify_g(NemytskiiSpec(kind="power", a=1.0, r=10), 3, 1)
    assert not g2.passed
    assert g2.worst_margin == -1.0
    assert g2.worst_witness["r0"] == "9"


# ---- trajectory audit ----


def test_heat_audit_passes(make_config):
    cfg = make_config("heat")
    problem = build_problem(cfg)
    traj = solve_trajectory(cfg, problem=problem)
    expected = project_initial(problem.space, problem.level, cfg.initial)
    reports = audit_trajectory(traj, problem.family, cfg.forcing, expected_initial=expected)
    assert [r.name for r in reports] == [
        "energy-inequality",
        "a-priori-bound",
        "induced-operator-bound",
        "initial-data",
    ]
    assert all(r.passed for r in reports)
    assert reports[0].samples == 10


def test_mutated_trajectory_fails_the_audit(make_config):
    cfg = make_config("heat")
    problem = build_problem(cfg)
    traj = solve_trajectory(cfg, problem=problem)
    middle = traj.nsteps // 2
    coeffs = traj.fields[middle].coeffs.copy()
    coeffs[0] *= 1.1
    traj.fields[middle] = DiscreteField(traj.space, coeffs)
    reports = audit_trajectory(traj, problem.family, cfg.forcing)
    assert not all(r.passed for r in reports)
    energy = reports[0]
    assert not energy.passed
    assert energy.worst_witness["step"] == middle


def test_scalar_energy_audit(make_config):
    cfg = make_config("scalar", nsteps=10)
    problem = build_problem(cfg)
    traj = solve_trajectory(cfg, problem=problem)
    reports = {r.name: r for r in audit_trajectory(traj, problem.family, cfg.forcing)}
    assert reports["energy-inequality"].passed
    assert reports["a-priori-bound"].passed
    assert reports["induced-operator-bound"].fitted_constants["c4"] is not None


def test_zero_step_audit(make_config):
    cfg = make_config("heat", nsteps=0)
    problem = build_problem(cfg)
    traj = solve_trajectory(cfg, problem=problem)
    reports = audit_trajectory(traj, problem.family, cfg.forcing)
    assert all(r.passed for r in reports)
    assert reports[0].samples == 0


@pytest.mark.parametrize("name", ["heat", "scalar", "fluid"])
@pytest.mark.parametrize("level", [4, 8])
def test_energy_inequality_for_built_in_problems(make_config, name, level):
    cfg = make_config(name, level=level, nsteps=100)
    problem = build_problem(cfg)
    traj = solve_trajectory(cfg, problem=problem)
    energy = audit_trajectory(traj, problem.family, cfg.forcing)[0]
    assert energy.name == "energy-inequality"
    assert energy.samples == 100
    assert energy.passed
    assert energy.worst_margin >= -1e-9
