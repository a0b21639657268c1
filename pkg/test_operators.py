import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from app.exceptions import ConfigurationError, KindError
from app.operators import (
    Convection,
    Nemytskii,
    OperatorFamily,
    PLaplace,
    StructuralConstants,
    assemble_rhs,
    build_family,
    convection_apply,
    derive_c6,
    derive_c8,
    family_apply,
    finite_difference_jacobian,
    nemytskii_apply,
    p_laplace_apply,
)
from app.spaces import DiscreteField, basis_field, make_space, norm_H, norm_V
from app.verify import random_fields
from models.data_type import JacobianMode, SpaceKind, StressStructure
from models.problem import ForcingSpec, NemytskiiSpec, OperatorSpec

SINE = SpaceKind.DIRICHLET_SINE
TORUS = SpaceKind.TORUS_DIVFREE

CUBIC = NemytskiiSpec(kind="power", a=1.0, r="4")
MIXED = NemytskiiSpec(
    kind="sum", a=0.5, r="7/2", c=-1.5, c7={"kind": "constant", "value": 0.25}
)


def _random_field(space, seed, scale=1.0):
    return DiscreteField(space, scale * np.random.default_rng(seed).standard_normal(space.size))


def _assert_jacobian_matches(part, space, u):
    analytic = part.jacobian(space, u)
    numeric = finite_difference_jacobian(
        lambda c: part.apply(space, DiscreteField(space, c)), u.coeffs
    )
    scale = np.max(np.abs(analytic))
    np.testing.assert_allclose(analytic, numeric, rtol=1e-4, atol=1e-5 * scale)


# ---- p-Laplace ----


@given(
    st.sampled_from([1.5, 2.0, 3.0]),
    st.lists(st.integers(-500, 500).map(lambda k: k / 100), min_size=5, max_size=5),
)
@settings(max_examples=300, deadline=None)
def test_p_laplace_pairing_equals_norm(p, c):
    space = make_space(SINE, 1, 5)
    u = DiscreteField(space, c)
    pairing = float(p_laplace_apply(space, u, p) @ u.coeffs)
    assert pairing == pytest.approx(norm_V(u, p) ** p, rel=1e-8, abs=1e-12)


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
@pytest.mark.parametrize("dim, level", [(1, 8), (2, 3)])
def test_p_laplace_pairing_on_sampled_fields(p, dim, level):
    space = make_space(SINE, dim, level)
    samples = random_fields(space, np.random.default_rng(17), 1000)
    pairings = np.array([float(p_laplace_apply(space, u, p) @ u.coeffs) for u, _ in samples])
    norms = np.array([norm_V(u, p) ** p for u, _ in samples])
    np.testing.assert_allclose(pairings, norms, rtol=1e-8)


def test_p_laplace_sine_oracle():
    space = make_space(SINE, 1, 1, quad_order=400)
    u = basis_field(space, 1) * (1.0 / math.sqrt(2.0))
    pairing = float(p_laplace_apply(space, u, 3) @ u.coeffs)
    assert pairing == pytest.approx(4.0 * math.pi**2 / 3.0, rel=1e-4)


def test_p_laplace_at_p2_is_the_stiffness_matrix():
    space = make_space(SINE, 2, 3)
    u = _random_field(space, 0)
    np.testing.assert_allclose(
        p_laplace_apply(space, u, 2), space.eigenvalues * u.coeffs, rtol=1e-10, atol=1e-10
    )


def test_p_laplace_of_zero_is_zero():
    space = make_space(SINE, 1, 4)
    zero = DiscreteField(space, np.zeros(space.size))
    for p in (1.5, 2.0, 3.0):
        np.testing.assert_array_equal(p_laplace_apply(space, zero, p), 0.0)


def test_p_laplace_rejects_bad_parameters():
    with pytest.raises(ConfigurationError):
        PLaplace(Fraction(1))
    with pytest.raises(ConfigurationError):
        PLaplace(Fraction(3), delta=-0.1)


@pytest.mark.parametrize("structure", [StressStructure.REGULARIZED, StressStructure.SHIFTED])
@pytest.mark.parametrize("p, delta", [(3.0, 0.0), (3.0, 0.1), (1.5, 0.1), (2.5, 0.2)])
def test_p_laplace_jacobian_matches_differences(p, delta, structure):
    space = make_space(SINE, 1, 4)
    part = PLaplace(Fraction(p), delta, structure)
    _assert_jacobian_matches(part, space, _random_field(space, 1))


def test_p_laplace_jacobian_on_torus():
    space = make_space(TORUS, 2, 2)
    _assert_jacobian_matches(PLaplace(Fraction(5, 2), 0.1), space, _random_field(space, 2))


# ---- Nemytskii ----


def test_cubic_nemytskii_oracle():
    # u = sin(pi x): int sin(pi x)^4 = 3/8
    space = make_space(SINE, 1, 4)
    u = basis_field(space, 1) * (1.0 / math.sqrt(2.0))
    assert float(nemytskii_apply(space, u, CUBIC) @ u.coeffs) == pytest.approx(0.375, rel=1e-12)


@pytest.mark.parametrize("spec", [CUBIC, MIXED])
def test_nemytskii_jacobian_matches_differences(spec):
    space = make_space(SINE, 1, 5)
    _assert_jacobian_matches(Nemytskii(spec), space, _random_field(space, 3))


def test_nemytskii_needs_sine_space():
    space = make_space(TORUS, 2, 1)
    with pytest.raises(KindError):
        nemytskii_apply(space, _random_field(space, 0), CUBIC)


def test_derived_g_constants():
    r = 3.5
    young = (1 - 1 / r) * 0.25 ** (r / (r - 1)) * (0.5 * r) ** (-1 / (r - 1))
    assert derive_c8(MIXED, 0.0) == pytest.approx(1.5 + young)
    assert derive_c8(CUBIC, 1.0) == 0.0
    assert derive_c6(MIXED) == 0.75
    assert derive_c6(CUBIC) == 1.0


def test_profile_without_power_term_is_rejected():
    with pytest.raises(ValueError):
        NemytskiiSpec(kind="saturating", c=1.0, c7={"kind": "constant", "value": 1.0})


# ---- convection ----


@pytest.mark.parametrize("seed", range(5))
def test_convection_cancels_on_divergence_free_fields(seed):
    space = make_space(TORUS, 2, 3)
    u = _random_field(space, seed, scale=3.0)
    pairing = float(convection_apply(space, u) @ u.coeffs)
    assert abs(pairing) <= 1e-10 * (1 + norm_H(u) ** 3)


def test_convection_jacobian_matches_differences():
    space = make_space(TORUS, 2, 2)
    _assert_jacobian_matches(Convection(), space, _random_field(space, 4))


def test_convection_needs_torus_space():
    space = make_space(SINE, 2, 2)
    with pytest.raises(KindError):
        convection_apply(space, _random_field(space, 0))


# ---- families ----


def test_family_is_the_sum_of_its_parts():
    spec = OperatorSpec(p=3, nemytskii=CUBIC)
    family = build_family(spec, 1.0)
    space = make_space(SINE, 1, 4)
    u = basis_field(space, 1)
    expected = p_laplace_apply(space, u, 3) + nemytskii_apply(space, u, CUBIC)
    np.testing.assert_allclose(family.apply(space, u), expected, rtol=1e-13)
    np.testing.assert_allclose(family_apply(family, space, 0.0, u), expected, rtol=1e-13)
    assert family.part_names == ("principal", "nemytskii")


def test_single_part_family_matches_the_part():
    family = build_family(OperatorSpec(p="5/2", delta=0.1), 1.0)
    space = make_space(SINE, 1, 4)
    u = _random_field(space, 5)
    np.testing.assert_array_equal(family.apply(space, u), family.principal.apply(space, u))


def test_family_accepts_coarser_fields():
    family = build_family(OperatorSpec(p=2), 1.0)
    fine = make_space(SINE, 1, 6)
    u = basis_field(make_space(SINE, 1, 2), 2)
    out = family.apply(fine, u)
    assert out.shape == (6,)
    assert out[1] == pytest.approx(4 * math.pi**2)


def test_empty_family_is_rejected():
    constants = StructuralConstants(1.0, lambda t: 0.0, 1.0, 0.0, 0.0, lambda t: 0.0)
    with pytest.raises(ConfigurationError):
        OperatorFamily(Fraction(2), 0.0, (), constants)


def test_finite_difference_family_jacobian():
    spec = OperatorSpec(p=3, delta=0.1, nemytskii=CUBIC)
    space = make_space(SINE, 1, 4)
    u = _random_field(space, 6)
    analytic = build_family(spec, 1.0).jacobian(space, u)
    fd_family = build_family(spec, 1.0, jacobian_mode=JacobianMode.FINITE_DIFFERENCE)
    numeric = fd_family.jacobian(space, u)
    np.testing.assert_allclose(numeric, analytic, rtol=1e-4, atol=1e-5 * np.max(np.abs(analytic)))


@pytest.mark.parametrize(
    "p, delta, structure, c1, c3",
    [
        ("3/2", 0.1, "regularized", 2**-0.25, 1.0),
        ("3/2", 0.1, "shifted", 2**-0.5, 1.0),
        ("3/2", 0.0, "regularized", 1.0, 1.0),
        (3, 0.1, "regularized", 1.0, 2**0.5),
        (3, 0.1, "shifted", 1.0, 2.0),
        (3, 0.0, "regularized", 1.0, 1.0),
    ],
)
def test_derived_constants(p, delta, structure, c1, c3):
    constants = build_family(OperatorSpec(p=p, delta=delta, structure=structure), 1.0).constants
    assert constants.c1 == pytest.approx(c1)
    assert constants.c3 == pytest.approx(c3)
    assert constants.c4 == 0.0


def test_lower_order_families_leave_c4_to_the_fit():
    constants = build_family(OperatorSpec(p=3, nemytskii=CUBIC), 1.0).constants
    assert constants.c4 is None
    assert constants.with_c4(2.0).c4 == 2.0


def test_declared_constants_win():
    spec = OperatorSpec(
        p=3,
        nemytskii=CUBIC,
        constants={"c1": 0.5, "c4": 3.0, "q": 1.0, "c2": {"kind": "constant", "value": 2.0}},
    )
    constants = build_family(spec, 1.0).constants
    assert (constants.c1, constants.c4, constants.q) == (0.5, 3.0, 1.0)
    assert constants.c2(0.7) == 2.0


# ---- forcing ----


def test_separable_bump_forcing():
    space = make_space(SINE, 1, 4)
    f_spec = ForcingSpec(kind="separable", profile={"kind": "constant", "value": 2.0})
    rhs = assemble_rhs(space, f_spec, 0.3)
    np.testing.assert_allclose(rhs, [math.sqrt(2.0), 0.0, 0.0, 0.0], atol=1e-14)


def test_mode_forcing_beyond_the_level_vanishes():
    space = make_space(SINE, 1, 4)
    np.testing.assert_array_equal(assemble_rhs(space, ForcingSpec(kind="mode", index=6), 0.0), 0.0)
    rhs = assemble_rhs(space, ForcingSpec(kind="mode", index=2), 0.0)
    np.testing.assert_array_equal(rhs, [0.0, 1.0, 0.0, 0.0])
