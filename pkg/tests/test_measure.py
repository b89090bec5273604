from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weyl1d import errors
from weyl1d.fixtures import get_fixture
from weyl1d.measure import (ball_measure, default_domination_grid, domination_bound_check,
                            flat_ratio_integral, ratio_integral, ratio_profile,
                            richardson_first_order)


def sin_power_mass(p, a, b):
    """Oracle for ``int_a^b sin^p`` with p in {1, 2, 3}."""
    F = {1: lambda x: -math.cos(x),
         2: lambda x: x / 2 - math.sin(2 * x) / 4,
         3: lambda x: -math.cos(x) + math.cos(x) ** 3 / 3}[p]
    return F(b) - F(a)


@pytest.mark.parametrize("N", [2, 3, 4])
@pytest.mark.parametrize("x, r", [(0.0, 0.5), (1.0, 0.3), (3.0, 1.0), (math.pi / 2, 2.0)])
def test_ball_measure_sinpower(N, x, r):
    space = get_fixture(f"sinpow_N{N}").build()
    lo, hi = max(x - r, 0.0), min(x + r, math.pi)
    assert ball_measure(space, x, r) == pytest.approx(sin_power_mass(N - 1, lo, hi), rel=1e-12)


def test_ball_measure_broadcasts():
    space = get_fixture("flat_pi").build()
    x = np.array([0.0, 1.0, math.pi])[:, None]
    r = np.array([0.5, 1.0])[None, :]
    m = ball_measure(space, x, r)
    assert m.shape == (3, 2)
    np.testing.assert_allclose(m, [[0.5, 1.0], [1.0, 2.0], [0.5, 1.0]], rtol=1e-14)


@given(st.floats(0, 2 * math.pi * 0.9999), st.floats(1e-6, math.pi * 0.999))
@settings(max_examples=200, deadline=None)
def test_circle_ball_is_full_arc(x, r):
    space = get_fixture("circle_r1").build()
    assert ball_measure(space, x, r) == pytest.approx(2 * r, rel=1e-12)


def test_circle_ball_with_varying_density_wraps():
    from weyl1d.geometry import Circle, DensitySpec, make_space

    space = make_space(Circle(1.0), DensitySpec.exp_neg_f("-cos(x)", -1.0, 2.0))
    # ball around the seam equals the ball around the same point read as 2 pi
    a = ball_measure(space, 0.0, 0.7)
    b = ball_measure(space, 2 * math.pi, 0.7)
    assert a == pytest.approx(b, rel=1e-12)
    assert a == pytest.approx(float(space.mass_between(2 * math.pi - 0.7, 2 * math.pi))
                              + float(space.mass_between(0.0, 0.7)), rel=1e-12)


@pytest.mark.parametrize("x, r, exc", [(-1.0, 0.1, errors.OutOfDomain),
                                       (1.0, 0.0, errors.InvalidParameter),
                                       (1.0, -1.0, errors.InvalidParameter)])
def test_ball_measure_rejects(x, r, exc):
    with pytest.raises(exc):
        ball_measure(get_fixture("flat_pi").build(), x, r)


def test_circle_ball_too_large():
    with pytest.raises(errors.InvalidParameter):
        ball_measure(get_fixture("circle_r1").build(), 0.0, math.pi)


@pytest.mark.parametrize("r", [1e-4, 1e-2, 0.3, 1.0, math.pi / 2])
def test_flat_ratio_integral_closed_form(r):
    space = get_fixture("flat_pi").build()
    assert ratio_integral(space, r) == pytest.approx(flat_ratio_integral(math.pi, r), abs=1e-10)


def test_ratio_integral_invariant_under_measure_scaling():
    from weyl1d.geometry import make_space

    space = get_fixture("sinpow_N3").build()
    scaled = make_space(space.kind, space.density.scaled(17.0))
    assert ratio_integral(scaled, 0.2) == pytest.approx(ratio_integral(space, 0.2), rel=1e-11)


def test_richardson_removes_linear_term():
    r = np.geomspace(1.0, 1e-3, 7)
    vals = 2.0 + 3.0 * r
    np.testing.assert_allclose(richardson_first_order(r, vals), 2.0, rtol=1e-13)


def test_ratio_profile_threads_match_serial():
    space = get_fixture("sinpow_N2").build()
    a = ratio_profile(space, steps=5)
    b = ratio_profile(space, steps=5, threads=3)
    np.testing.assert_array_equal(a.integrals, b.integrals)


def test_ratio_profile_near_degenerate():
    space = get_fixture("sampled_near_degenerate").build()
    prof = ratio_profile(space)
    assert prof.extrapolated_limit == pytest.approx(math.pi / 2, rel=1e-3)


@pytest.mark.parametrize("kwargs", [dict(steps=2), dict(r_min=1.0, r_max=0.5), dict(r_min=0.0)])
def test_ratio_profile_rejects(kwargs):
    with pytest.raises(errors.InvalidParameter):
        ratio_profile(get_fixture("flat_pi").build(), **kwargs)


def test_default_domination_grid_shape():
    xs, rs = default_domination_grid(get_fixture("flat_pi").build())
    assert xs.size == 200 and rs.size == 20
    assert xs[0] == 0.0 and xs[-1] == pytest.approx(math.pi)
    assert np.all(np.diff(xs) >= 0)


def test_domination_flat_sup_is_one():
    res = domination_bound_check(get_fixture("flat_pi").build())
    assert res.sup_observed == pytest.approx(1.0, rel=1e-10)


def test_domination_rejects_circle():
    with pytest.raises(errors.DomainMismatch):
        domination_bound_check(get_fixture("circle_r1").build())
