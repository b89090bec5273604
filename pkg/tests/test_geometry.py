from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weyl1d import errors
from weyl1d.fixtures import get_fixture, near_degenerate_density
from weyl1d.geometry import (Circle, CurvatureDimension, DensitySpec, Interval, SinPower,
                             compile_expression, distance, eval_density, make_space)


@pytest.mark.parametrize("K, N", [(0.0, 1.0), (0.0, 0.5), (math.inf, 2.0), (0.0, math.nan)])
def test_curvature_dimension_rejects_bad_pairs(K, N):
    with pytest.raises(errors.InvalidParameter):
        CurvatureDimension(K, N)


@pytest.mark.parametrize("kind", [lambda: Interval(0.0), lambda: Interval(-1.0),
                                  lambda: Circle(0.0)])
def test_kinds_reject_nonpositive_size(kind):
    with pytest.raises(errors.InvalidParameter):
        kind()


def test_circle_geometry():
    c = Circle(2.0)
    assert c.period == pytest.approx(4.0 * math.pi)
    assert c.diameter == pytest.approx(2.0 * math.pi)


@pytest.mark.parametrize("expr, x, expected", [
    ("x**2 + 1", 2.0, 5.0),
    ("-log(sin(x))", math.pi / 2, 0.0),
    ("sqrt(x) * pi", 4.0, 2.0 * math.pi),
    ("3", 1.5, 3.0),
])
def test_compile_expression(expr, x, expected):
    assert float(compile_expression(expr)(np.array(x))) == pytest.approx(expected)


@pytest.mark.parametrize("expr", ["__import__('os')", "x.real", "open('f')", "y + 1",
                                  "'a'", "x if x else 1", "lambda: 1", "x[0]"])
def test_compile_expression_rejects_unsafe(expr):
    with pytest.raises(errors.InvalidParameter):
        compile_expression(expr)


def test_sinpower_vanishes_at_endpoints():
    space = get_fixture("sinpow_N3").build()
    assert space.vanishing_endpoints == (True, True)
    assert eval_density(space, 0.0) == 0.0
    assert eval_density(space, math.pi) == 0.0
    assert eval_density(space, math.pi / 2) == pytest.approx(1.0)


def test_sinpower_on_stretched_interval():
    space = make_space(Interval(2.0), DensitySpec.sinpower(3.0))
    assert eval_density(space, 1.0) == pytest.approx(1.0)
    assert eval_density(space, 0.5) == pytest.approx(0.5)


def test_sinpower_exponent_must_match_dimension():
    bad = DensitySpec(SinPower(2.0), CurvatureDimension(-1.0, 2.0))
    with pytest.raises(errors.InvalidParameter):
        make_space(Interval(math.pi), bad)


def test_sinpower_rejected_on_circle():
    with pytest.raises(errors.DomainMismatch):
        make_space(Circle(1.0), DensitySpec.sinpower(2.0))


@pytest.mark.parametrize("N, mass", [(2.0, 2.0), (3.0, math.pi / 2), (4.0, 4.0 / 3.0)])
def test_sinpower_total_mass(N, mass):
    space = make_space(Interval(math.pi), DensitySpec.sinpower(N))
    assert space.total_mass == pytest.approx(mass, rel=1e-12)


def test_interior_zero_rejected():
    with pytest.raises(errors.InteriorZeroDensity):
        make_space(Interval(2.0), DensitySpec.exp_neg_f("-log(abs(x - 1))", -1.0, 2.0))
    with pytest.raises(errors.InteriorZeroDensity):
        make_space(Interval(1.0), DensitySpec.sampled([0, 0.5, 1], [1, 0, 1], K=-1.0, N=2.0))


def test_sampled_grid_must_cover_interval():
    with pytest.raises(errors.DomainMismatch):
        make_space(Interval(2.0), DensitySpec.sampled([0, 0.5, 1], [1, 1, 1], K=0.0, N=2.0))


def test_sampled_periodic_wrap():
    g = np.linspace(0.0, 2 * math.pi, 64, endpoint=False)
    v = np.exp(np.cos(g))
    space = make_space(Circle(1.0), DensitySpec.sampled(g, v, K=-1.0, N=2.0))
    # the piece between the last sample and 2 pi interpolates back to v[0]
    x = 2 * math.pi - 1e-9
    assert space.h(x) == pytest.approx(v[0], rel=1e-8)
    assert space.h(x + 2 * math.pi) == pytest.approx(space.h(x))


def test_sampled_matches_analytic_in_interior():
    n = 4000
    g = np.linspace(0.0, math.pi, n)
    v = np.sin(g)
    v[-1] = 0.0
    space = make_space(Interval(math.pi), DensitySpec.sampled(g, v, K=-1.0, N=2.0))
    # log-linear error is about dx^2 / (8 sin^2 x), so stay away from the ends
    x = np.linspace(0.5, math.pi - 0.5, 997)
    assert np.max(np.abs(space.h(x) / np.sin(x) - 1.0)) < 1e-6


def test_sampled_piece_integrals_exact():
    # log-linear pieces of exp(x) integrate exactly
    g = np.linspace(0.0, 1.0, 7)
    space = make_space(Interval(1.0), DensitySpec.sampled(g, np.exp(g), K=-2.0, N=2.0))
    assert space.total_mass == pytest.approx(math.e - 1.0, rel=1e-14)
    assert float(space.mass_between(0.1, 0.65)) == pytest.approx(
        math.exp(0.65) - math.exp(0.1), rel=1e-13)


@pytest.mark.parametrize("b", [0.25, 3.7, 1e6])
def test_density_scale_scales_mass_exactly(b):
    base = get_fixture("sinpow_N3").build()
    scaled = make_space(base.kind, base.density.scaled(b))
    a = np.array([0.0, 0.3, 1.0])
    c = np.array([0.2, 2.0, math.pi])
    ratio = scaled.mass_between(a, c) / (b * base.mass_between(a, c))
    assert np.max(np.abs(ratio - 1.0)) <= 2e-15


def test_normalize_gives_unit_mass():
    space = make_space(Interval(math.pi), DensitySpec.sinpower(3.0), normalize=True)
    assert space.total_mass == pytest.approx(1.0, rel=1e-13)
    assert float(space.mass_between(0.0, math.pi)) == pytest.approx(1.0, rel=1e-12)


def test_validate_rejects_nonconvex_density():
    # h = exp(x^2) makes -log h concave
    with pytest.raises(errors.ConvexityViolation) as info:
        make_space(Interval(2.0), DensitySpec.exp_neg_f("-x**2", 0.0, 2.0), validate=True)
    assert info.value.witness is not None


def test_validate_accepts_fixture():
    make_space(Interval(math.pi), near_degenerate_density(), validate=True)


def test_eval_density_domain_checks():
    space = get_fixture("flat_pi").build()
    with pytest.raises(errors.OutOfDomain):
        eval_density(space, -0.1)
    with pytest.raises(errors.OutOfDomain):
        eval_density(space, np.array([1.0, np.nan]))


@given(st.floats(0, 2 * math.pi * 0.999), st.floats(0, 2 * math.pi * 0.999))
@settings(max_examples=200, deadline=None)
def test_circle_distance_is_arc_length(x, y):
    space = get_fixture("circle_r1").build()
    d = distance(space, x, y)
    assert 0.0 <= d <= math.pi + 1e-12
    assert d == pytest.approx(distance(space, y, x))
    assert d == pytest.approx(min(abs(x - y), 2 * math.pi - abs(x - y)))


def test_interval_distance():
    space = get_fixture("flat_pi").build()
    assert distance(space, 0.5, 2.5) == pytest.approx(2.0)


def test_fingerprint_tracks_parameters():
    a = get_fixture("sinpow_N3").build()
    b = get_fixture("sinpow_N3").build()
    c = make_space(a.kind, a.density.scaled(2.0))
    assert a.fingerprint() == b.fingerprint()
    assert a.fingerprint() != c.fingerprint()
    assert a.fingerprint() != get_fixture("sinpow_N2").build().fingerprint()
