from __future__ import annotations

import math

import numpy as np
import pytest

from conftest import fixture_spectrum
from weyl1d import errors
from weyl1d.fixtures import get_fixture
from weyl1d.geometry import DensitySpec, Interval, make_space
from weyl1d.spectral import (Discretization, Spectrum, assemble, assemble_elements,
                             counting_function, eigen_solve, heat_trace, resolution_cut,
                             weyl_tail)
from weyl1d.spectral import cache as spcache
from weyl1d.spectral.assembly import element_upper_bound


def discrete_p1_eigenvalues(n, length, periodic):
    """Eigenvalues of the uniform P1 pencil for a constant density."""
    h = length / n
    k = np.arange(n if periodic else n + 1)
    theta = (2.0 if periodic else 1.0) * np.pi * k / n
    # 1 - cos(theta) written as 2 sin^2(theta/2) to keep small theta accurate
    return np.sort(12.0 / h ** 2 * np.sin(theta / 2) ** 2 / (2.0 + np.cos(theta)))


def test_flat_p1_matrices_exact():
    space = get_fixture("flat_pi").build()
    n = 10
    K, M = assemble(space, Discretization.uniform(space, n))
    h = math.pi / n
    Kd = (np.diag(np.r_[1, 2 * np.ones(n - 1), 1]) - np.eye(n + 1, k=1) - np.eye(n + 1, k=-1)) / h
    Md = (np.diag(np.r_[2, 4 * np.ones(n - 1), 2]) + np.eye(n + 1, k=1) + np.eye(n + 1, k=-1)) * h / 6
    np.testing.assert_allclose(K.toarray(), Kd, rtol=1e-13, atol=1e-13)
    np.testing.assert_allclose(M.toarray(), Md, rtol=1e-13, atol=1e-16)


def test_circle_matrices_circulant():
    space = get_fixture("circle_r1").build()
    K, M = assemble(space, Discretization.uniform(space, 12))
    for A in (K.toarray(), M.toarray()):
        for s in range(1, 12):
            np.testing.assert_allclose(np.roll(np.roll(A, s, 0), s, 1), A, rtol=1e-12, atol=1e-15)


@pytest.mark.parametrize("name", ["flat_pi", "circle_r1", "sinpow_N3", "sampled_near_degenerate"])
def test_stiffness_rows_sum_to_zero_and_mass_totals(name):
    space = get_fixture(name).build()
    K, M = assemble(space, Discretization.auto(space, 200))
    np.testing.assert_allclose(K.sum(axis=1), 0.0, atol=1e-9 * abs(K).max())
    assert M.sum() == pytest.approx(space.total_mass, rel=1e-10)
    assert (K - K.T).nnz == 0 or abs(K - K.T).max() == 0
    assert abs(M - M.T).max() == 0


def test_element_upper_bound_dominates_spectrum():
    space = get_fixture("sinpow_N3").build()
    disc = Discretization.auto(space, 50)
    el = assemble_elements(space, disc)
    spec = eigen_solve(space, disc, el.n_dofs - 1, method="dense", use_cache=False)
    assert spec.computed[-1] <= element_upper_bound(el) * (1 + 1e-12)


@pytest.mark.parametrize("name, periodic", [("flat_pi", False), ("circle_r1", True)])
def test_bisection_matches_discrete_closed_form(name, periodic):
    space = get_fixture(name).build()
    n = 400
    spec = eigen_solve(space, Discretization.uniform(space, n), use_cache=False)
    exact = discrete_p1_eigenvalues(n, space.period, periodic)[:spec.resolved_count]
    np.testing.assert_allclose(spec.eigenvalues[1:], exact[1:], rtol=1e-12)
    assert spec.eigenvalues[0] < 1e-10


@pytest.mark.parametrize("name", ["flat_pi", "circle_r1", "sinpow_N3"])
@pytest.mark.parametrize("method", ["dense", "shift-invert"])
def test_methods_agree(name, method):
    space = get_fixture(name).build()
    disc = Discretization.auto(space, 300)
    a = eigen_solve(space, disc, 40, use_cache=False)
    b = eigen_solve(space, disc, 40, method=method, use_cache=False)
    np.testing.assert_allclose(b.eigenvalues[1:], a.eigenvalues[1:], rtol=1e-8)


def test_eigenvalues_nonnegative_and_sorted():
    spec = fixture_spectrum("sinpow_N4")
    assert np.all(spec.eigenvalues >= 0)
    assert np.all(np.diff(spec.eigenvalues) >= 0)
    assert spec.lambda_max <= spec.lambda_cut


def test_resolution_cut():
    assert resolution_cut(0.01) == pytest.approx((math.pi / 0.01) ** 2 / 16)


def test_circle_pairs_never_split():
    spec = fixture_spectrum("circle_r1")
    ev = spec.eigenvalues
    # after the zero mode the values come in numerical pairs
    assert (spec.resolved_count - 1) % 2 == 0
    np.testing.assert_allclose(ev[1::2], ev[2::2], rtol=1e-6)


@pytest.mark.parametrize("order", [2, 4, 8])
def test_quadrature_order_converges(order):
    space = get_fixture("sinpow_N3").build()
    spec = eigen_solve(space, Discretization.graded(space, 400, quadrature_order=order), 6,
                       use_cache=False)
    tol = {2: 5e-2, 4: 1e-3, 8: 1e-3}[order]
    np.testing.assert_allclose(spec.eigenvalues[1:6], [3, 8, 15, 24, 35], rtol=tol)


def test_discretization_validation():
    space = get_fixture("flat_pi").build()
    with pytest.raises(errors.InvalidParameter):
        Discretization(np.array([0.0, 1.0, 0.5, 2.0, 3.0, 3.1, 3.12, 3.14, math.pi]))
    with pytest.raises(errors.InvalidParameter):
        Discretization.uniform(space, 3)
    with pytest.raises(errors.InvalidParameter):
        Discretization.graded(space, 100, strength=0.5)
    with pytest.raises(errors.InvalidParameter):
        eigen_solve(space, Discretization.uniform(space, 20), method="qr")


def test_mesh_must_cover_space():
    space = get_fixture("flat_pi").build()
    disc = Discretization(np.linspace(0, 2.0, 20))
    with pytest.raises(errors.InvalidParameter):
        eigen_solve(space, disc)


def test_graded_mesh_clusters_at_vanishing_ends():
    space = get_fixture("sinpow_N2").build()
    disc = Discretization.auto(space, 100)
    d = np.diff(disc.mesh)
    assert disc.grading == "boundary-graded"
    assert d[0] < d[50] / 2 and d[-1] < d[50] / 2
    assert Discretization.auto(get_fixture("flat_pi").build(), 100).grading == "uniform"


def test_cache_round_trip(tmp_path, monkeypatch):
    monkeypatch.setenv("WEYL1D_CACHE_DIR", str(tmp_path))
    space = get_fixture("sinpow_N2").build()
    disc = Discretization.auto(space, 200)
    first = eigen_solve(space, disc, 30)
    files = list(tmp_path.glob("*.bin"))
    assert len(files) == 1
    second = eigen_solve(space, disc, 30)
    np.testing.assert_array_equal(first.eigenvalues, second.eigenvalues)
    values, header = spcache.read_spectrum(files[0])
    assert header["count"] == values.size


def test_corrupt_cache_entry_ignored(tmp_path):
    path = tmp_path / "x.bin"
    spcache.write_spectrum(path, np.arange(5.0), {"a": 1})
    np.testing.assert_array_equal(spcache.read_spectrum(path)[0], np.arange(5.0))
    path.write_bytes(path.read_bytes()[:-3])
    assert spcache.read_spectrum(path) is None
    path.write_bytes(b"garbage")
    assert spcache.read_spectrum(path) is None
    assert spcache.read_spectrum(tmp_path / "missing.bin") is None


def test_spectrum_from_eigenvalues_is_read_only():
    spec = Spectrum.from_eigenvalues([2.0, 0.0, 1.0])
    np.testing.assert_array_equal(spec.eigenvalues, [0.0, 1.0, 2.0])
    with pytest.raises(ValueError):
        spec.eigenvalues[0] = 5.0


def test_counting_function():
    spec = Spectrum.from_eigenvalues([0.0, 1.0, 1.0, 4.0])
    assert counting_function(spec, 0.0) == 1
    assert counting_function(spec, 1.0) == 3
    np.testing.assert_array_equal(counting_function(spec, [0.5, 3.9, 4.0]), [1, 3, 4])
    with pytest.raises(errors.BeyondResolvedRange):
        counting_function(spec, 4.5)
    with pytest.raises(errors.InvalidParameter):
        counting_function(spec, -1.0)


def test_heat_trace_flat_theta_function():
    # exact Neumann spectrum k^2 on [0, pi]
    spec = Spectrum.from_eigenvalues(np.arange(2000.0) ** 2, hausdorff_length=math.pi)
    t = 0.01
    exact = math.fsum(math.exp(-k * k * t) for k in range(5000))
    assert heat_trace(spec, t) == pytest.approx(exact, rel=1e-14)


def test_heat_trace_unresolved_tail():
    spec = fixture_spectrum("flat_pi")
    with pytest.raises(errors.UnresolvedTail):
        heat_trace(spec, 1e-7)
    z = heat_trace(spec, np.array([1e-7]), tail_model=True)
    # sqrt(t) Z(t) tends to sqrt(pi)/2 for [0, pi]; the resolved count sits ~2% low
    assert math.sqrt(1e-7) * z[0] == pytest.approx(math.sqrt(math.pi) / 2, rel=0.02)


def test_weyl_tail_formula():
    spec = Spectrum.from_eigenvalues([0.0, 1.0, 4.0], hausdorff_length=math.pi)
    # c / 2 * sqrt(pi / t) * erfc(sqrt(t * 4)) with c = 1
    from scipy.special import erfc

    assert weyl_tail(spec, 0.5) == pytest.approx(0.5 * math.sqrt(2 * math.pi) * erfc(math.sqrt(2.0)))


def test_singular_mass_detected():
    g = np.linspace(0.0, 1.0, 11)
    v = np.ones(11)
    v[0] = v[1] = 0.0
    with pytest.raises(errors.Weyl1DError):
        space = make_space(Interval(1.0), DensitySpec.sampled(g, v, K=0.0, N=2.0))
        eigen_solve(space, Discretization.uniform(space, 10))
