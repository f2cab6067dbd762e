import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import random_holomorphic
from isocmc.errors import ClosureError, DegenerateError
from isocmc.grid import EdgeLabels, GridDomain
from isocmc.holomorphic import (
    HolomorphicGrid,
    christoffel_dual,
    cross_ratio,
    discrete_exponential,
    dual_increments,
    exponential_rates,
    from_boundary,
    identity_scaling,
    relative_closure,
    verify_holomorphic,
)

seeds = st.integers(0, 2**32 - 1)


def test_cross_ratio_examples():
    assert cross_ratio(0, 1, 1 + 1j, 1j) == pytest.approx(-1)
    assert cross_ratio(0, 1, 2, 3) == pytest.approx(-1 / 3)
    with pytest.raises(DegenerateError):
        cross_ratio(0, 1, 1, 0)


def test_identity_scaling_examples():
    d = GridDomain(-3, 3, -3, 3)
    g = identity_scaling(1.0, 6, d, N=2)
    assert g(2, 3) == pytest.approx(1 / 3 + 0.5j)
    assert g.labels.h_labels[0] == 12 and g.labels.v_labels[0] == -12
    assert identity_scaling(2.0, 1, d)(1, 0) == pytest.approx(2)
    report = verify_holomorphic(g)
    assert report.passed and report.max_residual <= 1e-15
    # integer-valued grid: cross-ratios are exactly -1
    assert verify_holomorphic(identity_scaling(1.0, 1, d)).max_residual == 0


def test_discrete_exponential_examples():
    alpha, beta = exponential_rates(4)
    x = 2 - np.sqrt(2) / 2
    assert alpha == pytest.approx(np.log(x + np.sqrt(x * x - 1)), abs=1e-15)
    assert alpha == pytest.approx(0.7478194, abs=1e-6)
    assert np.cosh(alpha) == pytest.approx(1.2928932, abs=1e-6)
    assert beta == pytest.approx(np.pi / 4)
    d = GridDomain(-4, 4, 0, 16)
    g = discrete_exponential(4, -0.5, d)
    assert np.max(np.abs(g.values[:, 8:] - g.values[:, :-8])) <= 1e-12
    report = verify_holomorphic(g, tol=1e-10)
    assert report.passed


def test_perturbed_vertex_fails_adjacent_quads():
    d = GridDomain(0, 4, 0, 4)
    g = identity_scaling(1.0, 1, d)
    values = g.values.copy()
    values[d.index((2, 2))] += 0.1
    report = verify_holomorphic(HolomorphicGrid(d, values, g.labels))
    assert not report.passed
    assert sorted(q for q, _ in report.failures) == [(1, 1), (1, 2), (2, 1), (2, 2)]


def test_degenerate_quad_reported_not_raised():
    d = GridDomain(0, 1, 0, 1)
    g = HolomorphicGrid(d, np.zeros(d.shape, dtype=complex), EdgeLabels.constant(d, 1, -1))
    report = verify_holomorphic(g)
    assert not report.passed
    assert report.failures[0][1] == "coincident vertices"


def test_channel_dual_increment():
    g = identity_scaling(1.0, 6, GridDomain(-2, 2, -2, 2), N=2)
    dh_h, dh_v = dual_increments(g, 1.0)
    np.testing.assert_allclose(dh_h, 0.5)
    np.testing.assert_allclose(dh_v, 0.5j)


def test_delaunay_dual_is_reflected_exponential():
    H, c = 1.0, -0.5
    d = GridDomain(-4, 4, -4, 4)
    g = discrete_exponential(4, c, d)
    h = christoffel_dual(g, H)
    target = (H / c) * g.values[::-1, ::-1]
    diff = h.values - target
    assert np.max(np.abs(diff - diff[0, 0])) <= 1e-10


def test_dual_of_dual_recovers_g():
    g = discrete_exponential(3, 1.7, GridDomain(-3, 3, 0, 6))
    h = christoffel_dual(g, 0.5, base_value=2 - 1j)
    gg = christoffel_dual(h, 0.5)
    diff = gg.values - g.values
    assert np.max(np.abs(diff - diff[0, 0])) <= 1e-11


def test_dual_rejects_zero_edge_and_non_holomorphic():
    d = GridDomain(0, 2, 0, 2)
    flat = HolomorphicGrid(d, np.ones(d.shape), EdgeLabels.constant(d, 1, -1))
    with pytest.raises(DegenerateError):
        christoffel_dual(flat, 1.0)
    g = identity_scaling(1.0, 1, d)
    values = g.values.copy()
    values[1, 1] += 0.2
    with pytest.raises(ClosureError) as info:
        christoffel_dual(HolomorphicGrid(d, values, g.labels), 1.0)
    assert info.value.quad in {(0, 0), (0, 1), (1, 0), (1, 1)}


def test_from_boundary_reproduces_known_grids():
    d = GridDomain(-3, 3, 0, 5)
    g = discrete_exponential(5, 0.8, d)
    rebuilt = from_boundary(g.labels, g.values[:, 0], g.values[0, :])
    np.testing.assert_allclose(rebuilt.values, g.values, atol=1e-12)


def test_from_boundary_rejects_mismatched_corner():
    d = GridDomain(0, 2, 0, 2)
    with pytest.raises(ValueError):
        from_boundary(EdgeLabels.constant(d, 1, -1), [0, 1, 2], [1, 1j, 2j])


def test_reciprocal_labels_fail_for_generic_cross_ratios():
    g = random_holomorphic(7)
    h = christoffel_dual(g, 1.0)
    assert verify_holomorphic(h).passed
    assert not verify_holomorphic(h.with_labels(g.labels.reciprocal())).passed


@given(
    st.complex_numbers(max_magnitude=5),
    st.complex_numbers(max_magnitude=5),
    st.complex_numbers(max_magnitude=5),
    st.complex_numbers(max_magnitude=5),
    st.floats(0.1, 10),
    st.floats(0, 2 * np.pi),
    st.complex_numbers(max_magnitude=10),
)
def test_cross_ratio_affine_invariance(zi, zj, zk, zl, r, theta, b):
    zs = np.array([zi, zj, zk, zl])
    if min(abs(zj - zk), abs(zl - zi), abs(zi - zj), abs(zk - zl)) < 1e-2:
        return
    a = r * np.exp(1j * theta)
    before = cross_ratio(*zs)
    after = cross_ratio(*(a * zs + b))
    assert abs(after - before) <= 1e-10 * max(1.0, abs(before))


@given(st.floats(0, 2 * np.pi), st.floats(0.1, 5), st.complex_numbers(max_magnitude=5), seeds)
def test_concircular_points_have_real_cross_ratio(phase, radius, center, seed):
    angles = np.sort(np.random.default_rng(seed).uniform(0, 2 * np.pi, 4)) + phase
    if np.min(np.diff(np.r_[angles, angles[0] + 2 * np.pi])) < 0.05:
        return
    z = center + radius * np.exp(1j * angles)
    cr = cross_ratio(*z)
    assert abs(cr.imag) <= 1e-9 * max(1.0, abs(cr))


@given(seeds, st.floats(0.2, 3) | st.floats(-3, -0.2))
def test_dual_form_is_closed_and_dual_is_holomorphic(seed, H):
    g = random_holomorphic(seed)
    assert verify_holomorphic(g).passed
    dh_h, dh_v = dual_increments(g, H)
    assert np.max(relative_closure(dh_h, dh_v)) <= 1e-10
    h = christoffel_dual(g, H)
    assert verify_holomorphic(h).passed
    gg = christoffel_dual(h, H)
    diff = gg.values - g.values
    assert np.max(np.abs(diff - diff[0, 0])) <= 1e-9 * max(1.0, np.abs(g.values).max())


@given(st.integers(2, 12), st.floats(0.1, 5) | st.floats(-5, -0.1))
def test_exponential_cross_ratios_and_period(N, c):
    d = GridDomain(-2, 2, 0, 2 * N + 1)
    g = discrete_exponential(N, c, d)
    assert verify_holomorphic(g, tol=1e-10).passed
    scale = np.abs(g.values).max()
    assert np.max(np.abs(g.values[:, 2 * N :] - g.values[:, : -2 * N])) <= 1e-12 * scale
