import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from minsurf import catalog as cat
from minsurf.cxgrid import ComplexGrid, diff, residual_norm

# e1 = wp(1/2) on the lattice Z + iZ equals Gamma(1/4)^4 / (8 pi)
LEMNISCATIC_E1 = 6.8751858180203728274900957798


def wp_theta(z, tau):
    """Independent oracle: wp from Jacobi theta functions (mpmath)."""
    q = mp.exp(1j * mp.pi * tau)
    t2, t3 = mp.jtheta(2, 0, q), mp.jtheta(3, 0, q)
    x = mp.pi * z
    return complex((mp.pi * t2 * t3 * mp.jtheta(4, x, q) / mp.jtheta(1, x, q)) ** 2
                   - mp.pi ** 2 / 3 * (t2 ** 4 + t3 ** 4))


@pytest.mark.parametrize("tau", [1j, 2j, 0.5j, 0.3 + 1.1j])
@pytest.mark.parametrize("z", [0.3 + 0.2j, 0.1 - 0.45j, 0.77 + 0.05j, -1.3 + 2.21j])
def test_wp_matches_theta_oracle(z, tau):
    p, _ = cat.weierstrass_p(np.array([z]), tau)
    want = wp_theta(mp.mpc(z), tau)
    assert abs(p[0] - want) < 1e-8 * max(1.0, abs(want))


def test_wp_lemniscatic_constant():
    mp.mp.dps = 30
    closed = mp.gamma(0.25) ** 4 / (8 * mp.pi)
    assert abs(float(closed) - LEMNISCATIC_E1) < 1e-15
    p, _ = cat.weierstrass_p(np.array([0.5, 0.5j, 0.5 + 0.5j]), 1j)
    assert abs(p[0] - LEMNISCATIC_E1) < 1e-10
    assert abs(p[1] + LEMNISCATIC_E1) < 1e-10
    assert abs(p[2]) < 1e-10


def test_wp_brute_force_sum():
    z, tau = 0.3 + 0.2j, 1j
    N = 400
    m, n = np.meshgrid(np.arange(-N, N + 1), np.arange(-N, N + 1))
    w = (m + n * tau).ravel()
    w = w[w != 0]
    brute = 1 / z ** 2 + np.sum(1 / (z - w) ** 2 - 1 / w ** 2)
    p, _ = cat.weierstrass_p(np.array([z]), tau)
    assert abs(p[0] - brute) < 1e-4


def test_wp_differential_equation():
    # square lattice: g3 = 0 and g2 = 4 e1^2
    g2 = 4 * LEMNISCATIC_E1 ** 2
    z = np.array([0.1 + 0.2j, 0.33 - 0.41j, 0.45 + 0.12j])
    p, dp = cat.weierstrass_p(z, 1j)
    assert np.max(np.abs(dp ** 2 - (4 * p ** 3 - g2 * p))) < 1e-8 * np.max(np.abs(dp) ** 2)


def test_wp_derivative_matches_differences():
    g = ComplexGrid.square(65, (0.1, 0.4, 0.1, 0.4))
    p, dp = cat.weierstrass_p(g.z, 1j)
    assert np.max(np.abs(diff(p, g, 0) - dp) / np.abs(dp)) < 1e-4


@given(st.floats(-0.49, 0.49), st.floats(-0.49, 0.49), st.integers(-3, 3), st.integers(-3, 3))
@settings(max_examples=50, deadline=None)
def test_wp_even_and_periodic(a, b, m, n):
    z = a + 1j * b
    if abs(z) < 0.05:
        return
    p, _ = cat.weierstrass_p(np.array([z, -z, z + m + n * 1j]), 1j)
    assert abs(p[1] - p[0]) < 1e-9 * abs(p[0]) + 1e-9
    assert abs(p[2] - p[0]) < 1e-9 * abs(p[0]) + 1e-9


def test_wp_rejects_lattice_points():
    with pytest.raises(ValueError):
        cat.weierstrass_p(np.array([1 + 1j]), 1j)
    with pytest.raises(ValueError):
        cat.weierstrass_p(np.array([0.3]), -1j)


def test_stereographic_chart():
    g = ComplexGrid.square(129, (-2, 2, -2, 2))
    s = cat.st(g.z)
    assert np.max(np.abs(np.linalg.norm(s, axis=-1) - 1)) < 1e-15
    sx, sy = diff(s, g, 0), diff(s, g, 1)
    want = 4 / (1 + np.abs(g.z) ** 2) ** 2
    for a in (np.sum(sx * sx, -1), np.sum(sy * sy, -1)):
        assert residual_norm(a - want, g)[0] < 1e-4
    assert residual_norm(np.sum(sx * sy, -1), g)[0] < 1e-4
    # holomorphic for J_p(w) = p x w: s_y = s x s_x
    assert residual_norm(sy - np.cross(s, sx), g)[0] < 1e-4
    eta = np.array([0.3 - 0.2j, 2 + 1j])
    assert np.allclose(cat.st_reciprocal(eta), cat.st(1 / eta), atol=1e-15)


def test_wp_sphere_smooth_at_pole():
    z = np.array([1e-9 + 0j, 1e-3 + 1e-3j])
    s = cat.wp_sphere(z, 1j)
    assert np.allclose(s[0], [0, 0, 1], atol=1e-12)
    assert np.allclose(np.linalg.norm(s, axis=-1), 1)


def test_torus_checks():
    with pytest.raises(ValueError):
        cat.torus_grid(0.5 + 1j)
    with pytest.raises(ValueError):
        cat.weierstrass_torus(1j, 0.5 + 0.5j)
    with pytest.raises(ValueError):
        cat.catalog("enneper")


def test_reduce_lattice():
    z = np.array([3.3 + 2.6j, -0.7 - 1.2j])
    r = cat.reduce_lattice(z, 1j)
    assert np.all(np.abs(r.real) <= 0.5) and np.all(np.abs(r.imag) <= 0.5)
    d = z - r
    assert np.allclose(d, np.round(d.real) + 1j * np.round(d.imag))
