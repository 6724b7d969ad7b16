import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from conftest import unit_square
from minsurf import s3min as s3
from minsurf import sinhgordon as sg
from minsurf.cxgrid import ComplexGrid, residual_norm

vec4 = arrays(float, 4, elements=st.floats(-1, 1))


@given(vec4, vec4, vec4)
@settings(max_examples=100, deadline=None)
def test_cross4(a, b, c):
    n = s3.cross4(a, b, c)
    for x in (a, b, c):
        assert abs(n @ x) < 1e-12
    d = np.linalg.det(np.stack([a, b, c, n]))
    assert d > -1e-12
    assert abs(d - n @ n) < 1e-10


@pytest.mark.parametrize("t", [0.0, 0.9, np.pi / 3])
def test_clifford_family(t):
    g = unit_square(65)
    S = s3.clifford_family(t, g)
    S.check()
    assert np.max(np.abs(S.v)) < 1e-12
    assert np.max(np.abs(S.theta - 0.5j * np.exp(1j * t))) < 1e-12
    assert np.max(np.abs(S.sff2 - 2)) < 1e-10
    assert residual_norm(S.gauss_curvature(), g)[0] < 1e-6


def test_great_sphere():
    g = ComplexGrid.square(65, (-1, 1, -1, 1))
    S = s3.great_sphere(g)
    assert np.max(np.abs(np.exp(2 * S.v) - 4 / (1 + np.abs(g.z) ** 2) ** 2)) < 1e-12
    assert np.max(np.abs(S.theta)) < 1e-15
    assert residual_norm(S.gauss_curvature() - 1, g)[0] < 1e-4


def test_integrated_flat_matches_clifford():
    g = unit_square(65)
    S = s3.s3_frenet_integrate(sg.trivial(g), 0.5j, g)
    C = s3.clifford_family(0.0, g)
    assert S.diagnostics["unit_drift"] < 1e-12
    assert residual_norm(S.v, g)[0] < 1e-8
    assert residual_norm(S.theta - C.theta, g)[0] < 1e-8
    # same surface up to the initial frame: equal induced geometry
    assert residual_norm(S.sff2 - 2, g)[0] < 1e-7


def test_integrated_sinh_gordon_surface():
    g = unit_square(129)
    v = sg.one_dim(0.5, g)
    S = s3.s3_frenet_integrate(v, 0.5j, g)
    assert residual_norm(S.v - v.v, g)[0] < 1e-6
    assert S.diagnostics["closure_max"] < 1e-9
    r = [s3.s3_frenet_integrate(sg.one_dim(0.5, unit_square(n)), 0.5j, unit_square(n))
         .gauss_equation_residual()[0] for n in (65, 129)]
    assert r[1] < 1e-5 and r[0] / r[1] > 8


def test_frame_orientation():
    g = unit_square(33)
    S = s3.clifford_family(0.4, g)
    assert np.all(s3.frame_det(S.phi_x, S.phi_y, S.phi, S.normal) > 0)
    N = s3.unit_normal(S.phi, g, S.phi_x, S.phi_y)
    assert np.max(np.abs(N - S.normal)) < 1e-12


def test_hopf_from_differences():
    g = unit_square(65)
    S = s3.clifford_family(0.0, g)
    th = s3.hopf(S.phi, S.normal, g)
    assert residual_norm(th - S.theta, g)[0] < 1e-5
