import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from minsurf import grassmann as gm

vec4 = arrays(float, 4, elements=st.floats(-1, 1))


def _orthonormal(a, b):
    q, r = np.linalg.qr(np.stack([a, b], axis=1))
    return q[:, 0] * np.sign(r[0, 0]), q[:, 1] * np.sign(r[1, 1])


def test_basis_planes():
    e = np.eye(4)
    p, m = gm.plane_to_spheres(e[0], e[1])
    assert np.allclose(p, [1, 0, 0]) and np.allclose(m, [1, 0, 0])
    p, m = gm.plane_to_spheres(e[2], e[3])
    assert np.allclose(p, [1, 0, 0]) and np.allclose(m, [-1, 0, 0])


def test_split_reconstructs():
    B = np.random.default_rng(1).standard_normal((50, 6))
    assert np.allclose(gm.split(B).bivector(), B, atol=1e-14)
    d = gm.split(B)
    assert np.allclose(gm.star(d.p @ gm.EPLUS), d.p @ gm.EPLUS)
    assert np.allclose(gm.star(d.m @ gm.EMINUS), -(d.m @ gm.EMINUS))


@given(vec4, vec4)
@settings(max_examples=100, deadline=None)
def test_decomposable_planes(a, b):
    if np.linalg.matrix_rank(np.stack([a, b]), tol=1e-3) < 2:
        return
    v, w = _orthonormal(a, b)
    p, m = gm.plane_to_spheres(v, w)
    assert abs(np.linalg.norm(p) - 1) < 1e-12 and abs(np.linalg.norm(m) - 1) < 1e-12
    # orientation reversal is the antipodal map on both factors
    p2, m2 = gm.plane_to_spheres(w, v)
    assert np.allclose(p2, -p) and np.allclose(m2, -m)
    B = gm.wedge(v, w)
    assert abs(gm.inner(B, gm.star(B))) < 1e-12


def test_non_orthonormal_rejected():
    with pytest.raises(ValueError):
        gm.plane_to_spheres(np.array([1.0, 0, 0, 0]), np.array([1.0, 1, 0, 0]))


def test_induced_on_spheres():
    rng = np.random.default_rng(7)
    for _ in range(20):
        A = np.linalg.qr(rng.standard_normal((4, 4)))[0]
        Rp, Rm = gm.induced_on_spheres(A)
        assert np.allclose(Rp.T @ Rp, np.eye(3), atol=1e-12)
        assert np.allclose(Rm.T @ Rm, np.eye(3), atol=1e-12)
        # orientation-reversing A swaps the factors through maps of determinant -1
        d = np.sign(np.linalg.det(A))
        assert np.isclose(np.linalg.det(Rp), d) and np.isclose(np.linalg.det(Rm), d)
        v, w = _orthonormal(rng.standard_normal(4), rng.standard_normal(4))
        p, m = gm.plane_to_spheres(v, w)
        pa, ma = gm.plane_to_spheres(A @ v, A @ w)
        if np.linalg.det(A) > 0:
            assert np.allclose(pa, Rp @ p) and np.allclose(ma, Rm @ m)
        else:
            assert np.allclose(ma, Rp @ p) and np.allclose(pa, Rm @ m)


def test_induced_isometry_rejects_non_orthogonal():
    with pytest.raises(ValueError):
        gm.induced_isometry(2 * np.eye(4), np.ones(6))
