import math

import numpy as np
import pytest

from conftest import catalog_member
from minsurf import catalog as cat
from minsurf.cxgrid import residual_norm
from minsurf.s2xs2 import (ProductImmersion, area, conformality_residual, degrees, gauss_curvature,
                           invariants, kahler_functions, mean_curvature_residual)


def test_rejects_points_off_the_spheres():
    g = cat.plane_grid(17)
    P = cat.catalog("diagonal", g)
    with pytest.raises(ValueError):
        ProductImmersion(g, 1.01 * P.phi1, P.phi2).check()
    with pytest.raises(ValueError):
        ProductImmersion(g, P.phi1[..., :2], P.phi2)


def test_non_conformal_rejected():
    P = catalog_member("perturbed")
    assert residual_norm(conformality_residual(P), P.grid)[0] > 1e-2
    with pytest.raises(ValueError):
        kahler_functions(P)


def test_gauss_curvature_two_routes():
    # the torus has |K| ~ 1e4 near branch points and needs the finer grid
    for P in (catalog_member("graph"), cat.catalog("weierstrass", cat.torus_grid(1j, 257).with_order(6))):
        Kc = gauss_curvature(P, "conformal")
        Kg = gauss_curvature(P, "gauss_eq")
        assert residual_norm((Kc - Kg) / (1 + np.abs(Kc)), P.grid)[0] < 1e-5


def test_graph_kahler_function():
    # C1 = 1 (complex) and C2 = (1 - |a|^2)/(1 + |a|^2) pointwise, a = d(zeta^2)/d zeta-ratio
    P = catalog_member("graph")
    I = invariants(P)
    z = P.grid.z
    r = np.abs(z) ** 2
    dens1 = 4 / (1 + r) ** 2
    dens2 = 4 * 4 * r / (1 + r ** 2) ** 2
    want = (dens1 - dens2) / (dens1 + dens2)
    assert residual_norm(I.C1 - 1, P.grid)[0] < 1e-8
    assert residual_norm(I.C2 - want, P.grid)[0] < 1e-5


def test_hopf_modulus_identity():
    for name in ("graph", "clifford", "weierstrass"):
        I = invariants(catalog_member(name))
        assert residual_norm(I.modulus_residual(), I.grid)[0] < 1e-4


def test_clifford_area_and_degrees():
    P = catalog_member("clifford")
    assert abs(area(P) / (4 * math.pi ** 2) - 1) < 1e-6
    d1, d2 = degrees(P)
    assert abs(d1) < 1e-10 and abs(d2) < 1e-10


def test_area_needs_closed_chart():
    with pytest.raises(ValueError):
        area(catalog_member("diagonal"))
    with pytest.raises(ValueError):
        degrees(catalog_member("diagonal"))


def test_mean_curvature_negative_control_scales():
    H = [residual_norm(mean_curvature_residual(cat.perturbed_diagonal(cat.plane_grid(65), e))[1],
                       cat.plane_grid(65))[0] for e in (0.05, 0.1)]
    assert H[0] > 1e-2 and 1.5 < H[1] / H[0] < 2.5
