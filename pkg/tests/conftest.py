import functools

import pytest

from minsurf import catalog as cat
from minsurf import frenet as fr
from minsurf import sinhgordon as sg
from minsurf.cxgrid import ComplexGrid

ACCEPTANCE = {}


@functools.lru_cache(maxsize=None)
def unit_square(n=129, order=4, extent=(0.0, 1.0, 0.0, 1.0)):
    return ComplexGrid.square(n, extent, order=order)


@functools.lru_cache(maxsize=None)
def sg_surface(v0=0.5, w0=0.0, t=0.0, n=129, extent=(0.0, 1.0, 0.0, 1.0)):
    """Frenet-integrated surface from one-dimensional sinh-Gordon data, with its data."""
    g = unit_square(n, extent=extent)
    D = fr.from_sinh_gordon(sg.one_dim(v0, g), sg.one_dim(w0, g), t, g)
    return D, fr.frenet_integrate(D)


@functools.lru_cache(maxsize=None)
def catalog_member(name, n=129, **kw):
    if name == "clifford":
        return cat.catalog(name, cat.clifford_grid(n))
    if name == "weierstrass":
        return cat.catalog(name, cat.torus_grid(1j, n))
    return cat.catalog(name, cat.plane_grid(n), **kw)


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[k])
