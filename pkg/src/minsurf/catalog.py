"""Explicit minimal surfaces of S2 x S2: slices, diagonal, Clifford torus,
Weierstrass tori and graphs of monomials.

Sphere-valued examples are parametrized either on a square of the plane
(``chart="plane"``) or on the cylinder zeta = exp(z) with y periodic of
period 2 pi (``chart="cylinder"``); the cylinder covers an annulus exactly so
the area of the two missing caps is known in closed form.
"""

import math

import numpy as np

from .cxgrid import ComplexGrid
from .s2xs2 import ProductImmersion

# Taylor coefficients of 1/sin(x)^2 - 1/x^2 in powers of x^2
_INVSIN2 = np.array([
    1 / 3, 1 / 15, 2 / 189, 1 / 675, 2 / 10395, 1382 / 58046625, 4 / 1403325,
    3617 / 10854718875, 87734 / 2292899734125, 349222 / 80596287646875,
    310732 / 640374140030625, 472728182 / 8779111824511153125,
])

DEFAULT_SHELLS = 40
NEAR_POLE = 0.1


def st(zeta):
    """Stereographic chart C u {inf} -> S2, holomorphic for J_p(w) = p x w.

    st(zeta) = (2 Re zeta, -2 Im zeta, |zeta|^2 - 1) / (1 + |zeta|^2), st(inf) = (0, 0, 1).
    Points with |zeta| > 1 go through the reciprocal chart eta = 1/zeta.
    """
    zeta = np.asarray(zeta, dtype=complex)
    out = np.empty(zeta.shape + (3,))
    inf = ~np.isfinite(zeta)
    big = (np.abs(zeta) > 1) | inf
    small = ~big
    a = zeta[small]
    r2 = np.abs(a) ** 2
    out[small] = np.stack([2 * a.real, -2 * a.imag, r2 - 1], axis=-1) / (1 + r2)[..., None]
    with np.errstate(divide="ignore", invalid="ignore"):
        eta = np.where(inf[big], 0, 1 / zeta[big])
    out[big] = st_reciprocal(eta)
    return out


def st_reciprocal(eta):
    """st(1/eta), smooth through eta = 0."""
    eta = np.asarray(eta, dtype=complex)
    r2 = np.abs(eta) ** 2
    return np.stack([2 * eta.real, 2 * eta.imag, 1 - r2], axis=-1) / (1 + r2)[..., None]


def _q_invsin2(w):
    """1/sin^2(w) for Im w != 0, computed without overflow."""
    s = np.where(w.imag > 0, 1, -1)
    q = np.exp(2j * s * w)
    return -4 * q / (1 - q) ** 2


def _q_cos_sin3(w):
    """cos(w)/sin^3(w) for Im w != 0."""
    s = np.where(w.imag > 0, 1, -1)
    q = np.exp(2j * s * w)
    return s * 4j * q * (1 + q) / (1 - q) ** 3


def reduce_lattice(z, tau):
    """Representative of z modulo {m + n tau} with reduced coordinates in [-1/2, 1/2]."""
    z = np.asarray(z, dtype=complex)
    b = z.imag / tau.imag
    a = z.real - b * tau.real
    a = a - np.round(a)
    b = b - np.round(b)
    return a + b * tau


def _wp_parts(zr, tau, shells):
    """(R, wp') where wp = 1/z^2 + R at the reduced point zr."""
    x = np.pi * zr
    n = np.arange(1, shells + 1)
    rows = zr[..., None] - n * tau
    rows_m = zr[..., None] + n * tau
    const = _q_invsin2(np.pi * n * tau)
    lattice_rows = np.sum(_q_invsin2(np.pi * rows) + _q_invsin2(np.pi * rows_m) - 2 * const, axis=-1)
    # 1/sin^2(x) - 1/x^2, by series near 0
    small = np.abs(x) < 0.5
    core = np.empty_like(x)
    xs = x[small] ** 2
    core[small] = np.polyval(_INVSIN2[::-1], xs)
    xb = x[~small]
    core[~small] = 1 / np.sin(xb) ** 2 - 1 / xb ** 2
    R = np.pi ** 2 * (core - 1 / 3 + lattice_rows)
    # wp' is infinite at lattice nodes; callers that only need wp ignore it
    with np.errstate(divide="ignore", invalid="ignore"):
        d0 = np.cos(x) / np.sin(x) ** 3
        dp = -2 * np.pi ** 3 * (d0 + np.sum(_q_cos_sin3(np.pi * rows) + _q_cos_sin3(np.pi * rows_m), axis=-1))
    return R, dp


def weierstrass_p(z, tau, shells=DEFAULT_SHELLS):
    """Weierstrass p and p' for the lattice {m + n tau}.

    Each horizontal row of lattice points is summed in closed form,
    sum_m (w - m)^-2 = pi^2 / sin^2(pi w); rows up to ``shells`` on each
    side are kept, the neglected rows being of size exp(-2 pi shells Im tau).
    """
    tau = complex(tau)
    if tau.imag <= 0:
        raise ValueError("tau must have positive imaginary part")
    z = np.asarray(z, dtype=complex)
    zr = reduce_lattice(z, tau)
    if np.any(np.abs(zr) < 1e-6):
        raise ValueError("z is at or near a lattice point")
    R, dp = _wp_parts(np.atleast_1d(zr), tau, shells)
    p = 1 / np.atleast_1d(zr) ** 2 + R
    return p.reshape(z.shape), dp.reshape(z.shape)


def wp_sphere(z, tau, shells=DEFAULT_SHELLS):
    """st(wp(z)), smooth through the lattice points.

    Near a pole 1/wp = z^2 / (1 + z^2 R) is used with the reciprocal chart.
    """
    tau = complex(tau)
    z = np.asarray(z, dtype=complex)
    zr = np.atleast_1d(reduce_lattice(z, tau))
    R, _ = _wp_parts(zr, tau, shells)
    near = np.abs(zr) < NEAR_POLE
    out = np.empty(zr.shape + (3,))
    zn = zr[near]
    out[near] = st_reciprocal(zn ** 2 / (1 + zn ** 2 * R[near]))
    out[~near] = st(1 / zr[~near] ** 2 + R[~near])
    return out.reshape(z.shape + (3,))


def half_periods(tau):
    return np.array([0.5, 0.5 * tau, 0.5 * (1 + tau)], dtype=complex)


# ---- grids ----

def plane_grid(n=129, extent=(-1.0, 1.0, -1.0, 1.0)):
    return ComplexGrid.square(n, extent)


def cylinder_grid(nx=257, ny=64, X=12.0):
    """x in [-X, X] (nodes at both ends), y periodic over [0, 2 pi)."""
    return ComplexGrid(-X, 0.0, 2 * X / (nx - 1), 2 * math.pi / ny, nx, ny, False, True)


def torus_grid(tau, n=129):
    tau = complex(tau)
    if abs(tau.real) > 1e-14:
        raise ValueError("periodic grids need a rectangular lattice (Re tau = 0)")
    return ComplexGrid.periodic(n, n, 1.0, tau.imag)


def clifford_grid(n=129):
    return ComplexGrid.periodic(n, n, 2 * math.pi, 2 * math.pi)


def _chart_zeta(grid, chart):
    if chart == "plane":
        return grid.z
    if chart == "cylinder":
        if not grid.periodic_y or abs(grid.ny * grid.hy - 2 * math.pi) > 1e-12:
            raise ValueError("cylinder chart needs y periodic with period 2 pi")
        return np.exp(grid.z)
    raise ValueError("chart must be 'plane' or 'cylinder'")


def _cap_areas(grid, degree=1, coeff=1.0):
    """Area of the caps |zeta| < r0 and |zeta| > r1 missed by the cylinder, for zeta -> a zeta^d."""
    r0 = math.exp(grid.x[0])
    r1 = math.exp(grid.x[-1])
    rho0 = abs(coeff) * r0 ** degree
    rho1 = abs(coeff) * r1 ** degree
    return degree * 4 * math.pi * (rho0 ** 2 / (1 + rho0 ** 2) + 1 / (1 + rho1 ** 2))


def slice_surface(grid, q=(0.0, 0.0, 1.0), factor=1, chart="plane"):
    """S2 x {q} (factor 1) or {q} x S2 (factor 2)."""
    zeta = _chart_zeta(grid, chart)
    S = st(zeta)
    q = np.asarray(q, dtype=float)
    q = q / np.linalg.norm(q)
    Q = np.broadcast_to(q, S.shape)
    phi1, phi2 = (S, Q) if factor == 1 else (Q, S)
    tail = _cap_areas(grid) if chart == "cylinder" else None
    return ProductImmersion(grid, phi1, np.array(phi2), name="slice",
                            params={"q": q.tolist(), "factor": factor, "chart": chart}, tail=tail)


def diagonal(grid, chart="plane"):
    S = st(_chart_zeta(grid, chart))
    tail = 2 * _cap_areas(grid) if chart == "cylinder" else None
    return ProductImmersion(grid, S, S.copy(), name="diagonal", params={"chart": chart}, tail=tail)


def graph(grid, degree=2, coeff=1.0, chart="plane"):
    """Graph zeta -> (st(zeta), st(a zeta^d)) of a monomial map of degree d >= 1."""
    if int(degree) != degree or degree < 1:
        raise ValueError("degree must be a positive integer")
    zeta = _chart_zeta(grid, chart)
    phi1 = st(zeta)
    phi2 = st(coeff * zeta ** int(degree))
    tail = None
    if chart == "cylinder":
        tail = _cap_areas(grid) + _cap_areas(grid, int(degree), coeff)
    return ProductImmersion(grid, phi1, phi2, name="graph",
                            params={"degree": int(degree), "coeff": complex(coeff).__repr__(), "chart": chart},
                            tail=tail)


def clifford_torus(grid=None):
    grid = grid or clifford_grid()
    X, Y = grid.xy
    z0 = np.zeros_like(X)
    phi1 = np.stack([z0, np.cos(X), np.sin(X)], axis=-1)
    phi2 = np.stack([z0, np.cos(Y), np.sin(Y)], axis=-1)
    return ProductImmersion(grid, phi1, phi2, name="clifford", params={})


def weierstrass_torus(tau=1j, p0=0.25 + 0.31j, grid=None):
    """(st o wp(z), st o wp(z - p0)) on one period cell of the tau lattice."""
    tau = complex(tau)
    p0 = complex(p0)
    red = reduce_lattice(2 * p0, tau)
    if abs(red) < 1e-8:
        raise ValueError("p0 must avoid the half-lattice")
    grid = grid or torus_grid(tau)
    z = grid.z
    return ProductImmersion(grid, wp_sphere(z, tau), wp_sphere(z - p0, tau), name="weierstrass",
                            params={"tau": repr(tau), "p0": repr(p0)}, tail=0.0)


def perturbed_diagonal(grid, eps=0.1):
    """(st(z), st(z + eps conj(z))): conformally distorted, not minimal."""
    z = grid.z
    return ProductImmersion(grid, st(z), st(z + eps * np.conj(z)), name="perturbed", params={"eps": eps})


NAMES = ("slice", "diagonal", "clifford", "weierstrass", "graph", "perturbed")


def catalog(name, grid=None, **params):
    if name == "slice":
        chart = params.get("chart", "plane")
        grid = grid or (plane_grid() if chart == "plane" else cylinder_grid())
        return slice_surface(grid, params.get("q", (0.0, 0.0, 1.0)), params.get("factor", 1), chart)
    if name == "diagonal":
        chart = params.get("chart", "plane")
        grid = grid or (plane_grid() if chart == "plane" else cylinder_grid())
        return diagonal(grid, chart)
    if name == "graph":
        chart = params.get("chart", "plane")
        grid = grid or (plane_grid() if chart == "plane" else cylinder_grid())
        return graph(grid, params.get("degree", 2), params.get("coeff", 1.0), chart)
    if name == "clifford":
        return clifford_torus(grid)
    if name == "weierstrass":
        return weierstrass_torus(params.get("tau", 1j), params.get("p0", 0.25 + 0.31j), grid)
    if name == "perturbed":
        return perturbed_diagonal(grid or plane_grid(), params.get("eps", 0.1))
    raise ValueError(f"unknown example {name!r}")
