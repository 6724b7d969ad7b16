"""The sinh-Gordon equation v_{z zbar} + sinh(2v)/2 = 0 and its y-independent orbits.

Solutions carry a *profile*: a callable returning (v, v_x, v_y) at arbitrary
points, used by the moving-frame integrators between grid nodes.
"""

from dataclasses import dataclass, field
import math

import numpy as np
from scipy.interpolate import BPoly

from .cxgrid import GridInterpolant, d_z, d_zbar, residual_norm

ARTANH_GUARD = 1 - 1e-10
TOL = 1e-5


class ConstantProfile:
    def __init__(self, c=0.0):
        self.c = float(c)

    def __call__(self, x, y):
        x = np.asarray(x, dtype=float)
        z = np.zeros(np.broadcast(x, y).shape)
        return z + self.c, z, z


class OneDimProfile:
    """v(x) from a dense ODE solution, constant in y."""

    def __init__(self, poly):
        self.poly = poly
        self.dpoly = poly.derivative()

    def __call__(self, x, y):
        x = np.asarray(x, dtype=float)
        zero = np.zeros(np.broadcast(x, y).shape)
        return self.poly(x) + zero, self.dpoly(x) + zero, zero


@dataclass
class SGSolution:
    grid: object
    v: np.ndarray
    residual: tuple
    provenance: str
    profile: object = None
    meta: dict = field(default_factory=dict)

    def __call__(self, x, y):
        return self.profile(x, y)


class EnergyDriftError(RuntimeError):
    pass


def pde_residual(v, grid):
    return np.real(d_z(d_zbar(v, grid), grid)) + 0.5 * np.sinh(2 * v)


def residual(v, grid):
    """(max, rms) of v_{z zbar} + sinh(2v)/2 over interior nodes."""
    return residual_norm(pde_residual(v, grid), grid)


def scaled_residual(v, coeff, grid):
    """(max, rms) of v_{z zbar} + coeff sinh(2v)."""
    r = np.real(d_z(d_zbar(v, grid), grid)) + coeff * np.sinh(2 * v)
    return residual_norm(r, grid)


def _ode_rhs(s):
    return np.array([s[1], -2 * math.sinh(2 * s[0])])


def _rk4_orbit(v0, x_end, step):
    """Nodes, values and slopes of v'' = -2 sinh 2v from v(0)=v0, v'(0)=0 up to x_end >= 0."""
    n = max(1, math.ceil(x_end / step))
    h = x_end / n if x_end > 0 else step
    s = np.array([v0, 0.0])
    out = np.empty((n + 1, 2))
    out[0] = s
    for k in range(n):
        k1 = _ode_rhs(s)
        k2 = _ode_rhs(s + 0.5 * h * k1)
        k3 = _ode_rhs(s + 0.5 * h * k2)
        k4 = _ode_rhs(s + h * k3)
        s = s + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        out[k + 1] = s
    return h * np.arange(n + 1), out


def energy(v, dv):
    return 0.5 * dv ** 2 + np.cosh(2 * v)


def one_dim(v0, grid, step=None, max_step=2e-3):
    """y-independent solution with v(0) = v0, v'(0) = 0, integrated by RK4.

    The orbit is even in x, so it is integrated on [0, max|x|] and mirrored.
    A quintic Hermite interpolant of (v, v', v'') gives values between nodes.
    """
    if abs(v0) > 3:
        raise ValueError("|v0| must be at most 3")
    if v0 == 0:
        return trivial(grid)
    step = step or min(grid.hx / 4, max_step)
    xs = grid.x
    reach = max(abs(xs[0]), abs(xs[-1])) + 4 * grid.hx
    t, sol = _rk4_orbit(v0, reach, step)
    E = energy(sol[:, 0], sol[:, 1])
    drift = float(np.max(np.abs(E - E[0])))
    if drift > 1e-8 * E[0]:
        raise EnergyDriftError(f"energy drift {drift:.2e} exceeds tolerance")
    # mirror: v(-x) = v(x), v'(-x) = -v'(x)
    tt = np.concatenate([-t[:0:-1], t])
    vv = np.concatenate([sol[:0:-1, 0], sol[:, 0]])
    dv = np.concatenate([-sol[:0:-1, 1], sol[:, 1]])
    d2 = -2 * np.sinh(2 * vv)
    poly = BPoly.from_derivatives(tt, np.stack([vv, dv, d2], axis=-1))
    prof = OneDimProfile(poly)
    X, _ = grid.xy
    v = poly(X)
    return SGSolution(grid, v, residual(v, grid), "one_dim", prof,
                      {"v0": v0, "step": step, "energy": float(E[0]), "energy_drift": drift})


def trivial(grid, c=0.0):
    v = np.full(grid.shape, float(c))
    return SGSolution(grid, v, residual(v, grid), "trivial", ConstantProfile(c), {"c": c})


def external(v, grid, tol=TOL):
    """Wrap a sampled field; rejected if its sinh-Gordon residual exceeds ``tol``."""
    v = np.asarray(v, dtype=float)
    res = residual(v, grid)
    if res[0] > tol:
        raise ValueError(f"sinh-Gordon residual {res[0]:.2e} exceeds {tol:.1e}")
    return SGSolution(grid, v, res, "external", GridInterpolant(grid, v))


def as_solution(v, grid):
    """Accept an SGSolution, a constant, or a sampled array."""
    if isinstance(v, SGSolution):
        return v
    if np.isscalar(v):
        return trivial(grid, v)
    return external(v, grid)


def orbit_period(v0, step):
    """Period of the orbit through (v0, 0), located by bisection of the step
    in which v' returns from positive to non-positive values."""
    if v0 == 0:
        raise ValueError("the equilibrium has no period")
    s = np.array([abs(v0), 0.0])
    x = 0.0
    phase = 0

    def rk(s, h):
        k1 = _ode_rhs(s)
        k2 = _ode_rhs(s + 0.5 * h * k1)
        k3 = _ode_rhs(s + 0.5 * h * k2)
        k4 = _ode_rhs(s + h * k3)
        return s + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)

    while True:
        nxt = rk(s, step)
        if phase == 0 and nxt[1] > 0:
            phase = 1
        elif phase == 1 and nxt[1] <= 0:
            lo, hi = 0.0, step
            for _ in range(80):
                mid = 0.5 * (lo + hi)
                if rk(s, mid)[1] > 0:
                    lo = mid
                else:
                    hi = mid
            return x + 0.5 * (lo + hi)
        s = nxt
        x += step
        if x > 1e4:
            raise RuntimeError("no return found")


def artanh(x):
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) >= ARTANH_GUARD):
        raise ValueError("complex points present (|C| too close to 1)")
    return 0.5 * np.log((1 + x) / (1 - x))


def kahler_to_vw(C1, C2):
    """Invert C1 = tanh(v - w), C2 = tanh(v + w)."""
    a1, a2 = artanh(C1), artanh(C2)
    return 0.5 * (a2 + a1), 0.5 * (a2 - a1)


def vw_to_kahler(v, w):
    return np.tanh(v - w), np.tanh(v + w)
