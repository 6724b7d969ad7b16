"""Finite-difference calculus on rectangular grids in a conformal parameter z = x + iy.

Fields are plain numpy arrays whose first two axes index the grid nodes
``(i, j)`` with ``x = x0 + i*hx`` and ``y = y0 + j*hy``.  Any trailing axes
hold vector components.  All operators act on the first two axes only.
"""

from dataclasses import dataclass, replace
from functools import lru_cache
import math

import numpy as np


@dataclass(frozen=True)
class ComplexGrid:
    x0: float
    y0: float
    hx: float
    hy: float
    nx: int
    ny: int
    periodic_x: bool = False
    periodic_y: bool = False
    order: int = 4
    margin: int = 2

    def __post_init__(self):
        if not (self.hx > 0 and self.hy > 0):
            raise ValueError("grid spacings must be positive")
        if self.order < 2 or self.order % 2:
            raise ValueError("stencil order must be an even integer >= 2")
        need = max(5, self.order + 1)
        if self.nx < need or self.ny < need:
            raise ValueError(f"grid needs at least {need} nodes per direction")

    @classmethod
    def square(cls, n, extent=(0.0, 1.0, 0.0, 1.0), **kw):
        """n x n grid whose nodes include both ends of ``extent``."""
        a, b, c, d = extent
        return cls(a, c, (b - a) / (n - 1), (d - c) / (n - 1), n, n, **kw)

    @classmethod
    def periodic(cls, nx, ny, lx, ly, x0=0.0, y0=0.0, **kw):
        """Doubly periodic grid sampling one fundamental cell [x0, x0+lx) x [y0, y0+ly)."""
        return cls(x0, y0, lx / nx, ly / ny, nx, ny, True, True, **kw)

    @property
    def shape(self):
        return (self.nx, self.ny)

    @property
    def x(self):
        return self.x0 + self.hx * np.arange(self.nx)

    @property
    def y(self):
        return self.y0 + self.hy * np.arange(self.ny)

    @property
    def xy(self):
        return np.meshgrid(self.x, self.y, indexing="ij")

    @property
    def z(self):
        X, Y = self.xy
        return X + 1j * Y

    def with_order(self, order):
        return replace(self, order=order)

    def refine(self):
        """Grid with halved spacings covering the same domain."""
        nx = 2 * self.nx if self.periodic_x else 2 * self.nx - 1
        ny = 2 * self.ny if self.periodic_y else 2 * self.ny - 1
        return replace(self, hx=self.hx / 2, hy=self.hy / 2, nx=nx, ny=ny)

    def nearest(self, x, y):
        """Index of the node closest to (x, y)."""
        i = int(np.clip(round((x - self.x0) / self.hx), 0, self.nx - 1))
        j = int(np.clip(round((y - self.y0) / self.hy), 0, self.ny - 1))
        return i, j

    def interior(self):
        """Slices selecting nodes away from one-sided boundary stencils."""
        mx = 0 if self.periodic_x else self.margin
        my = 0 if self.periodic_y else self.margin
        return (slice(mx, self.nx - mx), slice(my, self.ny - my))

    def to_dict(self):
        return {
            "x0": self.x0, "y0": self.y0, "hx": self.hx, "hy": self.hy,
            "nx": self.nx, "ny": self.ny,
            "periodic_x": self.periodic_x, "periodic_y": self.periodic_y,
            "order": self.order,
        }

    @classmethod
    def from_dict(cls, d):
        keys = ("x0", "y0", "hx", "hy", "nx", "ny", "periodic_x", "periodic_y", "order")
        return cls(**{k: d[k] for k in keys if k in d})

    # calculus, delegated to module functions
    def dx(self, f):
        return diff(f, self, 0)

    def dy(self, f):
        return diff(f, self, 1)

    def d_z(self, f):
        return d_z(f, self)

    def d_zbar(self, f):
        return d_zbar(f, self)

    def laplacian(self, f, u=None):
        return laplacian(f, self, u)

    def integrate(self, f, u=None):
        return integrate(f, self, u)

    def residual_norm(self, f, mask=None):
        return residual_norm(f, self, mask)


@dataclass
class Field:
    """A grid paired with its node values."""

    grid: ComplexGrid
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values)
        if self.values.shape[:2] != self.grid.shape:
            raise ValueError("field shape does not match grid")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("field contains non-finite values")


@lru_cache(maxsize=None)
def fd_weights(offsets, deriv=1):
    """Finite-difference weights for the given integer offsets (unit spacing)."""
    s = np.asarray(offsets, dtype=float)
    n = len(s)
    V = np.vander(s, n, increasing=True).T
    rhs = np.zeros(n)
    rhs[deriv] = math.factorial(deriv)
    return tuple(np.linalg.solve(V, rhs))


def _check_finite(f):
    if not np.all(np.isfinite(f)):
        raise ValueError("non-finite values in field")


@lru_cache(maxsize=None)
def central_weights(order, deriv):
    """Smallest symmetric stencil for the given derivative with at least the given order."""
    r = 1
    while True:
        offs = tuple(range(-r, r + 1))
        if len(offs) > deriv:
            w = np.array(fd_weights(offs, deriv))
            s = np.array(offs, dtype=float)
            m = deriv + 1
            while m < len(offs) + 2 and abs(np.sum(w * s ** m)) < 1e-9:
                m += 1
            if m - deriv >= order:
                return offs, tuple(w)
        r += 1


def diff(f, grid, axis, order=None, deriv=1):
    """Derivative of order ``deriv`` along grid axis 0 (x) or 1 (y).

    Interior nodes use the symmetric stencil of the configured accuracy;
    nodes too close to a non-periodic edge use one-sided stencils with
    order + deriv nodes, giving the same accuracy.
    """
    f = np.asarray(f)
    _check_finite(f)
    p = order or grid.order
    h = grid.hx if axis == 0 else grid.hy
    periodic = grid.periodic_x if axis == 0 else grid.periodic_y
    n = f.shape[axis]
    offs, central = central_weights(p, deriv)
    half = offs[-1]
    width = p + deriv
    if not periodic and n < max(2 * half + 1, width):
        raise ValueError("grid too small for the stencil")
    g = np.moveaxis(f, axis, 0)
    out = np.zeros(g.shape, dtype=np.result_type(g.dtype, float))
    if periodic:
        for k, w in zip(offs, central):
            if w:
                out += w * np.roll(g, -k, axis=0)
    else:
        for k, w in zip(offs, central):
            if w:
                out[half:n - half] += w * g[half + k:n - half + k]
        sign = (-1) ** deriv
        for m in range(half):
            lo = tuple(range(-m, width - m))
            wl = fd_weights(lo, deriv)
            for k, w in zip(lo, wl):
                out[m] += w * g[m + k]
                out[n - 1 - m] += sign * w * g[n - 1 - m - k]
    return np.moveaxis(out / h ** deriv, 0, axis)


def d_z(f, grid):
    """Wirtinger derivative (d/dx - i d/dy)/2."""
    return 0.5 * (diff(f, grid, 0) - 1j * diff(f, grid, 1))


def d_zbar(f, grid):
    """Wirtinger derivative (d/dx + i d/dy)/2."""
    return 0.5 * (diff(f, grid, 0) + 1j * diff(f, grid, 1))


def gradient(f, grid):
    return diff(f, grid, 0), diff(f, grid, 1)


def _conformal_factor(u, f):
    if u is None:
        return 1.0
    u = np.asarray(u)
    if u.shape != f.shape[:2]:
        raise ValueError("mismatched grids")
    e = np.exp(-2 * u)
    return e.reshape(e.shape + (1,) * (f.ndim - 2))


def laplacian(f, grid, u=None):
    """Laplace-Beltrami operator 4 e^{-2u} Re(f_{z zbar}) for the metric e^{2u}|dz|^2."""
    f = np.asarray(f)
    lap = 4 * d_z(d_zbar(f, grid), grid)
    if not np.iscomplexobj(f):
        lap = lap.real
    return _conformal_factor(u, f) * lap


def grad_norm2(f, grid, u=None):
    """|grad f|^2 = 4 e^{-2u} |f_z|^2 for real f."""
    f = np.asarray(f)
    return _conformal_factor(u, f) * 4 * np.abs(d_z(f, grid)) ** 2


def quadrature_weights(grid):
    """Trapezoid weights; end nodes get 1/2 only in non-periodic directions."""
    wx = np.full(grid.nx, grid.hx)
    wy = np.full(grid.ny, grid.hy)
    if not grid.periodic_x:
        wx[[0, -1]] *= 0.5
    if not grid.periodic_y:
        wy[[0, -1]] *= 0.5
    return np.outer(wx, wy)


def integrate(f, grid, u=None):
    """Quadrature of f e^{2u} dx dy.

    Terms are summed in row-major node order with exactly rounded
    summation (math.fsum), so the result does not depend on platform
    summation order.
    """
    f = np.broadcast_to(np.asarray(f, dtype=float), grid.shape)
    _check_finite(f)
    dens = f * quadrature_weights(grid)
    if u is not None:
        u = np.asarray(u, dtype=float)
        if u.shape != grid.shape:
            raise ValueError("mismatched grids")
        dens = dens * np.exp(2 * u)
    return math.fsum(np.ravel(dens, order="C"))


def residual_norm(f, grid, mask=None):
    """(max |f|, rms |f|) over interior nodes, optionally restricted by a boolean mask."""
    f = np.asarray(f)
    a = np.abs(f)
    if a.ndim > 2:
        a = np.sqrt(np.sum(a.reshape(a.shape[:2] + (-1,)) ** 2, axis=-1))
    sl = grid.interior()
    a = a[sl]
    if mask is not None:
        a = a[np.asarray(mask)[sl]]
    if a.size == 0:
        return 0.0, 0.0
    return float(np.max(a)), float(np.sqrt(np.mean(a ** 2)))


def convergence_order(err_coarse, err_fine, ratio=2.0):
    return math.log(err_coarse / err_fine) / math.log(ratio)


class GridInterpolant:
    """Quintic spline of a real or complex scalar field with derivative access.

    Calling returns (value, d/dx, d/dy) at arbitrary points inside the grid.
    """

    def __init__(self, grid, values):
        from scipy.interpolate import RectBivariateSpline

        values = np.asarray(values)
        k = min(5, grid.nx - 1, grid.ny - 1)
        self.complex = np.iscomplexobj(values)
        parts = [values.real, values.imag] if self.complex else [values]
        self._splines = [RectBivariateSpline(grid.x, grid.y, p, kx=k, ky=k, s=0) for p in parts]

    def __call__(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        out = []
        for d in ((0, 0), (1, 0), (0, 1)):
            vals = [s.ev(x, y, dx=d[0], dy=d[1]) for s in self._splines]
            out.append(vals[0] + 1j * vals[1] if self.complex else vals[0])
        return tuple(out)


class Jet2:
    """Second-order jet (f, f_x, f_y, f_xx, f_xy, f_yy) of a field.

    Arithmetic follows the product and chain rules, so derivatives of
    composite quantities come from derivatives of the inputs instead of
    repeated differencing.  Components may carry trailing vector axes.
    """

    KEYS = ("v", "x", "y", "xx", "xy", "yy")

    def __init__(self, v, x, y, xx, xy, yy):
        self.v, self.x, self.y, self.xx, self.xy, self.yy = v, x, y, xx, xy, yy

    @classmethod
    def constant(cls, c):
        z = np.zeros_like(c)
        return cls(c, z, z, z, z, z)

    def _map(self, f):
        return Jet2(*(f(getattr(self, k)) for k in self.KEYS))

    def __getitem__(self, idx):
        return self._map(lambda a: a[idx])

    def __add__(self, o):
        if not isinstance(o, Jet2):
            return Jet2(self.v + o, self.x, self.y, self.xx, self.xy, self.yy)
        return Jet2(*(getattr(self, k) + getattr(o, k) for k in self.KEYS))

    __radd__ = __add__

    def __neg__(self):
        return self._map(lambda a: -a)

    def __sub__(self, o):
        return self + (-o)

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        if not isinstance(o, Jet2):
            return self._map(lambda a: a * o)
        return _bilinear(self, o, lambda a, b: a * b)

    __rmul__ = __mul__

    def apply(self, f, df, d2f):
        """Jet of f(self) for a scalar function with derivatives df, d2f."""
        a, b, c = f(self.v), df(self.v), d2f(self.v)
        return Jet2(a, b * self.x, b * self.y,
                    b * self.xx + c * self.x ** 2,
                    b * self.xy + c * self.x * self.y,
                    b * self.yy + c * self.y ** 2)

    def reciprocal(self):
        return self.apply(lambda t: 1 / t, lambda t: -1 / t ** 2, lambda t: 2 / t ** 3)

    def __truediv__(self, o):
        if not isinstance(o, Jet2):
            return self * (1.0 / o)
        return self * o.reciprocal()

    def log(self):
        return self.apply(np.log, lambda t: 1 / t, lambda t: -1 / t ** 2)

    def laplacian(self):
        return self.xx + self.yy

    def grad2(self):
        return self.x ** 2 + self.y ** 2


def _bilinear(a, b, op):
    return Jet2(
        op(a.v, b.v),
        op(a.x, b.v) + op(a.v, b.x),
        op(a.y, b.v) + op(a.v, b.y),
        op(a.xx, b.v) + 2 * op(a.x, b.x) + op(a.v, b.xx),
        op(a.xy, b.v) + op(a.x, b.y) + op(a.y, b.x) + op(a.v, b.xy),
        op(a.yy, b.v) + 2 * op(a.y, b.y) + op(a.v, b.yy),
    )


def jet_dot(a, b):
    return _bilinear(a, b, lambda p, q: np.sum(p * q, axis=-1))


def jet_cross(a, b):
    return _bilinear(a, b, np.cross)


def field_jet(f, grid):
    """Stencil jet of a sampled field (direct stencils per axis, mixed across axes)."""
    fx = diff(f, grid, 0)
    return Jet2(f, fx, diff(f, grid, 1), diff(f, grid, 0, deriv=2), diff(fx, grid, 1),
                diff(f, grid, 1, deriv=2))
