"""Conformal minimal surfaces in S3 in R4: normal, Hopf differential, conformal
factor, the associated flat family of Clifford tori, and a moving-frame
integrator.

Conventions: metric e^{2v}|dz|^2 with e^{2v} = 2|phi_z|^2, Hopf coefficient
theta = <phi_z, N_z>, and {phi_x, phi_y, phi, N} positively oriented.
"""

from dataclasses import dataclass, field
import math

import numpy as np

from .cxgrid import ComplexGrid, GridInterpolant, diff, jet_dot, residual_norm
from .s2xs2 import surface_jet, tangent_jets
from .sweep import sweep

class NumericalError(RuntimeError):
    pass


def cross4(a, b, c):
    """n with n_i = det(a, b, c, e_i); det(a, b, c, n) = |n|^2."""
    M = np.stack([a, b, c], axis=-2)
    out = np.empty(np.broadcast_shapes(a.shape, b.shape, c.shape))
    for i in range(4):
        cols = [k for k in range(4) if k != i]
        out[..., i] = (-1) ** (i + 3) * np.linalg.det(M[..., cols])
    return out


def frame_det(phi_x, phi_y, phi, N):
    return np.linalg.det(np.stack([phi_x, phi_y, phi, N], axis=-1))


def _derivs(phi, grid, phi_x=None, phi_y=None):
    if phi_x is None:
        phi_x = diff(phi, grid, 0)
    if phi_y is None:
        phi_y = diff(phi, grid, 1)
    return phi_x, phi_y


def unit_normal(phi, grid, phi_x=None, phi_y=None, tol=1e-10):
    """Unit normal with det(phi_x, phi_y, phi, N) > 0.

    Exact derivatives may be passed, otherwise stencils are used.
    """
    phi_x, phi_y = _derivs(phi, grid, phi_x, phi_y)
    n = cross4(phi_x, phi_y, phi)
    norm = np.linalg.norm(n, axis=-1)
    scale = np.linalg.norm(phi_x, axis=-1) * np.linalg.norm(phi_y, axis=-1)
    if np.any(norm <= tol * np.maximum(scale, 1.0)):
        raise NumericalError("degenerate differential: normal undefined")
    return n / norm[..., None]


def conformal_factor(phi, grid, phi_x=None, phi_y=None, return_residual=False):
    """v = log(2|phi_z|^2)/2, and optionally the conformality residual |<phi_z, phi_z>| e^{-2v}."""
    phi_x, phi_y = _derivs(phi, grid, phi_x, phi_y)
    m = 0.5 * (np.sum(phi_x ** 2, axis=-1) + np.sum(phi_y ** 2, axis=-1))
    if np.any(m <= 0):
        raise NumericalError("vanishing differential")
    v = 0.5 * np.log(m)
    if not return_residual:
        return v
    pz = 0.5 * (phi_x - 1j * phi_y)
    res = np.abs(np.sum(pz * pz, axis=-1)) / m
    return v, res


def hopf(phi, N, grid, phi_x=None, phi_y=None, N_x=None, N_y=None):
    """theta = <phi_z, N_z>."""
    phi_x, phi_y = _derivs(phi, grid, phi_x, phi_y)
    N_x, N_y = _derivs(N, grid, N_x, N_y)
    return 0.25 * np.sum((phi_x - 1j * phi_y) * (N_x - 1j * N_y), axis=-1)


def sff_norm2(v, theta):
    """|sigma|^2 = 8 |theta|^2 e^{-4v}."""
    return 8 * np.abs(theta) ** 2 * np.exp(-4 * np.asarray(v))


@dataclass
class S3Immersion:
    grid: ComplexGrid
    phi: np.ndarray
    normal: np.ndarray
    v: np.ndarray
    theta: np.ndarray
    phi_x: np.ndarray = None
    phi_y: np.ndarray = None
    normal_x: np.ndarray = None
    normal_y: np.ndarray = None
    name: str = ""
    diagnostics: dict = field(default_factory=dict)

    @classmethod
    def build(cls, grid, phi, phi_x=None, phi_y=None, N=None, N_x=None, N_y=None, name="", **diag):
        """Fill normal, v and theta from samples (and exact derivatives if known)."""
        phi = np.asarray(phi, dtype=float)
        if N is None:
            N = unit_normal(phi, grid, phi_x, phi_y)
        v, cres = conformal_factor(phi, grid, phi_x, phi_y, return_residual=True)
        theta = hopf(phi, N, grid, phi_x, phi_y, N_x, N_y)
        diag["conformality"] = residual_norm(cres, grid)
        return cls(grid, phi, N, v, theta, phi_x, phi_y, N_x, N_y, name, diag)

    def check(self, tol=1e-8):
        """Unit sphere, unit normal orthogonal to phi, positive frame."""
        px, py = _derivs(self.phi, self.grid, self.phi_x, self.phi_y)
        errs = {
            "unit": float(np.max(np.abs(np.linalg.norm(self.phi, axis=-1) - 1))),
            "normal_unit": float(np.max(np.abs(np.linalg.norm(self.normal, axis=-1) - 1))),
            "normal_orth": float(np.max(np.abs(np.sum(self.phi * self.normal, axis=-1)))),
        }
        bad = {k: e for k, e in errs.items() if e > tol}
        if bad:
            raise ValueError(f"S3 immersion invariants violated: {bad}")
        if np.min(frame_det(px, py, self.phi, self.normal)) <= 0:
            raise ValueError("frame {phi_x, phi_y, phi, N} not positively oriented")
        return errs

    @property
    def sff2(self):
        return sff_norm2(self.v, self.theta)

    def gauss_curvature(self):
        """Intrinsic curvature -e^{-2v}(v_xx + v_yy), with v differentiated
        through the chain rule from stencil derivatives of phi up to third order."""
        _, Fx, Fy = tangent_jets(surface_jet(self.phi, self.grid))
        v = (0.5 * (jet_dot(Fx, Fx) + jet_dot(Fy, Fy))).log() * 0.5
        return -np.exp(-2 * v.v) * v.laplacian()

    def gauss_equation_residual(self):
        """(max, rms) of K - (1 - |sigma|^2/2)."""
        return residual_norm(self.gauss_curvature() - (1 - 0.5 * self.sff2), self.grid)


def clifford_family(t, grid):
    """psi_t(z) = (exp(i Re(c z)), exp(i Im(c z)))/sqrt 2 in C^2 = R^4, c = (1+i) e^{it/2}.

    Derivatives and normal are evaluated in closed form.
    """
    c = (1 + 1j) * np.exp(0.5j * t)
    w = c * grid.z
    a, b = w.real, w.imag
    ax, ay = c.real, -c.imag
    bx, by = c.imag, c.real
    s = 1 / math.sqrt(2)
    ca, sa, cb, sb = np.cos(a), np.sin(a), np.cos(b), np.sin(b)
    phi = s * np.stack([ca, sa, cb, sb], axis=-1)

    def dphi(da, db):
        return s * np.stack([-sa * da, ca * da, -sb * db, cb * db], axis=-1)

    phi_x, phi_y = dphi(ax, bx), dphi(ay, by)
    N0 = s * np.stack([ca, sa, -cb, -sb], axis=-1)
    sign = np.sign(frame_det(phi_x, phi_y, phi, N0))
    if not np.all(sign == sign.flat[0]):
        raise NumericalError("inconsistent Clifford orientation")
    sg = sign.flat[0]
    N = sg * N0

    def dN(da, db):
        return sg * s * np.stack([-sa * da, ca * da, sb * db, -cb * db], axis=-1)

    return S3Immersion.build(grid, phi, phi_x, phi_y, N, dN(ax, bx), dN(ay, by),
                             name=f"clifford_t={t}", t=t)


def great_sphere(grid):
    """(st(z), 0) with the stereographic chart of the product examples."""
    from .catalog import st

    zeta = grid.z
    r2 = np.abs(zeta) ** 2
    d = (1 + r2) ** 2
    x, y = zeta.real, zeta.imag
    s3 = st(zeta)
    zero = np.zeros(grid.shape)
    phi = np.concatenate([s3, zero[..., None]], axis=-1)
    # derivatives of (2x, -2y, r2 - 1)/(1 + r2)
    phi_x = np.stack([2 * (1 - x ** 2 + y ** 2), 4 * x * y, 4 * x, zero], axis=-1) / d[..., None]
    phi_y = np.stack([-4 * x * y, -2 * (1 + x ** 2 - y ** 2), 4 * y, zero], axis=-1) / d[..., None]
    N = np.broadcast_to(np.array([0.0, 0.0, 0.0, 1.0]), phi.shape)
    N = N * np.sign(frame_det(phi_x, phi_y, phi, N))[..., None]
    Z = np.zeros_like(phi)
    return S3Immersion.build(grid, phi, phi_x, phi_y, N, Z, Z, name="great_sphere")


def _profile(v, grid):
    """Callable (x, y) -> (v, v_x, v_y) for a solution object, constant or array."""
    if hasattr(v, "profile") and v.profile is not None:
        return v.profile
    if np.isscalar(v):
        from .sinhgordon import ConstantProfile
        return ConstantProfile(v)
    return GridInterpolant(grid, np.asarray(v, dtype=float))


def s3_rhs(profile, theta0):
    a, b = theta0.real, theta0.imag

    def rhs(s, x, y, axis):
        v, vx, vy = profile(x, y)
        e2 = np.exp(2 * v)[:, None]
        em = np.exp(-2 * v)[:, None]
        vx, vy = vx[:, None], vy[:, None]
        p, px, py, N = s[:, :4], s[:, 4:8], s[:, 8:12], s[:, 12:]
        pxy = vx * py + vy * px + 2 * b * N
        if axis == 0:
            pxx = -e2 * p + vx * px - vy * py - 2 * a * N
            Nx = 2 * em * (a * px - b * py)
            return np.concatenate([px, pxx, pxy, Nx], axis=1)
        pyy = -e2 * p - vx * px + vy * py + 2 * a * N
        Ny = -2 * em * (b * px + a * py)
        return np.concatenate([py, pxy, pyy, Ny], axis=1)

    return rhs


def canonical_s3_init(v0):
    e = np.eye(4)
    return np.concatenate([e[0], math.exp(v0) * e[1], math.exp(v0) * e[2], e[3]])


def s3_frenet_integrate(v, theta0, grid, init=None, max_step=1e-3, drift_tol=1e-6, closure=True):
    """Integrate phi_zz = 2 v_z phi_z - theta N, phi_zzbar = -e^{2v} phi/2, N_z = 2 e^{-2v} theta phi_zbar.

    ``v`` is a sinh-Gordon solution object, a constant or a sampled field;
    the state (phi, phi_x, phi_y, N) in R^16 starts at the node nearest z = 0
    and is carried along the x axis, then along every column.
    """
    theta0 = complex(theta0)
    prof = _profile(v, grid)
    base = grid.nearest(0.0, 0.0)
    xb, yb = grid.x[base[0]], grid.y[base[1]]
    if init is None:
        v0 = float(prof(np.array([xb]), np.array([yb]))[0][0])
        init = canonical_s3_init(v0)
    init = np.asarray(init, dtype=float)
    rhs = s3_rhs(prof, theta0)
    S = sweep(rhs, grid, init, base, max_step, "xy")
    diag = {}
    if closure:
        S2 = sweep(rhs, grid, init, base, max_step, "yx")
        diag["closure_corner"] = float(np.max(np.abs(S[-1, -1] - S2[-1, -1])))
        diag["closure_max"] = float(np.max(np.abs(S - S2)))
    phi, px, py, N = S[..., :4], S[..., 4:8], S[..., 8:12], S[..., 12:]
    drift = float(np.max(np.abs(np.linalg.norm(phi, axis=-1) - 1)))
    diag["unit_drift"] = drift
    diag["normal_drift"] = float(np.max(np.abs(np.linalg.norm(N, axis=-1) - 1)))
    diag["orth_drift"] = float(np.max(np.abs(np.sum(phi * N, axis=-1))))
    if drift > drift_tol:
        raise NumericalError(f"|phi| drift {drift:.2e} exceeds {drift_tol:.1e}")
    if np.min(frame_det(px, py, phi, N)) <= 0:
        raise NumericalError("singular or reversed frame")
    # v and theta recovered from the sampled surface by stencils
    out = S3Immersion.build(grid, phi, N=N, name="s3_frenet", **diag)
    out.diagnostics["theta0"] = theta0
    out.diagnostics["integrated"] = (px, py)
    return out
