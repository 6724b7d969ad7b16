"""Gauss maps of minimal surfaces in S3 and the pair construction into S2 x S2.

For phi: Sigma -> S3 with oriented normal N and orthonormal tangent frame
(e1, e2), nu+-(p) = (e1 ^ e2 +- phi ^ N)/sqrt 2 are unit self-dual and
anti-self-dual bivectors; in the E+- coordinates they are points of S2.
"""

from dataclasses import dataclass
import math

import numpy as np

from . import grassmann as gm
from .cxgrid import ComplexGrid, diff, residual_norm
from .s2xs2 import ProductImmersion, invariants, kahler_functions, hopf_s2xs2
from .s3min import S3Immersion, frame_det, s3_frenet_integrate
from . import sinhgordon as sg

HOPF_TOL = 1e-6
SIGMA_TOL = 1e-8


def tangent_frame(S):
    """Orthonormal (e1, e2) from phi_x, phi_y after removing phi and N components."""
    px, py = S.phi_x, S.phi_y
    if px is None:
        px = diff(S.phi, S.grid, 0)
    if py is None:
        py = diff(S.phi, S.grid, 1)

    def clean(a):
        for n in (S.phi, S.normal):
            a = a - np.sum(a * n, axis=-1, keepdims=True) * n
        return a

    a, b = clean(px), clean(py)
    e1 = a / np.linalg.norm(a, axis=-1, keepdims=True)
    b = b - np.sum(b * e1, axis=-1, keepdims=True) * e1
    e2 = b / np.linalg.norm(b, axis=-1, keepdims=True)
    return e1, e2


def _nu(S, sign):
    e1, e2 = tangent_frame(S)
    B = (gm.wedge(e1, e2) + sign * gm.wedge(S.phi, S.normal)) / math.sqrt(2)
    d = gm.split(B)
    return d.p, d.m


def nu_plus(S, return_residual=False):
    """E+ coordinates of (e1 ^ e2 + phi ^ N)/sqrt 2; the residual is its anti-self-dual part."""
    p, m = _nu(S, 1)
    return (p, np.linalg.norm(m, axis=-1)) if return_residual else p


def nu_minus(S, return_residual=False):
    p, m = _nu(S, -1)
    return (m, np.linalg.norm(p, axis=-1)) if return_residual else m


def tension_residual(nu, grid, u=None):
    """Tension field nu_xx + nu_yy + |grad nu|^2 nu of a map into S2 (flat chart metric)."""
    lap = diff(nu, grid, 0, deriv=2) + diff(nu, grid, 1, deriv=2)
    g2 = np.sum(diff(nu, grid, 0) ** 2 + diff(nu, grid, 1) ** 2, axis=-1, keepdims=True)
    return np.linalg.norm(lap + g2 * nu, axis=-1)


@dataclass
class GaussPair:
    phi: S3Immersion
    psi: S3Immersion
    hopf_tol: float = HOPF_TOL

    def __post_init__(self):
        if self.phi.grid != self.psi.grid:
            raise ValueError("pair must share one grid")
        d = residual_norm(self.phi.theta - self.psi.theta, self.phi.grid)[0]
        if d > self.hopf_tol:
            raise ValueError(f"Hopf differentials differ by {d:.2e}")


@dataclass
class PairPrediction:
    e2u: np.ndarray
    C1: np.ndarray
    C2: np.ndarray
    theta: np.ndarray
    mask: np.ndarray  # where the C1 closed form is defined


def predictions(G):
    """Closed forms for the metric, Kaehler functions and Hopf coefficient of the pair."""
    a, b = G.phi, G.psi
    sa = np.sqrt(a.sff2)
    sb = np.sqrt(b.sff2)
    e2u = 0.5 * ((2 + sa ** 2) * np.exp(2 * a.v) + (2 + sb ** 2) * np.exp(2 * b.v))
    tot = sa + sb
    mask = tot > SIGMA_TOL
    C1 = np.where(mask, (sb - sa) / np.where(mask, tot, 1.0), np.nan)
    C2 = (2 - sa * sb) / (2 + sa * sb)
    return PairPrediction(e2u, C1, C2, -2j * a.theta, mask)


def gauss_map_pair(G):
    """(nu+ of phi, nu- of psi) as a product immersion, with the closed-form predictions."""
    P = ProductImmersion(G.phi.grid, nu_plus(G.phi), nu_minus(G.psi), name="gauss_pair",
                         params={"phi": G.phi.name, "psi": G.psi.name})
    return P, predictions(G)


def compare_predictions(P, pred):
    """Max discrepancies between measured and predicted fields over interior nodes."""
    C1, C2, u = kahler_functions(P)
    g = P.grid
    th = hopf_s2xs2(P)
    m = pred.mask
    return {
        "e2u": residual_norm(np.exp(2 * u) - pred.e2u, g)[0],
        "C1": residual_norm(np.where(m, C1 - np.nan_to_num(pred.C1), 0.0), g)[0],
        "C2": residual_norm(C2 - pred.C2, g)[0],
        "theta": residual_norm(th - pred.theta, g)[0],
        "C1_masked_nodes": int(np.sum(~m)),
    }


@dataclass
class S2xRImmersion:
    grid: ComplexGrid
    sphere: np.ndarray
    height: np.ndarray
    t: float
    phi: S3Immersion

    def metric(self):
        """e^{2u} = (|F_x|^2 + |F_y|^2)/2 for F = (sphere, height)."""
        g = self.grid
        sx, sy = diff(self.sphere, g, 0), diff(self.sphere, g, 1)
        hx, hy = diff(self.height, g, 0), diff(self.height, g, 1)
        return 0.5 * (np.sum(sx ** 2 + sy ** 2, axis=-1) + hx ** 2 + hy ** 2)


def height_from_circle(nu):
    """Unwrapped angle of a map into the great circle orthogonal to E1-."""
    ang = np.arctan2(nu[..., 2], nu[..., 1])
    ang = np.unwrap(ang, axis=0)
    return np.unwrap(ang, axis=1)


def gauss_map_s2xr(v, t, grid, max_step=1e-3):
    """(nu+ of phi_t, 2 Im(z e^{it/2})), phi_t integrated from v with Hopf (i/2)e^{it}."""
    sol = sg.as_solution(v, grid)
    phi = s3_frenet_integrate(sol, 0.5j * np.exp(1j * t), grid, max_step=max_step)
    h = 2 * np.imag(grid.z * np.exp(0.5j * t))
    return S2xRImmersion(grid, nu_plus(phi), h, t, phi)


def polar(S, tol=1e-10):
    """Polar surface (N, phi): the normal as an immersion, with phi as its normal.

    Derivatives N_x, N_y are differences of the sampled normal unless the input
    carries closed forms.  Nodes where N fails to immerse are reported in
    ``diagnostics['branch_nodes']``.
    """
    g = S.grid
    Nx, Ny = S.normal_x, S.normal_y
    if Nx is None:
        Nx, Ny = diff(S.normal, g, 0), diff(S.normal, g, 1)
    area = np.linalg.norm(Nx, axis=-1) * np.linalg.norm(Ny, axis=-1)
    branch = area < tol
    sign = np.sign(frame_det(Nx, Ny, S.normal, S.phi))
    s = 1.0 if np.sum(sign[~branch] > 0) >= np.sum(sign[~branch] < 0) else -1.0
    newN = s * S.phi
    px = S.phi_x if S.phi_x is not None else diff(S.phi, g, 0)
    py = S.phi_y if S.phi_y is not None else diff(S.phi, g, 1)
    out = S3Immersion.build(g, S.normal, Nx, Ny, N=newN, N_x=s * px, N_y=s * py, name="polar_" + S.name)
    out.diagnostics["branch_nodes"] = int(np.sum(branch))
    out.diagnostics["normal_sign"] = s
    return out


def roundtrip_thm54(v, w, grid, max_step=1e-3):
    """Frenet route versus Gauss-map route for the sinh-Gordon pair (v, w)."""
    from .frenet import frenet_integrate, from_sinh_gordon

    sv, sw = sg.as_solution(v, grid), sg.as_solution(w, grid)
    Pa = frenet_integrate(from_sinh_gordon(sv, sw, 0.0, grid), max_step=max_step)
    phi = s3_frenet_integrate(sv, 0.5j, grid, max_step=max_step)
    psi = s3_frenet_integrate(sw, 0.5j, grid, max_step=max_step)
    Pb, pred = gauss_map_pair(GaussPair(phi, psi, hopf_tol=1e-4))
    Ia, Ib = invariants(Pa), invariants(Pb)
    report = {}
    for k in ("u", "C1", "C2", "K", "Kperp"):
        report[k] = residual_norm(getattr(Ia, k) - getattr(Ib, k), grid)
    report["|theta|"] = residual_norm(np.abs(Ia.theta) - np.abs(Ib.theta), grid)
    return {"frenet": Pa, "gauss": Pb, "inv_frenet": Ia, "inv_gauss": Ib, "report": report,
            "prediction": compare_predictions(Pb, pred)}
