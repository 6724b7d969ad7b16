"""Immersions into S2 x S2 in R3 + R3 and their invariant fields.

Conventions: the inner product is complex bilinear, J_p(w) = p x w on each
factor, J1 = (J, J) and J2 = (J, -J).  For a conformal immersion
|Phi_z|^2 = e^{2u}/2 and the Kaehler functions are
C_j = -2i e^{-2u} <J_j Phi_z, Phi_zbar>.
"""

from dataclasses import dataclass, field
from functools import cached_property
import math

import numpy as np

from .cxgrid import ComplexGrid, Jet2, diff, d_z, d_zbar, integrate, jet_cross, jet_dot, residual_norm


def dot(a, b):
    return np.sum(a * b, axis=-1)


def J1(Phi, V):
    """Apply J1 at the point Phi (…, 6) to the vector V (…, 6)."""
    return np.concatenate([np.cross(Phi[..., :3], V[..., :3]), np.cross(Phi[..., 3:], V[..., 3:])], axis=-1)


def J2(Phi, V):
    return np.concatenate([np.cross(Phi[..., :3], V[..., :3]), -np.cross(Phi[..., 3:], V[..., 3:])], axis=-1)


def hat(Phi):
    """(Phi1, -Phi2)."""
    out = np.array(Phi, copy=True)
    out[..., 3:] *= -1
    return out


def orientation_det(Phi, a, b, c, d):
    """Volume form of T(S2xS2) in which (X1, JX1, X2, JX2) is positive."""
    n1 = np.zeros_like(Phi)
    n1[..., :3] = Phi[..., :3]
    n2 = np.zeros_like(Phi)
    n2[..., 3:] = Phi[..., 3:]
    return np.linalg.det(np.stack([n1, a, b, n2, c, d], axis=-1))


@dataclass
class ProductImmersion:
    """Sampled map z -> (Phi1, Phi2) with values of shape (nx, ny, 3) each.

    ``tail`` is the area of the part of the surface outside the chart
    (known in closed form for sphere charts), ``None`` if unknown.
    """

    grid: ComplexGrid
    phi1: np.ndarray
    phi2: np.ndarray
    orientation: int = 1
    name: str = ""
    params: dict = field(default_factory=dict)
    tail: float | None = None
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        self.phi1 = np.asarray(self.phi1, dtype=float)
        self.phi2 = np.asarray(self.phi2, dtype=float)
        if self.phi1.shape != self.grid.shape + (3,) or self.phi2.shape != self.grid.shape + (3,):
            raise ValueError("components must have shape (nx, ny, 3)")
        if not (np.all(np.isfinite(self.phi1)) and np.all(np.isfinite(self.phi2))):
            raise ValueError("non-finite immersion values")

    @property
    def Phi(self):
        return np.concatenate([self.phi1, self.phi2], axis=-1)

    def sphere_drift(self):
        return float(max(np.max(np.abs(np.linalg.norm(self.phi1, axis=-1) - 1)),
                         np.max(np.abs(np.linalg.norm(self.phi2, axis=-1) - 1))))

    def check(self, tol=1e-8):
        d = self.sphere_drift()
        if d > tol:
            raise ValueError(f"components leave the unit spheres (drift {d:.2e})")

    @cached_property
    def jet(self):
        """Stencil derivatives of Phi up to third order.

        Derivatives along one axis use direct stencils; mixed ones compose
        stencils along different axes only.
        """
        return surface_jet(self.Phi, self.grid)

    @property
    def Phi_z(self):
        j = self.jet
        return 0.5 * (j["x"] - 1j * j["y"])

    @property
    def Phi_zz(self):
        j = self.jet
        return 0.25 * (j["xx"] - j["yy"] - 2j * j["xy"])

    @property
    def Phi_zzbar(self):
        j = self.jet
        return 0.25 * (j["xx"] + j["yy"])

    @cached_property
    def frames(self):
        return _frames(self.jet)

    def swapped(self):
        """Image under the factor swap (p, q) -> (q, p)."""
        return ProductImmersion(self.grid, self.phi2, self.phi1, self.orientation,
                                self.name + "_swapped", dict(self.params), self.tail)


def surface_jet(F, g, third=True):
    out = {"Phi": F}
    out["x"], out["y"] = diff(F, g, 0), diff(F, g, 1)
    out["xx"], out["yy"] = diff(F, g, 0, deriv=2), diff(F, g, 1, deriv=2)
    out["xy"] = diff(out["x"], g, 1)
    if third:
        out["xxx"], out["yyy"] = diff(F, g, 0, deriv=3), diff(F, g, 1, deriv=3)
        out["xxy"] = diff(out["xx"], g, 1)
        out["xyy"] = diff(out["yy"], g, 0)
    return out


def tangent_jets(jet):
    """Second-order jets of Phi, Phi_x and Phi_y from a third-order stencil jet."""
    F = Jet2(jet["Phi"], jet["x"], jet["y"], jet["xx"], jet["xy"], jet["yy"])
    Fx = Jet2(jet["x"], jet["xx"], jet["xy"], jet["xxx"], jet["xxy"], jet["xyy"])
    Fy = Jet2(jet["y"], jet["xy"], jet["yy"], jet["xxy"], jet["xyy"], jet["yyy"])
    return F, Fx, Fy


def kahler_jets(P):
    """Jets of C1, C2 and u: C_j = e^{-2u} <J_j Phi_x, Phi_y>, e^{2u} = (|Phi_x|^2 + |Phi_y|^2)/2."""
    F, Fx, Fy = tangent_jets(P.jet)
    E = 0.5 * (jet_dot(Fx, Fx) + jet_dot(Fy, Fy))
    d1 = jet_dot(jet_cross(F[..., :3], Fx[..., :3]), Fy[..., :3])
    d2 = jet_dot(jet_cross(F[..., 3:], Fx[..., 3:]), Fy[..., 3:])
    Einv = E.reciprocal()
    C1 = (d1 + d2) * Einv * P.orientation
    C2 = (d1 - d2) * Einv * P.orientation
    return C1, C2, 0.5 * E.log()


def conformal_curvature(P):
    """K = -e^{-2u} (u_xx + u_yy), derivatives of u by the chain rule."""
    _, _, u = kahler_jets(P)
    return -u.laplacian() * np.exp(-2 * u.v)


def _frames(jet):
    """Orthonormal ambient, tangent and oriented normal frames at every node."""
    P = jet["Phi"]
    n1 = np.zeros_like(P)
    n1[..., :3] = P[..., :3]
    n2 = np.zeros_like(P)
    n2[..., 3:] = P[..., 3:]
    n1 /= np.linalg.norm(n1, axis=-1, keepdims=True)
    n2 /= np.linalg.norm(n2, axis=-1, keepdims=True)

    def drop_ambient(v):
        return v - dot(v, n1)[..., None] * n1 - dot(v, n2)[..., None] * n2

    a = drop_ambient(jet["x"])
    b = drop_ambient(jet["y"])
    la = np.linalg.norm(a, axis=-1)
    t1 = a / la[..., None]
    b = b - dot(b, t1)[..., None] * t1
    lb = np.linalg.norm(b, axis=-1)
    t2 = b / lb[..., None]
    M = np.stack([n1, n2, t1, t2], axis=-1)
    Q, _ = np.linalg.qr(M, mode="complete")
    e3 = Q[..., :, 4]
    e4 = Q[..., :, 5]
    sgn = np.sign(orientation_det(P, t1, t2, e3, e4))
    e4 = e4 * sgn[..., None]
    return {"n1": n1, "n2": n2, "t1": t1, "t2": t2, "e3": e3, "e4": e4}


def normal_projector(fr):
    """Function projecting vectors onto the normal bundle of the surface in S2xS2."""
    basis = [fr["n1"], fr["n2"], fr["t1"], fr["t2"]]

    def proj(v):
        out = v
        for e in basis:
            out = out - dot(v, e)[..., None] * e
        return out

    return proj


def conformal_log_factor(P):
    return 0.5 * np.log(2 * np.sum(np.abs(P.Phi_z) ** 2, axis=-1))


def conformality_residual(P):
    """|<Phi_z, Phi_z>| / |Phi_z|^2 at every node."""
    Pz = P.Phi_z
    return np.abs(dot(Pz, Pz)) / np.sum(np.abs(Pz) ** 2, axis=-1)


def kahler_functions(P, conformal_tol=1e-3, return_residual=False):
    """(C1, C2, u); the imaginary parts of the complex formula are returned as residual on request."""
    Pz = P.Phi_z
    Phi = P.Phi
    u = conformal_log_factor(P)
    conf = conformality_residual(P)
    cmax = residual_norm(conf, P.grid)[0]
    if cmax > conformal_tol:
        raise ValueError(f"immersion is not conformal (residual {cmax:.2e})")
    e = np.exp(-2 * u)
    c1 = -2j * e * dot(J1(Phi, Pz), np.conj(Pz))
    c2 = -2j * e * dot(J2(Phi, Pz), np.conj(Pz))
    C1 = P.orientation * c1.real
    C2 = P.orientation * c2.real
    if return_residual:
        return C1, C2, u, np.maximum(np.abs(c1.imag), np.abs(c2.imag))
    return C1, C2, u


def jacobians(C1, C2):
    return 0.5 * (C1 + C2), 0.5 * (C1 - C2)


def degrees(P):
    g = P.grid
    if not (g.periodic_x and g.periodic_y):
        raise ValueError("degrees need a doubly periodic chart")
    C1, C2, u = kahler_functions(P)
    j1, j2 = jacobians(C1, C2)
    return integrate(j1, g, u) / (4 * math.pi), integrate(j2, g, u) / (4 * math.pi)


def mean_curvature_residual(P):
    """(raw, normalized) norms of the normal-bundle part of Phi_zzbar.

    The raw field is |(Phi_zzbar)^perp|; the normalized field 2 e^{-2u} times it
    equals |H| for conformal parameters.
    """
    proj = normal_projector(P.frames)
    rem = proj(P.Phi_zzbar)
    raw = np.linalg.norm(rem, axis=-1)
    u = conformal_log_factor(P)
    return raw, 2 * np.exp(-2 * u) * raw


def second_fundamental_form(P):
    """Normal parts sigma(d_i, d_j) and metric g_ij in the coordinate basis."""
    j = P.jet
    proj = normal_projector(P.frames)
    s = {k: proj(j[k]) for k in ("xx", "xy", "yy")}
    g = {"xx": dot(j["x"], j["x"]), "xy": dot(j["x"], j["y"]), "yy": dot(j["y"], j["y"])}
    return s, g


def _mean_and_norm(P):
    s, g = second_fundamental_form(P)
    det = g["xx"] * g["yy"] - g["xy"] ** 2
    ixx, ixy, iyy = g["yy"] / det, -g["xy"] / det, g["xx"] / det
    H = 0.5 * ((ixx[..., None] * s["xx"]) + 2 * (ixy[..., None] * s["xy"]) + (iyy[..., None] * s["yy"]))
    # |sigma|^2 = g^{ik} g^{jl} <s_ij, s_kl>
    inv = [[ixx, ixy], [ixy, iyy]]
    S = [[s["xx"], s["xy"]], [s["xy"], s["yy"]]]
    n2 = 0.0
    for i in range(2):
        for jj in range(2):
            for k in range(2):
                for l in range(2):
                    n2 = n2 + inv[i][k] * inv[jj][l] * dot(S[i][jj], S[k][l])
    return H, n2


def gauss_curvature(P, route="conformal"):
    if route == "conformal":
        return conformal_curvature(P)
    if route == "gauss_eq":
        C1, C2, _ = kahler_functions(P)
        H, s2 = _mean_and_norm(P)
        return 0.5 * (C1 ** 2 + C2 ** 2) + 2 * dot(H, H) - 0.5 * s2
    raise ValueError("route must be 'conformal' or 'gauss_eq'")


def shape_operators(P):
    """Matrices <sigma(e_a, e_b), e_k> for k = 3, 4 in the orthonormal tangent frame."""
    fr = P.frames
    j = P.jet
    s, _ = second_fundamental_form(P)
    # e1 = a11 d_x, e2 = a21 d_x + a22 d_y
    x, y = j["x"], j["y"]
    a11 = 1 / dot(x, fr["t1"])
    a22 = 1 / dot(y, fr["t2"])
    a21 = -dot(y, fr["t1"]) * a11 * a22
    sig11 = a11[..., None] ** 2 * s["xx"]
    sig12 = a11[..., None] * (a21[..., None] * s["xx"] + a22[..., None] * s["xy"])
    sig22 = (a21[..., None] ** 2 * s["xx"] + 2 * (a21 * a22)[..., None] * s["xy"]
             + a22[..., None] ** 2 * s["yy"])
    out = []
    for e in (fr["e3"], fr["e4"]):
        A = np.empty(P.grid.shape + (2, 2))
        A[..., 0, 0] = dot(sig11, e)
        A[..., 0, 1] = A[..., 1, 0] = dot(sig12, e)
        A[..., 1, 1] = dot(sig22, e)
        out.append(A)
    return out


def normal_curvature(P):
    """K_perp from the Ricci equation with a pointwise oriented normal frame."""
    C1, C2, _ = kahler_functions(P)
    A3, A4 = shape_operators(P)
    comm = A4 @ A3 - A3 @ A4
    return P.orientation * (0.5 * (C1 ** 2 - C2 ** 2) + comm[..., 1, 0])


def hopf_s2xs2(P):
    """theta = 1/2 <J1 Phi_z, J2 Phi_z>."""
    Pz = P.Phi_z
    Phi = P.Phi
    return 0.5 * dot(J1(Phi, Pz), J2(Phi, Pz))


def area(P):
    _, _, u = kahler_functions(P)
    g = P.grid
    closed = g.periodic_x and g.periodic_y
    if P.tail is None and not closed:
        raise ValueError("area needs a closed chart or a known tail outside the chart")
    return integrate(1.0, g, u) + (P.tail or 0.0)


@dataclass
class InvariantField:
    grid: ComplexGrid
    u: np.ndarray
    C1: np.ndarray
    C2: np.ndarray
    K: np.ndarray
    Kperp: np.ndarray
    theta: np.ndarray
    H_residual: np.ndarray
    jac1: np.ndarray
    jac2: np.ndarray
    K_gauss_eq: np.ndarray = None

    def modulus_residual(self):
        """|theta|^2 - e^{4u}/16 (1-C1^2)(1-C2^2), relative to e^{4u}/16."""
        return np.abs(self.theta) ** 2 * 16 * np.exp(-4 * self.u) - (1 - self.C1 ** 2) * (1 - self.C2 ** 2)

    def channels(self):
        return {
            "u": self.u, "C1": self.C1, "C2": self.C2, "K": self.K, "Kperp": self.Kperp,
            "theta": self.theta, "H": self.H_residual, "jac1": self.jac1, "jac2": self.jac2,
        }


def invariants(P):
    C1, C2, u = kahler_functions(P)
    j1, j2 = jacobians(C1, C2)
    return InvariantField(
        grid=P.grid, u=u, C1=C1, C2=C2,
        K=gauss_curvature(P, "conformal"),
        Kperp=normal_curvature(P),
        theta=hopf_s2xs2(P),
        H_residual=mean_curvature_residual(P)[1],
        jac1=j1, jac2=j2,
        K_gauss_eq=gauss_curvature(P, "gauss_eq"),
    )


def holomorphy_residual(theta, grid):
    return d_zbar(theta, grid)


__all__ = [
    "ProductImmersion", "InvariantField", "J1", "J2", "hat", "kahler_functions", "jacobians",
    "degrees", "mean_curvature_residual", "gauss_curvature", "normal_curvature", "hopf_s2xs2",
    "area", "invariants", "conformality_residual", "conformal_log_factor", "d_z",
]
