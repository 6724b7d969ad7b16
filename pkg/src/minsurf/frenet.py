"""Fundamental data of minimal surfaces in S2 x S2 and the moving-frame system.

Data: u (metric e^{2u}|dz|^2), Kaehler functions C1, C2, the normal
connection form A, and the complex functions gamma_j, f_j defined by

    J1 Phi_z = i C1 Phi_z + gamma1 xi,      J2 Phi_z = i C2 Phi_z + gamma2 conj(xi),
    Phi_zz   = 2 u_z Phi_z + f1 xi + f2 conj(xi) - (gamma1 gamma2 / 2) hat(Phi),

where xi = (N - i Ntilde)/sqrt 2 for an oriented orthonormal normal frame.
"""

from dataclasses import dataclass, field, replace
import math

import numpy as np

from .cxgrid import ComplexGrid, GridInterpolant, d_z, d_zbar, residual_norm
from .s2xs2 import J1, J2, ProductImmersion, dot, hat, kahler_jets, orientation_det
from .s3min import NumericalError
from .sweep import sweep
from . import sinhgordon as sg

FIELDS = ("u", "A", "C1", "C2", "gamma1", "gamma2", "f1", "f2")
BASE_POINT = np.array([0.0, 0.0, -1.0, 0.0, 0.0, -1.0])
# tangent basis at the base point in which J acts as (a, b) -> (-b, a) on each factor
TANGENT = np.array([
    [1.0, 0, 0, 0, 0, 0],
    [0, -1.0, 0, 0, 0, 0],
    [0, 0, 0, 1.0, 0, 0],
    [0, 0, 0, 0, -1.0, 0],
])
SG_TOL = 1e-5


@dataclass
class FundamentalData:
    """Grid samples of the eight data fields.

    ``pointwise`` optionally evaluates (u, u_z, A, C1, C2, gamma1, gamma2, f1, f2)
    at arbitrary points; without it the integrator uses quintic splines.
    """

    grid: ComplexGrid
    u: np.ndarray
    A: np.ndarray
    C1: np.ndarray
    C2: np.ndarray
    gamma1: np.ndarray
    gamma2: np.ndarray
    f1: np.ndarray
    f2: np.ndarray
    pointwise: object = None
    meta: dict = field(default_factory=dict)

    def channels(self):
        return {k: getattr(self, k) for k in FIELDS}

    def norm_residual(self):
        """max over j of | |gamma_j|^2 - e^{2u}(1 - C_j^2)/2 |, relative to e^{2u}."""
        e = np.exp(2 * self.u)
        r = [np.abs(np.abs(g) ** 2 - 0.5 * e * (1 - C ** 2)) / e
             for g, C in ((self.gamma1, self.C1), (self.gamma2, self.C2))]
        return float(max(np.max(r[0]), np.max(r[1])))

    def check(self, tol=1e-8):
        if np.any(np.abs(self.C1) > 1 + tol) or np.any(np.abs(self.C2) > 1 + tol):
            raise ValueError("Kaehler functions outside [-1, 1]")
        r = self.norm_residual()
        if r > tol:
            raise ValueError(f"|gamma_j|^2 = e^(2u)(1 - C_j^2)/2 violated by {r:.2e}")

    def at(self, x, y):
        """Data (and u_z) at arbitrary points."""
        if self.pointwise is None:
            self.pointwise = _spline_evaluator(self)
        return self.pointwise(np.asarray(x, dtype=float), np.asarray(y, dtype=float))

    def at_node(self, i, j):
        return {k: getattr(self, k)[i, j] for k in FIELDS}


def _spline_evaluator(D):
    sp = {k: GridInterpolant(D.grid, getattr(D, k)) for k in FIELDS}

    def ev(x, y):
        out = {}
        for k, s in sp.items():
            val, dx, dy = s(x, y)
            out[k] = val
            if k == "u":
                out["u_z"] = 0.5 * (dx - 1j * dy)
        return out

    return ev


# ---- construction from sinh-Gordon solutions ----

def _sg_eval(prof_v, prof_w, t):
    s2 = math.sqrt(2) * np.exp(0.5j * t)

    def ev(x, y):
        v, vx, vy = prof_v(x, y)
        w, wx, wy = prof_w(x, y)
        vz = 0.5 * (vx - 1j * vy)
        wz = 0.5 * (wx - 1j * wy)
        p, m = v + w, v - w
        pz, mz = vz + wz, vz - wz
        tp, tm = np.tanh(p), np.tanh(m)
        cp, cm = np.cosh(p), np.cosh(m)
        g1 = s2 * np.sqrt(cp / cm)
        g2 = s2 * np.sqrt(cm / cp)
        return {
            "u": 0.5 * np.log(4 * cp * cm),
            "u_z": 0.5 * (tp * pz + tm * mz),
            "A": 0.5 * (tp * pz - tm * mz),
            "C1": tm, "C2": tp,
            "gamma1": g1 + 0j, "gamma2": g2 + 0j,
            "f1": -1j * g1 * mz, "f2": -1j * g2 * pz,
        }

    return ev


def from_sinh_gordon(v, w, t, grid, tol=SG_TOL):
    """Data of the minimal surface attached to two sinh-Gordon solutions v, w and an angle t.

    C1 = tanh(v - w), C2 = tanh(v + w), e^{2u} = 4 cosh(v + w) cosh(v - w),
    gamma1 = sqrt2 e^{it/2} sqrt(cosh(v+w)/cosh(v-w)), gamma2 likewise with the ratio inverted,
    A = (log sqrt(cosh(v+w)/cosh(v-w)))_z, f_j = -i gamma_j (v + (-1)^j w)_z.
    v and w may be solution objects, constants or sampled arrays.
    """
    sv, sw = sg.as_solution(v, grid), sg.as_solution(w, grid)
    for name, s in (("v", sv), ("w", sw)):
        if s.residual[0] > tol:
            raise ValueError(f"{name} does not solve sinh-Gordon (residual {s.residual[0]:.2e})")
    ev = _sg_eval(sv.profile, sw.profile, t)
    X, Y = grid.xy
    d = ev(X, Y)
    meta = {"source": "sinh_gordon", "t": t, "v": sv.provenance, "w": sw.provenance,
            "v_meta": sv.meta, "w_meta": sw.meta}
    return FundamentalData(grid, *(d[k] for k in FIELDS), pointwise=ev, meta=meta)


# ---- compatibility ----

def compatibility_residuals(D):
    """max/rms of the structure equations, for j = 1, 2:

    (C_j)_z - 2i e^{-2u} f_j conj(gamma_j),
    (gamma_j)_zbar -+ conj(A) gamma_j,
    (f_j)_zbar - i e^{2u}/4 C_j gamma_j -+ conj(A) f_j,
    |gamma_j|^2 - e^{2u}(1 - C_j^2)/2.
    """
    g = D.grid
    e2 = np.exp(2 * D.u)
    Ab = np.conj(D.A)
    out = {}
    for j, (C, gam, f) in enumerate(((D.C1, D.gamma1, D.f1), (D.C2, D.gamma2, D.f2)), start=1):
        s = 1 if j == 1 else -1
        fields = {
            f"C{j}_z": d_z(C, g) - 2j * f * np.conj(gam) / e2,
            f"gamma{j}_zbar": d_zbar(gam, g) - s * Ab * gam,
            f"f{j}_zbar": d_zbar(f, g) - 0.25j * e2 * C * gam - s * Ab * f,
            f"norm{j}": np.abs(gam) ** 2 - 0.5 * e2 * (1 - C ** 2),
        }
        for k, r in fields.items():
            out[k] = residual_norm(r, g)
    return out


def compatibility_ok(D, factor=1e-6):
    """rms of every structure equation below ``factor`` max e^{2u}."""
    lim = factor * float(np.max(np.exp(2 * D.u)))
    res = compatibility_residuals(D)
    return all(r[1] < lim for r in res.values()), res


def gauge_rotate(D, theta):
    """Rotate the normal frame by theta (constant or sampled field): xi -> e^{i theta} xi."""
    g = D.grid
    if np.isscalar(theta):
        th = np.full(g.shape, float(theta))
        th_z = np.zeros(g.shape, dtype=complex)
        tfun = None
    else:
        th = np.asarray(theta, dtype=float)
        th_z = d_z(th, g)
        tfun = GridInterpolant(g, th)
    em = np.exp(-1j * th)
    new = replace(D, gamma1=em * D.gamma1, gamma2=D.gamma2 / em, f1=em * D.f1, f2=D.f2 / em,
                  A=1j * th_z + D.A, pointwise=None, meta=dict(D.meta, gauge=True))
    if D.pointwise is not None:
        old = D.pointwise

        def ev(x, y):
            d = dict(old(x, y))
            if tfun is None:
                t, tz = float(theta), 0.0
            else:
                t, tx, ty = tfun(x, y)
                tz = 0.5 * (tx - 1j * ty)
            e = np.exp(-1j * t)
            d["gamma1"], d["f1"] = e * d["gamma1"], e * d["f1"]
            d["gamma2"], d["f2"] = d["gamma2"] / e, d["f2"] / e
            d["A"] = 1j * tz + d["A"]
            return d

        new.pointwise = ev
    return new


# ---- frames ----

@dataclass
class AdaptedFrame:
    """Phi, Phi_x, Phi_y (6-vectors) and xi (complex 6-vector) at one point."""

    Phi: np.ndarray
    Phi_x: np.ndarray
    Phi_y: np.ndarray
    xi: np.ndarray

    @property
    def Phi_z(self):
        return 0.5 * (self.Phi_x - 1j * self.Phi_y)

    def state(self):
        P = self.Phi_z
        return np.concatenate([self.Phi, P.real, P.imag, self.xi.real, self.xi.imag])

    def relations(self, d):
        """Residuals of the adapted-frame relations against data values d at the point."""
        Phi, Pz, xi = self.Phi, self.Phi_z, self.xi
        e2u = math.exp(2 * float(np.real(d["u"])))
        n1 = np.r_[Phi[:3], 0, 0, 0]
        n2 = np.r_[0, 0, 0, Phi[3:]]
        tangent_x = self.Phi_x / math.sqrt(e2u)
        tangent_y = self.Phi_y / math.sqrt(e2u)
        Ntil = math.sqrt(2) * np.real(1j * xi)
        N = math.sqrt(2) * np.real(xi)
        r = {
            "sphere": max(abs(np.linalg.norm(Phi[:3]) - 1), abs(np.linalg.norm(Phi[3:]) - 1)),
            "orthonormal": float(np.max(np.abs(
                np.stack([n1, n2, tangent_x, tangent_y, Ntil, N]) @ np.stack([n1, n2, tangent_x, tangent_y, Ntil, N]).T
                - np.eye(6)))),
            "xi_null": abs(np.sum(xi * xi)),
            "xi_unit": abs(np.sum(xi * np.conj(xi)) - 1),
            "J1": float(np.max(np.abs(J1(Phi, Pz) - 1j * d["C1"] * Pz - d["gamma1"] * xi))),
            "J2": float(np.max(np.abs(J2(Phi, Pz) - 1j * d["C2"] * Pz - d["gamma2"] * np.conj(xi)))),
        }
        orient = orientation_det(Phi, tangent_x, tangent_y, Ntil, N)
        r["orientation"] = 0.0 if orient > 0 else 1.0
        return r


def _rot_z(a):
    c, s = math.cos(a), math.sin(a)
    return np.array([[c, -s, 0], [s, c, 0], [0, 0, 1.0]])


def canonical_frame(d, seed_angle=0.0, tol=1e-10):
    """Adapted frame at the base point ((0,0,-1), (0,0,-1)) for data values d.

    Construction in the tangent basis where J1 = (J, J), J2 = (J, -J):
    e1 = (cos a, 0, sin a, 0), e2 = (-s sin a, q1, s cos a, q2) with
    q1 cos a = (C1 + C2)/2, q2 sin a = (C1 - C2)/2 and
    cos^2 a = |C1 + C2| / (|C1 + C2| + |C1 - C2|), so that <J_j e1, e2> = C_j.
    (e1, e2) is completed to a positive orthonormal basis (e1, e2, Ntilde, N),
    the tangent pair is rotated to match arg(gamma1 gamma2) and xi is
    rotated to match arg gamma1 (or arg gamma2 if gamma1 = 0).  ``seed_angle``
    applies the same rotation about the base axis to both factors.
    """
    C1, C2 = float(np.real(d["C1"])), float(np.real(d["C2"]))
    u = float(np.real(d["u"]))
    g1, g2 = complex(d["gamma1"]), complex(d["gamma2"])
    e2u = math.exp(2 * u)
    for g, C in ((g1, C1), (g2, C2)):
        if abs(abs(g) ** 2 - 0.5 * e2u * (1 - C ** 2)) > tol * e2u:
            raise ValueError("data violate |gamma_j|^2 = e^(2u)(1 - C_j^2)/2")
    if abs(C1) > 1 or abs(C2) > 1:
        raise ValueError("Kaehler functions outside [-1, 1]")
    S, D = abs(C1 + C2), abs(C1 - C2)
    if S + D == 0:
        alpha = math.pi / 4
    else:
        alpha = math.acos(math.sqrt(S / (S + D)))
    ca, sa = math.cos(alpha), math.sin(alpha)
    q1 = 0.0 if ca < 1e-15 else 0.5 * (C1 + C2) / ca
    q2 = 0.0 if sa < 1e-15 else 0.5 * (C1 - C2) / sa
    s = math.sqrt(max(0.0, 1 - q1 ** 2 - q2 ** 2))
    e1 = np.array([ca, 0, sa, 0])
    e2 = np.array([-s * sa, q1, s * ca, q2])
    # complete to a positive basis of R^4
    Q, _ = np.linalg.qr(np.column_stack([e1, e2, np.eye(4)]), mode="complete")
    nt, n = Q[:, 2], Q[:, 3]
    if np.linalg.det(np.column_stack([e1, e2, nt, n])) < 0:
        n = -n
    E1, E2, NT, NN = (c @ TANGENT for c in (e1, e2, nt, n))
    Phi = BASE_POINT.copy()
    eu = math.exp(u)

    def build(E1, E2, NT, NN):
        return AdaptedFrame(Phi, eu * E1, eu * E2, (NN - 1j * NT) / math.sqrt(2))

    def gammas(F):
        Pz = F.Phi_z
        return np.sum(J1(Phi, Pz) * np.conj(F.xi)), np.sum(J2(Phi, Pz) * F.xi)

    F = build(E1, E2, NT, NN)
    h1, h2 = gammas(F)
    # tangent rotation by b multiplies gamma1 gamma2 by e^{2ib}
    if abs(g1 * g2) > 0 and abs(h1 * h2) > 0:
        b = 0.5 * np.angle(g1 * g2 / (h1 * h2))
        cb, sb = math.cos(b), math.sin(b)
        E1, E2 = cb * E1 + sb * E2, -sb * E1 + cb * E2
        F = build(E1, E2, NT, NN)
        h1, h2 = gammas(F)
    # rotating xi by c multiplies gamma1 by e^{-ic} and gamma2 by e^{ic}
    if abs(g1) > 0 and abs(h1) > 0:
        c = -np.angle(g1 / h1)
    elif abs(g2) > 0 and abs(h2) > 0:
        c = np.angle(g2 / h2)
    else:
        c = 0.0
    F = AdaptedFrame(Phi, F.Phi_x, F.Phi_y, np.exp(1j * c) * F.xi)
    if seed_angle:
        R = np.kron(np.eye(2), _rot_z(seed_angle))
        F = AdaptedFrame(R @ F.Phi, R @ F.Phi_x, R @ F.Phi_y, R @ F.xi)
    rel = F.relations(d)
    if max(rel.values()) > 1e-9:
        raise ValueError(f"adapted frame relations fail: {rel}")
    return F


# ---- integration ----

def frenet_rhs(D):
    def rhs(s, x, y, axis):
        d = D.at(x, y)
        col = lambda a: np.asarray(a)[:, None]
        Phi = s[:, :6]
        P = s[:, 6:12] + 1j * s[:, 12:18]
        xi = s[:, 18:24] + 1j * s[:, 24:30]
        Ph = hat(Phi)
        e2 = col(np.exp(2 * d["u"]))
        em = 1 / e2
        C1, C2 = col(d["C1"]), col(d["C2"])
        g1, g2 = col(d["gamma1"]), col(d["gamma2"])
        f1, f2 = col(d["f1"]), col(d["f2"])
        A, uz = col(d["A"]), col(d["u_z"])
        Pz = 2 * uz * P + f1 * xi + f2 * np.conj(xi) - 0.5 * g1 * g2 * Ph
        Pzb = -0.25 * e2 * (Phi + C1 * C2 * Ph)
        xz = -2 * em * f2 * np.conj(P) + A * xi + 0.5j * C1 * g2 * Ph
        xzb = -2 * em * np.conj(f1) * P - np.conj(A) * xi - 0.5j * C2 * np.conj(g1) * Ph
        if axis == 0:
            dPhi = 2 * P.real
            dP, dxi = Pz + Pzb, xz + xzb
        else:
            dPhi = -2 * P.imag
            dP, dxi = 1j * (Pz - Pzb), 1j * (xz - xzb)
        return np.concatenate([dPhi, dP.real, dP.imag, dxi.real, dxi.imag], axis=1)

    return rhs


def _unpack(S):
    Phi = S[..., :6]
    P = S[..., 6:12] + 1j * S[..., 12:18]
    xi = S[..., 18:24] + 1j * S[..., 24:30]
    return Phi, P, xi


def frame_drift(S):
    """Deviation of the integrated frame from the constraint manifold."""
    Phi, P, xi = _unpack(S)
    Pb = np.conj(P)
    n = lambda a: float(np.max(np.abs(a)))
    return {
        "sphere": max(n(np.linalg.norm(Phi[..., :3], axis=-1) - 1), n(np.linalg.norm(Phi[..., 3:], axis=-1) - 1)),
        "xi_unit": n(dot(xi, np.conj(xi)) - 1),
        "xi_null": n(dot(xi, xi)),
        "xi_tangent": max(n(dot(xi, P)), n(dot(xi, Pb))) / float(np.min(np.linalg.norm(P, axis=-1))),
        "xi_ambient": max(n(dot(xi, Phi)), n(dot(xi, hat(Phi)))),
        "conformal": n(dot(P, P)) / float(np.min(dot(P, Pb).real)),
    }


def frenet_integrate(D, init=None, max_step=1e-3, drift_tol=1e-6, closure=True, check=True,
                     reproject=False):
    """Integrate the moving-frame system from ``init`` at the node nearest z = 0.

    The real state (Phi, Re Phi_z, Im Phi_z, Re xi, Im xi) is carried along the
    x axis through the base node and then along every column, by classical RK4
    with at most ``max_step`` per substep.  ``reproject`` renormalizes Phi onto
    the spheres after integration and reports the drift before and after.
    """
    g = D.grid
    if check:
        D.check(1e-8)
        ok, res = compatibility_ok(D)
        if not ok:
            worst = max(res.items(), key=lambda kv: kv[1][1])
            raise ValueError(f"incompatible data: {worst[0]} rms residual {worst[1][1]:.2e}")
    base = g.nearest(0.0, 0.0)
    if init is None:
        init = canonical_frame(D.at_node(*base))
    rhs = frenet_rhs(D)
    S = sweep(rhs, g, init.state(), base, max_step, "xy")
    diag = {"drift": frame_drift(S)}
    if closure:
        S2 = sweep(rhs, g, init.state(), base, max_step, "yx")
        diag["closure_corner"] = float(np.max(np.abs(S[-1, -1] - S2[-1, -1])))
        diag["closure_max"] = float(np.max(np.abs(S - S2)))
    drift = diag["drift"]["sphere"]
    if drift > drift_tol:
        raise NumericalError(f"sphere drift {drift:.2e} exceeds {drift_tol:.1e}")
    Phi, P, xi = _unpack(S)
    phi1, phi2 = Phi[..., :3], Phi[..., 3:]
    if reproject:
        diag["drift_before"] = drift
        phi1 = phi1 / np.linalg.norm(phi1, axis=-1, keepdims=True)
        phi2 = phi2 / np.linalg.norm(phi2, axis=-1, keepdims=True)
        diag["drift_after"] = float(max(np.max(np.abs(np.linalg.norm(phi1, axis=-1) - 1)),
                                        np.max(np.abs(np.linalg.norm(phi2, axis=-1) - 1))))
    out = ProductImmersion(g, phi1, phi2, name="frenet", params=dict(D.meta), diagnostics=diag)
    out.diagnostics["Phi_z"] = P
    out.diagnostics["xi"] = xi
    return out


# ---- extraction ----

def propagate_normal_frame(P, base=None):
    """Smooth xi field: the pointwise oriented frame (e3, e4) rotated by a phase
    chosen, node by node, as the closest rotation of the neighbouring frame.

    Propagation runs along the row through ``base`` and then along all columns.
    """
    fr = P.frames
    xi0 = (fr["e4"] - 1j * fr["e3"]) / math.sqrt(2)
    g = P.grid
    i0, j0 = base or g.nearest(0.0, 0.0)
    xi = np.empty_like(xi0)
    xi[i0, j0] = xi0[i0, j0]

    def step(prev, new0):
        c = dot(prev, np.conj(new0))
        if np.any(np.abs(c) < 0.5):
            raise NumericalError("normal frame propagation failed: normal plane turns too fast")
        return (c / np.abs(c))[..., None] * new0

    for i in range(i0 + 1, g.nx):
        xi[i, j0] = step(xi[i - 1, j0], xi0[i, j0])
    for i in range(i0 - 1, -1, -1):
        xi[i, j0] = step(xi[i + 1, j0], xi0[i, j0])
    for j in range(j0 + 1, g.ny):
        xi[:, j] = step(xi[:, j - 1], xi0[:, j])
    for j in range(j0 - 1, -1, -1):
        xi[:, j] = step(xi[:, j + 1], xi0[:, j])
    return xi


def extract(P, base=None):
    """Fundamental data of a sampled immersion, with the propagated xi field."""
    g = P.grid
    C1j, C2j, uj = kahler_jets(P)
    xi = propagate_normal_frame(P, base)
    Phi = P.Phi
    Pz, Pzz = P.Phi_z, P.Phi_zz
    xib = np.conj(xi)
    s = P.orientation
    D = FundamentalData(
        g, u=uj.v, A=dot(d_z(xi, g), xib), C1=C1j.v, C2=C2j.v,
        gamma1=dot(J1(Phi, Pz), xib), gamma2=dot(J2(Phi, Pz), xi),
        f1=dot(Pzz, xib), f2=dot(Pzz, xi), meta={"source": "extract", "name": P.name},
    )
    if s != 1:
        raise ValueError("extraction assumes the positively oriented parametrization")
    return D, {"xi": xi, "Phi_z": Pz}
