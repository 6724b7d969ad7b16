"""Identity suites for sampled minimal surfaces in S2 x S2.

Every check is reported with its measured residual and tolerance; nothing
is assumed.  Statements about all compact surfaces are only tested on the
examples that can be built here, which each report says in its header.
"""

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .cxgrid import residual_norm
from .s2xs2 import (area, conformality_residual, degrees, invariants, kahler_jets,
                    mean_curvature_residual)

SCOPE = ("conclusions of statements about all compact minimal surfaces are checked "
         "only on the constructed examples in this report")
LEMMA_TOL = 1e-3
CURV_TOL = 1e-4
H_TOL = 1e-4
CONFORMAL_TOL = 1e-3
LOG_MASK = 1e-4
NOISE_FACTOR = 50
NOISE_MIN = 1e-12


@dataclass
class IdentityReport:
    title: str
    meta: dict = field(default_factory=dict)
    entries: list = field(default_factory=list)

    def add(self, name, residual, tol, note=""):
        mx, rms = residual if isinstance(residual, tuple) else (float(residual), float(residual))
        self.entries.append({"name": name, "max": float(mx), "rms": float(rms), "tol": float(tol),
                             "passed": bool(mx <= tol), "note": note})

    def add_verdict(self, name, ok, note=""):
        self.entries.append({"name": name, "max": 0.0 if ok else 1.0, "rms": 0.0 if ok else 1.0,
                             "tol": 0.0, "passed": bool(ok), "note": note})

    @property
    def passed(self):
        return all(e["passed"] for e in self.entries)

    def __getitem__(self, name):
        for e in self.entries:
            if e["name"] == name:
                return e
        raise KeyError(name)

    def merge(self, other):
        self.entries.extend(other.entries)
        return self

    def to_dict(self):
        return {"title": self.title, "scope": SCOPE, "meta": self.meta,
                "passed": self.passed, "entries": self.entries}

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, default=_jsonable)

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["name", "max", "rms", "tol", "passed", "note"])
        for e in self.entries:
            w.writerow([e["name"], repr(e["max"]), repr(e["rms"]), repr(e["tol"]), int(e["passed"]), e["note"]])
        return buf.getvalue()


def _jsonable(o):
    if isinstance(o, complex):
        return [o.real, o.imag]
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    return str(o)


def _meta(P):
    return {"example": P.name, "params": P.params, "grid": P.grid.to_dict()}


def minimality_gate(P, tol=H_TOL, report=None):
    report = report or IdentityReport("minimality", _meta(P))
    report.add("mean_curvature", residual_norm(mean_curvature_residual(P)[1], P.grid), tol)
    return report


def lemma35(P, tol=LEMMA_TOL, inv=None, c1_shift=0.0):
    """Residuals of the curvature identities satisfied by the data of a minimal surface,
    each divided by its natural scale so that they are dimensionless:

    (i)   8 e^{-4u} |f_j|^2 = C_j^2 - K + (-1)^j Kperp
    (ii)  Lap C_j = 2 C_j (K + (-1)^{j+1} Kperp) - C_j (1 + C_j^2)
          |grad C_j|^2 = (1 - C_j^2)(C_j^2 - K + (-1)^j Kperp)
    (iii) Lap log(1 +- C_j) = -+C_j + K + (-1)^{j+1} Kperp   where |1 +- C_j| > 1e-4

    Lap and grad use the induced metric; C_j, u and their derivatives come
    from stencil jets of the immersion.  ``c1_shift`` adds a constant to C_1
    before the checks (sensitivity controls only).
    """
    from .frenet import extract

    g = P.grid
    inv = inv or invariants(P)
    C1, C2, u = kahler_jets(P)
    if c1_shift:
        C1 = C1 + c1_shift
    D, _ = extract(P)
    em2 = np.exp(-2 * u.v)
    K, Kp = inv.K, inv.Kperp
    rep = IdentityReport("lemma35", _meta(P))
    for j, C, f in ((1, C1, D.f1), (2, C2, D.f2)):
        s = (-1) ** j
        c = C.v
        rep.add(f"i_fnorm_{j}", residual_norm(8 * np.exp(-4 * u.v) * np.abs(f) ** 2 - (c ** 2 - K + s * Kp), g), tol)
        rep.add(f"ii_laplacian_{j}",
                residual_norm(em2 * C.laplacian() - (2 * c * (K - s * Kp) - c * (1 + c ** 2)), g), tol)
        rep.add(f"ii_gradient_{j}",
                residual_norm(em2 * C.grad2() - (1 - c ** 2) * (c ** 2 - K + s * Kp), g), tol)
        for sign, tag in ((1, "plus"), (-1, "minus")):
            base = 1 + sign * C
            mask = np.abs(base.v) > LOG_MASK
            lap = em2 * _masked_log(base, mask).laplacian()
            r = np.where(mask, lap - (-sign * c + K - s * Kp), 0.0)
            rep.add(f"iii_log_{tag}_{j}", residual_norm(r, g, mask), tol,
                    note=f"{int(np.sum(~mask))} nodes masked")
    return rep


def _masked_log(J, mask):
    safe = J._map(lambda a: a)
    safe.v = np.where(mask, J.v, 1.0)
    return safe.log()


def noise_floor(P, inv=None):
    """Largest of the minimality, conformality and Hopf-modulus residuals of the run."""
    inv = inv or invariants(P)
    g = P.grid
    return max(residual_norm(inv.H_residual, g)[0],
               residual_norm(conformality_residual(P), g)[0],
               residual_norm(inv.modulus_residual(), g)[0], NOISE_MIN)


def classify(P, inv=None, eps=None):
    """Labels from the Kaehler functions; thresholds are 50 times the noise floor of the run."""
    inv = inv or invariants(P)
    g = P.grid
    sl = g.interior()
    eps = eps or NOISE_FACTOR * noise_floor(P, inv)
    C1, C2 = inv.C1[sl], inv.C2[sl]
    labels = []
    const = np.ptp(C1) < eps and np.ptp(C2) < eps
    if const:
        vals = []
        for C in (C1, C2):
            m = float(np.mean(C))
            near = [c for c in (-1.0, 0.0, 1.0) if abs(m - c) < eps]
            vals.append(near[0] if near else None)
        a, b = vals
        if a is not None and b is not None:
            if abs(a) == 1 and abs(b) == 1:
                labels.append("Slice")
            elif abs(a) + abs(b) == 1:
                labels.append("Diagonal")
            else:
                labels.append("CliffordT")
    if np.max(np.abs(1 - C1 ** 2)) < eps or np.max(np.abs(1 - C2 ** 2)) < eps:
        labels.append("Complex")
    if np.max(np.abs(C1)) < eps or np.max(np.abs(C2)) < eps:
        labels.append("Lagrangian")
    if np.max(np.abs(C1 ** 2 - C2 ** 2)) < eps:
        labels.append("NonFull")
    if not labels:
        labels.append("General")
    return labels, eps


def complex_lagrangian_indices(inv, eps):
    sl = inv.grid.interior()
    cx = [j for j, C in ((1, inv.C1), (2, inv.C2)) if np.max(np.abs(1 - C[sl] ** 2)) < eps]
    lg = [j for j, C in ((1, inv.C1), (2, inv.C2)) if np.max(np.abs(C[sl])) < eps]
    return cx, lg


def section6_checks(P, inv=None, curv_tol=CURV_TOL, area_tol=1e-3, degree_tol=1e-2):
    """Quantitative consequences on the example: area bound, area-degree relation
    for complex surfaces, and the curvature values K + (-1)^{j+1} Kperp on
    complex (1) and totally geodesic Lagrangian (0) examples."""
    g = P.grid
    inv = inv or invariants(P)
    labels, eps = classify(P, inv)
    rep = IdentityReport("section6", dict(_meta(P), labels=labels))
    A = None
    try:
        A = area(P)
    except ValueError:
        pass
    if A is not None:
        rep.meta["area"] = A
        lo = 4 * math.pi * (1 - area_tol)
        rep.add("area_lower_bound", max(0.0, lo - A), 0.0, note=f"area {A:.10g}")
    cx, lg = complex_lagrangian_indices(inv, eps)
    if cx and g.periodic_x and g.periodic_y and A is not None:
        d1, d2 = degrees(P)
        rep.meta["degrees"] = (d1, d2)
        rep.add("complex_area_degrees", abs(A - 4 * math.pi * (abs(d1) + abs(d2))) / A, degree_tol)
    for j in cx:
        s = 1 if j == 1 else -1
        rep.add(f"complex_curvature_{j}", residual_norm(inv.K + s * inv.Kperp - 1, g), curv_tol)
    geodesic = any(l in labels for l in ("Slice", "Diagonal", "CliffordT"))
    if geodesic:
        for j in lg:
            s = 1 if j == 1 else -1
            rep.add(f"lagrangian_curvature_{j}", residual_norm(inv.K + s * inv.Kperp, g), curv_tol)
        Kc = {"Slice": 1.0, "Diagonal": 0.5, "CliffordT": 0.0}
        for l in labels:
            if l in Kc:
                rep.add(f"rigidity_{l}_K", residual_norm(inv.K - Kc[l], g), curv_tol)
    return rep


def hopf_identity(P, inv=None, modulus_tol=1e-4, holo_tol=1e-5):
    """|theta|^2 = e^{4u}(1 - C1^2)(1 - C2^2)/16 (relative) and holomorphy of 2 theta.

    Holomorphy is judged on the rms of 4 e^{-2u} |d_zbar(2 theta)|, theta measured
    against its bound e^{2u}/4; the raw rms is kept in the note.
    """
    from .cxgrid import d_zbar

    inv = inv or invariants(P)
    g = P.grid
    rep = IdentityReport("hopf", _meta(P))
    rep.add("modulus", residual_norm(inv.modulus_residual(), g), modulus_tol)
    dz = d_zbar(2 * inv.theta, g)
    raw = residual_norm(dz, g)
    hol = residual_norm(4 * np.exp(-2 * inv.u) * np.abs(dz), g)
    rep.add("holomorphy", (hol[1], hol[1]), holo_tol,
            note=f"normalized max {hol[0]:.3e}, raw rms {raw[1]:.3e}")
    return rep


def validate(P, tol=LEMMA_TOL):
    """All suites; the report passes iff every identity passes.

    Conformality and minimality gate the rest: a surface failing either is
    reported without the curvature identities.
    """
    g = P.grid
    rep = IdentityReport("validate", _meta(P))
    rep.add("conformality", residual_norm(conformality_residual(P), g), CONFORMAL_TOL)
    minimality_gate(P, report=rep)
    if not rep.passed:
        rep.meta["labels"] = None
        return rep
    inv = invariants(P)
    rep.merge(lemma35(P, tol, inv))
    rep.merge(hopf_identity(P, inv))
    rep.merge(section6_checks(P, inv))
    labels, eps = classify(P, inv)
    rep.meta["labels"] = labels
    rep.meta["noise_threshold"] = eps
    return rep
