"""Acceptance criteria 1-11, each at its stated grid, step and tolerance.

Every test prints (and records for the terminal summary) one line
``CRITERION n: PASS|FAIL`` followed by the measured quantities.
"""

import math

import numpy as np

from conftest import ACCEPTANCE, catalog_member, sg_surface, unit_square
from minsurf import catalog as cat
from minsurf import frenet as fr
from minsurf import gaussbridge as gb
from minsurf import grassmann as gm
from minsurf import s3min as s3
from minsurf import sinhgordon as sg
from minsurf.cxgrid import d_zbar, residual_norm
from minsurf.s2xs2 import area, degrees, hopf_s2xs2, invariants, kahler_functions, mean_curvature_residual
from minsurf.validator import classify, lemma35, section6_checks


def _record(n, title, checks):
    """checks: (label, measured, bound, kind) with kind '<' (measured < bound) or '>'."""
    ok_all = True
    parts = []
    for label, val, bound, kind in checks:
        ok = bool(val < bound) if kind == "<" else bool(val > bound)
        ok_all &= ok
        parts.append(f"{label}={val:.3e}{kind}{bound:.1e}{'' if ok else ' (X)'}")
    line = f"CRITERION {n:2d}: {'PASS' if ok_all else 'FAIL'}  {title}: " + "; ".join(parts)
    ACCEPTANCE[f"{n:02d}"] = line
    print(line)
    assert ok_all, line


def _err(a, b, g, mask=None):
    return residual_norm(np.asarray(a) - b, g, mask)[0]


def test_criterion_01_catalog_constants():
    checks = []
    for name, want in (("slice", (1, 1, 1, 0)), ("diagonal", (1, 0, 0.5, 0.5)), ("clifford", (0, 0, 0, 0))):
        P = catalog_member(name)
        assert P.grid.nx == 129 and P.grid.order == 4
        I = invariants(P)
        for k, w in zip(("C1", "C2", "K", "Kperp"), want):
            checks.append((f"{name}.{k}", _err(getattr(I, k), w, P.grid), 1e-4, "<"))
    _record(1, "catalog constants at 129^2, order 4", checks)


def test_criterion_02_areas_and_degrees():
    c = []
    for name, kw, A0, tol in (("slice", {}, 4 * math.pi, 1e-3), ("diagonal", {}, 8 * math.pi, 1e-3),
                              ("graph", {"degree": 2}, 12 * math.pi, 1e-2)):
        A = area(cat.catalog(name, chart="cylinder", **kw))
        c.append((f"{name} |A/A0-1|", abs(A / A0 - 1), tol, "<"))
    W = catalog_member("weierstrass")
    c.append(("weierstrass |A/16pi-1|", abs(area(W) / (16 * math.pi) - 1), 1e-2, "<"))
    d1, d2 = degrees(W)
    c.append(("|d1-2|", abs(d1 - 2), 0.02, "<"))
    c.append(("|d2-2|", abs(d2 - 2), 0.02, "<"))
    _record(2, "areas (cylinder chart / period cell) and torus degrees", c)


def test_criterion_03_minimality_gate():
    c = []
    surfaces = [(n, catalog_member(n)) for n in ("slice", "diagonal", "clifford", "weierstrass", "graph")]
    surfaces.append(("sinh-gordon", sg_surface()[1]))
    g = unit_square()
    phi = s3.s3_frenet_integrate(sg.one_dim(0.4, g), 0.5j, g)
    surfaces.append(("gauss-pair", gb.gauss_map_pair(gb.GaussPair(phi, s3.clifford_family(0.0, g), 1e-4))[0]))
    for name, P in surfaces:
        c.append((f"H[{name}]", residual_norm(mean_curvature_residual(P)[1], P.grid)[0], 1e-4, "<"))
    Pp = catalog_member("perturbed")
    c.append(("H[perturbed]", residual_norm(mean_curvature_residual(Pp)[1], Pp.grid)[0], 1e-2, ">"))
    _record(3, "mean curvature at 129^2 and negative control", c)


def test_criterion_04_lemma_suite_and_refinement():
    # on [-1, 1]^2 the stencil error at 129^2 sits well above the roundoff floor
    # of third differences of the integrated immersion, so refinement is visible
    box = (-1.0, 1.0, -1.0, 1.0)
    r1 = lemma35(sg_surface(n=129, extent=box)[1])
    r2 = lemma35(sg_surface(n=257, extent=box)[1])
    c = []
    worst = max(e["max"] for e in r1.entries)
    c.append(("max residual 129", worst, 1e-3, "<"))
    ratio = min(a["rms"] / b["rms"] for a, b in zip(r1.entries, r2.entries))
    c.append(("min rms ratio 129/257", ratio, 3.5, ">"))
    _record(4, "curvature identities on (one_dim(0.5), 0)", c)


def test_criterion_05_compatibility_and_frenet_roundtrip():
    D, P = sg_surface()
    g = D.grid
    comp = fr.compatibility_residuals(D)
    c = [("compat rms", max(r[1] for r in comp.values()), 1e-6, "<")]
    c.append(("sphere drift", P.diagnostics["drift"]["sphere"], 1e-6, "<"))
    E, _ = fr.extract(P)
    for k in ("u", "C1", "C2"):
        c.append((f"extract {k}", _err(getattr(E, k), getattr(D, k), g), 1e-4, "<"))
    for k in ("gamma1", "gamma2", "f1", "f2"):
        c.append((f"extract |{k}|", _err(np.abs(getattr(E, k)), np.abs(getattr(D, k)), g), 1e-4, "<"))
    c.append(("C1^2-C2^2", _err(E.C1 ** 2, E.C2 ** 2, g), 1e-6, "<"))
    c.append(("Kperp", residual_norm(invariants(P).Kperp, g)[0], 1e-4, "<"))
    _record(5, "compatibility, Frenet integration and extraction", c)


def test_criterion_06_hopf_contracts():
    c = []
    for t in (0.0, math.pi / 3):
        _, P = sg_surface(t=t)
        g = P.grid
        th = hopf_s2xs2(P)
        c.append((f"||theta|-1| t={t:.3f}", _err(np.abs(th), 1.0, g), 1e-4, "<"))
        c.append((f"|arg theta - t| t={t:.3f}", _err(np.angle(th * np.exp(-1j * t)), 0.0, g), 1e-4, "<"))
        c.append((f"holo rms t={t:.3f}", residual_norm(d_zbar(2 * th, g), g)[1], 1e-5, "<"))
    g = cat.clifford_grid(129).with_order(6)
    C = s3.clifford_family(0.0, g)
    P, _ = gb.gauss_map_pair(gb.GaussPair(C, C))
    c.append(("Theta+2i theta_phi (Clifford pair)", _err(hopf_s2xs2(P), -2j * C.theta, g), 1e-6, "<"))
    _record(6, "Hopf coefficient of the sinh-Gordon family and of Gauss pairs", c)


def test_criterion_07_pair_predictions():
    g = cat.clifford_grid(257).with_order(6)
    C = s3.clifford_family(0.0, g)
    P, _ = gb.gauss_map_pair(gb.GaussPair(C, C))
    C1, C2, u = kahler_functions(P)
    c = [("Clifford C1", _err(C1, 0.0, g), 1e-8, "<"), ("Clifford C2", _err(C2, 0.0, g), 1e-8, "<"),
         ("Clifford e2u-4", _err(np.exp(2 * u), 4.0, g), 1e-8, "<")]
    gs = unit_square()
    phi = s3.s3_frenet_integrate(sg.one_dim(0.4, gs), 0.5j, gs)
    P2, pred = gb.gauss_map_pair(gb.GaussPair(phi, s3.clifford_family(0.0, gs), 1e-4))
    cmp = gb.compare_predictions(P2, pred)
    for k in ("e2u", "C1", "C2"):
        c.append((f"generic {k}", cmp[k], 1e-3, "<"))
    _record(7, "pair predictions: Clifford pair (periodic 257^2, order 6) and integrated pair", c)


def test_criterion_08_roundtrip():
    g = unit_square()
    c = []
    for v0, w0 in ((0.5, 0.0), (0.4, 0.4)):
        r = gb.roundtrip_thm54(sg.one_dim(v0, g), sg.one_dim(w0, g), g)
        worst = max(m[0] for m in r["report"].values())
        c.append((f"max field diff ({v0},{w0})", worst, 1e-3, "<"))
        if v0 == w0:
            for key in ("inv_frenet", "inv_gauss"):
                c.append((f"max|C1| {key}", residual_norm(r[key].C1, g)[0], 1e-4, "<"))
    _record(8, "Frenet route vs Gauss-map route", c)


def test_criterion_09_s2xr():
    g = unit_square()
    v = sg.one_dim(0.5, g)
    S = gb.gauss_map_s2xr(v, 0.0, g)
    c = [("metric - 4cosh^2 v", _err(S.metric(), 4 * np.cosh(v.v) ** 2, g), 1e-3, "<")]
    nm = gb.nu_minus(s3.clifford_family(0.0, g))
    c.append(("nu- off circle", float(np.max(np.abs(nm[..., 0]))), 1e-8, "<"))
    c.append(("height - 2Im z", float(np.max(np.abs(S.height - 2 * np.imag(g.z)))), 1e-14, "<"))
    h = gb.height_from_circle(nm)
    c.append(("angle of nu- vs 2Im z (ptp)", float(np.ptp(h - 2 * np.imag(g.z))), 1e-12, "<"))
    _record(9, "Gauss map into S2 x R", c)


def test_criterion_10_grassmann():
    rng = np.random.default_rng(20240611)
    n = 10_000
    B = rng.standard_normal((n, 6))
    c = [("star^2 - id", float(np.max(np.abs(gm.star(gm.star(B)) - B))), 1e-12, "<")]
    c.append(("|star B| - |B|", float(np.max(np.abs(np.linalg.norm(gm.star(B), axis=1) - np.linalg.norm(B, axis=1)))), 1e-12, "<"))
    E = np.vstack([gm.EPLUS, gm.EMINUS])
    c.append(("E+- orthonormal", float(np.max(np.abs(E @ E.T - np.eye(6)))), 1e-12, "<"))
    iso, frame = 0.0, 0.0
    A = np.linalg.qr(rng.standard_normal((n, 4, 4)))[0]
    for k in range(n):
        AB = gm.induced_isometry(A[k], B[k])
        iso = max(iso, abs(np.linalg.norm(AB) - np.linalg.norm(B[k])))
    Q = np.linalg.qr(rng.standard_normal((n, 4, 2)))[0]
    v, w = Q[..., 0], Q[..., 1]
    a = rng.uniform(0, 2 * np.pi, (n, 1))
    p0, m0 = gm.plane_to_spheres(v, w)
    p1, m1 = gm.plane_to_spheres(np.cos(a) * v + np.sin(a) * w, -np.sin(a) * v + np.cos(a) * w)
    frame = float(max(np.max(np.abs(p1 - p0)), np.max(np.abs(m1 - m0))))
    c.append(("induced isometry", iso, 1e-12, "<"))
    c.append(("plane frame independence", frame, 1e-12, "<"))
    c.append(("unit spheres", float(np.max(np.abs(np.linalg.norm(p0, axis=1) - 1))), 1e-12, "<"))
    _record(10, "Grassmann identities over 10^4 seeded trials", c)


def test_criterion_11_section6_consistency():
    c = []
    lo = 4 * math.pi * (1 - 1e-3)
    W = cat.catalog("weierstrass", cat.torus_grid(1j, 257).with_order(6))
    compact = [("slice", cat.catalog("slice", chart="cylinder")),
               ("diagonal", cat.catalog("diagonal", chart="cylinder")),
               ("graph", cat.catalog("graph", chart="cylinder")),
               ("clifford", catalog_member("clifford")), ("weierstrass", W)]
    for name, P in compact:
        c.append((f"area-4pi(1-1e-3) [{name}]", area(P) - lo, 0.0, ">"))
    members = [("slice", catalog_member("slice")), ("diagonal", catalog_member("diagonal")),
               ("clifford", catalog_member("clifford")), ("graph", catalog_member("graph")), ("weierstrass", W)]
    want = {"slice": "Slice", "diagonal": "Diagonal", "clifford": "CliffordT", "graph": "Complex",
            "weierstrass": "Complex"}
    for name, P in members:
        rep = section6_checks(P)
        for e in rep.entries:
            if e["name"].startswith(("complex_curvature", "lagrangian_curvature")):
                c.append((f"{e['name']} [{name}]", e["max"], 1e-4, "<"))
        labels = rep.meta["labels"]
        c.append((f"classify[{name}] has {want[name]}", float(want[name] not in labels), 0.5, "<"))
    _, P = sg_surface()
    c.append(("classify[sinh-gordon] NonFull", float(classify(P)[0] != ["NonFull"]), 0.5, "<"))
    _record(11, "area bound, curvature values and classification on the catalog", c)
