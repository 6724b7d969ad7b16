"""Command-line entry point.

    minsurf catalog    --example NAME [--grid-n N] [--tau a+bi] [--p0 a+bi] [--degree d]
    minsurf gaussmap   --pair A,B [--t T] [--v0 V]       A, B in clifford, great, flat, sg
    minsurf sinhgordon --v0 V [--w0 W] [--t T]
    minsurf validate   --input PREFIX

Exit codes: 0 pass, 1 validation failure, 2 usage error, 3 I/O error,
4 numeric failure.
"""

import argparse
from dataclasses import asdict, dataclass, field
import os
import sys

import numpy as np

from . import catalog as cat
from . import io as mio
from . import sinhgordon as sg
from .cxgrid import ComplexGrid, residual_norm
from .s2xs2 import invariants
from .s3min import NumericalError

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO, EXIT_NUMERIC = 0, 1, 2, 3, 4


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    example: str = None
    params: dict = field(default_factory=dict)
    grid: dict = None
    tol: float = 1e-3
    out: str = "out"
    force: bool = False
    seed: int = 0

    def to_dict(self):
        return asdict(self)


def parse_complex(s):
    """'a+bi', 'bi', 'a' (also with j) parsed independently of the locale."""
    t = s.strip().replace(" ", "").replace("I", "i").replace("i", "j")
    if t in ("j", "+j", "-j"):
        t = t.replace("j", "1j")
    try:
        return complex(t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {s!r}")


def parse_extent(s):
    try:
        v = tuple(float(p) for p in s.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"extent must be x0,x1,y0,y1: {s!r}")
    if len(v) != 4 or not (v[1] > v[0] and v[3] > v[2]):
        raise argparse.ArgumentTypeError(f"extent must be x0,x1,y0,y1 with x0<x1, y0<y1: {s!r}")
    return v


def _grid(args, default_extent):
    n = args.grid_n or 129
    if n < 9 or n > 1025:
        raise UsageError("--grid-n must lie in [9, 1025]")
    return ComplexGrid.square(n, args.extent or default_extent, order=args.order)


def _check_ranges(args):
    if args.order not in (2, 4, 6, 8):
        raise UsageError("--order must be 2, 4, 6 or 8")
    for name in ("v0", "w0"):
        val = getattr(args, name, None)
        if val is not None and abs(val) > 3:
            raise UsageError(f"--{name} must satisfy |value| <= 3")
    if args.tol is not None and not args.tol > 0:
        raise UsageError("--tol must be positive")


def _prefix(cfg, stem):
    os.makedirs(cfg.out, exist_ok=True)
    return os.path.join(cfg.out, stem)


def _write_outputs(cfg, stem, P, report, inv=None):
    """Immersion container, invariant fields, OBJ + attributes and the JSON report.
    With ``inv=None`` (surface failed the gate) the invariant files are skipped."""
    base = _prefix(cfg, stem)
    mio.save_immersion(base + "_immersion", P, cfg.force)
    attrs = {}
    if inv is not None:
        mio.save_fields(base + "_invariants", P.grid, inv.channels(), {"config": cfg.to_dict()}, cfg.force)
        attrs = {"C1": inv.C1, "C2": inv.C2, "K": inv.K, "Kperp": inv.Kperp}
    mio.save_obj(base, P, attrs, cfg.force)
    report = dict(report, config=cfg.to_dict())
    mio.dump_json(report, base + "_report.json", cfg.force)
    return inv


def _summary(inv):
    sl = inv.grid.interior()
    out = {}
    for k in ("C1", "C2", "K", "Kperp", "u"):
        a = getattr(inv, k)[sl]
        out[k] = {"min": float(np.min(a)), "max": float(np.max(a)), "mean": float(np.mean(a))}
    return out


# ---- commands ----

def cmd_catalog(args, cfg):
    name = args.example
    params = {}
    if name == "weierstrass":
        tau = args.tau if args.tau is not None else 1j
        params = {"tau": tau, "p0": args.p0 if args.p0 is not None else 0.25 + 0.31j}
        grid = cat.torus_grid(tau, args.grid_n or 129).with_order(args.order)
    elif name == "clifford":
        grid = cat.clifford_grid(args.grid_n or 129).with_order(args.order)
    else:
        if name == "graph":
            params = {"degree": args.degree}
        grid = _grid(args, (-1.0, 1.0, -1.0, 1.0))
    cfg.params, cfg.grid = params, grid.to_dict()
    P = cat.catalog(name, grid, **params)
    from .validator import CONFORMAL_TOL, IdentityReport, classify, minimality_gate
    from .s2xs2 import conformality_residual

    gate = IdentityReport("gate")
    gate.add("conformality", residual_norm(conformality_residual(P), grid), CONFORMAL_TOL)
    minimality_gate(P, report=gate)
    report = {"example": name, "gate": gate.to_dict()}
    if gate.passed:
        inv = invariants(P)
        report["labels"] = classify(P, inv)[0]
        report["invariants"] = _summary(inv)
    else:
        inv = None
    _write_outputs(cfg, name, P, report, inv)
    print(f"catalog {name}: gate {'pass' if gate.passed else 'FAIL'}, labels {report.get('labels')}")
    return EXIT_OK


def _s3_member(member, grid, args):
    from . import s3min as s3

    t = args.t or 0.0
    if member == "clifford":
        return s3.clifford_family(t, grid)
    if member == "great":
        return s3.great_sphere(grid)
    if member == "flat":
        return s3.s3_frenet_integrate(sg.trivial(grid), 0.5j * np.exp(1j * t), grid)
    if member.startswith("sg"):
        v0 = float(member.split(":", 1)[1].split("=")[-1]) if ":" in member else (args.v0 or 0.5)
        if abs(v0) > 3:
            raise UsageError("sinh-Gordon amplitude must satisfy |v0| <= 3")
        return s3.s3_frenet_integrate(sg.one_dim(v0, grid), 0.5j * np.exp(1j * t), grid)
    raise UsageError(f"unknown pair member {member!r} (clifford, great, flat, sg[:v0=V])")


def cmd_gaussmap(args, cfg):
    from . import gaussbridge as gb
    from .validator import classify

    members = [m.strip() for m in (args.pair or "clifford,clifford").split(",")]
    if len(members) != 2:
        raise UsageError("--pair takes two comma-separated members")
    grid = _grid(args, (0.0, 1.0, 0.0, 1.0))
    cfg.params = {"pair": members, "t": args.t or 0.0, "v0": args.v0}
    cfg.grid = grid.to_dict()
    phi, psi = (_s3_member(m, grid, args) for m in members)
    try:
        G = gb.GaussPair(phi, psi, hopf_tol=1e-4)
    except ValueError as e:
        # the pair construction needs equal Hopf differentials
        report = {"pair": members, "error": str(e), "passed": False, "config": cfg.to_dict()}
        base = _prefix(cfg, "gaussmap")
        mio.dump_json(report, base + "_report.json", cfg.force)
        print(f"pair rejected: {e}", file=sys.stderr)
        return EXIT_FAIL
    P, pred = gb.gauss_map_pair(G)
    cmp = gb.compare_predictions(P, pred)
    inv = invariants(P)
    labels, eps = classify(P, inv)
    ok = all(cmp[k] <= cfg.tol for k in ("e2u", "C1", "C2", "theta"))
    report = {"pair": members, "prediction_errors": cmp, "labels": labels, "noise_threshold": eps,
              "invariants": _summary(inv), "passed": ok}
    _write_outputs(cfg, "gaussmap", P, report, inv)
    print(f"gaussmap {members[0]},{members[1]}: labels {labels}, prediction errors "
          + ", ".join(f"{k} {cmp[k]:.2e}" for k in ("e2u", "C1", "C2", "theta")))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_sinhgordon(args, cfg):
    from . import frenet as fr
    from .validator import validate

    grid = _grid(args, (0.0, 1.0, 0.0, 1.0))
    v0 = 0.5 if args.v0 is None else args.v0
    w0 = 0.0 if args.w0 is None else args.w0
    t = args.t or 0.0
    cfg.params, cfg.grid = {"v0": v0, "w0": w0, "t": t}, grid.to_dict()
    v, w = sg.one_dim(v0, grid), sg.one_dim(w0, grid)
    D = fr.from_sinh_gordon(v, w, t, grid)
    comp = fr.compatibility_residuals(D)
    P = fr.frenet_integrate(D)
    E, _ = fr.extract(P)
    ext = {}
    for k in ("u", "C1", "C2"):
        ext[k] = residual_norm(getattr(E, k) - getattr(D, k), grid)[0]
    for k in ("gamma1", "gamma2", "f1", "f2"):
        ext["|" + k + "|"] = residual_norm(np.abs(getattr(E, k)) - np.abs(getattr(D, k)), grid)[0]
    rep = validate(P, cfg.tol)
    ok = rep.passed and max(ext.values()) <= cfg.tol
    report = {"compatibility": comp, "drift": P.diagnostics.get("drift"),
              "closure_max": P.diagnostics.get("closure_max"), "extraction_errors": ext,
              "validation": rep.to_dict(), "passed": ok}
    _write_outputs(cfg, "sinhgordon", P, report, invariants(P))
    print(f"sinhgordon v0={v0} w0={w0} t={t}: labels {rep.meta.get('labels')}, "
          f"max extraction error {max(ext.values()):.2e}, validation {'pass' if rep.passed else 'FAIL'}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_validate(args, cfg):
    from .validator import validate

    if not args.input:
        raise UsageError("validate needs --input PREFIX (the immersion container)")
    try:
        P = mio.load_immersion(args.input)
    except (KeyError, ValueError) as e:
        raise OSError(f"cannot read immersion container {args.input!r}: {e}")
    cfg.example, cfg.grid = P.name, P.grid.to_dict()
    rep = validate(P, cfg.tol)
    rep.meta["config"] = cfg.to_dict()
    base = _prefix(cfg, "validate_" + (P.name or "input"))
    mio.write_text(base + "_report.json", rep.to_json() + "\n", cfg.force)
    mio.write_text(base + "_report.csv", rep.to_csv(), cfg.force)
    for e in rep.entries:
        if not e["passed"]:
            print(f"FAIL {e['name']}: max {e['max']:.3e} > tol {e['tol']:.1e}", file=sys.stderr)
    return EXIT_OK if rep.passed else EXIT_FAIL


COMMANDS = {"catalog": cmd_catalog, "gaussmap": cmd_gaussmap,
            "sinhgordon": cmd_sinhgordon, "validate": cmd_validate}


def build_parser():
    p = argparse.ArgumentParser(prog="minsurf", description="Minimal surfaces in S2 x S2 and S3.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--example", choices=cat.NAMES)
    p.add_argument("--grid-n", type=int)
    p.add_argument("--extent", type=parse_extent)
    p.add_argument("--order", type=int, default=4)
    p.add_argument("--tol", type=float)
    p.add_argument("--t", type=float)
    p.add_argument("--tau", type=parse_complex)
    p.add_argument("--p0", type=parse_complex)
    p.add_argument("--degree", type=int, default=2)
    p.add_argument("--v0", type=float)
    p.add_argument("--w0", type=float)
    p.add_argument("--pair")
    p.add_argument("--input")
    p.add_argument("--out", default="out")
    p.add_argument("--force", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _check_ranges(args)
        if args.command == "catalog" and not args.example:
            raise UsageError("catalog needs --example")
        if args.degree < 1:
            raise UsageError("--degree must be >= 1")
        cfg = RunConfig(args.command, args.example, tol=args.tol if args.tol is not None else 1e-3,
                        out=args.out, force=args.force, seed=args.seed)
        return COMMANDS[args.command](args, cfg)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, mio.OutputExists) as e:
        print(f"I/O error: {e}", file=sys.stderr)
        return EXIT_IO
    except (NumericalError, sg.EnergyDriftError, FloatingPointError, OverflowError) as e:
        print(f"numeric failure: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
