"""File formats: field containers (CSV + JSON header), OBJ meshes and reports.

Field CSV: one row per node in row-major (i, j) order with columns
i, j, x, y followed by the channel components.  A real scalar channel
``c`` gives column ``c``; a complex one ``c_re, c_im``; a vector channel of
length k gives ``c_0 .. c_{k-1}`` (``c_0_re, c_0_im, ...`` if complex).
The JSON header stores the grid, the channel layout and free metadata.
Floats are written with 17 significant digits so files round-trip exactly.
"""

import csv
import json
import os

import numpy as np

from .cxgrid import ComplexGrid
from .s2xs2 import ProductImmersion

FMT = "%.17g"


class OutputExists(FileExistsError):
    pass


def _guard(path, force):
    if os.path.exists(path) and not force:
        raise OutputExists(f"{path} exists (use --force to overwrite)")


def _jsonable(o):
    if isinstance(o, complex):
        return {"re": o.real, "im": o.imag}
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, tuple):
        return list(o)
    return str(o)


def dump_json(obj, path, force=False):
    _guard(path, force)
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True, default=_jsonable)
        fh.write("\n")


def _layout(name, a, grid):
    a = np.asarray(a)
    if a.shape[:2] != grid.shape:
        raise ValueError(f"channel {name} does not match the grid")
    k = int(np.prod(a.shape[2:])) if a.ndim > 2 else 0
    cx = bool(np.iscomplexobj(a))
    cols = []
    names = [name] if k == 0 else [f"{name}_{q}" for q in range(k)]
    for n in names:
        cols += [n + "_re", n + "_im"] if cx else [n]
    return {"name": name, "complex": cx, "shape": list(a.shape[2:])}, cols


def save_fields(prefix, grid, channels, meta=None, force=False):
    """Write ``prefix``.csv and ``prefix``.json."""
    csv_path, json_path = prefix + ".csv", prefix + ".json"
    _guard(csv_path, force)
    _guard(json_path, force)
    layouts, header = [], ["i", "j", "x", "y"]
    blocks = []
    n = grid.nx * grid.ny
    for name, a in channels.items():
        lay, cols = _layout(name, a, grid)
        layouts.append(lay)
        header += cols
        flat = np.asarray(a).reshape(n, -1)
        if lay["complex"]:
            flat = np.stack([flat.real, flat.imag], axis=-1).reshape(n, -1)
        blocks.append(flat.astype(float))
    I, J = np.meshgrid(np.arange(grid.nx), np.arange(grid.ny), indexing="ij")
    X, Y = grid.xy
    with open(csv_path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        data = np.concatenate([X.reshape(n, 1), Y.reshape(n, 1)] + blocks, axis=1)
        for r in range(n):
            w.writerow([int(I.flat[r]), int(J.flat[r])] + [FMT % v for v in data[r]])
    dump_json({"grid": grid.to_dict(), "channels": layouts, "columns": header, "meta": meta or {}},
              json_path, force=True)


def load_fields(prefix):
    """Inverse of save_fields: (grid, channels, meta)."""
    with open(prefix + ".json") as fh:
        head = json.load(fh)
    grid = ComplexGrid.from_dict(head["grid"])
    raw = np.loadtxt(prefix + ".csv", delimiter=",", skiprows=1, ndmin=2)
    if raw.shape[0] != grid.nx * grid.ny:
        raise ValueError("row count does not match the grid")
    col = 4
    out = {}
    for lay in head["channels"]:
        k = int(np.prod(lay["shape"])) if lay["shape"] else 1
        w = 2 * k if lay["complex"] else k
        block = raw[:, col:col + w]
        col += w
        if lay["complex"]:
            block = block[:, 0::2] + 1j * block[:, 1::2]
        out[lay["name"]] = block.reshape(grid.shape + tuple(lay["shape"]))
    return grid, out, head.get("meta", {})


def save_immersion(prefix, P, force=False):
    meta = {"kind": "product_immersion", "name": P.name, "params": P.params,
            "orientation": P.orientation, "tail": P.tail}
    save_fields(prefix, P.grid, {"phi1": P.phi1, "phi2": P.phi2}, meta, force)


def load_immersion(prefix):
    grid, ch, meta = load_fields(prefix)
    if meta.get("kind") != "product_immersion":
        raise ValueError("container does not hold a product immersion")
    return ProductImmersion(grid, ch["phi1"], ch["phi2"], meta.get("orientation", 1),
                            meta.get("name", ""), meta.get("params", {}), meta.get("tail"))


def _faces(grid):
    nx, ny = grid.nx, grid.ny
    ii = range(nx if grid.periodic_x else nx - 1)
    jj = range(ny if grid.periodic_y else ny - 1)
    idx = lambda i, j: (i % nx) * ny + (j % ny) + 1
    out = []
    for i in ii:
        for j in jj:
            a, b, c, d = idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1)
            out.append((a, b, c))
            out.append((a, c, d))
    return out


def save_obj(prefix, P, attrs, force=False):
    """``prefix``.obj with one object per factor (vertices are the grid nodes in
    row-major order, duplicated for the second object) and ``prefix``_attrs.csv
    with columns vertex, i, j, then the attribute channels."""
    obj, side = prefix + ".obj", prefix + "_attrs.csv"
    _guard(obj, force)
    _guard(side, force)
    faces = _faces(P.grid)
    nv = P.grid.nx * P.grid.ny
    with open(obj, "w") as fh:
        for k, comp in enumerate((P.phi1, P.phi2)):
            fh.write(f"o factor{k + 1}\n")
            for p in comp.reshape(-1, 3):
                fh.write("v %s %s %s\n" % tuple(FMT % c for c in p))
            off = k * nv
            for f in faces:
                fh.write("f %d %d %d\n" % (f[0] + off, f[1] + off, f[2] + off))
    names = list(attrs)
    with open(side, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["vertex", "i", "j"] + names)
        cols = [np.asarray(attrs[n]).reshape(-1) for n in names]
        for r in range(nv):
            i, j = divmod(r, P.grid.ny)
            w.writerow([r + 1, i, j] + [FMT % float(np.real(c[r])) for c in cols])


def write_text(path, text, force=False):
    _guard(path, force)
    with open(path, "w") as fh:
        fh.write(text)
