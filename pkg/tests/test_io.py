import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from minsurf import catalog as cat
from minsurf import io as mio
from minsurf.cxgrid import ComplexGrid


@given(seed=st.integers(0, 2 ** 32 - 1))
@settings(max_examples=10, deadline=None)
def test_fields_roundtrip_bit_exact(seed, tmp_path_factory):
    rng = np.random.default_rng(seed)
    g = ComplexGrid.square(7, (0, 1, -1, 0))
    ch = {"a": rng.standard_normal(g.shape), "b": rng.standard_normal(g.shape) * 1e-300 + 1j,
          "vec": rng.standard_normal(g.shape + (3,)),
          "cvec": rng.standard_normal(g.shape + (2,)) + 1j * rng.standard_normal(g.shape + (2,))}
    p = str(tmp_path_factory.mktemp("f") / "x")
    mio.save_fields(p, g, ch, {"k": 1})
    g2, out, meta = mio.load_fields(p)
    assert g2 == g and meta == {"k": 1}
    for k, v in ch.items():
        assert out[k].shape == v.shape and np.array_equal(out[k], v)


def test_csv_layout(tmp_path):
    g = ComplexGrid.square(5, (0, 1, 0, 1))
    mio.save_fields(str(tmp_path / "f"), g, {"s": np.zeros(g.shape), "c": np.zeros(g.shape, complex),
                                             "v": np.zeros(g.shape + (2,))})
    head = (tmp_path / "f.csv").read_text().splitlines()
    assert head[0] == "i,j,x,y,s,c_re,c_im,v_0,v_1"
    assert head[2].startswith("0,1,0,0.25,")


def test_no_overwrite(tmp_path):
    g = ComplexGrid.square(5, (0, 1, 0, 1))
    p = str(tmp_path / "f")
    mio.save_fields(p, g, {"s": np.zeros(g.shape)})
    with pytest.raises(mio.OutputExists):
        mio.save_fields(p, g, {"s": np.ones(g.shape)})
    mio.save_fields(p, g, {"s": np.ones(g.shape)}, force=True)
    assert np.all(mio.load_fields(p)[1]["s"] == 1)


def test_immersion_roundtrip(tmp_path):
    P = cat.catalog("weierstrass", cat.torus_grid(1j, 17))
    mio.save_immersion(str(tmp_path / "w"), P)
    Q = mio.load_immersion(str(tmp_path / "w"))
    assert np.array_equal(P.phi1, Q.phi1) and np.array_equal(P.phi2, Q.phi2)
    assert Q.grid == P.grid and Q.name == "weierstrass" and Q.tail == 0.0
    mio.save_fields(str(tmp_path / "o"), P.grid, {"s": np.zeros(P.grid.shape)})
    with pytest.raises(ValueError):
        mio.load_immersion(str(tmp_path / "o"))


@pytest.mark.parametrize("periodic", [False, True])
def test_obj_faces(tmp_path, periodic):
    P = cat.catalog("clifford", cat.clifford_grid(8)) if periodic else cat.catalog("diagonal", cat.plane_grid(9))
    n = P.grid.nx
    mio.save_obj(str(tmp_path / "m"), P, {"C1": np.zeros(P.grid.shape)})
    lines = (tmp_path / "m.obj").read_text().splitlines()
    assert [l for l in lines if l.startswith("o ")] == ["o factor1", "o factor2"]
    nf = sum(l.startswith("f ") for l in lines)
    cells = n * n if periodic else (n - 1) ** 2
    assert nf == 2 * 2 * cells
    assert sum(l.startswith("v ") for l in lines) == 2 * n * n
    idx = [int(t) for l in lines if l.startswith("f ") for t in l.split()[1:]]
    assert min(idx) == 1 and max(idx) == 2 * n * n
    side = (tmp_path / "m_attrs.csv").read_text().splitlines()
    assert side[0] == "vertex,i,j,C1" and len(side) == n * n + 1
