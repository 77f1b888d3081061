import numpy as np
import pytest

import wignerflow as wf
from wignerflow import gridio
from wignerflow.classical import hamiltonian_direct, hamiltonian_reciprocal


def _meta(time=0.25):
    return {"representation": "W", "component": "real",
            "x_min": -8.0, "x_max": 8.0, "p_min": -8.0, "p_max": 8.0,
            "time": time, "hbar": 1.0}


def test_psgrid_roundtrip_exact(tmp_path):
    rng = np.random.default_rng(0)
    arr = rng.standard_normal((32, 64))
    path = tmp_path / "snap.psgrid"
    gridio.write_psgrid(path, arr, _meta())
    back, meta = gridio.read_psgrid(path)
    assert np.array_equal(back, arr)
    assert meta["nx"] == 64 and meta["np"] == 32
    assert meta["time"] == 0.25
    assert meta["representation"] == "W"
    assert meta["endianness"] == "little"


def test_psgrid_header_is_self_describing(tmp_path):
    path = tmp_path / "snap.psgrid"
    gridio.write_psgrid(path, np.zeros((8, 8)), _meta())
    head = path.read_bytes().split(b"\n\n", 1)[0].decode()
    lines = head.splitlines()
    assert lines[0] == "PSGRID1"
    keys = [ln.split("=", 1)[0] for ln in lines[1:]]
    assert keys == list(gridio._HEADER_ORDER)


def test_psgrid_rejects_bad_magic(tmp_path):
    path = tmp_path / "bad.psgrid"
    path.write_bytes(b"NOTPSG1\n")
    with pytest.raises(ValueError, match="not a PSGRID1"):
        gridio.read_psgrid(path)


def test_diagnostics_csv(tmp_path):
    h = wf.QuadraticHamiltonian.oscillator(1.0, 1.0)
    g = wf.make_grid(128, 128, (-10.0, 10.0), (-10.0, 10.0))
    state = wf.gaussian_wigner(g, h, (1.0, 0.0))
    rec = wf.diagnostics(state, h)
    path = tmp_path / "diag.csv"
    gridio.write_diagnostics_csv(path, [rec, rec])
    lines = path.read_text().splitlines()
    assert lines[0].startswith("time,norm,purity")
    assert len(lines) == 3
    assert lines[1] == lines[2]


def test_points_and_polylines(tmp_path):
    pts = [(0.0, 1.0), (-2.5, 3.25)]
    gridio.write_points(tmp_path / "pts.txt", pts)
    assert np.allclose(np.loadtxt(tmp_path / "pts.txt"), pts)
    gridio.write_polylines(tmp_path / "poly.txt", [pts, pts[::-1]])
    blocks = (tmp_path / "poly.txt").read_text().split("\n\n")
    assert len(blocks) == 2


@pytest.mark.parametrize("energy", [-2.0, 0.0, 1.5])
def test_level_set_direct_lies_on_level(energy):
    for line in gridio.level_set_direct(energy, 1.0, 1.0, 8.0, 8.0):
        xs = np.array([a for a, _b in line])
        ps = np.array([b for _a, b in line])
        assert np.abs(hamiltonian_direct(xs, ps, 1.0, 1.0) - energy).max() < 1e-9
        assert np.abs(xs).max() <= 8.0 and np.abs(ps).max() <= 8.0


@pytest.mark.parametrize("energy", [-1.0, 0.0, 2.0])
def test_level_set_reciprocal_lies_on_level(energy):
    for line in gridio.level_set_reciprocal(energy, 1.0, 1.0, 10.0, 10.0):
        ls = np.array([a for a, _b in line])
        ts = np.array([b for _a, b in line])
        assert np.abs(hamiltonian_reciprocal(ls, ts, 1.0, 1.0) - energy).max() < 1e-9
