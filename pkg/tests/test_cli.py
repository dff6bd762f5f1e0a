import math

import numpy as np
import pytest

from minkweier.cli import main
from minkweier.errors import SurfaceFileError
from minkweier.files import (
    CSV_COLUMNS, format_surface, obj_text, parse_projection, parse_surface, read_csv, surface_csv,
)
from minkweier.surface import sample
from minkweier.weier import GForm, GFormCanonical, GridSpec

EXP = """[surface]
form = gform_canonical
g1 = exp(t)
g2 = exp(t)
u_min = -1
u_max = 1
v_min = -1
v_max = 1
nu = 5
nv = 5
"""


@pytest.fixture
def surf(tmp_path):
    def write(text=EXP, name="surf.ini"):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return write


def run(capsys, *args):
    code = main(list(args))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_and_format_round_trip():
    w, grid = parse_surface(EXP)
    assert isinstance(w, GFormCanonical) and grid == GridSpec(-1, 1, -1, 1, 5, 5)
    assert parse_surface(format_surface(w, grid)) == (w, grid)
    # the section header is optional
    assert parse_surface(EXP.split("\n", 1)[1])[1] == grid


@pytest.mark.parametrize("text", [
    "form = gform\nf = 1\ng1 = t\nu_min=0\nu_max=1\nv_min=0\nv_max=1\n",
    "form = gform\nf = 1\ng1 = t\ng2 = t\nh1 = t\nu_min=0\nu_max=1\nv_min=0\nv_max=1\n",
    "form = blob\n",
    "form = gform_canonical\ng1 = t\ng2 = t\nu_min=0\nu_max=1\nv_min=0\nv_max=1\ncolour = red\n",
    "form = gform_canonical\ng1 = t\ng2 = t\nu_min=1\nu_max=0\nv_min=0\nv_max=1\n",
])
def test_bad_surface_files(text):
    with pytest.raises(SurfaceFileError):
        parse_surface(text)


def test_optional_canonical_f():
    w, _ = parse_surface("form = wform\nw1 = t\nw2 = 2*t\nu_min=0\nu_max=1\nv_min=0\nv_max=1\n")
    assert w.f is None and w.canonical_type == 1


def test_csv_round_trip_exact():
    w, grid = parse_surface(EXP)
    sg = sample(w, grid)
    cols = read_csv(surface_csv(sg))
    assert tuple(cols) == CSV_COLUMNS
    assert np.array_equal(cols["x1"], sg.x[..., 0].ravel())
    assert np.array_equal(cols["K"], sg.K.ravel())
    assert np.array_equal(cols["nu"], sg.nu.ravel())
    assert not cols["degenerate"].any()


def test_csv_without_nu_mu():
    sg = sample(GForm(1, "t", "t + 3"), GridSpec(0, 1, 0, 1, 2, 2))
    line = surface_csv(sg).splitlines()[1]
    assert line.endswith(",,,false")


def test_obj_layout():
    x = np.arange(2 * 3 * 4, dtype=float).reshape(2, 3, 4)
    text = obj_text(x, "drop-x3")
    lines = text.splitlines()
    assert lines[0] == "# projection: drop-x3"
    assert lines[1] == "v 0 1 3"
    faces = [l for l in lines if l.startswith("f ")]
    assert faces == ["f 1 2 5", "f 1 5 4", "f 2 3 6", "f 2 6 5"]


def test_projection_specs():
    spec, M = parse_projection("ortho:" + ",".join(["1", "0", "0", "0", "1", "0", "0", "0", "1", "0", "0", "0"]))
    assert M.shape == (4, 3) and spec.startswith("ortho:")
    with pytest.raises(SurfaceFileError):
        parse_projection("ortho:1,2")
    with pytest.raises(SurfaceFileError):
        parse_projection("perspective")


def test_validate_ok(capsys, surf):
    code, out, _ = run(capsys, "validate", "--in", surf())
    assert code == 0
    assert "status: ok" in out and "f_zero: 0" in out


def test_validate_violation(capsys, surf):
    p = surf("form = gform\nf = 1\ng1 = t\ng2 = -1/t\nu_min=0.5\nu_max=1\nv_min=-1\nv_max=1\nnu=3\nnv=3\n")
    code, out, _ = run(capsys, "validate", "--in", p)
    assert code == 1
    assert out.count("violation: ") == 3 and "hermitian_condition_violated" in out


def test_parse_error_exit(capsys, surf):
    p = surf("form = gform\nf = 1\ng1 = t^^2\ng2 = t\nu_min=0\nu_max=1\nv_min=0\nv_max=1\n")
    code, _, err = run(capsys, "sample", "--in", p)
    assert code == 2 and "offset 2" in err


def test_sample_anchor_row(capsys, surf):
    code, out, _ = run(capsys, "sample", "--in", surf())
    assert code == 0
    rows = [l.split(",") for l in out.splitlines()]
    assert tuple(rows[0]) == CSV_COLUMNS
    row = next(r for r in rows[1:] if r[0] == "0" and r[1] == "0")
    E, K, kappa = (float(row[CSV_COLUMNS.index(k)]) for k in ("E", "K", "kappa"))
    assert abs(E - 1) < 1e-12 and abs(K + 1) < 1e-12 and abs(kappa) < 1e-12


def test_mesh_closed_form(capsys, surf):
    code, out, _ = run(capsys, "mesh", "--in", surf(), "--projection", "drop-x4", "--grid", "7x7")
    assert code == 0
    verts = np.array([[float(c) for c in l.split()[1:]] for l in out.splitlines() if l.startswith("v ")])
    grid = GridSpec(-1, 1, -1, 1, 7, 7)
    T = grid.nodes().ravel()
    u, v = T.real, T.imag
    exact = np.stack([-np.cosh(u) * np.sin(v), np.cosh(u) * np.cos(v), u], -1)
    diff = verts - exact
    assert np.max(np.abs(diff - diff[0])) < 1e-8


def test_transform_identity(capsys, surf, tmp_path):
    out = tmp_path / "moved.ini"
    code, _, _ = run(capsys, "transform", "--in", surf(), "--out", str(out), "--mobius", "1,0,0,0,0,0,1,0")
    assert code == 0
    assert parse_surface(out.read_text()) == parse_surface(EXP)


def test_transform_lorentz(capsys, surf, tmp_path):
    out = tmp_path / "moved.ini"
    boost = "1,0,0,0,0,1,0,0,0,0,2.125,1.875,0,0,1.875,2.125"
    code, _, _ = run(capsys, "transform", "--in", surf(), "--out", str(out), "--lorentz", boost)
    assert code == 0
    w, _ = parse_surface(out.read_text())
    assert abs(w.g1(0.2) - 4 * np.exp(0.2)) < 1e-12 or abs(w.g2(0.2) - 4 * np.exp(0.2)) < 1e-12


def test_associate_and_conjugate(capsys, surf):
    code, out, err = run(capsys, "associate", "--in", surf(), "--phi", str(math.pi / 4))
    assert code == 0 and "form = gform_canonical" in out
    code, out, _ = run(capsys, "conjugate", "--in", surf())
    assert code == 0
    w, _ = parse_surface(out)
    a = np.exp(0.25j * np.pi)
    assert abs(w.g1(0.3) - np.exp(a * 0.3)) < 1e-12
    code, _, _ = run(capsys, "associate", "--in", surf(), "--phi", "3")
    assert code == 2


def test_canonize_table(capsys, surf):
    p = surf("form = gform\nf = 1\ng1 = t\ng2 = t\nu_min=-1\nu_max=1\nv_min=-1\nv_max=1\nnu=3\nnv=3\n")
    code, out, _ = run(capsys, "canonize", "--in", p, "--t0", "0,0")
    assert code == 0
    rows = [list(map(float, l.split(","))) for l in out.splitlines()[1:]]
    for u, v, sr, si in rows:
        assert abs(complex(sr, si) - math.sqrt(2) * complex(u, v)) < 1e-9


def test_canonize_degenerate_exit(capsys, surf):
    p = surf("form = gform\nf = 1\ng1 = t^2\ng2 = t\nu_min=-0.5\nu_max=0.5\nv_min=-0.5\nv_max=0.5\n")
    code, _, err = run(capsys, "canonize", "--in", p)
    assert code == 3 and "DegeneratePoint" in err


def test_report(capsys, surf):
    code, out, _ = run(capsys, "report", "--in", surf())
    assert code == 0
    assert "isothermal: PASS" in out and "FAIL" not in out


@pytest.mark.parametrize("args", [
    ["sample", "--grid", "5by5"], ["sample", "--tol", "eps=-1"], ["sample", "--tol", "speed=2"],
    ["transform"], ["transform", "--mobius", "1,2,3"], ["mesh", "--projection", "bad"],
])
def test_usage_errors(capsys, surf, args):
    code, _, _ = run(capsys, args[0], "--in", surf(), *args[1:])
    assert code == 2


def test_missing_input(capsys):
    assert run(capsys, "sample", "--in", "/nonexistent/surf.ini")[0] == 2


def test_unknown_command(capsys):
    assert main(["explode", "--in", "x"]) == 2


def test_tolerance_override_restored(capsys, surf):
    from minkweier import surface
    before = surface.QUAD_TOL
    code, _, _ = run(capsys, "sample", "--in", surf(), "--tol", "quad=1e-12")
    assert code == 0 and surface.QUAD_TOL == before
