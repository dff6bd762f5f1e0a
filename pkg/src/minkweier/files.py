"""Surface definition files, CSV tables and OBJ meshes.

A surface definition is an INI-style file with one ``[surface]`` section
(the header may be omitted)::

    [surface]
    form = gform_canonical     # trig | hyperbolic | wform | gform | gform_canonical
    g1 = exp(t)
    g2 = exp(t)
    u_min = -1
    u_max = 1
    v_min = -1
    v_max = 1
    nu = 21
    nv = 21

Component keys depend on the form: trig (f, h1, h2), hyperbolic (f, h1, h2),
wform (f, w1, w2), gform (f, g1, g2), gform_canonical (g1, g2).  Omitting f
for hyperbolic or wform selects the canonical representation.
"""

from __future__ import annotations

import configparser
import io

import numpy as np

from .errors import ExprSyntaxError, SurfaceFileError
from .holo import format_expr, is_textual, parse_expr
from .weier import FORMS, GridSpec, WeierData

FORM_KEYS = {
    "trig": ("f", "h1", "h2"),
    "hyperbolic": ("f", "h1", "h2"),
    "wform": ("f", "w1", "w2"),
    "gform": ("f", "g1", "g2"),
    "gform_canonical": ("g1", "g2"),
}
OPTIONAL_F = ("hyperbolic", "wform")
DOMAIN_KEYS = ("u_min", "u_max", "v_min", "v_max")
GRID_KEYS = ("nu", "nv")
ALL_KEYS = {"form", "f", "g1", "g2", "h1", "h2", "w1", "w2", *DOMAIN_KEYS, *GRID_KEYS}
SECTION = "surface"
CSV_COLUMNS = ("u", "v", "x1", "x2", "x3", "x4", "E", "K", "kappa", "nu", "mu", "degenerate")


def num(x) -> str:
    """17 significant digits; round-trips every double."""
    return format(float(x), ".17g")


def parse_surface(text: str):
    """(WeierData, GridSpec) from the text of a surface definition."""
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"), interpolation=None)
    body = text if text.lstrip().startswith("[") else f"[{SECTION}]\n{text}"
    try:
        cp.read_string(body)
    except configparser.Error as exc:
        raise SurfaceFileError(f"malformed surface file: {exc}") from None
    if cp.sections() != [SECTION]:
        raise SurfaceFileError(f"expected a single [{SECTION}] section, found {cp.sections()}")
    data = dict(cp[SECTION])
    unknown = sorted(set(data) - ALL_KEYS)
    if unknown:
        raise SurfaceFileError(f"unknown keys: {', '.join(unknown)}")
    form = data.get("form", "").strip()
    if form not in FORM_KEYS:
        raise SurfaceFileError(f"form must be one of {', '.join(FORM_KEYS)}; got {form!r}")
    comps = FORM_KEYS[form]
    stray = sorted(set(data) & (ALL_KEYS - {"form", *DOMAIN_KEYS, *GRID_KEYS}) - set(comps))
    if stray:
        raise SurfaceFileError(f"keys {', '.join(stray)} do not belong to form {form}")
    args = {}
    for k in comps:
        if k not in data:
            if k == "f" and form in OPTIONAL_F:
                args[k] = None
                continue
            raise SurfaceFileError(f"missing key {k!r} for form {form}")
        try:
            args[k] = parse_expr(data[k])
        except ExprSyntaxError as exc:
            exc.args = (f"{k}: {exc.args[0]}",)
            raise
    try:
        dom = [float(data[k]) for k in DOMAIN_KEYS]
        nu, nv = (int(data.get(k, "21")) for k in GRID_KEYS)
    except KeyError as exc:
        raise SurfaceFileError(f"missing key {exc.args[0]!r}") from None
    except ValueError as exc:
        raise SurfaceFileError(f"bad number: {exc}") from None
    if dom[1] < dom[0] or dom[3] < dom[2] or nu < 1 or nv < 1:
        raise SurfaceFileError("empty domain or grid")
    return FORMS[form](**args), GridSpec(*dom, nu, nv)


def read_surface(path):
    with open(path, encoding="utf-8") as fh:
        return parse_surface(fh.read())


def format_surface(w: WeierData, grid: GridSpec) -> str:
    if w.form not in FORM_KEYS:
        raise SurfaceFileError(f"a {w.form} representation has no file form")
    lines = [f"[{SECTION}]", f"form = {w.form}"]
    for k, e in w.components().items():
        if e is None:
            continue
        if not is_textual(e):
            raise SurfaceFileError(f"component {k} has no closed-form expression")
        lines.append(f"{k} = {format_expr(e)}")
    for k in DOMAIN_KEYS:
        lines.append(f"{k} = {num(getattr(grid, k))}")
    lines += [f"nu = {grid.nu}", f"nv = {grid.nv}"]
    return "\n".join(lines) + "\n"


def csv_rows(u, v, x, E, K, kappa, nu, mu, degenerate):
    """CSV text; arrays are flattened in row-major order, nu/mu may be None."""
    out = io.StringIO()
    out.write(",".join(CSV_COLUMNS) + "\n")
    flat = [np.ravel(a) if a is not None else None for a in (u, v, E, K, kappa, nu, mu, degenerate)]
    u, v, E, K, kappa, nu, mu, deg = flat
    x = np.reshape(x, (-1, 4))
    for k in range(u.size):
        cells = [num(u[k]), num(v[k]), *(num(c) for c in x[k]), num(E[k]), num(K[k]), num(kappa[k]),
                 num(nu[k]) if nu is not None else "", num(mu[k]) if mu is not None else "",
                 "true" if deg[k] else "false"]
        out.write(",".join(cells) + "\n")
    return out.getvalue()


def surface_csv(sg) -> str:
    T = sg.t
    return csv_rows(T.real, T.imag, sg.x, sg.E, sg.K, sg.kappa, sg.nu, sg.mu, sg.degenerate)


def read_csv(text: str) -> dict:
    """Columns of a CSV table as arrays (nan for empty cells, bool for degenerate)."""
    lines = text.strip().splitlines()
    header = lines[0].split(",")
    if tuple(header) != CSV_COLUMNS:
        raise SurfaceFileError(f"unexpected CSV header {header}")
    cols = {k: [] for k in header}
    for line in lines[1:]:
        for k, cell in zip(header, line.split(",")):
            if k == "degenerate":
                cols[k].append(cell == "true")
            else:
                cols[k].append(float(cell) if cell else np.nan)
    return {k: np.array(v) for k, v in cols.items()}


# OBJ meshes

def parse_projection(spec: str):
    """(normalized spec, 4x3 matrix) for drop-x4, drop-x3 or ortho:<12 reals row-major>."""
    spec = spec.strip()
    if spec == "drop-x4":
        return spec, np.eye(4)[:, [0, 1, 2]]
    if spec == "drop-x3":
        return spec, np.eye(4)[:, [0, 1, 3]]
    if spec.startswith("ortho:"):
        try:
            vals = [float(x) for x in spec[len("ortho:"):].split(",")]
        except ValueError:
            vals = []
        if len(vals) != 12:
            raise SurfaceFileError("ortho projection needs 12 reals (a 4x3 matrix, row-major)")
        return "ortho:" + ",".join(num(x) for x in vals), np.array(vals).reshape(4, 3)
    raise SurfaceFileError(f"unknown projection {spec!r}; use drop-x4, drop-x3 or ortho:<12 reals>")


def obj_text(x, projection="drop-x4") -> str:
    """OBJ mesh of a (nv, nu, 4) array of positions."""
    spec, M = parse_projection(projection)
    nv, nu, _ = x.shape
    y = x.reshape(-1, 4) @ M
    out = io.StringIO()
    out.write(f"# projection: {spec}\n")
    for p in y:
        out.write("v " + " ".join(num(c) for c in p) + "\n")
    for j in range(nv - 1):
        for i in range(nu - 1):
            a = j * nu + i + 1
            b, c, d = a + 1, a + nu + 1, a + nu
            out.write(f"f {a} {b} {c}\nf {a} {c} {d}\n")
    return out.getvalue()
