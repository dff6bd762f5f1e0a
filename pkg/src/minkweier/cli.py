"""Command-line front end.

    minkweier validate  --in surf.ini
    minkweier sample    --in surf.ini --out table.csv [--grid 41x41] [--t0 0,0]
    minkweier mesh      --in surf.ini --out mesh.obj --projection drop-x4
    minkweier canonize  --in surf.ini --out map.csv [--kind second]
    minkweier transform --in surf.ini --out moved.ini --mobius 1,0,0,0,0,0,1,0
    minkweier associate --in surf.ini --out member.ini --phi 0.785
    minkweier conjugate --in surf.ini --out conj.ini
    minkweier report    --in surf.ini

Exit codes: 0 ok, 1 condition violation, 2 parse error, 3 degenerate point,
4 numerical failure, 5 not congruent / not canonical.
"""

from __future__ import annotations

import argparse
import dataclasses
import io
import sys

import numpy as np

from . import canonical, surface
from .checks import run_suite
from .errors import ConditionViolated, MinkError, NotCanonical, ParseError, SurfaceFileError
from .family import associate, conjugate
from .files import format_surface, num, obj_text, parse_projection, read_surface, surface_csv
from .motions import VARIANTS, apply_motion, decompose
from .weier import FLAGS, Affine, validate

COMMANDS = ("validate", "sample", "mesh", "canonize", "transform", "associate", "conjugate", "report")
# --tol keys and the module constants they override
TOLERANCES = {
    "eps": [],
    "quad": [(surface, "QUAD_TOL")],
    "degenerate": [(surface, "DEGENERATE_TOL"), (canonical, "DEGENERATE_TOL")],
    "canonical": [(surface, "CANONICAL_TOL"), (canonical, "CANONICAL_TOL")],
}


class UsageError(ParseError):
    pass


def _reals(text, n, name):
    try:
        vals = [float(x) for x in text.split(",")]
    except ValueError:
        vals = []
    if len(vals) != n:
        raise UsageError(f"{name} needs {n} comma-separated reals")
    return vals


def _grid(text):
    try:
        nu, nv = (int(x) for x in text.lower().split("x"))
    except ValueError:
        raise UsageError("--grid must look like NUxNV") from None
    if nu < 1 or nv < 1:
        raise UsageError("--grid needs positive sizes")
    return nu, nv


def _tolerances(items):
    out = {}
    for item in items or []:
        key, _, val = item.partition("=")
        if key not in TOLERANCES:
            raise UsageError(f"unknown tolerance {key!r}; known: {', '.join(TOLERANCES)}")
        try:
            x = float(val)
        except ValueError:
            raise UsageError(f"tolerance {key} needs a number") from None
        if not x > 0:
            raise UsageError(f"tolerance {key} must be > 0")
        out[key] = x
    return out


@dataclasses.dataclass
class RunConfig:
    command: str
    inp: str
    out: str | None = None
    grid: tuple | None = None
    t0: complex | None = None
    phi: float | None = None
    mobius: np.ndarray | None = None
    lorentz: np.ndarray | None = None
    variant: str = "orthochronous-proper"
    projection: str = "drop-x4"
    kind: str = "first"
    tol: dict = dataclasses.field(default_factory=dict)

    @classmethod
    def from_args(cls, ns):
        cfg = cls(ns.command, ns.inp, ns.out, variant=ns.variant, projection=ns.projection, kind=ns.kind)
        if ns.grid:
            cfg.grid = _grid(ns.grid)
        if ns.t0:
            re, im = _reals(ns.t0, 2, "--t0")
            cfg.t0 = complex(re, im)
        cfg.phi = ns.phi
        if ns.mobius and ns.lorentz:
            raise UsageError("give either --mobius or --lorentz")
        if ns.mobius:
            v = _reals(ns.mobius, 8, "--mobius")
            cfg.mobius = np.array([complex(v[k], v[k + 1]) for k in range(0, 8, 2)]).reshape(2, 2)
        if ns.lorentz:
            cfg.lorentz = np.array(_reals(ns.lorentz, 16, "--lorentz")).reshape(4, 4)
        cfg.tol = _tolerances(ns.tol)
        if cfg.command == "mesh":
            parse_projection(cfg.projection)
        return cfg


def _load(cfg):
    w, grid = read_surface(cfg.inp)
    if cfg.grid:
        grid = dataclasses.replace(grid, nu=cfg.grid[0], nv=cfg.grid[1])
    return w, grid


def _emit(cfg, text):
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _eps(cfg):
    return cfg.tol.get("eps", 1e-8)


def cmd_validate(cfg) -> int:
    w, grid = _load(cfg)
    rep = validate(w, grid, _eps(cfg))
    counts = rep.counts()
    lines = [f"form: {w.form}", f"grid: {grid.nu}x{grid.nv}", f"nodes: {grid.nu * grid.nv}"]
    lines += [f"{k}: {counts[k]}" for k in FLAGS]
    viol = rep.violations()
    lines.append(f"status: {'ok' if rep.ok else 'violation'}")
    for j, i, t, names in viol:
        lines.append(f"violation: u={num(t.real)} v={num(t.imag)} {' '.join(names)}")
    _emit(cfg, "\n".join(lines) + "\n")
    return 0 if rep.ok else 1


def cmd_sample(cfg) -> int:
    w, grid = _load(cfg)
    _emit(cfg, surface_csv(surface.sample(w, grid, cfg.t0, eps=_eps(cfg))))
    return 0


def cmd_mesh(cfg) -> int:
    w, grid = _load(cfg)
    sg = surface.sample(w, grid, cfg.t0, eps=_eps(cfg))
    _emit(cfg, obj_text(sg.x, cfg.projection))
    return 0


def cmd_canonize(cfg) -> int:
    """Table of the canonical parameter s = t~(t) at the grid nodes."""
    w, grid = _load(cfg)
    rep = validate(w, grid, _eps(cfg))
    if not rep.ok:
        j, i, t, names = rep.violations()[0]
        raise ConditionViolated(f"{', '.join(names)} at t={t}")
    cmap, data = canonical.canonize(w, grid, cfg.t0, cfg.kind)
    T = grid.nodes()
    S = cmap.s_nodes
    ok = canonical.is_canonical(data, S, cmap.kind)
    if not ok:
        raise NotCanonical("canonized data failed the canonical check")
    out = io.StringIO()
    out.write("u,v,s_re,s_im\n")
    for t, s in zip(T.ravel(), S.ravel()):
        out.write(f"{num(t.real)},{num(t.imag)},{num(s.real)},{num(s.imag)}\n")
    _emit(cfg, out.getvalue())
    return 0


def _write_member(cfg, w, grid):
    try:
        text = format_surface(w, grid)
    except SurfaceFileError as exc:
        raise SurfaceFileError(f"{exc}; the result has no surface-file form") from None
    _emit(cfg, text)


def cmd_transform(cfg) -> int:
    w, grid = _load(cfg)
    if cfg.lorentz is not None:
        B, variant = decompose(cfg.lorentz)
    elif cfg.mobius is not None:
        B, variant = cfg.mobius, cfg.variant
    else:
        raise UsageError("transform needs --mobius or --lorentz")
    out = apply_motion(w, B, variant)
    if isinstance(out, Affine):
        # canonical data cannot carry the sign of f in a file
        print(f"note: variant {variant} maps x to -x as well; the file stores the pair only", file=sys.stderr)
        out = out.base
    _write_member(cfg, out, grid)
    return 0


def _family(cfg, member):
    m = member.gform()
    if m is None:
        raise SurfaceFileError("associated member of non-polynomial data has no surface-file form")
    print("note: the stored pair determines the member up to x -> -x", file=sys.stderr)
    w, grid = _load(cfg)
    _write_member(cfg, m, grid)
    return 0


def cmd_associate(cfg) -> int:
    if cfg.phi is None:
        raise UsageError("associate needs --phi")
    if not 0 <= cfg.phi <= np.pi / 2:
        raise UsageError("--phi must lie in [0, pi/2]")
    w, _ = _load(cfg)
    return _family(cfg, associate(w, cfg.phi))


def cmd_conjugate(cfg) -> int:
    w, _ = _load(cfg)
    return _family(cfg, conjugate(w))


def cmd_report(cfg) -> int:
    w, grid = _load(cfg)
    checks = run_suite(w, grid)
    _emit(cfg, "".join(c.line() + "\n" for c in checks))
    if not checks[0].passed:
        return 1
    return 4 if any(c.passed is False for c in checks) else 0


HANDLERS = {name: globals()[f"cmd_{name}"] for name in COMMANDS}


def build_parser():
    p = argparse.ArgumentParser(prog="minkweier", description="Minimal space-like surfaces in R^4_1.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--in", dest="inp", required=True, help="surface definition file")
    p.add_argument("--out", help="output file (default: standard output)")
    p.add_argument("--grid", help="NUxNV node counts, overriding the file")
    p.add_argument("--t0", help="base point RE,IM where x = 0")
    p.add_argument("--phi", type=float, help="family angle in radians")
    p.add_argument("--mobius", help="a,b,c,d as 8 reals (re,im pairs, row-major)")
    p.add_argument("--lorentz", help="Lorentz matrix as 16 reals, row-major")
    p.add_argument("--variant", choices=VARIANTS, default="orthochronous-proper")
    p.add_argument("--projection", default="drop-x4", help="drop-x4, drop-x3 or ortho:<12 reals>")
    p.add_argument("--kind", choices=("first", "second"), default="first", help="canonical type")
    p.add_argument("--tol", action="append", metavar="KEY=VALUE",
                   help=f"override a tolerance ({', '.join(TOLERANCES)}); repeatable")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    saved = {}
    try:
        cfg = RunConfig.from_args(ns)
        for key, val in cfg.tol.items():
            for mod, attr in TOLERANCES[key]:
                saved.setdefault((mod, attr), getattr(mod, attr))
                setattr(mod, attr, val)
        return HANDLERS[cfg.command](cfg)
    except MinkError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    finally:
        for (mod, attr), val in saved.items():
            setattr(mod, attr, val)


if __name__ == "__main__":
    sys.exit(main())
