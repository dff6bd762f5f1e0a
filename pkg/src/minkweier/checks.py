"""Invariant suite run by the ``report`` command."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import mink4
from .errors import MinkError
from .surface import (
    curvature_routes, curvatures_phi, gauss_bivector, integrate_psi, integrate_segments, nu_mu,
)
from .weier import GridSpec, WeierData, build_phi, validate


@dataclass
class Check:
    name: str
    passed: bool | None
    deviation: float = 0.0
    note: str = ""

    def line(self) -> str:
        status = "SKIP" if self.passed is None else "PASS" if self.passed else "FAIL"
        text = f"{self.name}: {status}"
        if self.passed is not None:
            text += f" (max deviation {self.deviation:.3e})"
        if self.note:
            text += f" {self.note}"
        return text


def _rel(a, b):
    return float(np.max(np.abs(np.asarray(a) - b) / (1 + np.abs(b)), initial=0.0))


def _sample_points(grid: GridSpec, k=5):
    T = grid.nodes()
    nv, nu = T.shape
    js = np.unique(np.linspace(0, nv - 1, min(k, nv)).astype(int))
    is_ = np.unique(np.linspace(0, nu - 1, min(k, nu)).astype(int))
    return T[np.ix_(js, is_)].ravel()


def local_laplacian(w: WeierData, t, h):
    """5-point Laplacian of x = Re Psi at t, from integrals out of t.

    The integrals are taken relative to x(t), so no cancellation against a
    large absolute position is involved."""
    t = np.atleast_1d(np.asarray(t, dtype=complex))
    steps = np.array([h, -h, 1j * h, -1j * h])
    a = np.repeat(t, 4)
    b = a + np.tile(steps, t.size)
    seg = integrate_segments(lambda tt: build_phi(w, tt)[0], a, b).reshape(t.size, 4, 4)
    return seg.sum(axis=1).real / h**2


def local_gradient(w: WeierData, t, h):
    """Central differences (x_u, x_v) of x = Re Psi at t."""
    t = np.atleast_1d(np.asarray(t, dtype=complex))
    a = np.repeat(t, 2)
    b = a + np.tile([h, 1j * h], t.size)
    c = a - np.tile([h, 1j * h], t.size)
    fwd = integrate_segments(lambda tt: build_phi(w, tt)[0], a, b).reshape(t.size, 2, 4)
    bwd = integrate_segments(lambda tt: build_phi(w, tt)[0], a, c).reshape(t.size, 2, 4)
    d = (fwd - bwd).real / (2 * h)
    return d[:, 0], d[:, 1]


def run_suite(w: WeierData, grid: GridSpec) -> list[Check]:
    out = []
    report = validate(w, grid)
    out.append(Check("validity", report.ok, float(sum(report.counts().values())), "(violating flags)"))
    if not report.ok:
        return out
    T = grid.nodes()
    phi, dphi = build_phi(w, T)
    scale = max(1.0, float(np.max(np.abs(phi)))) ** 2
    iso = float(np.max(np.abs(mink4.bilinear_dot(phi, phi))))
    out.append(Check("isothermal", iso <= 1e-10 * scale, iso))
    E, K, kappa = curvatures_phi(phi, dphi)
    out.append(Check("metric", True, _rel(E, mink4.norm_sq(phi) / 2)))
    out.append(Check("bivector", _rel(gauss_bivector(phi, dphi), K) <= 1e-10,
                     _rel(gauss_bivector(phi, dphi), K)))
    try:
        routes = curvature_routes(w, T, grid)
    except MinkError as exc:
        routes = {"phi": (E, K, kappa)}
        out.append(Check("routes", None, note=f"alternative routes unavailable: {exc}"))
    for name, (Er, Kr, kr) in routes.items():
        if name == "phi":
            continue
        dev = max(_rel(Er, E), _rel(Kr, K), _rel(kr, kappa))
        out.append(Check(f"route_{name}", dev <= 1e-9, dev))
    pts = _sample_points(grid)
    size = max(grid.u_max - grid.u_min, grid.v_max - grid.v_min, 1e-3)
    h = 5e-4 * size
    lap = local_laplacian(w, pts, h)
    xscale = 1 + np.max(np.abs(build_phi(w, pts)[0]))
    out.append(Check("harmonic", float(np.max(np.abs(lap))) <= 1e-5 * xscale, float(np.max(np.abs(lap)))))
    h = 1e-3 * size
    xu, xv = local_gradient(w, pts, h)
    ph = build_phi(w, pts)[0]
    dev = float(max(np.max(np.abs(xu - ph.real)), np.max(np.abs(xv + ph.imag))))
    out.append(Check("gradient", dev <= 1e-6 * xscale, dev))
    c0, c1 = grid.corner, complex(grid.u_max, grid.v_max)
    p1 = integrate_psi(w, c0, complex(grid.u_max, grid.v_min)) + integrate_psi(w, complex(grid.u_max, grid.v_min), c1)
    p2 = integrate_psi(w, c0, complex(grid.u_min, grid.v_max)) + integrate_psi(w, complex(grid.u_min, grid.v_max), c1)
    dev = float(np.max(np.abs(p1 - p2)))
    out.append(Check("path_independence", dev <= 1e-9 * max(1.0, float(np.max(np.abs(p1)))), dev))
    degenerate = np.abs(mink4.bilinear_dot(dphi, dphi)) < 1e-10
    flat = (np.abs(K) < 1e-7) & (np.abs(kappa) < 1e-7)
    out.append(Check("degeneracy", bool(np.all(degenerate == flat)), float(np.count_nonzero(degenerate != flat)),
                     "(mismatched nodes)"))
    if w.canonical_type == 1:
        nu, mu = nu_mu(phi, dphi, kappa)
        n2 = mink4.norm_sq(phi)
        pn = mink4.norm_sq(mink4.normal_project(phi, dphi))
        # |kappa| compared in squares: the square root would turn roundoff in
        # 1 - |Phi'perp|^4 into ~1e-8 noise where kappa vanishes
        dev = max(_rel(-nu**2 + mu**2, K), _rel(2 * nu * mu, kappa), _rel(1 / np.sqrt(nu**2 + mu**2), E),
                  _rel(16 * (1 - pn**2) / n2**4, kappa**2))
        out.append(Check("canonical_invariants", dev <= 1e-8, dev))
    return out
