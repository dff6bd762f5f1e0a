"""Sampling of surfaces: positions by quadrature of Phi, metric, second
fundamental form and the curvatures K, kappa by independent routes."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import mink4
from .errors import ConditionViolated, NotCanonical, NumericalFailure, QuadratureFailure
from .weier import EPS, GFormCanonical, GridSpec, WeierData, build_phi, convert, validate

QUAD_ORDER = 16
QUAD_TOL = 1e-10
QUAD_LEVELS = 20
DEGENERATE_TOL = 1e-10
CANONICAL_TOL = 1e-8


@lru_cache(maxsize=None)
def _gauss_legendre(n):
    return np.polynomial.legendre.leggauss(n)


def _gl(fn, a, b):
    x, wts = _gauss_legendre(QUAD_ORDER)
    mid, half = (a + b) / 2, (b - a) / 2
    vals = fn(mid[:, None] + half[:, None] * x[None, :])
    return half[:, None] * np.einsum("k,mkd->md", wts, vals)


def integrate_segments(fn, a, b, tol=None, max_level=QUAD_LEVELS, aux=None):
    """Integrals of fn along the straight segments a[k] -> b[k].

    fn maps an array of parameters of shape (M, n) to values of shape
    (M, n, d).  When ``aux`` is given, fn is called as fn(t, aux_rows) with
    the per-segment rows of aux.  Each segment is bisected until two
    consecutive Gauss-Legendre estimates agree to tol * max(1, |I|).
    """
    tol = QUAD_TOL if tol is None else tol
    a = np.atleast_1d(np.asarray(a, dtype=complex))
    b = np.atleast_1d(np.asarray(b, dtype=complex))
    idx = np.arange(a.size)
    if aux is None:
        f = lambda tt, k: fn(tt)
    else:
        f = lambda tt, k: fn(tt, aux[k])
    whole = _gl(lambda tt: f(tt, idx), a, b)
    result = np.zeros_like(whole)
    for _level in range(max_level + 1):
        m = (a + b) / 2
        left = _gl(lambda tt: f(tt, idx), a, m)
        right = _gl(lambda tt: f(tt, idx), m, b)
        refined = left + right
        err = np.max(np.abs(refined - whole), axis=-1, initial=0.0)
        scale = np.maximum(1.0, np.max(np.abs(refined), axis=-1, initial=0.0))
        done = err <= tol * scale
        np.add.at(result, idx[done], refined[done])
        if np.all(done):
            return result
        keep = ~done
        idx = np.concatenate([idx[keep], idx[keep]])
        a, b = np.concatenate([a[keep], m[keep]]), np.concatenate([m[keep], b[keep]])
        whole = np.concatenate([left[keep], right[keep]])
    raise QuadratureFailure(f"tolerance {tol} not reached after {max_level} bisections")


def _phi_fn(w):
    return lambda tt: build_phi(w, tt)[0]


def integrate_psi(w: WeierData, t0, t):
    """Psi(t) = integral of Phi from t0 to t along the straight segment."""
    if complex(t) == complex(t0):
        return np.zeros(4, dtype=complex)
    return integrate_segments(_phi_fn(w), [t0], [t])[0]


# curvature routes

def curvatures_phi(phi, dphi):
    """(E, K, kappa) from Phi and Phi' using the projection and determinant formulas."""
    n2 = mink4.norm_sq(phi)
    perp = mink4.normal_project(phi, dphi)
    K = -4 * mink4.norm_sq(perp) / n2**2
    det = mink4.det4(phi, np.conj(phi), dphi, np.conj(dphi))
    kappa = 4 * det / n2**3
    # Hadamard bound on |det|: roundoff in its imaginary part scales with it
    bound = 4 * np.sum(np.abs(phi) ** 2, axis=-1) * np.sum(np.abs(dphi) ** 2, axis=-1) / n2**3
    bad = np.abs(kappa.imag) > 1e-9 * np.maximum(1.0, np.maximum(np.abs(kappa), bound))
    if np.any(bad):
        raise NumericalFailure(f"determinant not real: {np.max(np.abs(kappa.imag)):.3e}")
    return n2 / 2, K, kappa.real


def gauss_bivector(phi, dphi):
    """K from the norm of the bivector Phi ^ Phi'."""
    return -4 * mink4.wedge_norm_sq(phi, dphi) / mink4.norm_sq(phi) ** 3


def curvatures_gform(f, g1, g2):
    """(E, K, kappa) of the polynomial form; arguments are jets (value, derivative)."""
    q = 1 + g1.v0 * np.conj(g2.v0)
    if np.any(np.abs(q) < EPS):
        raise ConditionViolated("1 + g1 conj(g2) vanishes")
    E = np.abs(f.v0) ** 2 * np.abs(q) ** 2
    z = -4 * g1.v1 * np.conj(g2.v1) / (E * q**2)
    return E, z.real, z.imag


def curvatures_gform_canonical(g1, g2):
    """(E, K, kappa) of the canonical polynomial form, where f is implied."""
    q = 1 + g1.v0 * np.conj(g2.v0)
    if np.any(np.abs(q) < EPS):
        raise ConditionViolated("1 + g1 conj(g2) vanishes")
    p = np.abs(g1.v1 * g2.v1)
    E = np.abs(q) ** 2 / (4 * p)
    z = -16 * p * g1.v1 * np.conj(g2.v1) / (np.abs(q) ** 2 * q**2)
    return E, z.real, z.imag


def curvatures_theta(f, h1, h2):
    """(E, K, kappa) of the hyperbolic form via theta = Re h1 + i Im h2.

    ``f`` is a jet, or None for the canonical hyperbolic form.
    """
    theta = h1.v0.real + 1j * h2.v0.imag
    a, b = h1.v1, h2.v1
    th_u = a.real + 1j * b.imag
    th_v = -a.imag + 1j * b.real
    f2 = np.abs(f.v0) ** 2 if f is not None else 1 / np.abs(a * a - b * b)
    ch = np.cosh(theta)
    if np.any(np.abs(ch) < EPS):
        raise ConditionViolated("cosh(theta) vanishes")
    E = f2 * np.abs(ch) ** 2
    z = -(th_u**2 + th_v**2) / (E * ch**2)
    return E, z.real, z.imag


def nu_mu(phi, dphi, kappa=None):
    """The invariants (nu, mu) in canonical coordinates of the first type."""
    sq = mink4.bilinear_dot(dphi, dphi)
    if np.any(np.abs(sq - 1) >= CANONICAL_TOL):
        raise NotCanonical(f"Phi'^2 differs from 1 by {np.max(np.abs(sq - 1)):.3e}")
    n2 = mink4.norm_sq(phi)
    pn = mink4.norm_sq(mink4.normal_project(phi, dphi))
    nu2 = 2 * (1 + pn) / n2**2
    mu2 = 2 * (1 - pn) / n2**2
    rel = mu2 / nu2
    if np.any(rel < -CANONICAL_TOL):
        raise NotCanonical("||Phi'perp||^2 > 1 in canonical coordinates")
    if np.any(rel < -1e-13):
        warnings.warn("negative mu^2 within tolerance clipped to 0", RuntimeWarning, stacklevel=2)
    mu2 = np.maximum(mu2, 0.0)
    if kappa is None:
        kappa = curvatures_phi(phi, dphi)[2]
    return np.sqrt(nu2), np.sign(kappa) * np.sqrt(mu2)


def zero_order(fn, t, radius=1e-3, samples=64):
    """Winding number of fn (e.g. Phi'^2) around a small circle centred at t."""
    z = complex(t) + radius * np.exp(2j * np.pi * np.arange(samples + 1) / samples)
    ang = np.unwrap(np.angle(fn(z)))
    return int(round((ang[-1] - ang[0]) / (2 * np.pi)))


def curvature_routes(w: WeierData, t, grid: GridSpec | None = None) -> dict:
    """(E, K, kappa) at t by every route available for w.

    'phi' uses Phi, Phi' directly; 'gform' the polynomial-form formulas;
    'theta' the hyperbolic theta formulas after conversion.
    """
    t = np.asarray(t, dtype=complex)
    phi, dphi = build_phi(w, t)
    routes = {"phi": curvatures_phi(phi, dphi)}
    if isinstance(w, GFormCanonical):
        routes["gform"] = curvatures_gform_canonical(w.g1.jet(t, 1), w.g2.jet(t, 1))
    elif w.form in ("trig", "hyperbolic", "wform", "gform"):
        g = convert(w, "gform", grid)
        routes["gform"] = curvatures_gform(*(e.jet(t, 1) for e in (g.f, g.g1, g.g2)))
    if w.form in ("trig", "hyperbolic", "wform", "gform", "gform_canonical"):
        src = convert(w, "gform", grid) if w.form == "gform_canonical" else w
        h = convert(src, "hyperbolic", grid)
        f = h.f.jet(t, 1) if h.f is not None else None
        routes["theta"] = curvatures_theta(f, h.h1.jet(t, 1), h.h2.jet(t, 1))
    return routes


# sampling

@dataclass
class SurfaceGrid:
    grid: GridSpec
    t0: complex
    t: np.ndarray
    psi: np.ndarray
    phi: np.ndarray
    dphi: np.ndarray
    E: np.ndarray
    K: np.ndarray
    kappa: np.ndarray
    sigma_uu: np.ndarray
    sigma_uv: np.ndarray
    nu: np.ndarray | None
    mu: np.ndarray | None
    degenerate: np.ndarray
    canonical_type: int = 0

    @property
    def x(self):
        return self.psi.real

    def rows(self):
        """Per-node records in row-major order (v outer, u inner)."""
        nv, nu = self.t.shape
        for j in range(nv):
            for i in range(nu):
                yield j, i


def chain_psi(w: WeierData, grid: GridSpec, t0=None):
    """Psi on the grid nodes, chained row by row from the lower-left corner.

    The first column is integrated upward, then each row left to right.
    With t0 given, the result is shifted so that Psi(t0) = 0.
    """
    T = grid.nodes()
    nv, nu = T.shape
    a = np.concatenate([T[:-1, 0], T[:, :-1].ravel()])
    b = np.concatenate([T[1:, 0], T[:, 1:].ravel()])
    seg = integrate_segments(_phi_fn(w), a, b)
    col, rows = seg[: nv - 1], seg[nv - 1 :].reshape(nv, nu - 1, 4)
    psi = np.zeros((nv, nu, 4), dtype=complex)
    psi[1:, 0] = np.cumsum(col, axis=0)
    psi[:, 1:] = psi[:, :1] + np.cumsum(rows, axis=1)
    corner = grid.corner
    if t0 is not None and complex(t0) != corner:
        psi = psi - integrate_psi(w, corner, t0)
    return psi


def sample(w: WeierData, grid: GridSpec, t0=None, check: bool = True, eps: float = EPS) -> SurfaceGrid:
    if check:
        report = validate(w, grid, eps)
        if not report.ok:
            j, i, t, names = report.violations()[0]
            raise ConditionViolated(f"{', '.join(names)} at t={t} ({len(report.violations())} nodes)")
    T = grid.nodes()
    phi, dphi = build_phi(w, T)
    E, K, kappa = curvatures_phi(phi, dphi)
    perp = mink4.normal_project(phi, dphi)
    degenerate = np.abs(mink4.bilinear_dot(dphi, dphi)) < DEGENERATE_TOL
    nu = mu = None
    if w.canonical_type == 1:
        nu, mu = nu_mu(phi, dphi, kappa)
    psi = chain_psi(w, grid, t0)
    return SurfaceGrid(
        grid=grid, t0=complex(grid.corner if t0 is None else t0), t=T, psi=psi, phi=phi,
        dphi=dphi, E=E, K=K, kappa=kappa, sigma_uu=perp.real, sigma_uv=-perp.imag,
        nu=nu, mu=mu, degenerate=degenerate, canonical_type=w.canonical_type,
    )
