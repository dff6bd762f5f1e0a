"""Canonical coordinates: Phi'^2 = 1 (first type) or -1 (second type).

The new parameter solves dt~ = (+-Phi'^2)^(1/4) dt.  The fourth root is the
principal one at the lower-left grid corner and is continued along the
quadrature path so that t~ is single valued on the grid.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field

import numpy as np

from .errors import DegeneratePoint, NewtonDivergence, NotCanonical, NumericalFailure
from .holo import Jet, Opaque
from .holo import jet as J
from .holo.jet import compose
from .surface import DEGENERATE_TOL, integrate_segments, zero_order
from .weier import Affine, GForm, GFormCanonical, GridSpec, WeierData, build_phi, phi_prime_sq

CANONICAL_TOL = 1e-8
NEWTON_MAX = 30
KINDS = {"first": 1, "second": -1, 1: 1, -1: -1}


def _sign(kind) -> int:
    try:
        return KINDS[kind]
    except KeyError:
        raise ValueError(f"unknown canonical type {kind!r}") from None


def _points(where):
    return where.nodes() if isinstance(where, GridSpec) else np.asarray(where, dtype=complex)


def is_canonical(w: WeierData, where, kind="first", tol=CANONICAL_TOL) -> bool:
    """True iff |Phi'^2 -+ 1| < tol at every node of a grid or array of points."""
    _, dphi = build_phi(w, _points(where))
    sq = np.sum(np.array([1, 1, 1, -1]) * dphi * dphi, axis=-1)
    return bool(np.all(np.abs(sq - _sign(kind)) < tol))


def _nearest_root(p, ref):
    """Fourth root of p closest to ref."""
    r = np.exp(0.25 * np.log(p))
    cands = r[..., None] * np.array([1, 1j, -1, -1j])
    k = np.argmin(np.abs(cands - np.asarray(ref)[..., None]), axis=-1)
    return np.take_along_axis(cands, k[..., None], axis=-1)[..., 0]


@dataclass(eq=False)
class CanonicalMap:
    """t -> t~ with t~(t0) = 0, tabulated on a grid for warm starts."""

    w: WeierData
    grid: GridSpec
    t0: complex
    sign: int
    t_nodes: np.ndarray = field(repr=False)
    s_nodes: np.ndarray = field(repr=False)
    q_nodes: np.ndarray = field(repr=False)

    @property
    def kind(self):
        return "first" if self.sign == 1 else "second"

    def radicand(self, t):
        return self.sign * phi_prime_sq(self.w, t).v0

    def _nearest_node(self, t):
        g = self.grid
        t = np.asarray(t, dtype=complex)
        hu = (g.u_max - g.u_min) / max(g.nu - 1, 1)
        hv = (g.v_max - g.v_min) / max(g.nv - 1, 1)
        i = np.clip(np.rint((t.real - g.u_min) / (hu or 1)), 0, g.nu - 1).astype(int)
        j = np.clip(np.rint((t.imag - g.v_min) / (hv or 1)), 0, g.nv - 1).astype(int)
        return j, i

    def q(self, t):
        """Branch-continued (+-Phi'^2)^(1/4) at t."""
        j, i = self._nearest_node(t)
        return _nearest_root(self.radicand(t), self.q_nodes[j, i])

    def _integrand(self, tt, ref):
        return _nearest_root(self.radicand(tt), ref[:, None])[..., None]

    def forward(self, t):
        """t~(t)."""
        t = np.asarray(t, dtype=complex)
        j, i = self._nearest_node(t)
        a = self.t_nodes[j, i].ravel()
        ref = self.q_nodes[j, i].ravel()
        vals = integrate_segments(self._integrand, a, t.ravel(), aux=ref)[:, 0]
        return (self.s_nodes[j, i].ravel() + vals).reshape(t.shape)[()]

    def inverse(self, s, tol=1e-13):
        """t(s) by Newton iteration started from the nearest tabulated node."""
        s = np.asarray(s, dtype=complex)
        flat = s.ravel()
        k = np.argmin(np.abs(flat[:, None] - self.s_nodes.ravel()[None, :]), axis=1)
        t = self.t_nodes.ravel()[k] + (flat - self.s_nodes.ravel()[k]) / self.q_nodes.ravel()[k]
        for _ in range(NEWTON_MAX):
            r = self.forward(t) - flat
            if np.all(np.abs(r) <= tol * np.maximum(1.0, np.abs(flat))):
                return t.reshape(s.shape)[()]
            t = t - r / self.q(t)
        r = np.abs(self.forward(t) - flat)
        if np.all(r <= 1e-11 * np.maximum(1.0, np.abs(flat))):
            return t.reshape(s.shape)[()]
        raise NewtonDivergence(flat[int(np.argmax(r))])

    def q_jet(self, t, order):
        """Jet of the branch-continued fourth root at t."""
        p = phi_prime_sq(self.w, t, order) * self.sign
        return J.power(p, 0.25, self.q(t))

    def inverse_jet(self, s, order=2):
        """Jet of t(s), from t'(s) = 1 / q(t(s))."""
        t = self.inverse(s)
        if order == 0:
            return Jet.taylor([t])
        qj = self.q_jet(t, order - 1)
        delta = Jet.taylor([0j])
        for _ in range(order):
            inner = Jet.taylor((t,) + delta.c[1:])
            delta = (1 / compose(qj, inner)).integral()
        return Jet.taylor((t,) + delta.c[1:])


def build_map(w: WeierData, grid: GridSpec, t0=None, kind="first") -> CanonicalMap:
    sign = _sign(kind)
    T = grid.nodes()
    P = sign * phi_prime_sq(w, T).v0
    small = np.abs(P) < DEGENERATE_TOL
    if np.any(small):
        tz = complex(T[small][0])
        order = zero_order(lambda z: phi_prime_sq(w, z).v0, tz, radius=1e-3)
        raise DegeneratePoint(tz, order)
    ang = np.angle(P)
    ang[:, 0] = np.unwrap(ang[:, 0])
    ang = np.unwrap(ang, axis=1)
    Q = np.abs(P) ** 0.25 * np.exp(0.25j * ang)
    nv, nu = T.shape
    a = np.concatenate([T[:-1, 0], T[:, :-1].ravel()])
    b = np.concatenate([T[1:, 0], T[:, 1:].ravel()])
    ref = np.concatenate([Q[:-1, 0], Q[:, :-1].ravel()])
    cmap = CanonicalMap(w, grid, complex(grid.corner if t0 is None else t0), sign, T, None, Q)
    seg = integrate_segments(cmap._integrand, a, b, aux=ref)[:, 0]
    S = np.zeros((nv, nu), dtype=complex)
    S[1:, 0] = np.cumsum(seg[: nv - 1])
    S[:, 1:] = S[:, :1] + np.cumsum(seg[nv - 1 :].reshape(nv, nu - 1), axis=1)
    # the fourth root at each node end must continue the one at the start
    end = _nearest_root(sign * phi_prime_sq(w, b).v0, ref)
    if np.any(np.abs(end - np.concatenate([Q[1:, 0], Q[:, 1:].ravel()])) > 1e-8 * np.abs(end)):
        raise NumericalFailure("fourth-root branch jumps between grid nodes; refine the grid")
    cmap.s_nodes = S
    if t0 is not None and complex(t0) != grid.corner:
        cmap.s_nodes = S - cmap.forward(complex(t0))
    return cmap


def composed(e, cmap: CanonicalMap, label="g"):
    """The expression e evaluated at t(s), as an opaque leaf."""

    def fn(s, order):
        tj = cmap.inverse_jet(s, order)
        return compose(e.jet(tj.c[0], order), tj)

    return Opaque(fn, f"{label}(t(s))")


@dataclass(frozen=True)
class Pullback(WeierData):
    """Phi~(s) = Phi(t(s)) t'(s) for the inverse of a canonical map."""

    base: WeierData
    cmap: CanonicalMap
    form = "pullback"

    def phi_jets(self, s, order=1):
        tj = self.cmap.inverse_jet(s, order + 1)
        jets = self.base.phi_jets(tj.c[0], order)
        dt = tj.d()
        return [compose(j, tj) * dt for j in jets]

    @property
    def canonical_type(self):
        return self.cmap.sign


def canonize(w: WeierData, grid: GridSpec, t0=None, kind="first"):
    """(map, representation in canonical coordinates s = t~)."""
    cmap = build_map(w, grid, t0, kind)
    if cmap.sign == 1 and isinstance(w, (GForm, GFormCanonical)):
        out = GFormCanonical(composed(w.g1, cmap, "g1"), composed(w.g2, cmap, "g2"))
    else:
        out = Pullback(w, cmap)
    return cmap, out


@dataclass(frozen=True)
class DeckMap:
    """t = a t~ (or a conj(t~) when ``conj``)."""

    a: complex
    conj: bool

    def __call__(self, s):
        s = np.asarray(s, dtype=complex)
        return self.a * (np.conj(s) if self.conj else s)

    @property
    def orientation_reversing(self):
        return self.conj


def deck_transforms(kind="first"):
    """The eight parameter changes preserving canonical coordinates of the given type."""
    _sign(kind)
    return [DeckMap(a, c) for c in (False, True) for a in (1, 1j, -1, -1j)]


def apply_deck(w: WeierData, deck: DeckMap) -> WeierData:
    """Representation in the parameter t~ with t = deck(t~)."""
    from .weier import affine
    if deck.conj:
        return affine(w, deck.a, 0, np.conj(deck.a), conj=True)
    return affine(w, deck.a, 0, deck.a)


def type_switch(w: WeierData, grid: GridSpec | None = None) -> WeierData:
    """Exchange first and second type by the rotation t = e^(i pi/4) t~."""
    from .weier import affine
    tau = w.canonical_type
    if tau == 0 and grid is not None:
        for k in ("first", "second"):
            if is_canonical(w, grid, k):
                tau = _sign(k)
    if tau == 0:
        raise NotCanonical("type_switch needs canonical data")
    a = cmath.exp(0.25j * cmath.pi)
    out = affine(w, a, 0, a)
    if grid is not None and not is_canonical(out, grid, -tau):
        raise NotCanonical("rotated data failed the canonical check")
    return out
