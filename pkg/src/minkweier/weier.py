"""Weierstrass representations of minimal space-like surfaces.

Each representation produces Phi(t) = x_u - i x_v from holomorphic
component functions.  The forms are

    Trig        (f cos h1, f sin h1, i f cos h2, f sin h2)
    Hyperbolic  (i f cosh h1, f sinh h1, f cosh h2, f sinh h2)
    WForm       the hyperbolic form written with w1 = h1 + h2, w2 = h1 - h2
    GForm       f (i(g1 g2 + 1), g1 g2 - 1, g1 + g2, g1 - g2)

Omitting f in Hyperbolic/WForm, or using GFormCanonical, selects the
canonical factor that makes Phi'^2 = 1.  Affine wraps any representation
with an affine (or anti-affine) change of parameter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import ClassVar

import numpy as np

from . import mink4
from .errors import (
    CanonicalBranchError, DomainError, NeedsLogBranch, SingularRecovery, UnsupportedDirection,
)
from .holo import Apply, Expr, Jet, Lit, Opaque, as_expr, cut_arguments, parse_expr
from .holo import jet as J

EPS = 1e-8


@dataclass(frozen=True)
class GridSpec:
    u_min: float
    u_max: float
    v_min: float
    v_max: float
    nu: int = 21
    nv: int = 21

    def __post_init__(self):
        if self.nu < 1 or self.nv < 1:
            raise ValueError("grid needs at least one node per direction")

    @property
    def u(self):
        return np.linspace(self.u_min, self.u_max, self.nu)

    @property
    def v(self):
        return np.linspace(self.v_min, self.v_max, self.nv)

    def nodes(self):
        """Parameters t = u + iv, shape (nv, nu); rows run along u."""
        return self.u[None, :] + 1j * self.v[:, None]

    @property
    def corner(self) -> complex:
        return complex(self.u_min, self.v_min)


def to_expr(x):
    """Expression from an Expr, a number or expression text (None passes through)."""
    if x is None or isinstance(x, Expr):
        return x
    if isinstance(x, str):
        return parse_expr(x)
    return as_expr(x)


def _canonical_factor(q: Jet, t, scale=1.0):
    """scale / sqrt(q) with the principal branch; q is the jet of the radicand."""
    try:
        return scale / J.sqrt(q)
    except J.Singular as exc:
        where = np.ravel(np.broadcast_to(np.asarray(t), exc.mask.shape)[exc.mask])
        raise CanonicalBranchError(f"canonical radicand vanishes at t={complex(where[0])}") from None


def _hyperbolic(f, h1, h2):
    return [1j * f * J.cosh(h1), f * J.sinh(h1), f * J.cosh(h2), f * J.sinh(h2)]


def _gform(f, g1, g2):
    p = g1 * g2
    return [1j * f * (p + 1), f * (p - 1), f * (g1 + g2), f * (g1 - g2)]


class WeierData:
    """Base of all representations."""

    form: ClassVar[str] = ""

    def phi_jets(self, t, order: int = 1) -> list:
        raise NotImplementedError

    @property
    def canonical_type(self) -> int:
        return 0

    def components(self) -> dict:
        return {}

    def radicand(self, t):
        """Value under the square root of the canonical factor, or None."""
        return None


@dataclass(frozen=True)
class Trig(WeierData):
    f: Expr
    h1: Expr
    h2: Expr
    canonical: bool = False
    form: ClassVar[str] = "trig"

    def __post_init__(self):
        for k in ("f", "h1", "h2"):
            object.__setattr__(self, k, to_expr(getattr(self, k)))

    def phi_jets(self, t, order=1):
        f, h1, h2 = (e.jet(t, order) for e in (self.f, self.h1, self.h2))
        return [f * J.cos(h1), f * J.sin(h1), 1j * f * J.cos(h2), f * J.sin(h2)]

    @property
    def canonical_type(self):
        return int(self.canonical)

    def components(self):
        return {"f": self.f, "h1": self.h1, "h2": self.h2}


@dataclass(frozen=True)
class Hyperbolic(WeierData):
    f: Expr | None
    h1: Expr
    h2: Expr
    canonical: bool = False
    form: ClassVar[str] = "hyperbolic"

    def __post_init__(self):
        for k in ("f", "h1", "h2"):
            object.__setattr__(self, k, to_expr(getattr(self, k)))

    def f_jet(self, t, order=1):
        if self.f is not None:
            return self.f.jet(t, order)
        d1 = self.h1.jet(t, order + 1).d()
        d2 = self.h2.jet(t, order + 1).d()
        return _canonical_factor(d1 * d1 - d2 * d2, t)

    def phi_jets(self, t, order=1):
        return _hyperbolic(self.f_jet(t, order), self.h1.jet(t, order), self.h2.jet(t, order))

    @property
    def canonical_type(self):
        return int(self.f is None or self.canonical)

    def components(self):
        return {"f": self.f, "h1": self.h1, "h2": self.h2}

    def radicand(self, t):
        if self.f is not None:
            return None
        return self.h1.jet(t, 1).v1 ** 2 - self.h2.jet(t, 1).v1 ** 2


@dataclass(frozen=True)
class WForm(WeierData):
    f: Expr | None
    w1: Expr
    w2: Expr
    canonical: bool = False
    form: ClassVar[str] = "wform"

    def __post_init__(self):
        for k in ("f", "w1", "w2"):
            object.__setattr__(self, k, to_expr(getattr(self, k)))

    def f_jet(self, t, order=1):
        if self.f is not None:
            return self.f.jet(t, order)
        return _canonical_factor(self.w1.jet(t, order + 1).d() * self.w2.jet(t, order + 1).d(), t)

    def phi_jets(self, t, order=1):
        w1, w2 = self.w1.jet(t, order), self.w2.jet(t, order)
        return _hyperbolic(self.f_jet(t, order), (w1 + w2) * 0.5, (w1 - w2) * 0.5)

    @property
    def canonical_type(self):
        return int(self.f is None or self.canonical)

    def components(self):
        return {"f": self.f, "w1": self.w1, "w2": self.w2}

    def radicand(self, t):
        if self.f is not None:
            return None
        return self.w1.jet(t, 1).v1 * self.w2.jet(t, 1).v1


@dataclass(frozen=True)
class GForm(WeierData):
    f: Expr
    g1: Expr
    g2: Expr
    canonical: bool = False
    form: ClassVar[str] = "gform"

    def __post_init__(self):
        for k in ("f", "g1", "g2"):
            object.__setattr__(self, k, to_expr(getattr(self, k)))

    def phi_jets(self, t, order=1):
        return _gform(*(e.jet(t, order) for e in (self.f, self.g1, self.g2)))

    @property
    def canonical_type(self):
        return int(self.canonical)

    def components(self):
        return {"f": self.f, "g1": self.g1, "g2": self.g2}


@dataclass(frozen=True)
class GFormCanonical(WeierData):
    g1: Expr
    g2: Expr
    form: ClassVar[str] = "gform_canonical"

    def __post_init__(self):
        for k in ("g1", "g2"):
            object.__setattr__(self, k, to_expr(getattr(self, k)))

    def f_jet(self, t, order=1):
        return _canonical_factor(self.g1.jet(t, order + 1).d() * self.g2.jet(t, order + 1).d(), t, 0.5)

    def phi_jets(self, t, order=1):
        return _gform(self.f_jet(t, order), self.g1.jet(t, order), self.g2.jet(t, order))

    @property
    def canonical_type(self):
        return 1

    def components(self):
        return {"g1": self.g1, "g2": self.g2}

    def radicand(self, t):
        return self.g1.jet(t, 1).v1 * self.g2.jet(t, 1).v1


@dataclass(frozen=True)
class Affine(WeierData):
    """Phi~(s) = c Phi(a s + b), or c conj(Phi(a conj(s) + b)) when ``conj`` is set."""

    base: WeierData
    a: complex = 1 + 0j
    b: complex = 0j
    c: complex = 1 + 0j
    conj: bool = False
    form: ClassVar[str] = "affine"

    def __post_init__(self):
        for k in ("a", "b", "c"):
            object.__setattr__(self, k, complex(getattr(self, k)))

    def inner(self, s):
        s = np.asarray(s, dtype=complex)
        return self.a * (np.conj(s) if self.conj else s) + self.b

    def phi_jets(self, s, order=1):
        jets = self.base.phi_jets(self.inner(s), order)
        a = np.conj(self.a) if self.conj else self.a
        out = []
        for j in jets:
            coeffs = np.conj(j.c) if self.conj else j.c
            out.append(Jet.taylor([self.c * ck * a**k for k, ck in enumerate(coeffs)]))
        return out

    @property
    def canonical_type(self):
        tau = self.base.canonical_type
        if tau == 0:
            return 0
        a = np.conj(self.a) if self.conj else self.a
        val = self.c**2 * a**2 * tau
        for k in (1, -1):
            if abs(val - k) < 1e-12:
                return k
        return 0

    def radicand(self, s):
        return self.base.radicand(self.inner(s))


def affine(w: WeierData, a=1, b=0, c=1, conj=False) -> WeierData:
    """Affine reparametrization, flattening nested wrappers."""
    a, b, c = complex(a), complex(b), complex(c)
    if isinstance(w, Affine):
        # outer: c conj^e (inner(a s + b)); inner: w.c conj^w (base(w.a s' + w.b))
        if not conj:
            a2 = w.a * (np.conj(a) if w.conj else a)
            b2 = w.a * (np.conj(b) if w.conj else b) + w.b
            return Affine(w.base, a2, b2, c * w.c, w.conj)
        a2 = w.a * (a if w.conj else np.conj(a))
        b2 = w.a * (b if w.conj else np.conj(b)) + w.b
        return Affine(w.base, a2, b2, c * np.conj(w.c), not w.conj)
    if a == 1 and b == 0 and c == 1 and not conj:
        return w
    return Affine(w, a, b, c, conj)


# evaluation

def phi_derivs(w: WeierData, t, order: int = 1):
    """Array of shape (order + 1, *t.shape, 4) holding Phi, Phi', ..."""
    jets = w.phi_jets(np.asarray(t, dtype=complex), order)
    shape = np.shape(t)
    rows = []
    for k in range(order + 1):
        rows.append(np.stack([np.broadcast_to(j.derivative(k), shape) for j in jets], axis=-1))
    return np.stack(rows)


def build_phi(w: WeierData, t):
    """(Phi(t), Phi'(t)); t may be a scalar or an array."""
    d = phi_derivs(w, t, 1)
    return d[0], d[1]


def phi_prime_sq(w: WeierData, t, order: int = 0) -> Jet:
    """Jet of Phi'^2 at t."""
    jets = w.phi_jets(np.asarray(t, dtype=complex), order + 1)
    ds = [j.d() for j in jets]
    return ds[0] * ds[0] + ds[1] * ds[1] + ds[2] * ds[2] - ds[3] * ds[3]


def recover_fg(phi):
    """(f, g1, g2) of the polynomial form reproducing phi."""
    phi = np.asarray(phi, dtype=complex)
    den = 1j * phi[..., 0] + phi[..., 1]
    if np.any(np.abs(den) < 1e-12):
        raise SingularRecovery("i phi_1 + phi_2 vanishes")
    return -den / 2, -(phi[..., 2] + phi[..., 3]) / den, -(phi[..., 2] - phi[..., 3]) / den


def hyperbolic_norm_sq(f, h1, h2):
    """||Phi||^2 of the hyperbolic form from the component values."""
    return np.abs(f) ** 2 * (np.cosh(2 * np.real(h1)) + np.cos(2 * np.imag(h2)))


def trig_norm_sq(f, h1, h2):
    """||Phi||^2 of the trigonometric form from the component values."""
    return np.abs(f) ** 2 * (np.cosh(2 * np.imag(h1)) + np.cos(2 * np.real(h2)))


# validity

FLAGS = ("f_zero", "derivative_condition_violated", "hermitian_condition_violated",
         "branch_cut_crossed", "undefined")


@dataclass
class ValidityReport:
    nodes: np.ndarray
    flags: dict = field(default_factory=dict)
    eps: float = EPS

    @property
    def shape(self):
        return self.nodes.shape

    def counts(self) -> dict:
        return {k: int(np.count_nonzero(self.flags[k])) for k in FLAGS}

    @property
    def any_flag(self):
        out = np.zeros(self.shape, dtype=bool)
        for k in FLAGS:
            out |= self.flags[k]
        return out

    @property
    def ok(self) -> bool:
        return not bool(np.any(self.any_flag))

    def violations(self):
        """List of (row, col, t, [flag names]) in row-major order."""
        out = []
        bad = self.any_flag
        for j, i in zip(*np.nonzero(bad)):
            names = [k for k in FLAGS if self.flags[k][j, i]]
            out.append((int(j), int(i), complex(self.nodes[j, i]), names))
        return out


def _dist_mod(x, period):
    r = np.mod(x, period)
    return np.minimum(r, period - r)


def _crosses_cut(q):
    """Mark nodes on either end of a grid edge whose straight segment crosses the negative real axis."""
    out = np.zeros(q.shape, dtype=bool)
    for axis in (0, 1):
        if q.shape[axis] < 2:
            continue
        a = np.moveaxis(q, axis, 0)[:-1]
        b = np.moveaxis(q, axis, 0)[1:]
        ia, ib = a.imag, b.imag
        straddle = (ia * ib < 0) | ((ia == 0) & (ib < 0)) | ((ib == 0) & (ia < 0))
        with np.errstate(all="ignore"):
            s = np.where(straddle, ia / (ia - ib), 0.0)
        re = a.real + s * (b.real - a.real)
        hit = straddle & (re < 0)
        o = np.moveaxis(out, axis, 0)
        o[:-1] |= hit
        o[1:] |= hit
    return out


def _safe_eval(fn, t):
    """Evaluate vectorized; on DomainError retry per node and report undefined nodes."""
    try:
        return fn(t), np.zeros(t.shape, dtype=bool)
    except (DomainError, CanonicalBranchError):
        pass
    undefined = np.zeros(t.shape, dtype=bool)
    vals = None
    for idx in np.ndindex(t.shape):
        try:
            val = fn(t[idx])
        except (DomainError, CanonicalBranchError):
            undefined[idx] = True
            continue
        if vals is None:
            vals = {k: np.full(t.shape, np.nan + 0j) for k in val}
        for k, x in val.items():
            vals[k][idx] = x
    if vals is None:
        vals = {}
    return vals, undefined


def _values(w, t):
    comps = {k: e for k, e in w.components().items() if e is not None}
    out = {k: e.jet(t, 1).v0 for k, e in comps.items()}
    out["norm"] = mink4.norm_sq(build_phi(w, t)[0])
    return out


def validate(w: WeierData, grid: GridSpec, eps: float = EPS) -> ValidityReport:
    t = grid.nodes()
    vals, undefined = _safe_eval(lambda tt: _values(w, tt), t)
    if w.canonical_type and w.radicand(t[:1, :1]) is not None:
        # evaluated on its own: a vanishing radicand makes Phi undefined but
        # is reported as the derivative condition rather than as undefined
        rad, rad_undef = _safe_eval(lambda tt: {"radicand": w.radicand(tt)}, t)
        if "radicand" in rad:
            vals["radicand"] = rad["radicand"]
            with np.errstate(invalid="ignore"):
                undefined = undefined & ~(np.abs(rad["radicand"]) <= eps)
        undefined = undefined | rad_undef
    false = np.zeros(t.shape, dtype=bool)
    flags = {k: false.copy() for k in FLAGS}
    flags["undefined"] = undefined

    def get(k):
        return vals.get(k, np.full(t.shape, np.nan + 0j))

    with np.errstate(invalid="ignore"):
        if "f" in vals:
            flags["f_zero"] = np.abs(get("f")) <= eps
        if "radicand" in vals:
            q = get("radicand")
            flags["derivative_condition_violated"] = np.abs(q) <= eps
            flags["branch_cut_crossed"] = _crosses_cut(np.nan_to_num(q))
        for e in w.components().values():
            for arg in cut_arguments(e) if e is not None else ():
                q, _ = _safe_eval(lambda tt: {"q": arg.jet(tt, 0).v0}, t)
                if "q" in q:
                    flags["branch_cut_crossed"] |= _crosses_cut(np.nan_to_num(q["q"]))
        if isinstance(w, Trig):
            h1, h2 = get("h1"), get("h2")
            herm = (np.abs(h1.imag) <= eps) & (_dist_mod(h2.real - math.pi / 2, math.pi) <= eps)
        elif isinstance(w, Hyperbolic):
            h1, h2 = get("h1"), get("h2")
            herm = (np.abs(h1.real) <= eps) & (_dist_mod(h2.imag - math.pi / 2, math.pi) <= eps)
        elif isinstance(w, WForm):
            z = get("w1") + np.conj(get("w2"))
            herm = (np.abs(z.real) <= eps) & (_dist_mod(z.imag - math.pi, 2 * math.pi) <= eps)
        elif isinstance(w, (GForm, GFormCanonical)):
            herm = np.abs(1 + get("g1") * np.conj(get("g2"))) <= eps
        else:
            herm = get("norm").real <= eps
        flags["hermitian_condition_violated"] = herm & ~undefined
    for k in FLAGS:
        if k not in ("undefined", "derivative_condition_violated", "branch_cut_crossed"):
            flags[k] = flags[k] & ~undefined
    return ValidityReport(t, flags, eps)


# conversions

SPINE = ("trig", "hyperbolic", "wform", "gform", "gform_canonical")
FORMS = {"trig": Trig, "hyperbolic": Hyperbolic, "wform": WForm, "gform": GForm,
         "gform_canonical": GFormCanonical}


def _derived(fn, label):
    return Opaque(fn, label)


def canonical_f(w: WeierData) -> Expr:
    """The implied canonical factor of w as an expression leaf."""
    return _derived(lambda t, order: w.f_jet(t, order), f"f[{w.form}]")


def _check_log(g: Expr, grid, name):
    if grid is None:
        return
    vals = g.jet(grid.nodes(), 0).v0
    if np.any(np.abs(vals) <= EPS):
        raise NeedsLogBranch(f"{name} vanishes on the grid; log {name} undefined")
    if np.any(_crosses_cut(vals)) or np.any((vals.imag == 0) & (vals.real < 0)):
        raise NeedsLogBranch(f"{name} meets the branch cut of log on the grid")


def _step(w: WeierData, target: str, grid) -> WeierData:
    src = w.form
    canon = bool(w.canonical_type == 1)
    if (src, target) == ("trig", "hyperbolic"):
        return Hyperbolic(-1j * w.f, 1j * w.h1, -1j * w.h2 + Lit(1j * math.pi), canonical=canon)
    if (src, target) == ("hyperbolic", "trig"):
        f = w.f if w.f is not None else canonical_f(w)
        return Trig(1j * f, -1j * w.h1, Lit(math.pi) + 1j * w.h2, canonical=canon)
    if (src, target) == ("hyperbolic", "wform"):
        return WForm(w.f, w.h1 + w.h2, w.h1 - w.h2, canonical=w.canonical)
    if (src, target) == ("wform", "hyperbolic"):
        return Hyperbolic(w.f, (w.w1 + w.w2) / 2, (w.w1 - w.w2) / 2, canonical=w.canonical)
    if (src, target) == ("wform", "gform"):
        f = w.f if w.f is not None else canonical_f(w)
        f6 = f * Apply("exp", -(w.w1 + w.w2) / 2) / 2
        return GForm(f6, Apply("exp", w.w1), Apply("exp", w.w2), canonical=canon)
    if (src, target) == ("gform", "wform"):
        _check_log(w.g1, grid, "g1")
        _check_log(w.g2, grid, "g2")
        w1, w2 = Apply("log", w.g1), Apply("log", w.g2)
        return WForm(2 * w.f * Apply("exp", (w1 + w2) / 2), w1, w2, canonical=canon)
    if (src, target) == ("gform_canonical", "gform"):
        return GForm(canonical_f(w), w.g1, w.g2, canonical=True)
    if (src, target) == ("gform", "gform_canonical"):
        raise UnsupportedDirection("gform -> gform_canonical requires a change of parameter; use canonize")
    raise UnsupportedDirection(f"no direct conversion {src} -> {target}")


def convert(w: WeierData, target, grid: GridSpec | None = None) -> WeierData:
    """Re-express w in another form along trig - hyperbolic - wform - gform - gform_canonical.

    ``grid`` lets the log-requiring step check its branch conditions up front.
    """
    target = target if isinstance(target, str) else target.form
    if target not in SPINE:
        raise UnsupportedDirection(f"unknown form {target!r}")
    if w.form not in SPINE:
        raise UnsupportedDirection(f"cannot convert a {w.form} representation")
    i, j = SPINE.index(w.form), SPINE.index(target)
    step = 1 if j > i else -1
    while w.form != target:
        w = _step(w, SPINE[SPINE.index(w.form) + step], grid)
    return w
