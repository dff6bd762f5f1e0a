"""Expression trees for holomorphic functions of the variable t."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ..errors import DomainError
from . import jet as J
from .jet import Jet


class Expr:
    """Base node.  Supports +, -, *, / with numbers and integer powers."""

    def jet(self, t, order: int = 2) -> Jet:
        return eval_jet(self, t, order)

    def __call__(self, t):
        return eval_jet(self, t, 0).v0

    def __str__(self):
        return format_expr(self)

    def __add__(self, other):
        return Add(self, as_expr(other))

    def __radd__(self, other):
        return Add(as_expr(other), self)

    def __sub__(self, other):
        return Sub(self, as_expr(other))

    def __rsub__(self, other):
        return Sub(as_expr(other), self)

    def __mul__(self, other):
        return Mul(self, as_expr(other))

    def __rmul__(self, other):
        return Mul(as_expr(other), self)

    def __truediv__(self, other):
        return Div(self, as_expr(other))

    def __rtruediv__(self, other):
        return Div(as_expr(other), self)

    def __neg__(self):
        return Neg(self)

    def __pow__(self, n):
        return Pow(self, int(n))


@dataclass(frozen=True, eq=True)
class Lit(Expr):
    value: complex

    def __post_init__(self):
        object.__setattr__(self, "value", complex(self.value))


@dataclass(frozen=True)
class I(Expr):
    pass


@dataclass(frozen=True)
class Var(Expr):
    pass


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr


@dataclass(frozen=True)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Sub(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Mul(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Div(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: int


@dataclass(frozen=True)
class Apply(Expr):
    fn: str
    arg: Expr


@dataclass(frozen=True)
class Subst(Expr):
    """expr(a*t + b)."""

    expr: Expr
    a: complex
    b: complex = 0j


@dataclass(frozen=True, eq=False)
class Opaque(Expr):
    """Leaf computed by a callable ``fn(t, order) -> Jet``; has no text form.

    Used for derived components (implied canonical factors, functions
    composed with a numerically inverted coordinate change).
    """

    fn: Callable = field(repr=False)
    label: str = "<opaque>"


def as_expr(x) -> Expr:
    if isinstance(x, Expr):
        return x
    if isinstance(x, (int, float, complex, np.number)):
        return Lit(complex(x))
    raise TypeError(f"cannot convert {type(x).__name__} to an expression")


def compose_affine(e: Expr, a, b=0j) -> Expr:
    """Expression evaluating to e(a*t + b)."""
    a, b = complex(a), complex(b)
    if a == 1 and b == 0:
        return e
    return Subst(e, a, b)


def is_textual(e: Expr) -> bool:
    """True when ``e`` contains no Opaque leaves and can be formatted."""
    if isinstance(e, Opaque):
        return False
    if isinstance(e, (Lit, I, Var)):
        return True
    if isinstance(e, (Neg,)):
        return is_textual(e.arg)
    if isinstance(e, (Add, Sub, Mul, Div)):
        return is_textual(e.left) and is_textual(e.right)
    if isinstance(e, Pow):
        return is_textual(e.base)
    if isinstance(e, Apply):
        return is_textual(e.arg)
    if isinstance(e, Subst):
        return is_textual(e.expr)
    return False


# evaluation


_CUT_FUNCTIONS = ("log", "sqrt")


def cut_arguments(e: Expr) -> list:
    """Arguments of the branch-cut functions inside e, as expressions in t."""
    if isinstance(e, Apply):
        inner = cut_arguments(e.arg)
        return inner + [e.arg] if e.fn in _CUT_FUNCTIONS else inner
    if isinstance(e, Subst):
        return [Subst(x, e.a, e.b) for x in cut_arguments(e.expr)]
    out = []
    for k in ("arg", "left", "right", "base"):
        if hasattr(e, k):
            out += cut_arguments(getattr(e, k))
    return out


def eval_jet(e: Expr, t, order: int = 2) -> Jet:
    """Jet of ``e`` at t (scalar or array) holding derivatives up to ``order``."""
    t = np.asarray(t, dtype=complex)
    with np.errstate(all="ignore"):
        out = _eval(e, Jet.var(t, order), t)
        coeffs = [np.broadcast_to(np.asarray(c, dtype=complex), t.shape).copy()[()] for c in out.c]
    if len(coeffs) < order + 1:
        coeffs += [np.zeros(t.shape, dtype=complex)[()]] * (order + 1 - len(coeffs))
    return Jet.taylor(coeffs)


def _fail(node, t, mask):
    mask = np.broadcast_to(mask, t.shape)
    where = t[mask] if t.ndim else t
    t0 = np.ravel(where)[0] if np.size(where) else complex(np.ravel(t)[0])
    try:
        text = format_expr(node)
    except ValueError:
        text = getattr(node, "label", type(node).__name__)
    return DomainError(text, t0)


def _eval(e, x: Jet, t):
    if isinstance(e, Var):
        return x
    if isinstance(e, Lit):
        return Jet.const(e.value, x.order)
    if isinstance(e, I):
        return Jet.const(1j, x.order)
    try:
        if isinstance(e, Neg):
            return -_eval(e.arg, x, t)
        if isinstance(e, Add):
            return _eval(e.left, x, t) + _eval(e.right, x, t)
        if isinstance(e, Sub):
            return _eval(e.left, x, t) - _eval(e.right, x, t)
        if isinstance(e, Mul):
            return _eval(e.left, x, t) * _eval(e.right, x, t)
        if isinstance(e, Div):
            return _eval(e.left, x, t) / _eval(e.right, x, t)
        if isinstance(e, Pow):
            return _eval(e.base, x, t) ** e.exponent
        if isinstance(e, Apply):
            return J.FUNCTIONS[e.fn](_eval(e.arg, x, t))
        if isinstance(e, Subst):
            return _eval(e.expr, x * e.a + e.b, t)
        if isinstance(e, Opaque):
            inner = e.fn(x.c[0], x.order)
            return J.compose(inner, x)
    except J.Singular as exc:
        raise _fail(e, t, exc.mask) from None
    raise TypeError(f"unknown node {e!r}")


# formatting

_PREC_ADD, _PREC_MUL, _PREC_NEG, _PREC_POW, _PREC_ATOM = 1, 2, 3, 4, 5


def _fmt_real(x: float) -> str:
    if not np.isfinite(x):
        raise ValueError(f"non-finite literal {x}")
    if x == int(x) and abs(x) < 1e16:
        return str(int(x))
    return repr(float(x))


def _fmt_lit(z: complex):
    re, im = z.real, z.imag
    if im == 0:
        if re < 0 or (re == 0 and str(re).startswith("-")):
            return "-" + _fmt_real(-re), _PREC_NEG
        return _fmt_real(re), _PREC_ATOM
    sign = "-" if im < 0 else "+"
    imag = "i" if abs(im) == 1 else f"{_fmt_real(abs(im))}*i"
    if re == 0:
        return f"({'-' if im < 0 else ''}{imag})", _PREC_ATOM
    return f"({_fmt_real(re)}{sign}{imag})", _PREC_ATOM


def _fmt(e, var: str):
    """Return (text, precedence)."""
    if isinstance(e, Var):
        return var, _PREC_ATOM
    if isinstance(e, I):
        return "i", _PREC_ATOM
    if isinstance(e, Lit):
        return _fmt_lit(e.value)
    if isinstance(e, Neg):
        return "-" + _wrap(e.arg, var, _PREC_NEG), _PREC_NEG
    if isinstance(e, (Add, Sub)):
        op = " + " if isinstance(e, Add) else " - "
        return _wrap(e.left, var, _PREC_ADD) + op + _wrap(e.right, var, _PREC_MUL), _PREC_ADD
    if isinstance(e, (Mul, Div)):
        op = "*" if isinstance(e, Mul) else "/"
        return _wrap(e.left, var, _PREC_MUL) + op + _wrap(e.right, var, _PREC_NEG), _PREC_MUL
    if isinstance(e, Pow):
        if e.exponent < 0:
            return _fmt(Div(Lit(1), Pow(e.base, -e.exponent)), var)
        return f"{_wrap(e.base, var, _PREC_ATOM)}^{e.exponent}", _PREC_POW
    if isinstance(e, Apply):
        return f"{e.fn}({_fmt(e.arg, var)[0]})", _PREC_ATOM
    if isinstance(e, Subst):
        inner = Mul(Lit(e.a), Var()) if e.b == 0 else Add(Mul(Lit(e.a), Var()), Lit(e.b))
        return _fmt(e.expr, "(" + _fmt(inner, var)[0] + ")")
    raise ValueError(f"{getattr(e, 'label', e)!s} has no text form")


def _wrap(e, var, prec):
    text, p = _fmt(e, var)
    return text if p >= prec else "(" + text + ")"


def format_expr(e: Expr) -> str:
    """Text that parses back to an expression with the same values."""
    return _fmt(e, "t")[0]
