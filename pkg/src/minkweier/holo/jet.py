"""Truncated Taylor series ("jets") of holomorphic functions.

A jet of order n at a point stores the Taylor coefficients c_0..c_n, so the
k-th derivative is k! * c_k.  Coefficients may be complex scalars or numpy
arrays of equal shape, which lets one jet describe a whole grid of points.
"""

from math import factorial

import numpy as np


class Singular(ArithmeticError):
    """Raised by a jet operation at a singular point; ``mask`` marks the offending entries."""

    def __init__(self, mask):
        super().__init__("singular jet operation")
        self.mask = np.asarray(mask)


def principal(z):
    """Map -0.0 imaginary parts to +0.0 so the branch cut sits on arg = pi."""
    z = np.asarray(z, dtype=complex)
    return np.where(z.imag == 0, z.real + 0j, z)


def _check_nonzero(z):
    mask = np.asarray(z) == 0
    if np.any(mask):
        raise Singular(mask)


class Jet:
    __slots__ = ("c",)

    def __init__(self, v0, v1=0j, v2=0j):
        self.c = (v0, v1, v2 / 2)

    @classmethod
    def taylor(cls, coeffs):
        obj = cls.__new__(cls)
        obj.c = tuple(coeffs)
        return obj

    @classmethod
    def const(cls, value, order=2):
        return cls.taylor((value,) + (0j,) * order)

    @classmethod
    def var(cls, t, order=2):
        return cls.taylor(((t, 1 + 0j) + (0j,) * order)[: order + 1])

    def __getitem__(self, sl):
        return Jet.taylor(self.c[sl])

    @property
    def order(self):
        return len(self.c) - 1

    def derivative(self, k):
        return self.c[k] * factorial(k)

    @property
    def v0(self):
        return self.c[0]

    @property
    def v1(self):
        return self.derivative(1)

    @property
    def v2(self):
        return self.derivative(2)

    def derivs(self):
        return [self.derivative(k) for k in range(len(self.c))]

    def truncate(self, order):
        return Jet.taylor(self.c[: order + 1])

    def d(self):
        """Jet of the derivative (one order lower)."""
        return Jet.taylor([k * self.c[k] for k in range(1, len(self.c))])

    def integral(self, c0=0j):
        """Antiderivative jet (one order higher) with constant term c0."""
        return Jet.taylor([c0] + [self.c[k] / (k + 1) for k in range(len(self.c))])

    def __repr__(self):
        vals = [complex(x) if np.ndim(x) == 0 else x for x in self.derivs()]
        return f"Jet{tuple(vals)}"

    # arithmetic

    def _coerce(self, other):
        if isinstance(other, Jet):
            n = min(self.order, other.order)
            return self.truncate(n), other.truncate(n)
        return self, Jet.const(other, self.order)

    def __add__(self, other):
        a, b = self._coerce(other)
        return Jet.taylor([x + y for x, y in zip(a.c, b.c)])

    __radd__ = __add__

    def __neg__(self):
        return Jet.taylor([-x for x in self.c])

    def __sub__(self, other):
        a, b = self._coerce(other)
        return Jet.taylor([x - y for x, y in zip(a.c, b.c)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return Jet.taylor([x * other for x in self.c])
        a, b = self._coerce(other)
        n = a.order
        return Jet.taylor([sum(a.c[j] * b.c[k - j] for j in range(k + 1)) for k in range(n + 1)])

    __rmul__ = __mul__

    def __truediv__(self, other):
        a, b = self._coerce(other)
        _check_nonzero(b.c[0])
        q = []
        for k in range(a.order + 1):
            acc = a.c[k]
            for j in range(1, k + 1):
                acc = acc - b.c[j] * q[k - j]
            q.append(acc / b.c[0])
        return Jet.taylor(q)

    def __rtruediv__(self, other):
        return Jet.const(other, self.order) / self

    def __pow__(self, n):
        if not isinstance(n, (int, np.integer)):
            return power(self, n)
        if n < 0:
            return 1 / (self ** (-n))
        result = Jet.const(1 + 0j, self.order)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result


def exp(g):
    e = [np.exp(g.c[0])]
    for k in range(1, len(g.c)):
        e.append(sum(j * g.c[j] * e[k - j] for j in range(1, k + 1)) / k)
    return Jet.taylor(e)


def log(g):
    g0 = principal(g.c[0])
    _check_nonzero(g0)
    out = [np.log(g0)]
    for k in range(1, len(g.c)):
        acc = g.c[k] - sum(j * out[j] * g.c[k - j] for j in range(1, k)) / k
        out.append(acc / g0)
    return Jet.taylor(out)


def power(g, p, r0=None):
    """g**p with the principal branch at c_0, or with the supplied value r0 = g(t)**p."""
    g0 = principal(g.c[0])
    _check_nonzero(g0)
    if r0 is None:
        r0 = np.exp(p * np.log(g0))
    out = [r0]
    for k in range(1, len(g.c)):
        acc = sum(((p + 1) * j - k) * g.c[j] * out[k - j] for j in range(1, k + 1))
        out.append(acc / (k * g0))
    return Jet.taylor(out)


def sqrt(g):
    g0 = principal(g.c[0])
    _check_nonzero(g0)
    return power(g, 0.5, np.sqrt(g0))


def _trig_pair(g, s0, c0, sign):
    s, c = [s0], [c0]
    for k in range(1, len(g.c)):
        s.append(sum(j * g.c[j] * c[k - j] for j in range(1, k + 1)) / k)
        c.append(sign * sum(j * g.c[j] * s[k - j] for j in range(1, k + 1)) / k)
    return Jet.taylor(s), Jet.taylor(c)


def sin(g):
    return _trig_pair(g, np.sin(g.c[0]), np.cos(g.c[0]), -1)[0]


def cos(g):
    return _trig_pair(g, np.sin(g.c[0]), np.cos(g.c[0]), -1)[1]


def sinh(g):
    return _trig_pair(g, np.sinh(g.c[0]), np.cosh(g.c[0]), 1)[0]


def cosh(g):
    return _trig_pair(g, np.sinh(g.c[0]), np.cosh(g.c[0]), 1)[1]


def compose(outer, inner):
    """Jet of F(h(t)) where ``outer`` is the jet of F at h(t0) and ``inner`` the jet of h at t0."""
    n = min(outer.order, inner.order)
    delta = Jet.taylor((0j,) + tuple(inner.c[1 : n + 1]))
    result = Jet.const(outer.c[n], n)
    for k in range(n - 1, -1, -1):
        result = result * delta + outer.c[k]
    return result


FUNCTIONS = {"exp": exp, "log": log, "sqrt": sqrt, "sin": sin, "cos": cos, "sinh": sinh, "cosh": cosh}
