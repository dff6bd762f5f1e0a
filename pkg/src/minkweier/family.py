"""The associated family of a surface given in canonical coordinates.

The member at angle phi is generated by g_i(a s) with a = e^(i phi/2); its
Phi is Phi(a s)/a and its Psi is Psi(a s)/a^2.  phi = pi/2 is the
conjugate surface.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import NotCanonical
from .holo import compose_affine
from .surface import curvatures_phi
from .weier import Affine, GFormCanonical, GridSpec, WeierData, affine, build_phi


@dataclass(frozen=True)
class FamilyMember:
    phi: float
    base: WeierData
    data: WeierData

    @property
    def a(self) -> complex:
        return cmath.exp(0.5j * self.phi)

    def gform(self) -> GFormCanonical | None:
        """The generating pair g_i(a s) as canonical polynomial data.

        Its implied factor uses the principal square root, so its Phi may
        differ from ``data`` by an overall sign (x -> -x up to translation).
        """
        d = self.data
        if isinstance(d, GFormCanonical):
            return d
        if isinstance(d, Affine) and not d.conj and isinstance(d.base, GFormCanonical):
            return GFormCanonical(compose_affine(d.base.g1, d.a, d.b), compose_affine(d.base.g2, d.a, d.b))
        return None


def _unwrap(w):
    if isinstance(w, FamilyMember):
        return w.base, w.phi, w.data
    return w, 0.0, w


def rotate(w, phi: float) -> FamilyMember:
    """Family member at any angle phi (no range restriction)."""
    base, phi0, data = _unwrap(w)
    if data.canonical_type != 1:
        raise NotCanonical("the associated family needs canonical coordinates of the first type")
    a = cmath.exp(0.5j * phi)
    return FamilyMember(phi0 + phi, base, affine(data, a, 0, 1 / a))


def associate(w, phi: float) -> FamilyMember:
    if not 0 <= phi <= math.pi / 2:
        raise ValueError("phi must lie in [0, pi/2]")
    return rotate(w, phi)


def conjugate(w) -> FamilyMember:
    """The conjugate surface, Im Psi of the original.

    Its parameter s is related to t by t = e^(i pi/4) s, i.e. the first-type
    coordinates of the result are the second-type coordinates of the input.
    """
    return associate(w, math.pi / 2)


@dataclass
class IsometryReport:
    dev_E: float
    dev_K: float
    dev_kappa: float
    tol: float = 1e-9

    @property
    def ok(self) -> bool:
        return max(self.dev_E, self.dev_K, self.dev_kappa) <= self.tol


def _rel(x, ref):
    return float(np.max(np.abs(x - ref) / (1 + np.abs(ref))))


def check_isometry(w: WeierData, member: FamilyMember, grid: GridSpec, tol=1e-9) -> IsometryReport:
    """Compare E, K, kappa of the member at s with those of w at a s.

    ``w`` must be the representation the member was generated from.
    """
    s = grid.nodes()
    a = cmath.exp(0.5j * (member.phi - _unwrap(w)[1]))
    Em, Km, km = curvatures_phi(*build_phi(member.data, s))
    Eo, Ko, ko = curvatures_phi(*build_phi(_unwrap(w)[2], a * s))
    return IsometryReport(_rel(Em, Eo), _rel(Km, Ko), _rel(km, ko), tol)
