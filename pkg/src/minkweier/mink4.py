"""Complex linear algebra in C^4 with the Minkowski signature (+,+,+,-).

Vectors are numpy arrays whose last axis has length 4; every function
broadcasts over leading axes so whole grids can be processed at once.
"""

import numpy as np

from .errors import DegenerateMetric, NotIsothermal

ETA = np.array([1.0, 1.0, 1.0, -1.0])
TOL = 1e-10


def cvec4(c1, c2, c3, c4):
    return np.stack(np.broadcast_arrays(*(np.asarray(c, dtype=complex) for c in (c1, c2, c3, c4))), axis=-1)


def bilinear_dot(a, b):
    return np.sum(ETA * np.asarray(a) * np.asarray(b), axis=-1)


def hermitian_dot(a, b):
    return np.sum(ETA * np.asarray(a) * np.conj(b), axis=-1)


def norm_sq(a):
    """Real part of a . conj(a); the imaginary part vanishes identically."""
    return np.real(hermitian_dot(a, a))


def wedge_norm_sq(a, b):
    """Squared norm of the bivector a ^ b."""
    return norm_sq(a) * norm_sq(b) - np.abs(hermitian_dot(b, a)) ** 2


def det4(a, b, c, d):
    return np.linalg.det(np.stack([np.asarray(v, dtype=complex) for v in (a, b, c, d)], axis=-1))


def _scale(*vs):
    return max(1.0, max(float(np.max(np.abs(v), initial=0.0)) for v in vs))


def normal_project(phi, dphi, tol=TOL):
    """Component of dphi normal to the complexified tangent plane spanned by phi."""
    phi = np.asarray(phi, dtype=complex)
    dphi = np.asarray(dphi, dtype=complex)
    n2 = norm_sq(phi)
    if np.any(n2 <= 0):
        raise DegenerateMetric("||Phi||^2 <= 0")
    iso = np.abs(bilinear_dot(phi, phi))
    if np.any(iso > tol * _scale(phi) ** 2):
        raise NotIsothermal(f"|Phi^2| = {float(np.max(iso)):.3e}")
    coef = hermitian_dot(dphi, phi) / n2
    return dphi - coef[..., None] * phi
