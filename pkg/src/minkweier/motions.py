"""Motions of R^4_1: the spinor map SL(2,C) -> SO+(3,1), its action on the
polynomial data (g1, g2, f), and numerical congruence checks."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotCongruent, NotUnimodular, SingularMatrix
from .holo import Expr, Lit
from .mink4 import ETA
from .surface import chain_psi
from .weier import GForm, GFormCanonical, GridSpec, WeierData, affine, build_phi, to_expr

T_FLIP = np.diag([1.0, 1.0, 1.0, -1.0])
VARIANTS = ("orthochronous-proper", "non-orthochronous-proper",
            "orthochronous-improper", "non-orthochronous-improper")


def s_matrix(x):
    """Hermitian 2x2 encoding of x (complex-linear extension for complex x)."""
    x = np.asarray(x, dtype=complex)
    x1, x2, x3, x4 = (x[..., k] for k in range(4))
    return np.stack([np.stack([x3 + x4, 1j * x1 + x2], -1),
                     np.stack([-1j * x1 + x2, -x3 + x4], -1)], -2)


def s_matrix_inv(s):
    s = np.asarray(s, dtype=complex)
    a, b, c, d = s[..., 0, 0], s[..., 0, 1], s[..., 1, 0], s[..., 1, 1]
    return np.stack([(b - c) / 2j, (b + c) / 2, (a - d) / 2, (a + d) / 2], -1)


def sl2(B):
    """B / sqrt(det B) with the principal square root."""
    B = np.asarray(B, dtype=complex).reshape(2, 2)
    det = np.linalg.det(B)
    if abs(det) < 1e-14 * max(1.0, np.max(np.abs(B)) ** 2):
        raise SingularMatrix("matrix is singular")
    return B / np.sqrt(det)


@dataclass(frozen=True)
class SO31:
    matrix: np.ndarray
    residual: float = 0.0

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)

    @property
    def proper(self) -> bool:
        return bool(np.linalg.det(self.matrix) > 0)

    @property
    def orthochronous(self) -> bool:
        return bool(self.matrix[3, 3] >= 1 - 1e-9)

    def lorentz_defect(self) -> float:
        A = self.matrix
        return float(np.max(np.abs(A.T @ np.diag(ETA) @ A - np.diag(ETA))))

    def __matmul__(self, other):
        return SO31(self.matrix @ np.asarray(other))


def spinor_to_so31(At) -> SO31:
    At = np.asarray(At, dtype=complex)
    if abs(np.linalg.det(At) - 1) > 1e-12 * max(1.0, np.max(np.abs(At)) ** 2):
        raise NotUnimodular(f"det = {np.linalg.det(At)}")
    images = At @ s_matrix(np.eye(4)) @ At.conj().T
    cols = s_matrix_inv(images)
    return SO31(np.real(cols).T.copy())


def _adj(m):
    return np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]])


def so31_to_spinor(A):
    """An element of SL(2,C) mapping to the proper orthochronous A (sign ambiguous)."""
    A = np.asarray(A, dtype=float)
    basis = s_matrix(np.eye(4))
    best = None
    # each candidate gives a multiple of the spinor weighted by one of its
    # entries; the largest is the best conditioned
    for Y in (np.eye(2), *np.eye(4).reshape(4, 2, 2)):
        M = sum(ETA[k] * s_matrix(A[:, k]) @ Y @ _adj(basis[k]) for k in range(4))
        if best is None or np.linalg.norm(M) > np.linalg.norm(best):
            best = M
    return sl2(best)


def decompose(A):
    """(B, variant) with motion_matrix(B, variant) = A."""
    A = SO31(np.asarray(A, dtype=float))
    variant = ("orthochronous" if A.orthochronous else "non-orthochronous") + \
        ("-proper" if A.proper else "-improper")
    base = A.matrix
    if _flips_sign(variant):
        base = -base
    if not A.proper:
        base = T_FLIP @ base
    return mobius_from_spinor(so31_to_spinor(base)), variant


def _flips_sign(variant):
    # -I reverses time; the x4 reflection T is itself non-orthochronous
    return variant in ("non-orthochronous-proper", "orthochronous-improper")


def _check_variant(variant):
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")


def motion_matrix(B, variant="orthochronous-proper") -> SO31:
    """The Lorentz matrix realized by mobius_act(., B, variant)."""
    _check_variant(variant)
    a, b, c, d = sl2(B).ravel()
    At = np.array([[np.conj(a), -np.conj(b)], [-np.conj(c), np.conj(d)]])
    A = spinor_to_so31(At).matrix
    if variant.endswith("improper"):
        A = T_FLIP @ A
    if _flips_sign(variant):
        A = -A
    return SO31(A)


def mobius_from_spinor(At):
    """The matrix B = (a, b; c, d) whose spinor is (conj a, -conj b; -conj c, conj d)."""
    At = np.asarray(At, dtype=complex)
    return np.array([[np.conj(At[0, 0]), -np.conj(At[0, 1])], [-np.conj(At[1, 0]), np.conj(At[1, 1])]])


def _affine_expr(p, g: Expr, q) -> Expr:
    """p g + q without trivial terms."""
    p, q = complex(p), complex(q)
    term = g if p == 1 else Lit(0) if p == 0 else Lit(p) * g
    if q == 0:
        return term
    return Lit(q) if p == 0 else term + Lit(q)


def _ratio(num, den):
    if den == Lit(1):
        return num
    return num / den


def mobius_act(g1, g2, B, variant="orthochronous-proper"):
    """(g1^, g2^, factor) with f^ = f * factor for the motion given by B."""
    _check_variant(variant)
    g1, g2 = to_expr(g1), to_expr(g2)
    a, b, c, d = sl2(B).ravel()
    cg1d = _affine_expr(c, g1, d)
    bg2a = _affine_expr(-np.conj(b), g2, np.conj(a))
    h1 = _ratio(_affine_expr(a, g1, b), cg1d)
    h2 = _ratio(_affine_expr(np.conj(d), g2, -np.conj(c)), bg2a)
    factor = cg1d * bg2a if (cg1d, bg2a) != (Lit(1), Lit(1)) else Lit(1)
    if variant.endswith("improper"):
        h1, h2 = h2, h1
    if _flips_sign(variant):
        factor = -factor
    return h1, h2, factor


def apply_motion(w: WeierData, B, variant="orthochronous-proper") -> WeierData:
    """The transformed representation.  For canonical data the implied f
    absorbs the factor up to the sign of its square root; the sign flip of the
    non-orthochronous variants is carried by a constant factor."""
    if isinstance(w, GForm):
        h1, h2, factor = mobius_act(w.g1, w.g2, B, variant)
        return GForm(w.f * factor, h1, h2, canonical=w.canonical)
    if isinstance(w, GFormCanonical):
        h1, h2, _ = mobius_act(w.g1, w.g2, B, variant)
        out = GFormCanonical(h1, h2)
        return affine(out, 1, 0, -1) if _flips_sign(variant) else out
    raise TypeError(f"motions act on polynomial forms, not {w.form}")


def verify_congruence(w1: WeierData, w2: WeierData, grid: GridSpec, tol=1e-7, positions=True):
    """(A, b) with x2 = A x1 + b, fitted on Phi over the grid nodes.

    The maximal residual |Phi2 - A Phi1| is kept in ``A.residual``.
    """
    T = grid.nodes().ravel()
    if T.size < 4:
        raise ValueError("need at least 4 nodes (8 real samples)")
    P1, P2 = build_phi(w1, T)[0], build_phi(w2, T)[0]
    X = np.concatenate([P1.real, P1.imag])
    Y = np.concatenate([P2.real, P2.imag])
    At, *_ = np.linalg.lstsq(X, Y, rcond=None)
    A = At.T
    scale = max(1.0, float(np.max(np.abs(P1))), float(np.max(np.abs(P2))))
    residual = float(np.max(np.abs(P2 - P1 @ A.T)))
    if residual > tol * scale:
        raise NotCongruent(residual)
    M = SO31(A, residual)
    defect = M.lorentz_defect()
    if defect > 1e-6:
        raise NotCongruent(defect, "fitted map is not a Lorentz transformation")
    b = np.zeros(4)
    if positions:
        x1 = chain_psi(w1, grid).real.reshape(-1, 4)
        x2 = chain_psi(w2, grid).real.reshape(-1, 4)
        diff = x2 - x1 @ A.T
        b = diff.mean(axis=0)
        pres = float(np.max(np.abs(diff - b)))
        if pres > tol * max(1.0, float(np.max(np.abs(x1))), float(np.max(np.abs(x2)))):
            raise NotCongruent(pres, "positions do not match")
    return M, b
