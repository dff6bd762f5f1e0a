"""Invariants over randomly drawn Weierstrass data."""

import numpy as np
from hypothesis import assume, given, settings, strategies as st

from minkweier import mink4
from minkweier.checks import local_gradient, local_laplacian
from minkweier.holo import Apply, Lit, Var
from minkweier.motions import apply_motion, motion_matrix, s_matrix, sl2, spinor_to_so31
from minkweier.surface import curvature_routes, curvatures_phi, gauss_bivector, nu_mu
from minkweier.weier import GForm, GFormCanonical, GridSpec, Hyperbolic, Trig, WForm, build_phi, validate

GRID = GridSpec(-0.3, 0.3, -0.3, 0.3, 5, 5)
T = GRID.nodes()

coef = st.complex_numbers(max_magnitude=1.5, allow_nan=False, allow_infinity=False).map(
    lambda z: complex(round(z.real, 6), round(z.imag, 6)))


def poly(c0, c1, c2):
    return Lit(c2) * Var() ** 2 + Lit(c1) * Var() + Lit(c0)


polys = st.builds(poly, coef, coef, coef)
exps = polys.map(lambda p: Apply("exp", p))


def _valid(w):
    assume(validate(w, GRID).ok)
    # keep |Phi|^2 well away from the Euclidean |Phi|^2: the curvature
    # formulas divide by its cube and lose digits on nearly null Phi
    phi, _ = build_phi(w, T)
    assume(np.min(mink4.norm_sq(phi) / np.sum(np.abs(phi) ** 2, axis=-1)) > 0.05)
    return w


gforms = st.builds(GForm, exps, exps, exps).map(_valid)
anyform = st.one_of(
    st.builds(Trig, exps, polys, polys), st.builds(Hyperbolic, exps, polys, polys),
    st.builds(WForm, exps, polys, polys), gforms,
).map(_valid)
canonicals = st.builds(
    GFormCanonical, st.builds(lambda a, b: Lit(a) * Var() + Lit(b), coef, coef), exps,
).map(_valid)
matrices = st.tuples(*[coef] * 4).map(lambda v: np.array(v).reshape(2, 2))

SET = settings(max_examples=40, deadline=None)


def _rel(a, b):
    return np.max(np.abs(a - b) / (1 + np.abs(b)))


@given(anyform)
@SET
def test_isothermal(w):
    phi, _ = build_phi(w, T)
    scale = 1 + np.max(np.abs(phi)) ** 2
    assert np.max(np.abs(mink4.bilinear_dot(phi, phi))) <= 1e-12 * scale
    assert np.all(mink4.norm_sq(phi) > 0)


@given(gforms)
@SET
def test_route_equivalence(w):
    routes = curvature_routes(w, T, GRID)
    E, K, k = routes["phi"]
    for name in ("gform", "theta"):
        E2, K2, k2 = routes[name]
        assert _rel(K2, K) <= 1e-9 and _rel(k2, k) <= 1e-9 and _rel(E2, E) <= 1e-9


@given(anyform)
@SET
def test_bivector_gauss(w):
    phi, dphi = build_phi(w, T)
    assert _rel(gauss_bivector(phi, dphi), curvatures_phi(phi, dphi)[1]) <= 1e-10


@given(anyform)
@settings(max_examples=15, deadline=None)
def test_harmonic_and_gradient(w):
    pts = np.array([0j, 0.1 - 0.2j])
    phi, _ = build_phi(w, pts)
    scale = 1 + np.max(np.abs(phi))
    assert np.max(np.abs(local_laplacian(w, pts, 5e-4))) <= 1e-5 * scale
    xu, xv = local_gradient(w, pts, 1e-3)
    assert np.max(np.abs(xu - phi.real)) <= 1e-5 * scale
    assert np.max(np.abs(xv + phi.imag)) <= 1e-5 * scale


@given(canonicals)
@SET
def test_canonical_invariants(w):
    phi, dphi = build_phi(w, T)
    E, K, k = curvatures_phi(phi, dphi)
    nu, mu = nu_mu(phi, dphi, k)
    assert _rel(-nu**2 + mu**2, K) <= 1e-8
    assert _rel(2 * nu * mu, k) <= 1e-8
    assert _rel(1 / np.sqrt(nu**2 + mu**2), E) <= 1e-8
    pn = mink4.norm_sq(mink4.normal_project(phi, dphi))
    assert _rel(16 * (1 - pn**2) / mink4.norm_sq(phi) ** 4, k**2) <= 1e-8


@given(gforms, matrices)
@SET
def test_motion_invariance(w, B):
    assume(abs(np.linalg.det(B)) > 0.05)
    w2 = apply_motion(w, B)
    assume(validate(w2, GRID).ok)
    p0, d0 = build_phi(w, T)
    p1, d1 = build_phi(w2, T)
    A = motion_matrix(B).matrix
    assert np.max(np.abs(p1 - p0 @ A.T)) <= 1e-8 * (1 + np.max(np.abs(p1)))
    for q0, q1 in zip(curvatures_phi(p0, d0), curvatures_phi(p1, d1)):
        assert _rel(q1, q0) <= 1e-9


@given(matrices, matrices)
@settings(max_examples=100, deadline=None)
def test_homomorphism(B1, B2):
    assume(abs(np.linalg.det(B1)) > 0.05 and abs(np.linalg.det(B2)) > 0.05)
    A1, A2 = sl2(B1), sl2(B2)
    lhs = spinor_to_so31(A1 @ A2).matrix
    rhs = spinor_to_so31(A1).matrix @ spinor_to_so31(A2).matrix
    assert np.max(np.abs(lhs - rhs)) <= 1e-10 * max(1, np.max(np.abs(lhs)))


@given(matrices, st.tuples(*[st.floats(-3, 3)] * 4))
@settings(max_examples=100, deadline=None)
def test_det_preserved(B, x):
    assume(abs(np.linalg.det(B)) > 0.05)
    A = sl2(B)
    S = s_matrix(np.array(x))
    scale = max(1, np.max(np.abs(A)) ** 4 * max(1, np.max(np.abs(x)) ** 2))
    assert abs(np.linalg.det(A @ S @ A.conj().T) - np.linalg.det(S)) <= 1e-10 * scale
