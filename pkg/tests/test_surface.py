import warnings

import numpy as np
import pytest

from minkweier import mink4
from minkweier.checks import local_gradient, local_laplacian, run_suite
from minkweier.errors import ConditionViolated, NotCanonical, QuadratureFailure
from minkweier.surface import (
    chain_psi, curvature_routes, curvatures_gform, curvatures_gform_canonical, curvatures_phi,
    curvatures_theta, gauss_bivector, integrate_psi, integrate_segments, nu_mu, sample, zero_order,
)
from minkweier.holo import parse_expr
from minkweier.weier import GForm, GFormCanonical, GridSpec, Hyperbolic, build_phi, convert

EXP = GFormCanonical("exp(t)", "exp(t)")


def _jets(*texts, t=0j):
    return [parse_expr(x).jet(t) for x in texts]


def test_quadrature_polynomial_exact():
    vals = integrate_segments(lambda t: (t**3)[..., None], [0j], [1 + 1j])
    assert abs(vals[0, 0] - (1 + 1j) ** 4 / 4) < 1e-14


def test_quadrature_failure():
    with pytest.raises(QuadratureFailure):
        integrate_segments(lambda t: (np.abs(t - 0.3) ** -0.5)[..., None], [0j], [1 + 0j], max_level=3)


def test_psi_exp_closed_form():
    # Psi(t) = int (i(e^2t + 1)/2 e^-t ..) for canonical g1 = g2 = e^t is elementary
    t = 0.7 + 0.4j
    psi = integrate_psi(EXP, 0j, t)
    x = psi.real
    u, v = t.real, t.imag
    want = np.array([-np.cosh(u) * np.sin(v), np.cosh(u) * np.cos(v) - 1, u, 0])
    assert np.allclose(x, want, atol=1e-12)


def test_anchor_values_by_routes():
    # E = 1/4, K = -16, kappa = 0 for g1 = g2 = t at 0; three routes
    phi, dphi = build_phi(GFormCanonical("t", "t"), np.array([0j]))
    assert np.allclose(curvatures_phi(phi, dphi), [[0.25], [-16], [0]], atol=1e-12)
    g1, g2 = _jets("t", "t")
    assert np.allclose(curvatures_gform_canonical(g1, g2), [0.25, -16, 0], atol=1e-12)
    assert abs(gauss_bivector(phi, dphi)[0] + 16) < 1e-12


def test_gform_route_exp():
    f, g1, g2 = _jets("exp(-t)/2", "exp(t)", "exp(t)")
    assert np.allclose(curvatures_gform(f, g1, g2), [1, -1, 0], atol=1e-12)


def test_theta_route_degenerate_example():
    # h1 = h2 = t: theta = t and theta_u^2 + theta_v^2 = 0
    h1, h2 = _jets("t", "t", t=0.3 + 0.2j)
    E, K, kappa = curvatures_theta(parse_expr("1").jet(0.3 + 0.2j), h1, h2)
    assert abs(K) < 1e-15 and abs(kappa) < 1e-15
    assert abs(E - abs(np.cosh(0.3 + 0.2j)) ** 2) < 1e-14


def test_route_equivalence_hyperbolic():
    w = convert(EXP, "hyperbolic")
    grid = GridSpec(-0.5, 0.5, -0.5, 0.5, 5, 5)
    r = curvature_routes(w, grid.nodes(), grid)
    E0, K0, k0 = curvatures_phi(*build_phi(EXP, grid.nodes()))
    for E, K, k in r.values():
        assert np.allclose(K, K0, rtol=1e-9) and np.allclose(E, E0, rtol=1e-9)


def test_nu_mu():
    phi, dphi = build_phi(GFormCanonical("t + 0.1", "0.5*t^2 + 2*t + 0.2"), np.array([0.1 + 0.2j, -0.2 + 0.1j]))
    E, K, kappa = curvatures_phi(phi, dphi)
    nu, mu = nu_mu(phi, dphi, kappa)
    assert np.all(nu >= 0)
    assert np.allclose(-nu**2 + mu**2, K, rtol=1e-10)
    assert np.allclose(2 * nu * mu, kappa, rtol=1e-10)
    assert np.allclose(1 / np.sqrt(nu**2 + mu**2), E, rtol=1e-10)
    # |kappa| = 4 sqrt(1 - |Phi'perp|^4) / |Phi|^4, away from kappa = 0
    pn = mink4.norm_sq(mink4.normal_project(phi, dphi))
    assert np.allclose(4 * np.sqrt(1 - pn**2) / mink4.norm_sq(phi) ** 2, np.abs(kappa), rtol=1e-8)


def test_nu_mu_requires_canonical():
    phi, dphi = build_phi(GForm(1, "t", "t"), np.array([0.1j]))
    with pytest.raises(NotCanonical):
        nu_mu(phi, dphi)


def test_nu_mu_no_warning_on_roundoff():
    phi, dphi = build_phi(EXP, GridSpec(-1, 1, -1, 1, 7, 7).nodes())
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        nu, mu = nu_mu(phi, dphi)
    assert np.all(mu == 0) or np.max(np.abs(mu)) < 1e-7


def test_zero_order():
    assert zero_order(lambda z: z**3, 0j, 1e-3) == 3
    assert zero_order(lambda z: z - 0.5, 0.5 + 0j, 1e-3) == 1


def test_sample_fields():
    grid = GridSpec(-1, 1, -1, 1, 5, 3)
    sg = sample(EXP, grid)
    assert sg.x.shape == (3, 5, 4) and sg.E.shape == (3, 5)
    assert np.all(sg.x[0, 0] == 0)
    assert sg.nu is not None and not np.any(sg.degenerate)
    sg2 = sample(GForm(1, "t", "t + 3"), GridSpec(0, 1, 0, 1, 3, 3))
    assert sg2.nu is None and sg2.mu is None


def test_sample_t0_shift():
    grid = GridSpec(-1, 1, -1, 1, 5, 5)
    sg = sample(EXP, grid, t0=0j)
    assert np.max(np.abs(sg.x[2, 2])) < 1e-14


def test_sample_rejects_invalid():
    with pytest.raises(ConditionViolated):
        sample(GForm(1, "t", "-1/t"), GridSpec(0.5, 1, -1, 1, 3, 3))


def test_path_independence():
    w = GForm("exp(t)", "t + 2", "t^2 - 3")
    a = integrate_psi(w, 0j, 1 + 0j) + integrate_psi(w, 1 + 0j, 1 + 1j)
    b = integrate_psi(w, 0j, 1j) + integrate_psi(w, 1j, 1 + 1j)
    assert np.max(np.abs(a - b)) < 1e-12


def test_chain_matches_direct():
    grid = GridSpec(-0.5, 0.5, -0.5, 0.5, 6, 4)
    w = GForm("exp(t)", "t + 2", "t^2 - 3")
    psi = chain_psi(w, grid)
    direct = np.array([integrate_psi(w, grid.corner, t) for t in grid.nodes().ravel()]).reshape(psi.shape)
    assert np.max(np.abs(psi - direct)) < 1e-12


def test_harmonic_and_gradient():
    w = GForm("exp(t)", "t + 2", "t^2 - 3")
    pts = np.array([0.1 + 0.1j, -0.3 + 0.2j])
    assert np.max(np.abs(local_laplacian(w, pts, 5e-4))) < 1e-5
    xu, xv = local_gradient(w, pts, 1e-3)
    phi, _ = build_phi(w, pts)
    assert np.allclose(xu, phi.real, atol=1e-5) and np.allclose(xv, -phi.imag, atol=1e-5)


def test_report_suite_passes():
    checks = run_suite(EXP, GridSpec(-1, 1, -1, 1, 7, 7))
    assert all(c.passed is not False for c in checks), [c.line() for c in checks]
    names = {c.name for c in checks}
    assert {"isothermal", "bivector", "harmonic", "gradient", "path_independence",
            "degeneracy", "canonical_invariants", "route_gform", "route_theta"} <= names


def test_degeneracy_flag_matches_curvature():
    grid = GridSpec(-0.5, 0.5, -0.5, 0.5, 11, 11)
    sg = sample(GForm(1, "t^2", "t"), grid)
    flat = (np.abs(sg.K) < 1e-7) & (np.abs(sg.kappa) < 1e-7)
    assert np.array_equal(flat, sg.degenerate)
