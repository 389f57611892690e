import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hallsim import (GaugeTransform, LinkField, Params, SiteField, apply_gauge,
                     current_density, build_rectangle, link_divergence,
                     plaquette_curl, site_gradient)


def random_state(d, rng, scale=1.0):
    psi = SiteField(np.where(d.active,
                             rng.normal(size=(d.nx, d.ny)) * scale
                             + 1j * rng.normal(size=(d.nx, d.ny)) * scale, 0.0))
    a = LinkField(rng.normal(size=(d.nx - 1, d.ny)) * d.h_active,
                  rng.normal(size=(d.nx, d.ny - 1)) * d.v_active)
    return psi, a


def boundary_zero_lambda(d, rng, scale=1.0):
    lam = rng.normal(size=(d.nx, d.ny)) * scale
    lam[~d.active] = 0.0
    lam[d.boundary_mask] = 0.0
    return lam


def test_curl_of_zero_field(rect12):
    assert np.all(plaquette_curl(LinkField.zeros(rect12), rect12) == 0.0)


def test_curl_of_gradient_exact_integers(rect12):
    # integer-valued lambda: all link sums are exact in floating point,
    # so the lattice identity curl(grad) = 0 holds bit-exactly
    rng = np.random.default_rng(7)
    lam = rng.integers(-8, 8, size=(12, 12)).astype(float)
    g1, g2 = site_gradient(lam, rect12)
    assert np.all(plaquette_curl(LinkField(g1, g2), rect12) == 0.0)


def test_curl_of_gradient_roundoff(rect12, rng):
    lam = rng.normal(size=(12, 12))
    g1, g2 = site_gradient(lam, rect12)
    assert np.abs(plaquette_curl(LinkField(g1, g2), rect12)).max() < 1e-13


def test_curl_landau_gauge(rect12):
    b0 = 0.7
    a = LinkField.zeros(rect12)
    x = np.arange(rect12.nx)[:, None] * rect12.dx
    a.a2[:, :] = b0 * x * rect12.v_active
    curl = plaquette_curl(a, rect12)
    assert curl[rect12.plaq_active] == pytest.approx(b0, abs=1e-13)


def test_apply_gauge_identity(rect12, params, rng):
    psi, a = random_state(rect12, rng)
    g = GaugeTransform(np.zeros((12, 12)))
    a2, psi2 = apply_gauge(a, psi, g, rect12, params)
    assert np.array_equal(a2.a1, a.a1) and np.array_equal(a2.a2, a.a2)
    assert np.array_equal(psi2.values, psi.values)


def test_apply_gauge_constant_lambda(rect12, params, rng):
    psi, a = random_state(rect12, rng)
    g = GaugeTransform(np.full((12, 12), 1.3), boundary_constrained=False)
    a2, psi2 = apply_gauge(a, psi, g, rect12, params)
    assert np.abs(a2.a1 - a.a1).max() == 0.0
    assert np.abs(a2.a2 - a.a2).max() == 0.0
    phase = np.exp(1j * params.e * 1.3 / params.hbar)
    assert np.abs(psi2.values - phase * psi.values).max() < 1e-15


def test_apply_gauge_group_inverse(rect12, params, rng):
    psi, a = random_state(rect12, rng)
    lam = boundary_zero_lambda(rect12, rng)
    g_fwd = GaugeTransform(lam)
    g_bwd = GaugeTransform(-lam)
    a1, psi1 = apply_gauge(a, psi, g_fwd, rect12, params)
    a2, psi2 = apply_gauge(a1, psi1, g_bwd, rect12, params)
    assert np.abs(a2.a1 - a.a1).max() < 1e-13
    assert np.abs(a2.a2 - a.a2).max() < 1e-13
    assert np.abs(psi2.values - psi.values).max() < 1e-13


def test_boundary_constrained_transform_rejects_nonzero_boundary(rect12):
    lam = np.ones((12, 12))
    with pytest.raises(ValueError, match="boundary"):
        GaugeTransform(lam).validate(rect12)


def test_current_zero_for_real_constant(rect12, params):
    psi = SiteField(np.where(rect12.active, 0.37 + 0j, 0.0))
    j = current_density(psi, LinkField.zeros(rect12), rect12, params)
    assert np.all(j.j1 == 0.0) and np.all(j.j2 == 0.0)
    assert j.j0[rect12.active] == pytest.approx(params.e * 0.37 ** 2)


def test_current_plane_wave(params):
    # psi = exp(ikx): interior link current is (e hbar/mu dx) sin(k dx) |psi|^2,
    # which is (e hbar k/mu)|psi|^2 up to O(dx^2)
    d = build_rectangle(32, 8, 0.5, [])
    k = 0.3
    x = np.arange(d.nx)[:, None] * d.dx
    psi = SiteField(np.where(d.active, np.exp(1j * k * x) * np.ones((1, d.ny)), 0.0))
    j = current_density(psi, LinkField.zeros(d), d, params)
    exact = params.e * params.hbar / (params.mu * d.dx) * np.sin(k * d.dx)
    assert j.j1[10, 4] == pytest.approx(exact, rel=1e-12)
    continuum = params.e * params.hbar * k / params.mu
    assert abs(j.j1[10, 4] - continuum) <= continuum * (k * d.dx) ** 2 / 6 * 1.01


def test_current_constant_potential(rect12, params):
    # psi constant, a1 = A0: covariant difference gives
    # -(e hbar/mu dx) sin(e dx A0/hbar) |psi|^2 ~ -(e^2/mu) A0 |psi|^2
    a0 = 0.2
    psi = SiteField(np.where(rect12.active, 1.0 + 0j, 0.0))
    a = LinkField(np.full((11, 12), a0) * rect12.h_active, np.zeros((12, 11)))
    j = current_density(psi, a, rect12, params)
    exact = -params.e * params.hbar / (params.mu * rect12.dx) * np.sin(
        params.e * rect12.dx * a0 / params.hbar)
    assert j.j1[5, 5] == pytest.approx(exact, rel=1e-12)
    assert abs(j.j1[5, 5] + params.e ** 2 / params.mu * a0) < 2e-3


def test_current_is_real_and_zero_off_domain(params, rng):
    d = build_rectangle(16, 16, 1.0, [(6, 6, 3, 3)])
    psi = SiteField(np.where(d.active,
                             rng.normal(size=(16, 16)) + 1j * rng.normal(size=(16, 16)),
                             0.0))
    a = LinkField(rng.normal(size=(15, 16)) * d.h_active,
                  rng.normal(size=(16, 15)) * d.v_active)
    j = current_density(psi, a, d, params)
    assert j.j1.dtype == np.float64 and j.j2.dtype == np.float64
    assert np.all(j.j1[~d.h_active] == 0.0)
    assert np.all(j.j2[~d.v_active] == 0.0)
    assert np.all(j.j0[~d.active] == 0.0)


@given(seed=st.integers(0, 2 ** 31))
@settings(max_examples=25, deadline=None)
def test_gauge_invariance_of_observables(seed):
    d = build_rectangle(10, 10, 1.0, [])
    p = Params(sigma_h=1.0, dt=0.05)
    rng = np.random.default_rng(seed)
    psi, a = random_state(d, rng)
    lam = boundary_zero_lambda(d, rng, scale=2.0)
    a2, psi2 = apply_gauge(a, psi, GaugeTransform(lam), d, p)

    j = current_density(psi, a, d, p)
    j2 = current_density(psi2, a2, d, p)
    scale = max(np.abs(j.j1).max(), np.abs(j.j2).max(), 1e-30)
    assert np.abs(j.j1 - j2.j1).max() / scale < 1e-12
    assert np.abs(j.j2 - j2.j2).max() / scale < 1e-12
    assert np.abs(psi.density() - psi2.density()).max() < 1e-12 * max(
        psi.density().max(), 1e-30)

    c1 = plaquette_curl(a, d)
    c2 = plaquette_curl(a2, d)
    cs = max(np.abs(c1).max(), 1.0)
    assert np.abs(c1 - c2).max() / cs < 1e-12


def test_divergence_adjoint_identity(rect12, rng):
    # sum over sites of f * div(j) == -sum over links of grad(f) . j
    f = rng.normal(size=(12, 12)) * rect12.active
    j1 = rng.normal(size=(11, 12)) * rect12.h_active
    j2 = rng.normal(size=(12, 11)) * rect12.v_active
    div = link_divergence(j1, j2, rect12)
    g1, g2 = site_gradient(f, rect12)
    lhs = float((f * div).sum()) * rect12.dx ** 2
    rhs = -float((g1 * j1).sum() + (g2 * j2).sum()) * rect12.dx ** 2
    assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)
