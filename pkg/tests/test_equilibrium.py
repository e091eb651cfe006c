import math

import numpy as np
import pytest
from scipy.integrate import dblquad

from dunkl_lab import equilibrium
from dunkl_lab.equilibrium import (
    cm_gradient_identity_residual,
    fke_residual,
    gaussian_steady_approx,
    peak_set,
    potential,
    potential_b_tilde,
    steady_state_logdensity,
    weyl_orbit,
    weyl_order,
)
from dunkl_lab.orthopoly import hermite_zeros, laguerre_zeros
from dunkl_lab.rootsys import (
    TYPE_A,
    TYPE_B,
    RootSystemConfig,
    freezing_constant,
    gamma,
    log_selberg_const,
)


def _rand_interior(cfg, rng, spread=2.0):
    while True:
        v = np.sort(rng.uniform(0.2 if cfg.kind == TYPE_B else -spread, spread,
                                size=cfg.n))
        if np.min(np.diff(v)) > 0.15 if cfg.n > 1 else True:
            return v


@pytest.mark.parametrize("kind,nu", [(TYPE_A, None), (TYPE_B, 0.5), (TYPE_B, 2.5)])
def test_potential_derivatives_match_finite_differences(kind, nu):
    cfg = RootSystemConfig(kind, 4, 2.0, nu=nu)
    rng = np.random.default_rng(3)
    v = _rand_interior(cfg, rng)
    val, grad, hess = potential(cfg, v)
    h = 1e-6
    for i in range(4):
        e = np.zeros(4)
        e[i] = h
        vp, gp, _ = potential(cfg, v + e)
        vm, gm, _ = potential(cfg, v - e)
        assert grad[i] == pytest.approx((vp - vm) / (2 * h), rel=1e-6, abs=1e-6)
        assert np.allclose(hess[:, i], (gp - gm) / (2 * h), rtol=1e-5, atol=1e-5)


def test_potential_rejects_wall_points():
    cfg = RootSystemConfig(TYPE_A, 2, 2.0)
    with pytest.raises(ValueError):
        potential(cfg, np.array([1.0, 1.0]))


@pytest.mark.parametrize("n", [1, 2, 5, 10, 20])
def test_peak_set_type_a_is_hermite_zero_set(n):
    rep = peak_set(RootSystemConfig(TYPE_A, n, 2.0))
    assert np.max(np.abs(rep.minimizer - hermite_zeros(n).zeros)) < 1e-9
    assert rep.identity_residuals["potential_minus_constant"] < 1e-9
    assert rep.identity_residuals["sq_norm_minus_gamma"] < 1e-9


@pytest.mark.parametrize("n", [1, 3, 8, 15])
@pytest.mark.parametrize("nu", [0.5, 1.0, 2.5])
def test_peak_set_type_b_is_sqrt_laguerre_zero_set(n, nu):
    rep = peak_set(RootSystemConfig(TYPE_B, n, 2.0, nu=nu))
    oracle = np.sqrt(laguerre_zeros(n, nu - 0.5).zeros)
    assert np.max(np.abs(rep.minimizer - oracle)) < 1e-9
    assert rep.identity_residuals["potential_minus_constant"] < 1e-9
    assert rep.identity_residuals["sq_norm_minus_gamma"] < 1e-9


def test_log_discriminant_identities():
    for n in range(2, 21):
        h = hermite_zeros(n).zeros
        lhs = 2 * sum(math.log(abs(h[j] - h[i]))
                      for i in range(n) for j in range(i + 1, n))
        rhs = sum(i * math.log(i) for i in range(1, n + 1)) \
            - n / 2 * (n - 1) * math.log(2)
        assert lhs == pytest.approx(rhs, abs=1e-9)
        a = 1.5
        l = laguerre_zeros(n, a).zeros
        assert float(np.sum(np.log(l))) == pytest.approx(
            sum(math.log(a + i) for i in range(1, n + 1)), abs=1e-9)
        lhs2 = 2 * sum(math.log(abs(l[j] - l[i]))
                       for i in range(n) for j in range(i + 1, n))
        rhs2 = sum((i - 1) * math.log(a + i) + i * math.log(i)
                   for i in range(1, n + 1))
        assert lhs2 == pytest.approx(rhs2, abs=1e-9)


def test_potential_b_tilde():
    val, grad = potential_b_tilde(np.ones(4))
    assert val == pytest.approx(0.0)
    assert np.allclose(grad, 0.0)
    val2, grad2 = potential_b_tilde(np.array([2.0]))
    assert val2 == pytest.approx(2.0 - math.log(2.0) - 0.5)
    assert grad2[0] == pytest.approx(1.5)
    with pytest.raises(ValueError):
        potential_b_tilde(np.array([-1.0, 1.0]))


def test_steady_state_chamber_mass_closed_form():
    # the chamber integral of the density has the exact value
    #   N! (beta/2pi)^{N/2} e^{beta K} beta^{-(N+beta*gamma)/2} c_beta / |W|
    cfg = RootSystemConfig(TYPE_A, 2, 2.0)
    val, _ = dblquad(
        lambda y, x: math.exp(steady_state_logdensity(cfg, np.array([x, y]))),
        -8, 8, lambda x: x, lambda x: 8)
    b, g = cfg.beta, gamma(cfg)
    expected = math.exp(
        math.lgamma(cfg.n + 1) + cfg.n / 2 * math.log(b / (2 * math.pi))
        + b * freezing_constant(cfg) - (cfg.n + b * g) / 2 * math.log(b)
        + log_selberg_const(cfg) - math.log(weyl_order(cfg)))
    assert val == pytest.approx(expected, rel=1e-6)


def test_steady_state_reflection_symmetry():
    cfg = RootSystemConfig(TYPE_A, 3, 4.0)
    v = np.array([-0.8, 0.1, 1.2])
    base = steady_state_logdensity(cfg, v)
    for img in weyl_orbit(cfg, v):
        assert steady_state_logdensity(cfg, img) == pytest.approx(base, abs=1e-10)
    cfgb = RootSystemConfig(TYPE_B, 2, 2.0, nu=1.0)
    vb = np.array([0.4, 1.1])
    baseb = steady_state_logdensity(cfgb, vb)
    assert steady_state_logdensity(cfgb, np.array([-0.4, 1.1])) == pytest.approx(
        baseb, abs=1e-10)


def test_weyl_orbit_and_order():
    cfg = RootSystemConfig(TYPE_A, 3, 2.0)
    assert weyl_order(cfg) == 6
    assert weyl_orbit(cfg, np.array([1.0, 2.0, 3.0])).shape == (6, 3)
    cfgb = RootSystemConfig(TYPE_B, 2, 2.0, nu=0.5)
    assert weyl_order(cfgb) == 8
    assert weyl_orbit(cfgb, np.array([1.0, 2.0])).shape == (8, 2)


def test_gaussian_steady_approx_mass_large_beta():
    # at beta = 20 the sum-of-Gaussians approximation integrates to ~1
    cfg = RootSystemConfig(TYPE_A, 2, 20.0)
    val, _ = dblquad(
        lambda y, x: gaussian_steady_approx(cfg, np.array([x, y])),
        -3, 3, lambda x: -3.0, lambda x: 3.0)
    assert val == pytest.approx(1.0, rel=0.02)


def test_gaussian_steady_matches_exact_density_at_large_beta():
    # the two objects carry different normalizations: the approximation has
    # unit mass on R^N while the steady form uses the N!(beta/2pi)^{N/2}
    # prefactor, so their pointwise ratio is N! |W| / sqrt(det H)
    cfg = RootSystemConfig(TYPE_A, 2, 200.0)
    s = peak_set(cfg).minimizer
    _, _, hess = potential(cfg, s)
    ratio = math.factorial(2) * weyl_order(cfg) / math.sqrt(np.linalg.det(hess))
    for dv in (0.0, 0.03, -0.05):
        v = s + dv
        approx = gaussian_steady_approx(cfg, v)
        exact = math.exp(steady_state_logdensity(cfg, v))
        assert approx * ratio == pytest.approx(exact, rel=0.05)


def test_fke_residual_vanishes_on_steady_state():
    rng = np.random.default_rng(42)
    for kind, nu in ((TYPE_A, None), (TYPE_B, 0.5)):
        cfg = RootSystemConfig(kind, 2, 2.0, nu=nu)
        fn = lambda v, c=cfg: steady_state_logdensity(c, v)  # noqa: E731
        for _ in range(4):
            v = _rand_interior(cfg, rng, spread=1.5)
            r = fke_residual(cfg, fn, v)
            assert abs(r.value) <= 1e-4 * r.term_scale


def test_fke_residual_n1_ornstein_uhlenbeck():
    cfg = RootSystemConfig(TYPE_A, 1, 3.0)
    fn = lambda v: -cfg.beta * float(v[0]) ** 2 / 2.0  # noqa: E731
    r = fke_residual(cfg, fn, np.array([0.6]))
    assert abs(r.value) <= 1e-6 * r.term_scale


def test_fke_residual_rejects_wrong_density():
    # a Gaussian without the interaction weight is far from stationary
    cfg = RootSystemConfig(TYPE_A, 2, 2.0)
    fn = lambda v: -cfg.beta * float(v @ v) / 2.0  # noqa: E731
    r = fke_residual(cfg, fn, np.array([-0.5, 0.7]))
    assert abs(r.value) >= 1e-2 * r.term_scale


def test_fke_residual_boundary_margin_error():
    cfg = RootSystemConfig(TYPE_A, 2, 2.0)
    fn = lambda v: steady_state_logdensity(cfg, v)  # noqa: E731
    with pytest.raises(ValueError):
        fke_residual(cfg, fn, np.array([0.0, 1e-6]))


def test_cm_gradient_identity():
    # hand value: type A, N=2, v=(0,1), beta=2: |grad F|^2 = 1
    cfg = RootSystemConfig(TYPE_A, 2, 2.0)
    assert cm_gradient_identity_residual(cfg, np.array([0.0, 1.0])) < 1e-12
    rng = np.random.default_rng(9)
    for kind, nu in ((TYPE_A, None), (TYPE_B, 1.5)):
        c = RootSystemConfig(kind, 3, 2.5, nu=nu)
        for _ in range(5):
            v = _rand_interior(c, rng)
            assert cm_gradient_identity_residual(c, v) < 1e-8
