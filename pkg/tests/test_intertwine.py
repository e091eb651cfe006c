import itertools
import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import hyp0f1

from dunkl_lab import intertwine, symfunc
from dunkl_lab.intertwine import (
    FrozenKernelParams,
    HyperSeriesParams,
    bessel_kernel,
    frozen_kernel,
    hyper_series,
    kernel_reproducing_check,
    linear_intertwiner,
    radial_transition_logdensity,
    sample_gaussian_weight,
    v_a_limit,
    v_a_on_monomial,
    v_b_limit_beta,
    v_b_limit_nu,
    v_b_on_monomial,
)
from dunkl_lab.rootsys import TYPE_A, TYPE_B, RootSystemConfig, gamma
from dunkl_lab.symfunc import gen_pochhammer, hook_c, hook_c_prime, partitions_of


def _coeff_distance(p, q):
    keys = set(p.coeffs) | set(q.coeffs)
    return max(
        abs(p.coeffs.get(k, 0.0) - q.coeffs.get(k, 0.0))
        / max(abs(q.coeffs.get(k, 0.0)), 1e-300)
        for k in keys
    )


def test_type_a_closed_form_degree_two():
    # image of m_(2) at any N: [(beta+2) m_(2) + 2 beta m_(11)] / (beta N + 2)
    for n, beta in ((3, 2.0), (4, 1.0), (5, 7.5)):
        got = symfunc.jack_to_monomial(v_a_on_monomial((2,), n, beta))
        assert got.coeffs[(2,)] == pytest.approx((beta + 2) / (beta * n + 2),
                                                 abs=1e-12)
        assert got.coeffs[(1, 1)] == pytest.approx(2 * beta / (beta * n + 2),
                                                   abs=1e-12)


def test_type_b_closed_form_degree_two():
    # squared-variable image of m_(2): [3(beta+2) m_(2) + 6 beta m_(11)] / D,
    # D = (beta(nu+N-1/2)+1)(beta(nu+N-1/2)+3)(beta N+2)
    for n, beta, nu in ((3, 2.0, 0.5), (2, 1.0, 1.5), (4, 3.0, 0.0)):
        got = symfunc.jack_to_monomial(v_b_on_monomial((2,), n, beta, nu))
        d = (beta * (nu + n - 0.5) + 1) * (beta * (nu + n - 0.5) + 3) * (beta * n + 2)
        assert got.coeffs[(2,)] == pytest.approx(3 * (beta + 2) / d, abs=1e-12)
        assert got.coeffs[(1, 1)] == pytest.approx(6 * beta / d, abs=1e-12)


def test_degree_preserved_and_identity_on_constants():
    p = v_a_on_monomial((), 3, 2.0)
    assert symfunc.jack_to_monomial(p).coeffs == {(): 1.0}
    for mu in symfunc.jack_to_monomial(v_a_on_monomial((2, 1), 3, 2.0)).coeffs:
        assert sum(mu) == 3


@pytest.mark.parametrize("lam", [(1,), (2,), (1, 1), (2, 1), (3, 1), (2, 2)])
def test_type_a_limit_convergence(lam):
    fin = symfunc.jack_to_monomial(v_a_on_monomial(lam, 3, 1e6))
    assert _coeff_distance(fin, v_a_limit(lam, 3)) < 1e-5


@pytest.mark.parametrize("lam", [(1,), (2,), (1, 1)])
def test_type_b_limit_convergence(lam):
    beta = 1e6
    fin = symfunc.jack_to_monomial(v_b_on_monomial(lam, 3, beta, 0.5))
    fin = symfunc.SymPoly(
        "monomial", {k: v * beta ** sum(lam) for k, v in fin.coeffs.items()}, 3)
    assert _coeff_distance(fin, v_b_limit_beta(lam, 3, 0.5)) < 1e-5


@pytest.mark.parametrize("lam", [(1,), (2,), (1, 1), (2, 1)])
@pytest.mark.parametrize("beta", [1.0, 2.0, 4.0])
def test_type_b_nu_limit_identity(lam, beta):
    # the large-nu limit, and its defining identity against the finite-nu image
    lim = v_b_limit_nu(lam, 3, beta)
    nu = 1e7
    fin = symfunc.jack_to_monomial(v_b_on_monomial(lam, 3, beta, nu))
    fin = symfunc.SymPoly(
        "monomial", {k: v * nu ** sum(lam) for k, v in fin.coeffs.items()}, 3)
    assert _coeff_distance(fin, lim) < 1e-5
    # and the closed form: ((2 lam)!/lam!) (2 beta)^{-|lam|} x type-A image
    base = symfunc.jack_to_monomial(v_a_on_monomial(lam, 3, beta))
    factor = 1.0
    for p in lam:
        factor *= math.factorial(2 * p) / math.factorial(p)
    factor /= (2.0 * beta) ** sum(lam)
    scaled = symfunc.SymPoly(
        "monomial", {k: factor * v for k, v in base.coeffs.items()}, 3)
    assert _coeff_distance(scaled, lim) < 1e-12


def test_filter_product_limit():
    beta = 1e8
    alpha = 2.0 / beta
    for n in (2, 3, 4):
        for d in (1, 2, 3, 4):
            for tau in partitions_of(d, n):
                v = hook_c(tau, alpha) / (
                    hook_c_prime(tau, alpha)
                    * gen_pochhammer(beta * n / 2.0, tau, alpha))
                if len(tau) == 1:
                    tgt = 1.0 / (n ** d * math.factorial(d))
                    assert abs(v - tgt) / tgt < 1e-6
                else:
                    assert abs(v) < 1e-6


def test_series_0f0_at_all_ones():
    rng = np.random.default_rng(1)
    x = rng.uniform(-1, 1, size=3)
    params = HyperSeriesParams(alpha=1.0, n_vars=3, max_degree=30)
    val, last = hyper_series(params, x, np.ones(3))
    assert val == pytest.approx(math.exp(float(x.sum())), abs=1e-10)
    assert last < 1e-12


def test_series_0f1_matches_scipy_n1():
    # N=1: 0F1(b; x y) against scipy's confluent limit function
    b = 1.7
    params = HyperSeriesParams(alpha=1.0, n_vars=1, max_degree=40, b=b)
    val, _ = hyper_series(params, np.array([0.8]), np.array([1.3]))
    assert val == pytest.approx(float(hyp0f1(b, 0.8 * 1.3)), rel=1e-12)


def test_kernel_type_a_beta2_determinant_formula():
    # at beta=2 the symmetrized kernel has the determinant closed form
    #   N! * prod_{k<N} k! * det(e^{x_i y_j}) / (Delta(x) Delta(y))
    cfg = RootSystemConfig(TYPE_A, 2, 2.0)
    x = np.array([0.3, 0.8])
    y = np.array([-0.4, 0.6])
    det = (math.exp(x[0] * y[0] + x[1] * y[1])
           - math.exp(x[0] * y[1] + x[1] * y[0]))
    expected = 2 * det / ((x[1] - x[0]) * (y[1] - y[0]))
    assert bessel_kernel(cfg, x, y) == pytest.approx(expected, rel=1e-10)


def test_kernel_degree_by_degree_expansion():
    # the symmetrized kernel expands as
    #   sum_mu N!/(mu! M(mu,N)) m_mu(y) [V m_mu](x);
    # check that against the Jack-series shells through total degree 4.
    from dunkl_lab.symfunc import multinomial_m, sympoly_eval, monomial_eval
    for n in (2, 3):
        beta = 2.0
        rng = np.random.default_rng(n)
        x = rng.uniform(-0.9, 0.9, size=n)
        y = rng.uniform(-0.9, 0.9, size=n)
        params = HyperSeriesParams(alpha=2.0 / beta, n_vars=n, max_degree=4)
        shells = intertwine._series_shells(params, x, y) * math.factorial(n)
        for deg in range(5):
            brute = 0.0
            for mu in partitions_of(deg, n):
                fact = 1.0
                for p in mu:
                    fact *= math.factorial(p)
                vx = sympoly_eval(v_a_on_monomial(mu, n, beta), x)
                brute += math.factorial(n) * monomial_eval(mu, y) * vx / (
                    fact * multinomial_m(mu, n))
            assert float(shells[deg]) == pytest.approx(brute, rel=1e-9, abs=1e-12)


def test_plain_exponential_symmetrization_expansion():
    # without the intertwining the classical identity holds:
    #   sum_rho e^{rho x . y} = sum_mu N!/(mu! M(mu,N)) m_mu(x) m_mu(y)
    from dunkl_lab.symfunc import multinomial_m, monomial_eval
    n = 3
    rng = np.random.default_rng(14)
    x = rng.uniform(-0.6, 0.6, size=n)
    y = rng.uniform(-0.6, 0.6, size=n)
    lhs = sum(math.exp(float(x[list(rho)] @ y))
              for rho in itertools.permutations(range(n)))
    rhs = 0.0
    for deg in range(40):
        for mu in partitions_of(deg, n):
            fact = 1.0
            for p in mu:
                fact *= math.factorial(p)
            rhs += math.factorial(n) * monomial_eval(mu, x) * monomial_eval(mu, y) \
                / (fact * multinomial_m(mu, n))
    assert lhs == pytest.approx(rhs, rel=1e-10)


def test_kernel_type_b_n1_closed_form():
    # N=1, nu=1/2, beta=2 -> b = 3/2 and 0F1(3/2; u) = sinh(2 sqrt u)/(2 sqrt u)
    cfg = RootSystemConfig(TYPE_B, 1, 2.0, nu=0.5)
    x, y = 0.7, 0.9
    u = (x * y) ** 2 / 4.0
    expected = 2 * math.sinh(2 * math.sqrt(u)) / (2 * math.sqrt(u))
    assert bessel_kernel(cfg, np.array([x]), np.array([y])) == pytest.approx(
        expected, rel=1e-12)


def test_kernel_symmetry_in_arguments():
    cfg = RootSystemConfig(TYPE_A, 3, 3.0)
    rng = np.random.default_rng(8)
    x = rng.uniform(-1, 1, 3)
    y = rng.uniform(-1, 1, 3)
    assert bessel_kernel(cfg, x, y) == pytest.approx(bessel_kernel(cfg, y, x),
                                                     rel=1e-12)
    # reflection invariance in each argument separately
    assert bessel_kernel(cfg, x[[1, 0, 2]], y) == pytest.approx(
        bessel_kernel(cfg, x, y), rel=1e-12)


def test_frozen_kernel_matches_series_at_large_beta():
    beta = 1e4
    # small arguments so the series in sqrt(beta) x stays inside degree 40
    for kind, nu in ((TYPE_A, None), (TYPE_B, 0.5)):
        cfg = RootSystemConfig(kind, 2, beta, nu=nu)
        x = np.array([0.05, 0.12]) if kind == TYPE_A else np.array([0.05, 0.12])
        y = np.array([-0.3, 0.4]) if kind == TYPE_A else np.array([0.3, 0.4])
        series = bessel_kernel(cfg, math.sqrt(beta) * x, y, max_degree=40)
        closed = frozen_kernel(FrozenKernelParams(cfg, "corrected"), x, y)
        assert closed == pytest.approx(series, rel=2e-2)
        exact = frozen_kernel(FrozenKernelParams(cfg, "exact_limit"), x, y)
        assert exact > 0.0


def test_frozen_kernel_n1_type_a():
    cfg = RootSystemConfig(TYPE_A, 1, 1e6)
    # no roots at N=1: the kernel is exactly exp(sqrt(beta) x y)
    v = frozen_kernel(FrozenKernelParams(cfg, "exact_limit"),
                      np.array([0.002]), np.array([0.5]))
    assert v == pytest.approx(math.exp(1e3 * 0.001), rel=1e-12)


def test_linear_intertwiner():
    cfg = RootSystemConfig(TYPE_A, 3, 2.0)
    m = linear_intertwiner(cfg).matrix
    # fixes the all-ones direction exactly
    assert np.allclose(m @ np.ones(3), np.ones(3))
    # contracts the root span by 1/(1 + beta gamma / rank)
    u = np.array([1.0, -1.0, 0.0])
    bg = cfg.beta * gamma(cfg)
    assert np.allclose(m @ u, u / (1 + bg / 2))
    cfgb = RootSystemConfig(TYPE_B, 3, 2.0, nu=0.5)
    mb = linear_intertwiner(cfgb).matrix
    assert np.allclose(mb, np.eye(3) / (1 + cfgb.beta * gamma(cfgb) / 3))


def test_transition_density_n1_type_a_gaussian():
    cfg = RootSystemConfig(TYPE_A, 1, 2.0)
    for (t, x0, y0) in ((1.0, 0.2, 0.5), (0.3, -1.0, 0.4)):
        ld = radial_transition_logdensity(cfg, t, np.array([y0]), np.array([x0]))
        assert ld.converged
        expected = -0.5 * math.log(2 * math.pi * t) - (y0 - x0) ** 2 / (2 * t)
        assert ld.value == pytest.approx(expected, abs=1e-10)


def test_transition_density_n1_type_b_mass():
    cfg = RootSystemConfig(TYPE_B, 1, 2.0, nu=0.5)
    f = lambda y: math.exp(radial_transition_logdensity(  # noqa: E731
        cfg, 0.5, np.array([y]), np.array([0.7])).value)
    val, _ = quad(f, 1e-9, 8.0, limit=100)
    assert val == pytest.approx(1.0, rel=1e-8)


def test_transition_density_marginal_matches_exact_density():
    # from a start near the origin the one-point function (sum of both
    # order-statistic marginals) must match the exact beta=2 density
    cfg = RootSystemConfig(TYPE_A, 2, 2.0)
    from dunkl_lab.orthopoly import density_a_exact
    t = 1.0
    x = np.array([-1e-4, 1e-4])
    for y0 in (-0.8, 0.3, 1.1):
        lo = quad(lambda z: math.exp(radial_transition_logdensity(
            cfg, t, np.array([min(z, y0), max(z, y0)]), x, max_degree=8).value),
            -7, 7, limit=80, points=[y0])[0]
        assert lo == pytest.approx(density_a_exact(2, t, np.array([y0]))[0],
                                   rel=1e-4)


def test_sample_gaussian_weight_moments():
    # for type A N=2 beta=2 (GUE x sqrt2 law): E|x|^2 = N + 2 gamma... check
    # against quadrature of the unnormalized density instead of a guess
    cfg = RootSystemConfig(TYPE_A, 2, 2.0)
    xs = sample_gaussian_weight(cfg, 40000, seed=3)
    assert xs.shape == (40000, 2)
    from scipy.integrate import dblquad
    num = dblquad(lambda y, x: (x * x + y * y) * (y - x) ** 2
                  * math.exp(-(x * x + y * y) / 2),
                  -9, 9, lambda x: x, lambda x: 9)[0]
    den = dblquad(lambda y, x: (y - x) ** 2 * math.exp(-(x * x + y * y) / 2),
                  -9, 9, lambda x: x, lambda x: 9)[0]
    got = float(np.einsum("ij,ij->i", xs, xs).mean())
    assert got == pytest.approx(num / den, rel=0.03)


def test_kernel_reproducing_small_sample():
    cfg = RootSystemConfig(TYPE_A, 2, 2.0)
    lhs, rhs, se = kernel_reproducing_check(
        cfg, np.array([0.2, 0.5]), np.array([-0.4, 0.1]),
        n_samples=30000, max_degree=20, seed=6)
    assert abs(lhs - rhs) <= 4 * se
    assert se < 0.1 * rhs
