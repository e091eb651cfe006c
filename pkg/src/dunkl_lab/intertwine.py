"""Intertwining operators on symmetric polynomials, their large-parameter
limits, generalized hypergeometric series of two vector arguments,
generalized Bessel (reflection-symmetrized exponential) kernels, frozen
kernel approximations, the radial transition density, and a Monte Carlo
check of the kernel-reproducing Gaussian integral.

Conventions: the Jack parameter is alpha = 2/beta.  Type-B objects live in
squared variables; a SymPoly returned by a type-B operation with partition
key tau stands for the monomial/Jack polynomial evaluated at
(x_1^2, ..., x_N^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.random import Generator, Philox

from . import symfunc
from .equilibrium import peak_set, weyl_order
from .rootsys import (
    TYPE_A,
    TYPE_B,
    RootSystemConfig,
    gamma,
    log_selberg_const,
    log_weight,
    rank,
)
from .symfunc import (
    SymPoly,
    gen_pochhammer,
    hook_c,
    hook_c_prime,
    jack_coeffs,
    multinomial_m,
    partitions_of,
)


@dataclass(frozen=True)
class HyperSeriesParams:
    alpha: float
    n_vars: int
    max_degree: int = 30
    b: float | None = None  # lower parameter; None selects the 0F0 series

    def __post_init__(self):
        if self.alpha <= 0:
            raise ValueError("alpha > 0 required")
        if self.max_degree < 0:
            raise ValueError("max_degree >= 0 required")


@dataclass(frozen=True)
class LinearIntertwiner:
    matrix: np.ndarray


@dataclass(frozen=True)
class FrozenKernelParams:
    cfg: RootSystemConfig
    epsilon_beta_mode: str = "exact_limit"  # or "corrected"

    def __post_init__(self):
        if self.epsilon_beta_mode not in ("exact_limit", "corrected"):
            raise ValueError("mode must be 'exact_limit' or 'corrected'")


def _fact_partition(lam):
    out = 1
    for p in lam:
        out *= math.factorial(p)
    return out


def _bessel_b_param(cfg):
    return cfg.beta * (cfg.nu + cfg.n - 0.5) / 2.0 + 0.5


# ---------------------------------------------------------------------------
# operators on monomial symmetric polynomials
# ---------------------------------------------------------------------------

def v_a_on_monomial(lam, n_vars: int, beta: float) -> SymPoly:
    """Intertwined image of m_lambda for the type-A system, Jack(2/beta) basis.

    coefficient on P_tau: lam! M(lam,N) (c_tau/c'_tau) u_{tau,lam}(alpha)
                          / (beta N / 2)_tau,   alpha = 2/beta,
    summed over |tau| = |lam|, l(tau) <= N.
    """
    lam = tuple(lam)
    if beta <= 0:
        raise ValueError("beta > 0 required")
    alpha = 2.0 / beta
    pref = _fact_partition(lam) * multinomial_m(lam, n_vars)
    coeffs = {}
    for tau in partitions_of(sum(lam), n_vars):
        u = jack_coeffs(tau, alpha, n_vars).coeffs.get(lam, 0.0)
        if u == 0.0:
            continue
        poch = gen_pochhammer(beta * n_vars / 2.0, tau, alpha)
        coeffs[tau] = pref * hook_c(tau, alpha) / hook_c_prime(tau, alpha) * u / poch
    return SymPoly("jack", coeffs, n_vars, alpha=alpha)


def v_b_on_monomial(lam, n_vars: int, beta: float, nu: float) -> SymPoly:
    """Intertwined image of m_lambda in squared variables, type-B system.

    Same structure as type A with prefactor (2 lam)! M(lam,N) / 2^{2|lam|}
    and the extra lower-parameter Pochhammer (beta(nu+N-1/2)/2 + 1/2)_tau.
    """
    lam = tuple(lam)
    if beta < 1 or nu < 0:
        raise ValueError("type B requires beta >= 1 and nu >= 0")
    alpha = 2.0 / beta
    b = beta * (nu + n_vars - 0.5) / 2.0 + 0.5
    pref = (
        _fact_partition(tuple(2 * p for p in lam))
        * multinomial_m(lam, n_vars)
        / 4.0 ** sum(lam)
    )
    coeffs = {}
    for tau in partitions_of(sum(lam), n_vars):
        u = jack_coeffs(tau, alpha, n_vars).coeffs.get(lam, 0.0)
        if u == 0.0:
            continue
        poch = gen_pochhammer(beta * n_vars / 2.0, tau, alpha) * gen_pochhammer(b, tau, alpha)
        coeffs[tau] = pref * hook_c(tau, alpha) / hook_c_prime(tau, alpha) * u / poch
    return SymPoly("jack", coeffs, n_vars, alpha=alpha)


def _power_sum_expansion(k: int, n_vars: int, scale: float) -> dict:
    """Monomial coefficients of scale * (x_1 + ... + x_N)^k."""
    out = {}
    for tau in partitions_of(k, n_vars):
        out[tau] = scale * math.factorial(k) / _fact_partition(tau)
    return out


def v_a_limit(lam, n_vars: int) -> SymPoly:
    """Large-beta limit: (M(lam,N)/N^{|lam|}) (sum x_j)^{|lam|}, monomial basis."""
    lam = tuple(lam)
    k = sum(lam)
    scale = multinomial_m(lam, n_vars) / float(n_vars) ** k
    return SymPoly("monomial", _power_sum_expansion(k, n_vars, scale), n_vars)


def v_b_limit_beta(lam, n_vars: int, nu: float) -> SymPoly:
    """Large-beta limit of beta^{|lam|} times the type-B image (squared vars):

    ((2 lam)! M(lam,N) / (2^{|lam|} lam! N^{|lam|} (nu+N-1/2)^{|lam|}))
        * (sum x_j^2)^{|lam|}.
    """
    lam = tuple(lam)
    k = sum(lam)
    scale = (
        _fact_partition(tuple(2 * p for p in lam))
        * multinomial_m(lam, n_vars)
        / (2.0**k * _fact_partition(lam) * float(n_vars) ** k
           * (nu + n_vars - 0.5) ** k)
    )
    return SymPoly("monomial", _power_sum_expansion(k, n_vars, scale), n_vars)


def v_b_limit_nu(lam, n_vars: int, beta: float) -> SymPoly:
    """Large-nu limit of nu^{|lam|} times the type-B image (squared vars):

    ((2 lam)!/lam!) times the type-A image evaluated at u = x^2/(2 beta);
    by homogeneity that is a uniform coefficient rescale by (2 beta)^{-|lam|}.
    """
    lam = tuple(lam)
    k = sum(lam)
    base = symfunc.jack_to_monomial(v_a_on_monomial(lam, n_vars, beta))
    factor = _fact_partition(tuple(2 * p for p in lam)) / _fact_partition(lam)
    factor /= (2.0 * beta) ** k
    return SymPoly(
        "monomial", {mu: factor * c for mu, c in base.coeffs.items()}, n_vars
    )


def linear_intertwiner(cfg: RootSystemConfig) -> LinearIntertwiner:
    """Action on linear polynomials as an N x N matrix.

    M = (1/(1 + beta gamma / d)) [ I + (beta gamma / d) P ], with d the root
    span dimension and P the orthogonal projector onto the complement of the
    root span (for type A the all-ones direction; empty for type B).
    """
    n = cfg.n
    d = rank(cfg)
    bg = cfg.beta * gamma(cfg)
    proj = np.zeros((n, n))
    if cfg.kind == TYPE_A:
        proj = np.full((n, n), 1.0 / n)
    m = (np.eye(n) + (bg / d) * proj) / (1.0 + bg / d)
    return LinearIntertwiner(matrix=m)


# ---------------------------------------------------------------------------
# hypergeometric series and kernels
# ---------------------------------------------------------------------------

def _series_shells(params: HyperSeriesParams, x, ybatch):
    """Per-degree shell values of the series, vectorized over ybatch (..., N).

    shell_d = sum over |tau| = d of
        (c_tau / c'_tau) P_tau(x) P_tau(y) / ((N/alpha)_tau [(b)_tau]).
    The tau sum is collapsed to monomial coefficients in y once per shell.
    """
    alpha, n, b = params.alpha, params.n_vars, params.b
    x = np.asarray(x, dtype=float)
    ybatch = np.asarray(ybatch, dtype=float)
    shells = np.zeros((params.max_degree + 1,) + ybatch.shape[:-1])
    for d in range(params.max_degree + 1):
        mu_coeffs: dict = {}
        for tau in partitions_of(d, n):
            jack = jack_coeffs(tau, alpha, n)
            p_x = sum(c * symfunc.monomial_eval(mu, x) for mu, c in jack.coeffs.items())
            w = hook_c(tau, alpha) / hook_c_prime(tau, alpha)
            w /= gen_pochhammer(n / alpha, tau, alpha)
            if b is not None:
                w /= gen_pochhammer(b, tau, alpha)
            w *= p_x
            if w == 0.0:
                continue
            for mu, c in jack.coeffs.items():
                mu_coeffs[mu] = mu_coeffs.get(mu, 0.0) + w * c
        val = np.zeros(ybatch.shape[:-1])
        for mu, c in mu_coeffs.items():
            val = val + c * symfunc.monomial_eval(mu, ybatch)
        shells[d] = val
    return shells


def hyper_series(params: HyperSeriesParams, x, y):
    """Truncated series value and the last-shell magnitude diagnostic.

    0F1 when params.b is set, 0F0 otherwise; callers should treat a last
    shell above ~1e-8 of the partial sum as unconverged.
    """
    shells = _series_shells(params, x, np.asarray(y, dtype=float))
    return float(shells.sum()), float(abs(shells[-1]))


def bessel_kernel(cfg: RootSystemConfig, x, y, max_degree: int = 30):
    """Reflection-symmetrized exponential kernel, including the group-order
    prefactor.

    Type A: N! 0F0^(2/beta)(x, y); type B: 2^N N! 0F1(b; x^2/2, y^2/2) with
    b = beta (nu + N - 1/2)/2 + 1/2.  y may be batched with shape (..., N).
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    alpha = 2.0 / cfg.beta
    if cfg.kind == TYPE_A:
        params = HyperSeriesParams(alpha=alpha, n_vars=cfg.n, max_degree=max_degree)
        shells = _series_shells(params, x, y)
        out = math.factorial(cfg.n) * shells.sum(axis=0)
    else:
        params = HyperSeriesParams(
            alpha=alpha, n_vars=cfg.n, max_degree=max_degree, b=_bessel_b_param(cfg)
        )
        shells = _series_shells(params, x * x / 2.0, y * y / 2.0)
        out = 2**cfg.n * math.factorial(cfg.n) * shells.sum(axis=0)
    return float(out) if out.ndim == 0 else out


def frozen_kernel(params: FrozenKernelParams, x, y) -> float:
    """Large-beta closed form of bessel_kernel(cfg, sqrt(beta) x, y).

    exact_limit drops all finite-beta corrections; corrected replaces gamma
    by gamma + eps_beta with the smooth quadratic-root form

        eps_beta = -gamma/2 + sqrt(gamma^2/4 + |x|^2 |y|^2 / beta),

    which interpolates the small-argument |x|^2|y|^2/(beta gamma) and
    large-argument |x||y|/sqrt(beta) regimes.
    """
    cfg = params.cfg
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    g = gamma(cfg)
    n = cfg.n
    if cfg.kind == TYPE_B:
        x2, y2 = float(x @ x), float(y @ y)
        eps = 0.0
        if params.epsilon_beta_mode == "corrected":
            eps = -g / 2.0 + math.sqrt(g * g / 4.0 + x2 * y2 / cfg.beta)
        return 2**n * math.factorial(n) * math.exp(x2 * y2 / (2 * (g + eps)))
    # type A: split off the all-ones direction (the root-span complement)
    sx, sy = float(x.sum()), float(y.sum())
    xpar2 = float(x @ x) - sx * sx / n
    ypar2 = float(y @ y) - sy * sy / n
    if params.epsilon_beta_mode == "exact_limit":
        if g == 0.0:  # N = 1: no roots, kernel is exactly the exponential
            return math.exp(math.sqrt(cfg.beta) * sx * sy / n)
        return math.factorial(n) * math.exp(xpar2 * ypar2 / (2 * g))
    eps = 0.0 if g == 0.0 else -g / 2.0 + math.sqrt(g * g / 4.0 + xpar2 * ypar2 / cfg.beta)
    quad = 0.0 if g + eps == 0.0 else xpar2 * ypar2 / (2 * (g + eps))
    return math.factorial(n) * math.exp(math.sqrt(cfg.beta) * sx * sy / n + quad)


@dataclass
class TransitionLogDensity:
    value: float
    last_shell_ratio: float
    converged: bool


def radial_transition_logdensity(cfg: RootSystemConfig, t: float, y, x,
                                 max_degree: int = 30) -> TransitionLogDensity:
    """Log transition density of the chamber-radial process from x to y in
    time t:

    log w(y/sqrt t) - (|y|^2+|x|^2)/2t - log c_beta - (N/2) log t
        + log( symmetrized kernel at (x, y/t) ).
    """
    if t <= 0:
        raise ValueError("t > 0 required")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    alpha = 2.0 / cfg.beta
    if cfg.kind == TYPE_A:
        params = HyperSeriesParams(alpha=alpha, n_vars=cfg.n, max_degree=max_degree)
        shells = _series_shells(params, x, y / t)
        kern = math.factorial(cfg.n) * float(shells.sum())
    else:
        params = HyperSeriesParams(alpha=alpha, n_vars=cfg.n,
                                   max_degree=max_degree, b=_bessel_b_param(cfg))
        shells = _series_shells(params, x * x / 2.0, (y / t) ** 2 / 2.0)
        kern = 2**cfg.n * math.factorial(cfg.n) * float(shells.sum())
    total = float(shells.sum())
    # truncation diagnostic: relative size of the top degree shell
    ratio = abs(float(shells[-1])) / max(abs(total), np.finfo(float).tiny)
    value = (
        log_weight(cfg, y / math.sqrt(t))
        - (float(y @ y) + float(x @ x)) / (2 * t)
        - log_selberg_const(cfg)
        - cfg.n / 2.0 * math.log(t)
        + math.log(kern)
    )
    return TransitionLogDensity(value=value, last_shell_ratio=ratio,
                                converged=ratio <= 1e-8)


# ---------------------------------------------------------------------------
# Gaussian-weight sampling and the kernel-reproducing Monte Carlo check
# ---------------------------------------------------------------------------

_ENVELOPE_VAR = 2.0


def _log_envelope_bound(cfg):
    """Tight bound on log[e^{-x^2/2} w(x)] - log[e^{-x^2/4}] over R^N.

    By homogeneity the maximum over directions is attained at the Fekete
    direction and the radial maximum is explicit: r*^2 = 2 beta gamma.
    """
    g = gamma(cfg)
    if g == 0.0:
        return 0.0
    bg = cfg.beta * g
    vstar = peak_set(cfg).minimizer
    return (
        bg / 2.0 * math.log(2.0 * bg)
        - bg / 2.0
        + log_weight(cfg, vstar)
        - bg / 2.0 * math.log(g)
    )


def sample_gaussian_weight(cfg: RootSystemConfig, n_samples: int, seed: int,
                           min_acceptance: float = 1e-3) -> np.ndarray:
    """Exact samples from the density e^{-|x|^2/2} w_beta(x) / c_beta on R^N
    by rejection from a centered Gaussian envelope with variance 2."""
    log_m = _log_envelope_bound(cfg)
    rng = Generator(Philox(key=int(seed)))
    out = []
    got, drawn = 0, 0
    batch = max(4096, min(1 << 17, 4 * n_samples))
    while got < n_samples:
        x = rng.normal(scale=math.sqrt(_ENVELOPE_VAR), size=(batch, cfg.n))
        log_ratio = -0.25 * np.einsum("ij,ij->i", x, x) + log_weight(cfg, x) - log_m
        keep = np.log(rng.random(batch)) < log_ratio
        drawn += batch
        acc = x[keep]
        out.append(acc)
        got += len(acc)
        if drawn >= 10 * batch and got / drawn < min_acceptance:
            raise RuntimeError(
                "rejection acceptance below 1e-3; reduce beta or N"
            )
    return np.concatenate(out, axis=0)[:n_samples]


def kernel_reproducing_check(cfg: RootSystemConfig, y, z, n_samples: int,
                             max_degree: int = 30, seed: int = 0):
    """Monte Carlo check of the Gaussian reproducing identity for the
    symmetrized kernel K(x, y) = bessel_kernel(cfg, x, y):

        (1/c_beta) int K(x,y) K(x,z) e^{-|x|^2/2} w(x) dx
            = |W| e^{(|y|^2+|z|^2)/2} K(y, z).

    Returns (lhs_estimate, rhs_value, std_error).
    """
    y = np.asarray(y, dtype=float)
    z = np.asarray(z, dtype=float)
    xs = sample_gaussian_weight(cfg, n_samples, seed)
    vals = np.empty(n_samples)
    step = 1 << 16
    for lo in range(0, n_samples, step):
        chunk = xs[lo:lo + step]
        vals[lo:lo + len(chunk)] = (
            bessel_kernel(cfg, y, chunk, max_degree=max_degree)
            * bessel_kernel(cfg, z, chunk, max_degree=max_degree)
        )
    lhs = float(vals.mean())
    se = float(vals.std(ddof=1) / math.sqrt(n_samples))
    rhs = (
        weyl_order(cfg)
        * math.exp((float(y @ y) + float(z @ z)) / 2.0)
        * bessel_kernel(cfg, y, z, max_degree=max_degree)
    )
    return lhs, rhs, se
