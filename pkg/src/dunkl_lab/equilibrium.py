"""Log-gas potentials, Fekete-point (peak set) solver, steady-state density,
Gaussian large-beta approximation, the stationary Fokker–Planck residual,
and the gradient identity connecting the potential to the leading
Calogero–Moser-type term.

The potential for type A is

    F(v) = |v|^2/2 - sum_{i<j} log|v_j - v_i|

and for type B

    F(v) = |v|^2/2 - (2 nu + 1)/2 sum log|v_i| - sum_{i<j} log|v_j^2 - v_i^2|.

Both are strictly convex on the chamber; the unique interior minimizer is
the Hermite zero set (A) or the elementwise square root of the Laguerre
zero set with parameter nu - 1/2 (B).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .rootsys import (
    TYPE_A,
    TYPE_B,
    NEG_INF,
    RootSystemConfig,
    freezing_constant,
    gamma,
    in_weyl_chamber,
    positive_roots,
)

_WEYL_CAP = {TYPE_A: 8, TYPE_B: 6}


@dataclass
class PotentialReport:
    minimizer: np.ndarray
    potential_at_min: float
    freezing_constant: float
    identity_residuals: dict = field(default_factory=dict)
    newton_iterations: int = 0


def _require_interior(cfg, v):
    if not in_weyl_chamber(cfg, v):
        raise ValueError("point is not strictly inside the Weyl chamber")


def potential(cfg: RootSystemConfig, v):
    """(value, gradient, hessian) of the log-gas potential at interior v."""
    v = np.asarray(v, dtype=float)
    _require_interior(cfg, v)
    n = cfg.n
    val = 0.5 * float(v @ v)
    grad = v.copy()
    hess = np.eye(n)
    if cfg.kind == TYPE_A:
        for i in range(n):
            for j in range(i):
                d = v[i] - v[j]
                val -= math.log(abs(d))
                grad[i] -= 1.0 / d
                grad[j] += 1.0 / d
                w = 1.0 / d**2
                hess[i, i] += w
                hess[j, j] += w
                hess[i, j] -= w
                hess[j, i] -= w
    else:
        nu = cfg.nu
        for i in range(n):
            val -= (2 * nu + 1) / 2.0 * math.log(abs(v[i]))
            grad[i] -= (2 * nu + 1) / (2.0 * v[i])
            hess[i, i] += (2 * nu + 1) / (2.0 * v[i] ** 2)
            for j in range(i):
                d2 = v[i] ** 2 - v[j] ** 2
                val -= math.log(abs(d2))
                grad[i] -= 2.0 * v[i] / d2
                grad[j] += 2.0 * v[j] / d2
                hess[i, i] += 2.0 * (v[i] ** 2 + v[j] ** 2) / d2**2
                hess[j, j] += 2.0 * (v[i] ** 2 + v[j] ** 2) / d2**2
                hess[i, j] -= 4.0 * v[i] * v[j] / d2**2
                hess[j, i] -= 4.0 * v[i] * v[j] / d2**2
    return val, grad, hess


def _initial_guess(cfg):
    n = cfg.n
    g = gamma(cfg)
    if cfg.kind == TYPE_A:
        if n == 1:
            return np.zeros(1)
        v = np.linspace(-1.0, 1.0, n)
        return v * math.sqrt(g / float(v @ v))
    # type B: square roots of equispaced points on (0, 2 sqrt(gamma)]
    pts = 2.0 * math.sqrt(g) * np.arange(1, n + 1) / n
    return np.sqrt(pts)


def peak_set(cfg: RootSystemConfig) -> PotentialReport:
    """Damped-Newton minimization of the potential from a chamber-interior start.

    Converges to the Fekete configuration; the report carries the exact
    freezing identities |F(v*) - K| and | |v*|^2 - gamma | as residuals.
    """
    v = _initial_guess(cfg)
    tol = 1e-12
    iters = 0
    prev_gnorm = math.inf
    for iters in range(1, 101):
        val, grad, hess = potential(cfg, v)
        gnorm = float(np.linalg.norm(grad))
        if gnorm <= tol * max(1.0, float(np.linalg.norm(v))):
            break
        if gnorm < 1e-8 and gnorm >= prev_gnorm:
            break  # gradient at its floating-point noise floor
        prev_gnorm = gnorm
        step = np.linalg.solve(hess, grad)
        if gnorm < 1e-6:
            # quadratic-convergence region: the objective decrease is below
            # float noise, so the Armijo test would stall; take the full step
            cand = v - step
            if in_weyl_chamber(cfg, cand):
                v = cand
                continue
        t = 1.0
        for _ in range(60):
            cand = v - t * step
            if in_weyl_chamber(cfg, cand):
                cand_val, _, _ = potential(cfg, cand)
                if cand_val <= val - 0.25 * t * float(grad @ step):
                    break
            t *= 0.5
        else:
            raise RuntimeError("Newton line search failed")
        v = v - t * step
    else:
        raise RuntimeError("Newton did not converge within 100 iterations")
    val, grad, _ = potential(cfg, v)
    k = freezing_constant(cfg)
    g = gamma(cfg)
    report = PotentialReport(
        minimizer=v,
        potential_at_min=val,
        freezing_constant=k,
        newton_iterations=iters,
    )
    report.identity_residuals = {
        "potential_minus_constant": abs(val - k),
        "sq_norm_minus_gamma": abs(float(v @ v) - g),
        "gradient_norm": float(np.linalg.norm(grad)),
    }
    return report


def potential_b_tilde(v):
    """Single-particle reduced potential for type B: (value, gradient).

    F~(v) = |v|^2/2 - (1/2) sum log v_i^2 - N/2; minimum 0 at v = (1,...,1).
    """
    v = np.asarray(v, dtype=float)
    if np.any(v <= 0):
        raise ValueError("all coordinates must be positive")
    n = len(v)
    val = 0.5 * float(v @ v) - float(np.sum(np.log(v))) - n / 2.0
    grad = v - 1.0 / v
    return val, grad


def steady_state_logdensity(cfg: RootSystemConfig, v) -> float:
    """Log of the scaled steady-state density (large-beta normalization).

    Type A: log[N! (beta/2pi)^{N/2}] - beta (F(v) - K);
    type B: log[N! (2 beta)^{N/2}] - beta (F(v) - K).
    Defined by reflection symmetry on all of R^N; -inf on chamber walls.
    """
    v = np.asarray(v, dtype=float)
    n, b = cfg.n, cfg.beta
    k = freezing_constant(cfg)
    # evaluate F through reflection-invariant absolute values so the density
    # extends symmetrically off the chamber (needed by the FKE reflections)
    val = 0.5 * float(v @ v)
    try:
        if cfg.kind == TYPE_A:
            pref = gammaln_int(n) + n / 2.0 * math.log(b / (2 * math.pi))
            for i in range(n):
                for j in range(i):
                    val -= math.log(abs(v[i] - v[j]))
        else:
            pref = gammaln_int(n) + n / 2.0 * math.log(2 * b)
            for i in range(n):
                val -= (2 * cfg.nu + 1) / 2.0 * math.log(abs(v[i]))
                for j in range(i):
                    val -= math.log(abs(v[i] ** 2 - v[j] ** 2))
    except ValueError:
        return NEG_INF
    return pref - b * (val - k)


def gammaln_int(n):
    return math.lgamma(n + 1)


def weyl_orbit(cfg: RootSystemConfig, s) -> np.ndarray:
    """All images of s under the reflection group: permutations (A) or
    signed permutations (B).  Capped at small N (factorial growth)."""
    s = np.asarray(s, dtype=float)
    if cfg.n > _WEYL_CAP[cfg.kind]:
        raise ValueError("Weyl orbit enumeration capped at small N")
    perms = np.array(list(itertools.permutations(s)))
    if cfg.kind == TYPE_A:
        return perms
    signs = np.array(list(itertools.product([1.0, -1.0], repeat=cfg.n)))
    return (signs[:, None, :] * perms[None, :, :]).reshape(-1, cfg.n)


def weyl_order(cfg: RootSystemConfig) -> int:
    return math.factorial(cfg.n) * (2**cfg.n if cfg.kind == TYPE_B else 1)


_PEAK_CACHE: dict = {}


def _cached_peak(cfg):
    key = (cfg.kind, cfg.n, cfg.nu)
    if key not in _PEAK_CACHE:
        _PEAK_CACHE[key] = peak_set(cfg)
    return _PEAK_CACHE[key]


def gaussian_steady_approx(cfg: RootSystemConfig, v) -> float:
    """Sum-of-Gaussians approximation of the steady state, valid at large beta.

    (beta^{N/2} sqrt(det H) / ((2 pi)^{N/2} |W|))
        * sum over the reflection orbit of the peak set s of
          exp(-beta (v - rho s)^T H (v - rho s) / 2),
    with H the potential Hessian at s.
    """
    v = np.asarray(v, dtype=float)
    n, b = cfg.n, cfg.beta
    rep = _cached_peak(cfg)
    s = rep.minimizer
    _, _, hess = potential(cfg, s)
    orbit = weyl_orbit(cfg, s)
    diffs = v[None, :] - orbit
    quad = np.einsum("ki,ij,kj->k", diffs, hess, diffs)
    sign, logdet = np.linalg.slogdet(hess)
    if sign <= 0:
        raise ArithmeticError("Hessian not positive definite at the peak set")
    pref = (
        n / 2.0 * math.log(b)
        + 0.5 * logdet
        - n / 2.0 * math.log(2 * math.pi)
        - math.log(weyl_order(cfg))
    )
    return float(np.exp(pref) * np.sum(np.exp(-b * quad / 2.0)))


@dataclass
class FkeResidual:
    value: float
    term_scale: float


def fke_residual(cfg: RootSystemConfig, logdensity_fn, v, h: float | None = None) -> FkeResidual:
    """Residual of the stationary scaled Fokker–Planck equation at v.

    For a time-independent density f the right-hand side

        (1/beta) Lap f
        - sum over positive roots alpha of kappa(alpha) *
            [ (alpha . grad f)/(alpha . v)
              - (|alpha|^2/2) (f(v) + f(sigma_alpha v)) / (alpha . v)^2 ]
        + v . grad f + N f

    must vanish; it is evaluated with central differences of step h
    (default 1e-4 * max(1, |v|)).  Returns the residual together with the
    magnitude of the largest constituent term, which sets the natural
    relative scale.
    """
    v = np.asarray(v, dtype=float)
    _require_interior(cfg, v)
    n = cfg.n
    if h is None:
        h = 1e-4 * max(1.0, float(np.linalg.norm(v)))
    # boundary margin: all stencil points must stay off the chamber walls
    roots, kappas = positive_roots(cfg)
    for alpha in roots:
        if abs(float(alpha @ v)) <= 2 * h:
            raise ValueError("insufficient margin to the chamber boundary")

    def f(pt):
        ld = logdensity_fn(pt)
        return 0.0 if ld == NEG_INF else math.exp(ld)

    f0 = f(v)
    grad = np.zeros(n)
    lap = 0.0
    for i in range(n):
        e = np.zeros(n)
        e[i] = h
        fp, fm = f(v + e), f(v - e)
        grad[i] = (fp - fm) / (2 * h)
        lap += (fp + fm - 2 * f0) / h**2
    terms = [lap / cfg.beta, float(v @ grad), n * f0]
    total = sum(terms)
    for alpha, kap in zip(roots, kappas):
        av = float(alpha @ v)
        refl = v - 2 * av / float(alpha @ alpha) * alpha
        t1 = -kap * float(alpha @ grad) / av
        t2 = kap * float(alpha @ alpha) / 2.0 * (f0 + f(refl)) / av**2
        terms.extend([t1, t2])
        total += t1 + t2
    return FkeResidual(value=total, term_scale=max(abs(t) for t in terms))


def cm_gradient_identity_residual(cfg: RootSystemConfig, v) -> float:
    """|  |grad F(v)|^2  -  ( |v|^2 - 2 gamma + sum |alpha|^2 kappa^2/(alpha.v)^2 ) |.

    The left side comes from the potential gradient, the right side from
    explicit root enumeration; the identity ties the log-gas potential to
    the leading inverse-square interaction term of the associated
    Calogero–Moser-type Hamiltonian.
    """
    v = np.asarray(v, dtype=float)
    _, grad, _ = potential(cfg, v)
    lhs = float(grad @ grad)
    roots, kappas = positive_roots(cfg)
    rhs = float(v @ v) - 2.0 * gamma(cfg)
    for alpha, kap in zip(roots, kappas):
        a2 = float(alpha @ alpha)
        rhs += a2 * kap**2 / float(alpha @ v) ** 2
    return abs(lhs - rhs)
