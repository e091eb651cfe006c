"""Hermite / associated Laguerre evaluation, zeros, and exact beta=2 densities.

Zeros come from the eigenvalues of the symmetric tridiagonal Jacobi matrix
of the three-term recurrence (Golub-Welsch), then a few vectorized Newton
steps on the recurrence-evaluated polynomial polish each zero to machine
precision independently of the eigensolver's own accuracy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

HERMITE = "hermite"
LAGUERRE = "laguerre"


@dataclass(frozen=True)
class PolyZeros:
    kind: str
    n: int
    alpha: float | None
    zeros: np.ndarray


def hermite_eval(n: int, x):
    """Physicists' Hermite H_n: returns (value, derivative).

    Three-term recurrence H_{k+1} = 2x H_k - 2k H_{k-1}; H_n' = 2n H_{n-1}.
    """
    x = np.asarray(x, dtype=float)
    h_prev = np.zeros_like(x)  # H_{-1} := 0
    h = np.ones_like(x)
    for k in range(n):
        h_prev, h = h, 2 * x * h - 2 * k * h_prev
    # after the loop h = H_n, h_prev = H_{n-1}
    deriv = 2 * n * h_prev if n > 0 else np.zeros_like(x)
    if x.ndim == 0:
        return float(h), float(deriv)
    return h, deriv


def laguerre_eval(n: int, alpha: float, x):
    """Associated Laguerre L_n^(alpha): returns (value, derivative).

    Recurrence (k+1) L_{k+1} = (2k+alpha+1-x) L_k - (k+alpha) L_{k-1}.
    The derivative uses d/dx L_n^(a) = -L_{n-1}^(a+1), which is exact at
    x = 0 as well (the quotient relation x L' = n L - (n+a) L_{n-1} is not).
    """
    x = np.asarray(x, dtype=float)
    l_prev = np.zeros_like(x)
    l = np.ones_like(x)
    for k in range(n):
        l_prev, l = l, ((2 * k + alpha + 1 - x) * l - (k + alpha) * l_prev) / (k + 1)
    if n > 0:
        dm, _ = laguerre_eval(n - 1, alpha + 1, x)
        deriv = -np.asarray(dm)
    else:
        deriv = np.zeros_like(x)
    if x.ndim == 0:
        return float(l), float(deriv)
    return l, deriv


def _polish(f, z):
    """Vectorized Newton polish; f(z) -> (value, derivative)."""
    for _ in range(4):
        val, der = f(z)
        step = np.where(der != 0.0, val / np.where(der != 0.0, der, 1.0), 0.0)
        z = z - step
        if np.all(np.abs(step) <= 1e-15 * np.maximum(1.0, np.abs(z))):
            break
    val, der = f(z)
    if np.any(np.abs(val) > 1e-10 * np.abs(der) * np.maximum(1.0, np.abs(z))):
        raise RuntimeError("zero refinement failed to certify")
    return z


def hermite_zeros(n: int) -> PolyZeros:
    """All n real zeros of H_n, ascending."""
    if n < 1:
        raise ValueError("n >= 1 required")
    if n == 1:
        return PolyZeros(HERMITE, 1, None, np.array([0.0]))
    off = np.sqrt(np.arange(1, n) / 2.0)  # monic recurrence p_{k+1}=x p_k-(k/2)p_{k-1}
    jac = np.diag(off, 1) + np.diag(off, -1)
    guess = np.sort(np.linalg.eigvalsh(jac))
    zeros = _polish(lambda t: hermite_eval(n, t), guess)
    return PolyZeros(HERMITE, n, None, np.sort(zeros))


def laguerre_zeros(n: int, alpha: float) -> PolyZeros:
    """All n zeros of L_n^(alpha) (alpha > -1), ascending, all positive."""
    if n < 1:
        raise ValueError("n >= 1 required")
    if alpha <= -1:
        raise ValueError("alpha > -1 required")
    if n == 1:
        return PolyZeros(LAGUERRE, 1, alpha, np.array([alpha + 1.0]))
    k = np.arange(n)
    diag = 2 * k + alpha + 1
    off = np.sqrt(k[1:] * (k[1:] + alpha))
    jac = np.diag(diag) + np.diag(off, 1) + np.diag(off, -1)
    guess = np.sort(np.linalg.eigvalsh(jac))
    zeros = _polish(lambda t: laguerre_eval(n, alpha, t), guess)
    return PolyZeros(LAGUERRE, n, alpha, np.sort(zeros))


def _hermite_logsign(n, x):
    """(log|H_n(x)|, sign) by the recurrence with periodic rescaling."""
    x = np.asarray(x, dtype=float)
    h_prev = np.zeros_like(x)
    h = np.ones_like(x)
    logscale = np.zeros_like(x)
    for k in range(n):
        h_prev, h = h, 2 * x * h - 2 * k * h_prev
        big = np.abs(h) > 1e120
        if np.any(big):
            factor = np.where(big, np.abs(h), 1.0)
            h = h / factor
            h_prev = h_prev / factor
            logscale = logscale + np.log(factor)
    with np.errstate(divide="ignore"):
        logmag = np.where(h != 0.0, np.log(np.abs(np.where(h != 0, h, 1.0))), -np.inf)
    return logmag + logscale, np.sign(h)


def density_a_exact(n: int, t: float, y):
    """Exact one-point particle density for the beta=2 type-A process.

    sigma_N(y, t) = e^{-y^2/2t} / (2^N (N-1)! sqrt(2 pi t))
                    * [H_N(u)^2 - H_{N+1}(u) H_{N-1}(u)],  u = y / sqrt(2t).
    Integrates to N over the real line.  Combined in log-magnitude + sign
    space: the bracket mixes factorially large Hermite values at large N.
    """
    if t <= 0:
        raise ValueError("t > 0 required")
    y = np.asarray(y, dtype=float)
    u = y / math.sqrt(2 * t)
    ln_n, sn_n = _hermite_logsign(n, u)
    ln_p, sn_p = _hermite_logsign(n + 1, u)
    ln_m, sn_m = _hermite_logsign(n - 1, u)
    a1, s1 = 2 * ln_n, sn_n * sn_n
    a2, s2 = ln_p + ln_m, sn_p * sn_m
    top = np.maximum(a1, a2)
    top = np.where(np.isfinite(top), top, 0.0)
    bracket = s1 * np.exp(a1 - top) - s2 * np.exp(a2 - top)
    lognorm = n * math.log(2.0) + gammaln(n) + 0.5 * math.log(2 * math.pi * t)
    dens = np.maximum(bracket, 0.0) * np.exp(top - u * u - lognorm)
    return float(dens) if dens.ndim == 0 else dens


def density_b_exact(n: int, nu: float, t: float, y):
    """Exact one-point density for the beta=2 type-B process started at 0.

    (N!/Gamma(nu+N)) { N [L_N(u)]^2 + L_N L_{N-1} - (N+1) L_{N+1} L_{N-1} }
        * (2/y) u^nu e^{-u},   u = y^2 / 2t,  Laguerre parameter nu.
    Integrates to N on (0, inf).
    """
    if t <= 0:
        raise ValueError("t > 0 required")
    y = np.asarray(y, dtype=float)
    if np.any(y <= 0):
        raise ValueError("y > 0 required")
    u = y * y / (2 * t)
    l_n, _ = laguerre_eval(n, nu, u)
    l_m, _ = laguerre_eval(n - 1, nu, u)
    l_p, _ = laguerre_eval(n + 1, nu, u)
    bracket = n * np.asarray(l_n) ** 2 + np.asarray(l_n) * np.asarray(l_m) \
        - (n + 1) * np.asarray(l_p) * np.asarray(l_m)
    logpref = gammaln(n + 1) - gammaln(nu + n)
    dens = np.maximum(bracket, 0.0) * np.exp(
        logpref + nu * np.log(u) - u + np.log(2.0) - np.log(y)
    )
    return float(dens) if dens.ndim == 0 else dens
