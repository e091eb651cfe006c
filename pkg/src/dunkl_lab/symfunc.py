"""Partitions and symmetric-function bases: monomial, elementary, Schur, Jack.

Partitions are plain tuples of weakly decreasing positive ints (the empty
tuple is the zero partition).  Jack polynomials P_lambda^(alpha) are
computed as eigenfunctions of the Calogero–Sutherland-type operator

    D = sum_i x_i^2 d_i^2 + (2/alpha) sum_{i != j} x_i^2/(x_i - x_j) d_i,

which acts triangularly on the monomial basis with respect to dominance
order, so the expansion coefficients follow from a triangular eigen-system.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

Partition = tuple  # weakly decreasing positive ints


def _check_partition(lam):
    lam = tuple(int(p) for p in lam)
    if any(p <= 0 for p in lam):
        raise ValueError("parts must be positive")
    if any(lam[i] < lam[i + 1] for i in range(len(lam) - 1)):
        raise ValueError("parts must be weakly decreasing")
    return lam


@dataclass(frozen=True)
class SymPoly:
    """Symmetric polynomial as a map partition -> coefficient in a basis.

    basis is "monomial" or "jack"; alpha carries the Jack parameter.
    Zero coefficients are never stored.
    """

    basis: str
    coeffs: dict
    n_vars: int
    alpha: float | None = None

    def __post_init__(self):
        if self.basis not in ("monomial", "jack"):
            raise ValueError("basis must be 'monomial' or 'jack'")
        if self.basis == "jack" and self.alpha is None:
            raise ValueError("jack basis needs alpha")
        clean = {k: v for k, v in self.coeffs.items() if v != 0.0}
        object.__setattr__(self, "coeffs", clean)
        if any(len(k) > self.n_vars for k in clean):
            raise ValueError("partition longer than variable count")


def conjugate(lam: Partition) -> Partition:
    """Young-diagram transpose."""
    lam = _check_partition(lam)
    if not lam:
        return ()
    return tuple(sum(1 for p in lam if p > j) for j in range(lam[0]))


def dominance_leq(mu: Partition, lam: Partition) -> bool:
    """True iff |mu| = |lam| and prefix sums of mu never exceed those of lam."""
    mu, lam = _check_partition(mu), _check_partition(lam)
    if sum(mu) != sum(lam):
        return False
    acc_m = acc_l = 0
    for k in range(max(len(mu), len(lam))):
        acc_m += mu[k] if k < len(mu) else 0
        acc_l += lam[k] if k < len(lam) else 0
        if acc_m > acc_l:
            return False
    return True


def partitions_of(weight: int, max_len: int) -> list:
    """All partitions of the weight with at most max_len parts, reverse-lex."""
    if weight < 0:
        raise ValueError("weight >= 0 required")
    out = []

    def rec(remaining, max_part, prefix):
        if remaining == 0:
            out.append(tuple(prefix))
            return
        if len(prefix) == max_len:
            return
        for p in range(min(max_part, remaining), 0, -1):
            rec(remaining - p, p, prefix + [p])

    rec(weight, weight, [])
    return out


def multinomial_m(lam: Partition, n_vars: int) -> int:
    """Number of distinct permutations of lam padded with zeros to n_vars."""
    lam = _check_partition(lam)
    if len(lam) > n_vars:
        raise ValueError("partition longer than variable count")
    counts = {0: n_vars - len(lam)}
    for p in lam:
        counts[p] = counts.get(p, 0) + 1
    out = math.factorial(n_vars)
    for c in counts.values():
        out //= math.factorial(c)
    return out


def _distinct_perms(lam, n_vars):
    """All distinct exponent vectors obtained by permuting lam (zero-padded)."""
    padded = sorted(lam) + [0] * (n_vars - len(lam))

    def rec(pool):
        if not pool:
            yield ()
            return
        seen = set()
        for i, p in enumerate(pool):
            if p in seen:
                continue
            seen.add(p)
            for rest in rec(pool[:i] + pool[i + 1:]):
                yield (p,) + rest

    yield from rec(padded)


def monomial_eval(lam: Partition, x):
    """m_lambda(x): sum of x^a over distinct permutations a of lambda.

    x may be a vector or an array (..., n_vars); vectorized over leading axes.
    """
    lam = _check_partition(lam)
    x = np.asarray(x, dtype=float)
    n = x.shape[-1]
    if len(lam) > n:
        raise ValueError("partition longer than variable count")
    total = np.zeros(x.shape[:-1])
    for a in _distinct_perms(lam, n):
        term = np.ones(x.shape[:-1])
        for k, e in enumerate(a):
            if e:
                term = term * x[..., k] ** e
        total = total + term
    return float(total) if total.ndim == 0 else total


def elementary_eval(k: int, x):
    """Elementary symmetric polynomial e_k(x)."""
    x = np.asarray(x, dtype=float)
    n = len(x)
    if k < 0 or k > n:
        return 0.0
    # coefficients of prod (1 + x_i t) by iterated convolution
    e = np.zeros(n + 1)
    e[0] = 1.0
    for xi in x:
        e[1:] = e[1:] + xi * e[:-1]
    return float(e[k])


def schur_eval(lam: Partition, x):
    """Schur polynomial via the bialternant ratio of alternants.

    Near-coincident coordinates are nudged apart deterministically before
    the determinant ratio (the ratio is continuous; the nudge keeps the two
    determinants individually well-conditioned).
    """
    lam = _check_partition(lam)
    x = np.asarray(x, dtype=float)
    n = len(x)
    if len(lam) > n:
        raise ValueError("partition longer than variable count")
    scale = max(1.0, float(np.max(np.abs(x))))
    xs = np.sort(x)
    if n > 1 and np.min(np.diff(xs)) < 1e-7 * scale:
        x = x + scale * 1e-6 * np.arange(1, n + 1)
    lam_p = list(lam) + [0] * (n - len(lam))
    powers = [lam_p[j] + n - 1 - j for j in range(n)]
    num = np.column_stack([x ** p for p in powers])
    den = np.column_stack([x ** (n - 1 - j) for j in range(n)])
    return float(np.linalg.det(num) / np.linalg.det(den))


def hook_c(tau: Partition, alpha: float) -> float:
    """Product over cells (i,j): alpha*(tau_i - j) + tau'_j - i + 1."""
    tau = _check_partition(tau)
    taup = conjugate(tau)
    out = 1.0
    for i, row in enumerate(tau, start=1):
        for j in range(1, row + 1):
            out *= alpha * (row - j) + taup[j - 1] - i + 1
    return out


def hook_c_prime(tau: Partition, alpha: float) -> float:
    """Product over cells (i,j): alpha*(tau_i - j + 1) + tau'_j - i."""
    tau = _check_partition(tau)
    taup = conjugate(tau)
    out = 1.0
    for i, row in enumerate(tau, start=1):
        for j in range(1, row + 1):
            out *= alpha * (row - j + 1) + taup[j - 1] - i
    return out


def gen_pochhammer(b: float, tau: Partition, alpha: float) -> float:
    """Generalized Pochhammer symbol: product over rows of rising factorials.

    (b)_tau = prod_i prod_{k=0}^{tau_i - 1} (b - (i-1)/alpha + k).
    Raises on an exact pole (a zero factor with boxes still to multiply).
    """
    tau = _check_partition(tau)
    out = 1.0
    for i, row in enumerate(tau, start=1):
        base = b - (i - 1) / alpha
        for k in range(row):
            f = base + k
            if f == 0.0:
                raise ZeroDivisionError("generalized Pochhammer pole")
            out *= f
    return out


# ---------------------------------------------------------------------------
# Jack polynomials via the triangular eigen-system
# ---------------------------------------------------------------------------

def _pad(lam, n):
    return tuple(lam) + (0,) * (n - len(lam))


@lru_cache(maxsize=None)
def _operator_column(sigma: Partition, n_vars: int):
    """Action of D (without the 2/alpha factor split) on m_sigma.

    Returns (t1, diag_e, off), where
      D m_sigma = [t1 + (2/alpha) diag_e] m_sigma
                  + (2/alpha) sum_{nu < sigma} off[nu] m_nu,
    t1 = sum sigma_i (sigma_i - 1) from the second-derivative term, and the
    interaction term is extracted coefficient-by-coefficient at the canonical
    monomial of each target partition.
    """
    sigma = tuple(sigma)
    t1 = float(sum(p * (p - 1) for p in sigma))
    weight = sum(sigma)
    sig_pad = _pad(sigma, n_vars)
    targets = [nu for nu in partitions_of(weight, n_vars)]
    diag_e = 0.0
    off = {}
    sig_sorted = tuple(sorted(sig_pad, reverse=True))
    for nu in targets:
        b = _pad(nu, n_vars)
        coeff = 0.0
        for i in range(n_vars):
            for j in range(i + 1, n_vars):
                rest = list(b[:i]) + list(b[i + 1:j]) + list(b[j + 1:])
                s = b[i] + b[j]
                bi, bj = b[i], b[j]
                lo, hi = min(bi, bj), max(bi, bj)
                for q in range(0, s // 2 + 1):
                    p = s - q
                    src = tuple(sorted(rest + [p, q], reverse=True))
                    if src != sig_sorted:
                        continue
                    if p == q:
                        if bi == bj == p:
                            coeff += p
                    else:
                        if lo == q and hi == p:
                            coeff += p
                        elif q < lo and hi < p:
                            coeff += p - q
        if coeff == 0.0:
            continue
        if nu == sigma:
            diag_e = coeff
        else:
            off[nu] = coeff
    return t1, diag_e, off


@lru_cache(maxsize=None)
def jack_coeffs(lam: Partition, alpha: float, n_vars: int) -> SymPoly:
    """Monomial expansion of the Jack polynomial P_lambda^(alpha).

    Normalized so the coefficient of m_lambda is 1; coefficients vanish
    off the dominance-lower set.  alpha > 0 guarantees the eigenvalue gap
    (guarded anyway).
    """
    lam = _check_partition(lam)
    if alpha <= 0:
        raise ValueError("alpha > 0 required")
    if len(lam) > n_vars:
        raise ValueError("partition longer than variable count")
    weight = sum(lam)
    # reverse-lex descending order is a linear extension of dominance
    chain = [mu for mu in partitions_of(weight, n_vars) if dominance_leq(mu, lam)]

    def eigen(mu):
        t1, diag_e, _ = _operator_column(mu, n_vars)
        return t1 + (2.0 / alpha) * diag_e

    e_lam = eigen(lam)
    u = {lam: 1.0}
    for mu in chain:
        if mu == lam:
            continue
        acc = 0.0
        for sigma, u_sig in u.items():
            if sigma == mu:
                continue
            _, _, off = _operator_column(sigma, n_vars)
            if mu in off:
                acc += (2.0 / alpha) * off[mu] * u_sig
        gap = e_lam - eigen(mu)
        if abs(gap) < 1e-9 * max(1.0, abs(e_lam)):
            raise ArithmeticError("eigenvalue collision in Jack triangular solve")
        u[mu] = acc / gap
    return SymPoly("monomial", dict(u), n_vars)


def jack_eval(lam: Partition, alpha: float, x):
    """Evaluate P_lambda^(alpha) at x (vectorized like monomial_eval)."""
    poly = jack_coeffs(tuple(lam), float(alpha), np.asarray(x).shape[-1])
    return sympoly_eval(poly, x)


def jack_to_monomial(p: SymPoly) -> SymPoly:
    """Expand a Jack-basis SymPoly into the monomial basis."""
    if p.basis == "monomial":
        return p
    out = {}
    for tau, c in p.coeffs.items():
        for mu, u in jack_coeffs(tau, p.alpha, p.n_vars).coeffs.items():
            out[mu] = out.get(mu, 0.0) + c * u
    return SymPoly("monomial", out, p.n_vars)


def sympoly_eval(p: SymPoly, x):
    """Evaluate a SymPoly at x (any basis)."""
    mono = jack_to_monomial(p)
    x = np.asarray(x, dtype=float)
    total = np.zeros(x.shape[:-1])
    for mu, c in mono.coeffs.items():
        total = total + c * monomial_eval(mu, x)
    return float(total) if total.ndim == 0 else total
