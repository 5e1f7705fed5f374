"""Zeta, eta, Bernoulli numbers and the fermionic function.

Only what the residue expansions of the canonical cumulants consume:
zeta at integer arguments, Dirichlet eta, exact Bernoulli numbers and
``f_alpha(z) = sum_{n>=1} (-1)**(n+1) z**n / n**alpha``.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from mpmath import mp, mpf

from ._precision import get_dps, workdps

__all__ = [
    "bernoulli",
    "zeta",
    "zeta_rational",
    "eta",
    "eta_rational",
    "fermi_fn",
]

_bernoulli_cache: list[Fraction] = [Fraction(1)]


def bernoulli(n: int) -> Fraction:
    """Exact Bernoulli number ``B_n`` with the ``B_1 = -1/2`` convention."""
    if n < 0:
        raise ValueError("Bernoulli numbers are defined for n >= 0")
    cache = _bernoulli_cache
    while len(cache) <= n:
        m = len(cache)
        # sum_{j=0}^{m} C(m+1, j) B_j = 0
        acc = sum(math.comb(m + 1, j) * cache[j] for j in range(m))
        cache.append(-acc / (m + 1))
    return cache[n]


def zeta_rational(s: int) -> Fraction:
    """``zeta(s)`` for ``s <= 0`` as an exact rational, ``(-1)**n B_{n+1}/(n+1)``."""
    if s > 0:
        raise ValueError("zeta is rational only at non-positive integers")
    n = -s
    return (-1) ** n * bernoulli(n + 1) / (n + 1)


def _alternating_sum(term, dps: int):
    """Sum ``sum_{k>=0} (-1)**k a_k`` for a totally monotone ``a_k``.

    Cohen-Rodriguez Villegas-Zagier acceleration; the error is below
    ``2 a_0 / (3 + sqrt 8)**n``.
    """
    n = int(math.ceil(1.31 * (dps + 8)))
    d = (3 + mp.sqrt(8)) ** n
    d = (d + 1 / d) / 2
    b = mpf(-1)
    c = -d
    s = mpf(0)
    for k in range(n):
        c = b - c
        s += c * term(k)
        b = b * (k + n) * (k - n) / ((k + mpf(1) / 2) * (k + 1))
    return s / d


def _eta_series(s) -> mpf:
    return _alternating_sum(lambda k: mpf(k + 1) ** (-s), get_dps())


def eta_rational(s: int) -> Fraction:
    """``eta(s) = (1 - 2**(1-s)) zeta(s)`` for ``s <= 0``, exactly."""
    if s > 0:
        raise ValueError("eta is rational only at non-positive integers")
    return (1 - Fraction(2) ** (1 - s)) * zeta_rational(s)


@lru_cache(maxsize=256)
def _zeta_cached(s: int, dps: int) -> mpf:
    with workdps():
        return _eta_series(mpf(s)) / (1 - mpf(2) ** (1 - s))


def zeta(s: int) -> mpf:
    """Riemann zeta at an integer argument.

    ``s >= 2`` goes through the accelerated eta series, ``s <= 0`` through
    Bernoulli numbers (exact, then rounded to working precision).
    """
    s = int(s)
    if s == 1:
        raise ValueError("zeta has a pole at s = 1")
    with workdps():
        if s <= 0:
            q = zeta_rational(s)
            return mpf(q.numerator) / q.denominator
        return +_zeta_cached(s, get_dps())


def eta(s) -> mpf:
    """Dirichlet eta function ``sum_{n>=1} (-1)**(n+1) / n**s``.

    Integer ``s <= 0`` returns the exact analytic continuation, ``s = 1``
    gives ``ln 2``; otherwise ``s`` must be positive.
    """
    with workdps():
        if isinstance(s, int) and s <= 0:
            q = eta_rational(s)
            return mpf(q.numerator) / q.denominator
        if s == 1:
            return mp.ln2 * 1
        s = mpf(s)
        if s <= 0:
            raise ValueError("eta series needs s > 0 off the integers")
        return _eta_series(s)


def fermi_fn(alpha, z) -> mpf:
    """Fermionic function ``f_alpha(z) = -Li_alpha(-z)``.

    Defined by its series on ``|z| <= 1``; at ``z = 1`` it needs
    ``alpha > 0`` (conditional convergence) and at ``z = -1`` it needs
    ``alpha > 1``.
    """
    with workdps():
        alpha = mpf(alpha)
        z = mpf(z)
        if abs(z) > 1:
            raise ValueError(f"fermi_fn series diverges for |z| > 1 (z={z})")
        if z == 0:
            return mpf(0)
        if z == 1:
            if alpha <= 0:
                raise ValueError("fermi_fn(alpha, 1) needs alpha > 0")
            return eta(1 if alpha == 1 else alpha)
        if z == -1:
            if alpha <= 1:
                raise ValueError("fermi_fn(alpha, -1) needs alpha > 1")
            # -zeta(alpha) = -eta(alpha) / (1 - 2**(1-alpha))
            return -eta(alpha) / (1 - mpf(2) ** (1 - alpha))
        if z > 0 and alpha > 0:
            # z**(k+1) / (k+1)**alpha is totally monotone in k
            return _alternating_sum(lambda k: z ** (k + 1) / mpf(k + 1) ** alpha, get_dps())
        return _direct_series(alpha, z)


def _direct_series(alpha, z) -> mpf:
    eps = mpf(10) ** (-get_dps() - 5)
    total = mpf(0)
    n = 1
    zn = z
    while True:
        term = zn / mpf(n) ** alpha
        total += term if n % 2 else -term
        # once terms shrink geometrically the tail is bounded by term * q / (1 - q)
        q = abs(z) * (mpf(n) / (n + 1)) ** alpha if alpha < 0 else abs(z)
        if n > 1 and q < 1 and abs(term) * q / (1 - q) < eps * max(1, abs(total)):
            return total
        zn *= z
        n += 1
