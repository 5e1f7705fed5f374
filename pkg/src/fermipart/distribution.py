"""Exact microcanonical distribution of the number of distinct parts.

Moments are accumulated in integers: with ``S1 = sum M c_M`` and total ``T``
the central moment of order j is ``sum (T M - S1)**j c_M / T**(j+1)``, so no
rounding happens before the final conversion to ``mpf``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from mpmath import mp, mpf

from ._precision import workdps
from .canonical import log_xi_ex
from .partitions import CoverageError, PartitionTable, m_max, phi_distinct

__all__ = [
    "MicroDistribution",
    "CumulantSet",
    "DegenerateDistributionWarning",
    "TruncationError",
    "micro_distribution",
    "exact_moments",
    "exact_cumulants",
    "canonical_distribution",
    "canonical_probability",
    "canonical_tail_bound",
]


class DegenerateDistributionWarning(RuntimeWarning):
    """Skewness and excess are undefined for a single-point distribution."""


class TruncationError(ValueError):
    """The canonical sums cannot be truncated within the table's range."""


@dataclass(frozen=True)
class MicroDistribution:
    """Counts ``phi(E, M)`` for ``M = 0..m_max(E)``; ``counts[0]`` is always 0."""

    E: int
    counts: tuple[int, ...]
    total: int

    def __post_init__(self):
        if self.counts[0] != 0:
            raise ValueError("counts[0] must be 0 for E >= 1")
        if sum(self.counts) != self.total:
            raise ValueError("total must equal the sum of counts")

    @property
    def probabilities(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self.total) for c in self.counts)

    @property
    def mode(self) -> int:
        return max(range(len(self.counts)), key=self.counts.__getitem__)

    def is_unimodal(self) -> bool:
        """Non-decreasing up to the mode and non-increasing after it (on M >= 1)."""
        c = self.counts[1:]
        peak = self.mode - 1
        return all(c[i] <= c[i + 1] for i in range(peak)) and all(
            c[i] >= c[i + 1] for i in range(peak, len(c) - 1)
        )


@dataclass(frozen=True)
class CumulantSet:
    kappa1: mpf
    kappa2: mpf
    kappa3: mpf
    kappa4: mpf
    gamma1: Optional[mpf]
    gamma2: Optional[mpf]

    @property
    def kappas(self) -> tuple[mpf, mpf, mpf, mpf]:
        return (self.kappa1, self.kappa2, self.kappa3, self.kappa4)


def micro_distribution(table: PartitionTable, E: int) -> MicroDistribution:
    counts = (0,) + tuple(phi_distinct(table, E, M) for M in range(1, m_max(E) + 1))
    return MicroDistribution(E, counts, sum(counts))


def exact_moments(dist: MicroDistribution, reverse: bool = False) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    """Mean and central moments of order 2, 3, 4 as exact rationals.

    ``reverse`` sums from the largest M down; the result is identical.
    """
    T = dist.total
    if T <= 0:
        raise ValueError("distribution has no mass")
    order = range(len(dist.counts))
    if reverse:
        order = reversed(order)
    items = [(M, dist.counts[M]) for M in order]
    s1 = sum(M * c for M, c in items)
    sums = [0, 0, 0]
    for M, c in items:
        d = T * M - s1
        d2 = d * d
        sums[0] += d2 * c
        sums[1] += d2 * d * c
        sums[2] += d2 * d2 * c
    return (
        Fraction(s1, T),
        Fraction(sums[0], T**3),
        Fraction(sums[1], T**4),
        Fraction(sums[2], T**5),
    )


def _to_mpf(q: Fraction) -> mpf:
    return mpf(q.numerator) / q.denominator


def exact_cumulants(dist: MicroDistribution) -> CumulantSet:
    """kappa1..kappa4 with skewness ``kappa3/kappa2**1.5`` and excess ``kappa4/kappa2**2``.

    A single-point distribution has ``kappa2 = 0``; its skewness and excess
    are left as ``None`` and a :class:`DegenerateDistributionWarning` is issued.
    """
    mean, mu2, mu3, mu4 = exact_moments(dist)
    k4 = mu4 - 3 * mu2 * mu2
    with workdps():
        kappas = [_to_mpf(q) for q in (mean, mu2, mu3, k4)]
        if mu2 == 0:
            warnings.warn(
                f"E={dist.E}: single-point distribution, skewness and excess undefined",
                DegenerateDistributionWarning,
                stacklevel=2,
            )
            g1 = g2 = None
        else:
            g1 = kappas[2] / kappas[1] ** mpf(1.5)
            g2 = kappas[3] / kappas[1] ** 2
    return CumulantSet(*kappas, g1, g2)


# --------------------------------------------------------------------------
# canonical ensemble from the exact counts
# --------------------------------------------------------------------------


def canonical_tail_bound(b, E_cut: int) -> mpf:
    """Rigorous bound on ``sum_{E > E_cut} exp(-b E) Omega(E)``.

    Every coefficient of ``Xi_ex(x, 1)`` is non-negative, so
    ``Omega(E) <= Xi_ex(c, 1) exp(c E)`` for any ``0 < c < b``; the remaining
    geometric tail is summed exactly.  The best ``c`` on a coarse grid is kept.
    """
    with workdps():
        b = mpf(b)
        best = mp.inf
        for frac in (0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8):
            c = b * frac
            g = b - c
            bound = mp.exp(log_xi_ex(c) - g * (E_cut + 1)) / (-mp.expm1(-g))
            best = min(best, bound)
        return best


def _auto_cutoff(table: PartitionTable, b, rtol) -> int:
    with workdps():
        # log Xi_ex(c) ~ pi^2 / (12 c) sets the scale of the required E_cut
        guess = int(2 / b * (mp.pi**2 / (6 * b) + 80)) + 1
        E_cut = min(guess, table.n_max)
        denom = _weighted_sums(table, b, E_cut)[1]
        while canonical_tail_bound(b, E_cut) >= rtol * denom:
            if E_cut >= table.n_max:
                raise TruncationError(
                    f"b={mp.nstr(b, 6)}: tail bound {mp.nstr(canonical_tail_bound(b, E_cut), 4)} "
                    f"exceeds {mp.nstr(rtol, 3)} x partial sum {mp.nstr(denom, 6)} at the "
                    f"table limit E_cut={table.n_max}; build a larger table"
                )
            E_cut = min(table.n_max, E_cut * 2)
            denom = _weighted_sums(table, b, E_cut)[1]
        return E_cut


def _weighted_sums(table: PartitionTable, b, E_cut: int) -> tuple[list[mpf], mpf]:
    """``Z_c(b, M)`` for ``M = 0..m_max(E_cut)`` and the denominator, both truncated."""
    x = mp.exp(-b)
    Z = [mpf(0)] * (m_max(E_cut) + 1)
    xe = mpf(1)
    for E in range(1, E_cut + 1):
        xe *= x
        for M in range(1, m_max(E) + 1):
            c = phi_distinct(table, E, M)
            if c:
                Z[M] += xe * c
    return Z, mp.fsum(Z)


def canonical_distribution(table: PartitionTable, b, E_cut: Optional[int] = None, rtol=mpf("1e-30")) -> list[mpf]:
    """Canonical probabilities ``p_cn(b, M)`` for ``M = 0..m_max(E_cut)``.

    ``E_cut`` is picked from the tail bound when omitted; an explicit one is
    checked against the same bound.
    """
    with workdps():
        b = mpf(b)
        if b <= 0:
            raise ValueError(f"b must be positive, got {b}")
        rtol = mpf(rtol)
        if E_cut is None:
            E_cut = _auto_cutoff(table, b, rtol)
        elif E_cut > table.n_max:
            raise CoverageError(f"E_cut={E_cut} beyond table n_max={table.n_max}")
        Z, denom = _weighted_sums(table, b, E_cut)
        tail = canonical_tail_bound(b, E_cut)
        if tail >= rtol * denom:
            raise TruncationError(
                f"E_cut={E_cut} too small at b={mp.nstr(b, 6)}: tail bound "
                f"{mp.nstr(tail, 4)} vs partial sum {mp.nstr(denom, 6)}"
            )
        return [z / denom for z in Z]


def canonical_probability(table: PartitionTable, b, M: int, E_cut: Optional[int] = None) -> mpf:
    """``p_cn(b, M) = Z_c(b, M) / sum_E exp(-b E) Omega(E)``."""
    probs = canonical_distribution(table, b, E_cut)
    if M < 0:
        raise ValueError("M must be non-negative")
    with workdps():
        return probs[M] if M < len(probs) else mpf(0)
