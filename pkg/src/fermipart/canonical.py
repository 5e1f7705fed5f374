"""Canonical cumulants of the number of parts.

The grand generating product over excited levels is

    Xi_ex(b, z) = prod_{nu >= 1} (1 + z exp(-b nu)),

so ``ln Xi_ex`` is a sum of independent per-level terms.  With
``w = z exp(-b nu)`` and occupation ``u = w / (1 + w)``, applying
``z d/dz`` to a function of ``w`` acts as ``u (1 - u) d/du``; the k-th
cumulant is therefore ``sum_nu c_k(u_nu)`` with polynomials ``c_k``.
Because ``d/db = -nu z d/dz`` on each level, b-derivatives are the same
sums with higher ``c`` and powers of ``-nu``.  The bosonic counterpart uses
``v = w / (1 - w)`` and ``v (1 + v) d/dv``.

Small-b behaviour comes from the Mellin representation
``(z d/dz)**k ln Xi_ex = (1/2 pi i) int b**-t Gamma(t) zeta(t) eta(t+1-k) dt``
evaluated by residues at ``t = 1, 0, -1, ...``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Literal, Union

from mpmath import mp, mpf

from ._precision import get_dps, workdps
from .special import eta, eta_rational, zeta_rational

__all__ = [
    "TruncationError",
    "CanonicalPoint",
    "canonical_point",
    "level_cutoff",
    "occupation",
    "level_polynomial",
    "log_xi_ex",
    "canonical_cumulant",
    "bosonic_cumulant",
    "canonical_cumulant_b_derivative",
    "check_fermion_boson_identity",
    "residue_terms",
    "asymptotic_canonical_cumulant",
    "ConstantVerdict",
    "resolve_printed_constants",
    "IDENTITY_B_GRID",
]

Kind = Literal["fermi", "bose"]

BASE_CUTOFF = 70
MAX_LEVELS = 5_000_000
IDENTITY_B_GRID = (0.01, 0.02, 0.05, 0.1, 0.5, 1, 2)


class TruncationError(ValueError):
    """The requested tail bound cannot be met within ``MAX_LEVELS`` levels."""


@dataclass(frozen=True)
class CanonicalPoint:
    b: mpf
    z: mpf
    cutoff: int


# --------------------------------------------------------------------------
# level polynomials
# --------------------------------------------------------------------------


@lru_cache(maxsize=None)
def level_polynomial(kind: Kind, j: int) -> tuple[int, ...]:
    """Integer coefficients (ascending) of the j-th per-level cumulant, ``j >= 1``.

    Fermions: ``c_1 = u``, ``c_{j+1} = u (1 - u) c_j'``.
    Bosons:   ``c_1 = v``, ``c_{j+1} = v (1 + v) c_j'``.
    """
    if j < 1:
        raise ValueError("level polynomials start at j = 1")
    if j == 1:
        return (0, 1)
    prev = level_polynomial(kind, j - 1)
    deriv = [i * a for i, a in enumerate(prev)][1:]
    sign = -1 if kind == "fermi" else 1
    out = [0] * (len(deriv) + 2)
    for i, a in enumerate(deriv):
        out[i + 1] += a
        out[i + 2] += sign * a
    return tuple(out)


def _horner(coeffs: tuple[int, ...], x):
    acc = 0
    for a in reversed(coeffs):
        acc = acc * x + a
    return acc


# --------------------------------------------------------------------------
# truncation
# --------------------------------------------------------------------------


def _tail_bound(kind: Kind, b, z, N: int, power: int, norm: int):
    """Upper bound on ``sum_{nu > N} nu**power |c(occ_nu)|`` with ``|c(x)| <= norm * x``."""
    wN = z * mp.exp(-b * (N + 1))
    if wN >= 1:
        return mp.inf
    # sum_{nu>N} nu**p e^{-b nu} <= int_N^inf x**p e^{-b x} dx once the summand decreases
    geo = mp.gammainc(power + 1, b * N) / b ** (power + 1)
    scale = 1 / (1 - wN)
    return norm * z * geo * scale


def level_cutoff(b, z=1, *, power: int = 0, tol=mpf("1e-30"), kind: Kind = "fermi", norm: int = 64) -> int:
    """Number of levels so the neglected tail is below ``tol`` in absolute value.

    Starts at ``ceil(70 / b)``; ``norm`` bounds the coefficient sum of the
    level polynomial involved (64 covers every c_j with j <= 5).
    """
    with workdps():
        b = mpf(b)
        z = mpf(z)
        tol = mpf(tol)
        start = max(int(math.ceil(BASE_CUTOFF / b)), int(math.ceil(power / b)) + 1, 1)
        step = max(int(math.ceil(5 / b)), 1)
        N = start
        while N <= MAX_LEVELS:
            if _tail_bound(kind, b, z, N, power, norm) < tol:
                return N
            N += step
    raise TruncationError(
        f"tail bound {tol} unreachable with <= {MAX_LEVELS} levels at b={b}, z={z}"
    )


def canonical_point(b, z=1, *, tol=mpf("1e-30")) -> CanonicalPoint:
    with workdps():
        b = mpf(b)
        z = mpf(z)
        if b <= 0:
            raise ValueError(f"b must be positive, got {b}")
        if z < 0:
            raise ValueError(f"z must be non-negative, got {z}")
        return CanonicalPoint(b, z, level_cutoff(b, z, tol=tol))


# --------------------------------------------------------------------------
# level sums
# --------------------------------------------------------------------------


def occupation(nu: int, b, z=1, kind: Kind = "fermi") -> mpf:
    """Mean occupation of level ``nu``: ``w/(1+w)`` (fermi) or ``w/(1-w)`` (bose)."""
    with workdps():
        w = mpf(z) * mp.exp(-mpf(b) * nu)
        return w / (1 + w) if kind == "fermi" else w / (1 - w)


@lru_cache(maxsize=32)
def _weights(b: mpf, z: mpf, N: int, dps: int) -> tuple[mpf, ...]:
    with workdps():
        x = mp.exp(-b)
        w = mpf(z)
        out = []
        for _ in range(N):
            w *= x
            out.append(w)
        return tuple(out)


@lru_cache(maxsize=32)
def _occupations(kind: Kind, b: mpf, z: mpf, N: int, dps: int) -> tuple[mpf, ...]:
    ws = _weights(b, z, N, dps)
    with workdps():
        if kind == "fermi":
            return tuple(w / (1 + w) for w in ws)
        if ws[0] >= 1:
            raise ValueError(f"bosonic product diverges: z exp(-b) = {ws[0]} >= 1")
        return tuple(w / (1 - w) for w in ws)


def _level_sum(kind: Kind, b, z, k: int, order: int, N: int) -> mpf:
    """``sum_{nu=1}^{N} (-nu)**order c_{k+order}(occ_nu)``; ``c_0`` is the log term."""
    dps = get_dps()
    with workdps():
        b = mpf(b)
        z = mpf(z)
        occ = _occupations(kind, b, z, N, dps)
        j = k + order
        if j == 0:
            if kind == "fermi":
                return mp.fsum(-mp.log1p(-u) for u in occ)
            return mp.fsum(mp.log1p(v) for v in occ)
        poly = level_polynomial(kind, j)
        if order == 0:
            return mp.fsum(_horner(poly, u) for u in occ)
        sign = -1 if order % 2 else 1
        return sign * mp.fsum(nu ** order * _horner(poly, u) for nu, u in enumerate(occ, 1))


def _check_k(k: int, hi: int = 4) -> None:
    if not 0 <= k <= hi:
        raise ValueError(f"cumulant order must be in 0..{hi}, got {k}")


def log_xi_ex(b, z=1, *, cutoff: int | None = None) -> mpf:
    """``ln Xi_ex(b, z) = sum_{nu>=1} ln(1 + z exp(-b nu))``, tail below 1e-30."""
    point = canonical_point(b, z) if cutoff is None else CanonicalPoint(mpf(b), mpf(z), cutoff)
    if point.z == 0:
        return mpf(0)
    return _level_sum("fermi", point.b, point.z, 0, 0, point.cutoff)


def canonical_cumulant(k: int, b, z=1, *, cutoff: int | None = None) -> mpf:
    """``(z d/dz)**k ln Xi_ex`` at ``(b, z)``; ``k = 0`` is ``ln Xi_ex`` itself."""
    _check_k(k)
    with workdps():
        b = mpf(b)
        if b <= 0:
            raise ValueError(f"b must be positive, got {b}")
        N = cutoff or level_cutoff(b, z)
        return _level_sum("fermi", b, z, k, 0, N)


def bosonic_cumulant(k: int, b, z=1, *, cutoff: int | None = None) -> mpf:
    """Cumulants of ``-sum ln(1 - z exp(-b nu))``: geometric per-level statistics."""
    _check_k(k)
    with workdps():
        b = mpf(b)
        if b <= 0:
            raise ValueError(f"b must be positive, got {b}")
        N = cutoff or level_cutoff(b, z, kind="bose")
        return _level_sum("bose", b, z, k, 0, N)


def canonical_cumulant_b_derivative(k: int, order: int, b, z=1, *, cutoff: int | None = None) -> mpf:
    """``d^order/db^order`` of the fermionic ``kappa^(k)(b, z)``, order 1..3."""
    _check_k(k)
    if not 1 <= order <= 3:
        raise ValueError(f"derivative order must be in 1..3, got {order}")
    with workdps():
        b = mpf(b)
        if b <= 0:
            raise ValueError(f"b must be positive, got {b}")
        N = cutoff or level_cutoff(b, z, power=order)
        return _level_sum("fermi", b, z, k, order, N)


def check_fermion_boson_identity(k: int, b) -> mpf:
    """Relative residual of ``kF(b) = kB(b) - 2**k kB(2b)``."""
    with workdps():
        b = mpf(b)
        kf = canonical_cumulant(k, b)
        kb = bosonic_cumulant(k, b)
        kb2 = bosonic_cumulant(k, 2 * b)
        return abs(kf - kb + 2**k * kb2) / max(1, abs(kf))


# --------------------------------------------------------------------------
# residue series
# --------------------------------------------------------------------------

Coefficient = Union[Fraction, mpf]


def residue_terms(k: int, poles: int = 3) -> list[tuple[int, Coefficient]]:
    """``(power of b, coefficient)`` from the first ``poles`` poles.

    The zeta pole at ``t = 1`` contributes ``eta(2-k) / b``; the Gamma pole at
    ``t = -m`` contributes ``(-1)**m / m! * zeta(-m) * eta(1-m-k) * b**m``.
    Rational coefficients are returned as ``Fraction``.
    """
    _check_k(k)
    if poles < 1:
        raise ValueError("need at least one pole")
    terms: list[tuple[int, Coefficient]] = []
    s = 2 - k
    terms.append((-1, eta_rational(s) if s <= 0 else eta(s)))
    for m in range(poles - 1):
        s = 1 - m - k
        zm = zeta_rational(-m)
        gamma_res = Fraction((-1) ** m, math.factorial(m))
        if s == 1:
            terms.append((m, gamma_res * zm * eta(1)))
        else:
            terms.append((m, gamma_res * zm * eta_rational(s)))
    return terms


def asymptotic_canonical_cumulant(k: int, b, poles: int = 3) -> mpf:
    """Small-b residue series of the fermionic canonical cumulant.

    The default keeps the poles at ``t = 1, 0, -1``.
    """
    with workdps():
        b = mpf(b)
        if not 0 < b <= mpf("0.2"):
            raise ValueError(f"residue series is used for 0 < b <= 0.2, got {b}")
        total = mpf(0)
        for power, c in residue_terms(k, poles):
            if isinstance(c, Fraction):
                c = mpf(c.numerator) / c.denominator
            total += c * b**power
        return total


@dataclass(frozen=True)
class ConstantVerdict:
    """Which sign of a printed constant the direct level sum supports."""

    name: str
    printed: mpf
    numeric: mpf
    residue: mpf
    matches_printed: bool
    matches_residue: bool

    def describe(self) -> str:
        which = "printed" if self.matches_printed else "residue" if self.matches_residue else "neither"
        return (
            f"{self.name}: printed {mp.nstr(self.printed, 8)}, residue {mp.nstr(self.residue, 8)}, "
            f"direct sum {mp.nstr(self.numeric, 12)} -> matches {which}"
        )


def resolve_printed_constants(b=mpf("0.01"), rtol=mpf("1e-6")) -> list[ConstantVerdict]:
    """Decide the sign of the constant terms of kappa^(0) and kappa^(4) numerically.

    The constant of kappa^(0) is isolated as ``kappa0 - pi**2/(12 b) - b/24``;
    kappa^(4) has no 1/b term, so the direct sum is its constant.
    """
    with workdps():
        b = mpf(b)
        half_ln2 = mp.ln2 / 2
        k0_const = canonical_cumulant(0, b) - mp.pi**2 / (12 * b) - b / 24
        k4 = canonical_cumulant(4, b)
        sixteenth = mpf(1) / 16
        out = []
        for name, printed, residue, numeric in (
            ("kappa0 constant term", half_ln2, -half_ln2, k0_const),
            ("kappa4 constant", -sixteenth, sixteenth, k4),
        ):
            out.append(
                ConstantVerdict(
                    name=name,
                    printed=printed,
                    numeric=numeric,
                    residue=residue,
                    matches_printed=abs(numeric - printed) <= rtol * abs(printed),
                    matches_residue=abs(numeric - residue) <= rtol * abs(residue),
                )
            )
        return out
