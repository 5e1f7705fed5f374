"""Self-checks behind ``fermipart verify``.

Each check returns a :class:`CheckResult`; the CLI turns any failure into a
non-zero exit code.
"""
from __future__ import annotations

import time
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from mpmath import mp, mpf

from ._precision import workdps
from .canonical import (
    IDENTITY_B_GRID,
    asymptotic_canonical_cumulant,
    canonical_cumulant,
    check_fermion_boson_identity,
    resolve_printed_constants,
    residue_terms,
)
from .distribution import exact_cumulants, micro_distribution
from .partitions import PartitionTable, build_table, enumerate_distinct, m_max, omega_distinct, phi_distinct
from .saddle import gamma1_verdict

__all__ = ["CheckResult", "run_checks", "format_report"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0


def check_table_recursion(table: PartitionTable) -> tuple[bool, str]:
    bad = []
    for n in range(1, table.n_max + 1):
        row = table.row(n)
        for k in range(table.k_max + 1):
            if k == 0 or k > n:
                expected = 0
            elif k == n:
                expected = 1
            else:
                expected = table[n - 1, k - 1] + table[n - k, k]
            if row[k] != expected:
                bad.append((n, k))
                if len(bad) > 5:
                    break
        if len(bad) > 5:
            break
    if bad:
        return False, f"recursion violated at cells {bad}"
    return True, f"all cells n<={table.n_max}, k<={table.k_max} satisfy the recursion"


def check_oracle(table: PartitionTable, max_E: int = 60) -> tuple[bool, str]:
    mismatches = []
    for E in range(1, max_E + 1):
        sizes = Counter(len(p) for p in enumerate_distinct(E))
        for M in range(0, m_max(E) + 2):
            if phi_distinct(table, E, M) != sizes.get(M, 0):
                mismatches.append((E, M))
    small = {6: 4, 10: 10}
    for E, expected in small.items():
        if omega_distinct(table, E) != expected:
            mismatches.append((E, "omega"))
    if mismatches:
        return False, f"recursion disagrees with enumeration at {mismatches[:5]}"
    return True, f"phi(E, M) equals brute-force enumeration for all E <= {max_E}; Omega(6)=4, Omega(10)=10"


def check_identity(tol=mpf("1e-12")) -> tuple[bool, str]:
    worst = mpf(0)
    where = None
    for k in range(5):
        for b in IDENTITY_B_GRID:
            r = check_fermion_boson_identity(k, b)
            if r >= worst:
                worst, where = r, (k, b)
    ok = worst < tol
    return ok, f"max relative residual {mp.nstr(worst, 3)} at (k, b)={where}; contract < {mp.nstr(tol, 2)}"


def check_residue_series(b=mpf("0.01"), tol=mpf("1e-5")) -> tuple[bool, str]:
    parts = []
    ok = True
    for k in (1, 2, 3):
        direct = canonical_cumulant(k, b)
        asym = asymptotic_canonical_cumulant(k, b)
        rel = abs(asym - direct) / abs(direct)
        ok &= rel < tol
        parts.append(f"k={k} rel {mp.nstr(rel, 3)}")
    terms = dict(residue_terms(1))
    verbatim = (
        abs(terms[-1] - mp.ln2) < mpf(10) ** (-mp.dps + 5)
        and terms[0] == Fraction(-1, 4)
        and terms[1] == Fraction(1, 48)
    )
    ok &= verbatim
    parts.append("kappa1 = ln2/b - 1/4 + b/48 " + ("reproduced" if verbatim else "NOT reproduced"))
    return ok, "; ".join(parts)


def check_sign_suspects() -> tuple[bool, str]:
    verdicts = resolve_printed_constants()
    ok = all(v.matches_printed != v.matches_residue for v in verdicts)
    return ok, " | ".join(v.describe() for v in verdicts)


def check_gamma1(table: PartitionTable, E: int = 4500) -> tuple[bool, str]:
    g1 = exact_cumulants(micro_distribution(table, E)).gamma1
    verdict = gamma1_verdict(g1, E)
    return verdict.conclusive, verdict.describe()


def run_checks(table: Optional[PartitionTable] = None, oracle_max_E: int = 60, gamma_E: int = 4500) -> list[CheckResult]:
    if table is None:
        table = build_table(max(oracle_max_E, gamma_E))
    checks: list[tuple[str, Callable[[], tuple[bool, str]]]] = [
        ("partition table recursion", lambda: check_table_recursion(table)),
        ("phi oracle equivalence", lambda: check_oracle(table, oracle_max_E)),
        ("fermion-boson identity", check_identity),
        ("canonical residue series", check_residue_series),
        ("printed sign-suspect constants", check_sign_suspects),
        ("gamma1 constant", lambda: check_gamma1(table, gamma_E)),
    ]
    results = []
    with workdps():
        for name, fn in checks:
            t0 = time.perf_counter()
            try:
                ok, detail = fn()
            except Exception as exc:  # a crashing check is a failing check
                ok, detail = False, f"{type(exc).__name__}: {exc}"
            results.append(CheckResult(name, bool(ok), detail, time.perf_counter() - t0))
    return results


def format_report(results: list[CheckResult]) -> str:
    lines = []
    for r in results:
        lines.append(f"{'PASS' if r.passed else 'FAIL'}  {r.name} ({r.seconds:.2f}s): {r.detail}")
    n_fail = sum(not r.passed for r in results)
    lines.append(f"{len(results) - n_fail}/{len(results)} checks passed")
    return "\n".join(lines) + "\n"
