"""Exact counts of partitions into distinct parts.

``P(n, k)`` counts partitions of ``n`` into exactly ``k`` positive parts and
obeys ``P(n, k) = P(n-1, k-1) + P(n-k, k)`` with ``P(n, n) = 1`` and
``P(n, k) = 0`` for ``k = 0`` or ``k > n``.  Removing the staircase
``0, 1, ..., M-1`` from a partition into ``M`` distinct parts leaves an
ordinary partition into ``M`` parts, so

    phi(E, M) = P(E - M(M-1)/2, M).

Everything here is exact Python integer arithmetic.
"""
from __future__ import annotations

import math
from typing import Optional, Sequence

__all__ = [
    "CoverageError",
    "PartitionTable",
    "build_table",
    "phi_distinct",
    "m_max",
    "omega_distinct",
    "enumerate_distinct",
    "ORACLE_MAX_E",
]

ORACLE_MAX_E = 80

DistinctPartition = tuple[int, ...]


class CoverageError(ValueError):
    """A lookup fell outside the filled part of a :class:`PartitionTable`."""


class PartitionTable:
    """Immutable table of ``P(n, k)`` for ``0 <= n <= n_max``, ``0 <= k <= k_max``.

    Use :func:`build_table`; the constructor trusts the rows it is given.
    """

    __slots__ = ("_rows", "_n_max", "_k_max")

    def __init__(self, rows: Sequence[Sequence[int]]):
        if not rows or len({len(r) for r in rows}) != 1:
            raise ValueError("rows must be a non-empty rectangular array")
        object.__setattr__(self, "_rows", tuple(tuple(r) for r in rows))
        object.__setattr__(self, "_n_max", len(rows) - 1)
        object.__setattr__(self, "_k_max", len(rows[0]) - 1)

    def __setattr__(self, name, value):
        raise AttributeError("PartitionTable is immutable")

    @property
    def n_max(self) -> int:
        return self._n_max

    @property
    def k_max(self) -> int:
        return self._k_max

    def covers(self, n: int, k: int) -> bool:
        return 0 <= n <= self._n_max and 0 <= k <= self._k_max

    def __getitem__(self, nk: tuple[int, int]) -> int:
        n, k = nk
        if n == 0 and k == 0:
            raise KeyError("P(0, 0) is not part of the table")
        if not self.covers(n, k):
            raise CoverageError(
                f"P({n}, {k}) outside table (n_max={self._n_max}, k_max={self._k_max})"
            )
        return self._rows[n][k]

    def row(self, n: int) -> tuple[int, ...]:
        if not 0 <= n <= self._n_max:
            raise CoverageError(f"row {n} outside table (n_max={self._n_max})")
        return self._rows[n]

    def __repr__(self) -> str:
        return f"PartitionTable(n_max={self._n_max}, k_max={self._k_max})"


def m_max(E: int) -> int:
    """Largest ``M`` with ``1 + 2 + ... + M <= E``."""
    if E < 1:
        raise ValueError(f"E must be >= 1, got {E}")
    return (math.isqrt(8 * E + 1) - 1) // 2


def build_table(n_max: int, k_max: Optional[int] = None) -> PartitionTable:
    """Fill ``P(n, k)`` row by row in ``n``.

    ``k_max`` defaults to ``m_max(n_max)``, the most parts any distinct
    partition of ``n_max`` can have.
    """
    if k_max is None:
        k_max = m_max(n_max) if n_max >= 1 else 0
    if n_max < 1 or k_max < 1:
        raise ValueError(f"table bounds must be positive, got n_max={n_max}, k_max={k_max}")

    width = k_max + 1
    # (0, 0) is never read; k > n cells of row 0 are zero
    rows = [[0] * width]
    for n in range(1, n_max + 1):
        prev = rows[n - 1]
        row = [0] * width
        for k in range(1, min(n - 1, k_max) + 1):
            row[k] = prev[k - 1] + rows[n - k][k]
        if n <= k_max:
            row[n] = 1
        rows.append(row)
    return PartitionTable(rows)


def phi_distinct(table: PartitionTable, E: int, M: int) -> int:
    """Number of partitions of ``E`` into exactly ``M`` distinct parts."""
    if E < 1 or M < 0:
        raise ValueError(f"need E >= 1 and M >= 0, got E={E}, M={M}")
    if M == 0:
        return 0
    n = E - M * (M - 1) // 2
    if n < M:
        return 0
    return table[n, M]


def omega_distinct(table: PartitionTable, E: int) -> int:
    """Total number of partitions of ``E`` into distinct parts."""
    return sum(phi_distinct(table, E, M) for M in range(1, m_max(E) + 1))


def enumerate_distinct(E: int, M: Optional[int] = None) -> list[DistinctPartition]:
    """Every partition of ``E`` into distinct parts, as strictly decreasing tuples.

    Brute force, meant as a test oracle; ``E`` is capped at ``ORACLE_MAX_E``.
    With ``M`` given only partitions with exactly ``M`` parts are returned.
    """
    if E < 1:
        raise ValueError(f"E must be >= 1, got {E}")
    if E > ORACLE_MAX_E:
        raise ValueError(f"enumeration is limited to E <= {ORACLE_MAX_E}, got {E}")

    out: list[DistinctPartition] = []

    def extend(prefix: list[int], remaining: int, largest: int) -> None:
        if remaining == 0:
            if M is None or len(prefix) == M:
                out.append(tuple(prefix))
            return
        if M is not None and len(prefix) >= M:
            return
        for part in range(min(remaining, largest), 0, -1):
            prefix.append(part)
            extend(prefix, remaining - part, part - 1)
            prefix.pop()

    extend([], E, E)
    return out
