"""Small exact linear-algebra helpers over F_p and Q."""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "rank_mod_p", "pivot_columns_mod_p", "rational_rank", "rational_inverse", "mat_mul",
]


def rank_mod_p(rows: Iterable[Iterable[int]], p: int) -> int:
    return len(pivot_columns_mod_p(rows, p))


def _echelon(rows: list[list[Fraction]]) -> list[list[Fraction]]:
    """Row-reduced echelon basis of the row space (zero rows dropped)."""
    rows = [list(r) for r in rows]
    basis: list[list[Fraction]] = []
    pivots: list[int] = []
    for r in rows:
        for b, c in zip(basis, pivots):
            if r[c]:
                f = r[c]
                r = [x - f * y for x, y in zip(r, b)]
        lead = next((i for i, x in enumerate(r) if x), None)
        if lead is None:
            continue
        inv = 1 / r[lead]
        r = [x * inv for x in r]
        for i, b in enumerate(basis):
            if b[lead]:
                f = b[lead]
                basis[i] = [x - f * y for x, y in zip(b, r)]
        basis.append(r)
        pivots.append(lead)
    return basis


def rational_rank(rows: Iterable[Sequence]) -> int:
    return len(_echelon([[Fraction(x) for x in r] for r in rows]))


def rational_inverse(m: Sequence[Sequence]) -> list[list[Fraction]]:
    """Exact inverse by Gauss-Jordan; raises ZeroDivisionError if singular."""
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    for col in range(n):
        pivot = next((i for i in range(col, n) if a[i][col]), None)
        if pivot is None:
            raise ZeroDivisionError("singular matrix")
        a[col], a[pivot] = a[pivot], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for i in range(n):
            if i != col and a[i][col]:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return [row[n:] for row in a]


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list[Fraction]]:
    return [[sum((Fraction(x) * y for x, y in zip(row, col)), Fraction(0)) for col in zip(*b)]
            for row in a]


def pivot_columns_mod_p(rows: Iterable[Iterable[int]], p: int) -> list[int]:
    """Pivot columns of the reduced echelon form over F_p."""
    rows = [[x % p for x in r] for r in rows]
    pivots: list[int] = []
    rank = 0
    ncols = max((len(r) for r in rows), default=0)
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = pow(rows[rank][col], -1, p)
        rows[rank] = [x * inv % p for x in rows[rank]]
        for i in range(rank + 1, len(rows)):
            f = rows[i][col]
            if f:
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[rank])]
        pivots.append(col)
        rank += 1
    return pivots
