"""Finite-rank Z_p-module linear algebra at precision p^M.

Vectors are integer tuples reduced modulo ``p**M``; p-integral fractions
are accepted on input. Anything that would need digits beyond ``p**M``
raises :class:`PrecisionError`.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Sequence

from .errors import (
    ImpureSubmoduleError, LinearDependenceError, NoUnitPivotError, PrecisionError,
)
from .linalg import pivot_columns_mod_p

__all__ = [
    "DEFAULT_PRECISION", "ZpMatrix", "ZpBasis", "triangular_basis", "is_pure",
    "complete_to_summand", "has_root", "in_span", "elementary_divisor_valuations",
]

DEFAULT_PRECISION = 32

Vector = tuple[int, ...]


def _reduce(x, p: int, mod: int) -> int:
    if isinstance(x, Fraction):
        if x.denominator % p == 0:
            raise ValueError(f"{x} is not p-integral for p={p}")
        return x.numerator * pow(x.denominator, -1, mod) % mod
    return int(x) % mod


def _vectors(vectors: Iterable[Sequence], n: int, p: int, M: int) -> list[list[int]]:
    mod = p ** M
    out = []
    for v in vectors:
        v = [_reduce(x, p, mod) for x in v]
        if len(v) != n:
            raise ValueError(f"vector of length {len(v)} in ambient rank {n}")
        out.append(v)
    return out


def _val(x: int, p: int, M: int) -> int:
    """Valuation of x mod p^M, with M standing in for zero."""
    if x == 0:
        return M
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


@dataclass(frozen=True)
class ZpMatrix:
    p: int
    M: int
    rows: tuple[Vector, ...]

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence], p: int, M: int = DEFAULT_PRECISION) -> ZpMatrix:
        rows = list(rows)
        n = len(rows[0]) if rows else 0
        return cls(p, M, tuple(tuple(r) for r in _vectors(rows, n, p, M)))

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.rows[0]) if self.rows else 0

    def to_json(self) -> list[list[str]]:
        return [[str(x) for x in r] for r in self.rows]


@dataclass(frozen=True)
class ZpBasis:
    """Basis vectors expressed in permuted coordinates.

    Coordinate ``i`` of each stored vector is the coefficient of the original
    basis vector ``e_{permutation[i]}``.
    """

    p: int
    M: int
    vectors: tuple[Vector, ...]
    permutation: tuple[int, ...]
    triangular_certificate: bool

    @property
    def matrix(self) -> ZpMatrix:
        return ZpMatrix(self.p, self.M, self.vectors)

    def in_original_coordinates(self) -> list[Vector]:
        n = len(self.permutation)
        out = []
        for v in self.vectors:
            w = [0] * n
            for i, src in enumerate(self.permutation):
                w[src] = v[i]
            out.append(tuple(w))
        return out

    def is_triangular(self) -> bool:
        """Check the unit upper-triangular shape directly."""
        return all(
            v[i] == 1 and all(x == 0 for x in v[:i])
            for i, v in enumerate(self.vectors)
        )

    def to_json(self) -> dict[str, Any]:
        return {
            "p": self.p, "M": self.M,
            "vectors": self.matrix.to_json(),
            "original_coordinates": [[str(x) for x in v] for v in self.in_original_coordinates()],
            "permutation": list(self.permutation),
            "triangular_certificate": self.triangular_certificate,
        }


def triangular_basis(vectors: Iterable[Sequence], ambient_rank: int, p: int,
                     M: int = DEFAULT_PRECISION) -> ZpBasis:
    """Unit upper-triangular basis for the chain spanned by successive prefixes.

    Each new vector is reduced against the earlier basis vectors so that it
    vanishes on the earlier coordinates; then the lowest later coordinate
    holding a unit is scaled to 1 and swapped into the diagonal position.
    """
    mod = p ** M
    vecs = _vectors(vectors, ambient_rank, p, M)
    perm = list(range(ambient_rank))
    basis: list[list[int]] = []
    for idx, a in enumerate(vecs):
        v = [a[perm[j]] for j in range(ambient_rank)]
        for i, b in enumerate(basis):
            c = v[i]
            if c:
                v = [(x - c * y) % mod for x, y in zip(v, b)]
        n = len(basis)
        if not any(v):
            raise LinearDependenceError(f"vector {idx} lies in the span of its predecessors mod {p}^{M}")
        k = next((j for j in range(n, ambient_rank) if v[j] % p), None)
        if k is None:
            raise NoUnitPivotError(
                f"vector {idx} reduces into p*U; the prefix span is not a direct summand")
        inv = pow(v[k], -1, mod)
        v = [x * inv % mod for x in v]
        for w in basis + [v]:
            w[k], w[n] = w[n], w[k]
        perm[k], perm[n] = perm[n], perm[k]
        basis.append(v)
    return ZpBasis(p, M, tuple(tuple(v) for v in basis), tuple(perm), True)


def _smith(rows: list[list[int]], n: int, p: int, M: int) -> tuple[list[int], list[list[int]]]:
    """Diagonalize over Z/p^M by row and column operations.

    Returns the pivot valuations and the accumulated column transform V,
    so that the row space of ``rows @ V`` is spanned by ``p**e_i * f_i``.
    """
    mod = p ** M
    a = [list(r) for r in rows]
    V = [[int(i == j) for j in range(n)] for i in range(n)]
    vals: list[int] = []
    for t in range(min(len(a), n)):
        best = None
        for i in range(t, len(a)):
            for j in range(t, n):
                if a[i][j]:
                    e = _val(a[i][j], p, M)
                    if best is None or e < best[0]:
                        best = (e, i, j)
        if best is None:
            break
        e, i, j = best
        a[t], a[i] = a[i], a[t]
        for r in a:
            r[t], r[j] = r[j], r[t]
        for r in V:
            r[t], r[j] = r[j], r[t]
        unit = a[t][t] // p ** e
        inv = pow(unit, -1, mod)
        a[t] = [x * inv % mod for x in a[t]]
        pe = p ** e
        for i in range(t + 1, len(a)):
            f = a[i][t] // pe
            if f:
                a[i] = [(x - f * y) % mod for x, y in zip(a[i], a[t])]
        for j in range(t + 1, n):
            f = a[t][j] // pe
            if f:
                for r in a:
                    r[j] = (r[j] - f * r[t]) % mod
                for r in V:
                    r[j] = (r[j] - f * r[t]) % mod
        vals.append(e)
    return vals, V


def elementary_divisor_valuations(sub: Iterable[Sequence], ambient_rank: int, p: int,
                                  M: int = DEFAULT_PRECISION) -> list[int]:
    """Valuations of the elementary divisors; raises if rank drops at precision."""
    rows = _vectors(sub, ambient_rank, p, M)
    vals, _ = _smith(rows, ambient_rank, p, M)
    if len(vals) < len(rows):
        raise PrecisionError(
            f"pivot valuation reached {M}: vectors are dependent modulo {p}^{M}")
    return vals


def is_pure(sub: Iterable[Sequence], ambient_rank: int, p: int,
            M: int = DEFAULT_PRECISION) -> bool:
    """Pure iff every elementary divisor is a unit (the basis is full rank mod p)."""
    return all(e == 0 for e in elementary_divisor_valuations(sub, ambient_rank, p, M))


def complete_to_summand(sub: Iterable[Sequence], ambient_rank: int, p: int,
                        M: int = DEFAULT_PRECISION) -> ZpBasis:
    rows = _vectors(sub, ambient_rank, p, M)
    if not is_pure(rows, ambient_rank, p, M):
        raise ImpureSubmoduleError("submodule is not pure, so it is not a direct summand")
    pivots = set(pivot_columns_mod_p(rows, p))
    extra = [tuple(int(i == j) for i in range(ambient_rank))
             for j in range(ambient_rank) if j not in pivots]
    return ZpBasis(p, M, tuple(tuple(r) for r in rows) + tuple(extra),
                   tuple(range(ambient_rank)), False)


def in_span(w: Sequence, sub: Iterable[Sequence], p: int, M: int = DEFAULT_PRECISION) -> bool:
    """Whether ``w`` lies in the Z_p-span of ``sub`` modulo p^M."""
    n = len(w)
    rows = _vectors(sub, n, p, M)
    (w,) = _vectors([w], n, p, M)
    mod = p ** M
    vals, V = _smith(rows, n, p, M)
    wv = [sum(w[i] * V[i][j] for i in range(n)) % mod for j in range(n)]
    for j, x in enumerate(wv):
        e = vals[j] if j < len(vals) else M
        if x % p ** e:
            return False
    return True


def has_root(v: Sequence, n: int, sub: Iterable[Sequence], p: int,
             M: int = DEFAULT_PRECISION) -> tuple[int, ...] | None:
    """An element w of span(sub) with n*w = v, or None.

    Roots are unique in a torsion-free module: w = v/n. The prime-to-p part
    of n is always invertible; the p-part needs v divisible by p^k in every
    coordinate. The returned w is exact modulo p^(M-k).
    """
    if n < 1:
        raise ValueError("n must be positive")
    k, m = 0, n
    while m % p == 0:
        m //= p
        k += 1
    if k >= M:
        raise PrecisionError(f"{p}^{k} divides n, beyond precision {p}^{M}")
    mod = p ** M
    (vv,) = _vectors([v], len(v), p, M)
    minv = pow(m, -1, mod)
    vv = [x * minv % mod for x in vv]
    if any(x % p ** k for x in vv):
        return None
    N = M - k
    w = tuple(x // p ** k % p ** N for x in vv)
    if not in_span(w, sub, p, N):
        return None
    return w
