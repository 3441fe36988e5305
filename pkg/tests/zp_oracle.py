"""Brute-force residue enumeration for Z_p-submodules of small rank."""
from functools import lru_cache
from itertools import combinations, product

import numpy as np


def hermite_lattices(p, n, r, m=3):
    """Row-Hermite generating sets: pivots p^e (e <= m-1) in increasing columns,
    entries above a pivot reduced modulo it, entries to the right of a pivot
    arbitrary modulo p^m, zeros to the left."""
    q = p ** m
    for cols in combinations(range(n), r):
        for exps in product(range(m), repeat=r):
            slots = []  # (row, col, range)
            for i, c in enumerate(cols):
                for j in range(c + 1, n):
                    if j in cols:
                        k = cols.index(j)
                        slots.append((i, j, p ** exps[k]))
                    else:
                        slots.append((i, j, q))
            for values in product(*(range(s[2]) for s in slots)):
                rows = [[0] * n for _ in range(r)]
                for i, c in enumerate(cols):
                    rows[i][c] = p ** exps[i]
                for (i, j, _), x in zip(slots, values):
                    rows[i][j] = x
                yield rows


@lru_cache(maxsize=None)
def _coeff_grid(q, r):
    return np.array(list(product(range(q), repeat=r)), dtype=np.int64).reshape(-1, r)


def span_residues(vectors, p, m=3):
    """All Z/p^m-combinations of the vectors, as an (N, n) array."""
    q = p ** m
    V = np.array(vectors, dtype=np.int64) % q
    return (_coeff_grid(q, len(vectors)) @ V) % q


def _codes(S, q):
    weights = q ** np.arange(S.shape[1], dtype=np.int64)
    return np.unique(S @ weights)


def brute_pure(vectors, p, m=3):
    """H cap p^k U == p^k H modulo p^m for k = 1 .. m-1."""
    q = p ** m
    S = span_residues(vectors, p, m)
    for k in range(1, m):
        pk = p ** k
        inter = _codes(S[np.all(S % pk == 0, axis=1)], q)
        scaled = _codes((S * pk) % q, q)
        if not np.array_equal(inter, scaled):
            return False
    return True


def same_span(a, b, p, m=3):
    q = p ** m
    return np.array_equal(_codes(span_residues(a, p, m), q), _codes(span_residues(b, p, m), q))


def spans_everything_mod_p(vectors, p):
    n = len(vectors[0])
    return len(_codes(span_residues(vectors, p, 1), p)) == p ** n


def _val(x, p, cap):
    if x == 0:
        return cap
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def minor_valuation(rows, p, cap=10):
    """Least valuation among maximal minors (the sum of elementary divisors)."""
    r, n = len(rows), len(rows[0])
    best = cap
    for cols in combinations(range(n), r):
        if r == 1:
            d = rows[0][cols[0]]
        else:
            (a, b), (c, d2) = [[rows[i][j] for j in cols] for i in range(2)]
            d = a * d2 - b * c
        best = min(best, _val(d, p, cap))
    return best
