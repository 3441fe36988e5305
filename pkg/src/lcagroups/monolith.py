"""Finite and truncated models of monolithic groups, checked by exact search.

Every report is relative to the window it was computed in: cyclic groups
C_k stand in for Z, and p-adic or Laurent data are truncated at a stated
precision.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Any, Iterable, Sequence

from sympy import factorint, isprime, nextprime, primefactors

from .errors import BudgetExceededError, PrecisionError
from .laurent import LaurentElt
from .linalg import rank_mod_p, rational_inverse, rational_rank
from .padic import DEFAULT_PRECISION, PAdic

__all__ = [
    "FiniteGroupSpec", "ClosureReport", "NoGoCertificate", "DEFAULT_BUDGET",
    "wreath_monolith_window", "normal_closure", "laurent_ideal_density",
    "qp_semidirect_monolith", "hall_window_minimality", "rational_no_go",
    "check_no_go_words", "diagonal_minimals", "trial_rng",
]

DEFAULT_BUDGET = 10 ** 7


def trial_rng(seed: int, index: int) -> random.Random:
    """Independent generator for trial ``index``, a pure function of both."""
    return random.Random(seed * 1_000_003 + index)


@dataclass
class ClosureReport:
    target_contained: bool
    generators_used: int
    window: dict[str, Any]
    witness: Any = None
    details: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.target_contained and self.witness is not None:
            raise ValueError("a successful report carries no witness")

    def to_json(self) -> dict[str, Any]:
        return {
            "target_contained": self.target_contained,
            "generators_used": self.generators_used,
            "window": self.window,
            "witness": self.witness,
            "details": self.details,
        }


# -- finite fields and AGL1(q) ------------------------------------------------


class _Field:
    """GF(q) for q = p or p^2, elements coded as integers c0 + c1*p."""

    def __init__(self, q: int):
        fac = factorint(q)
        if len(fac) != 1:
            raise ValueError(f"{q} is not a prime power")
        (p, k), = fac.items()
        if k > 2:
            raise ValueError(f"only q = p or p^2 is supported, got {p}^{k}")
        self.p, self.k, self.q = p, k, q
        if k == 1:
            self.add = [[(a + b) % p for b in range(q)] for a in range(q)]
            self.mul = [[a * b % p for b in range(q)] for a in range(q)]
        else:
            # x^2 = c0 + c1 x with no root in F_p
            c0, c1 = next((c0, c1) for c0 in range(p) for c1 in range(p)
                          if all((x * x - c1 * x - c0) % p for x in range(p)))

            def mul(a, b):
                a0, a1, b0, b1 = a % p, a // p, b % p, b // p
                hi = a1 * b1
                r0 = (a0 * b0 + hi * c0) % p
                r1 = (a0 * b1 + a1 * b0 + hi * c1) % p
                return r0 + p * r1

            self.add = [[(a % p + b % p) % p + p * ((a // p + b // p) % p)
                         for b in range(q)] for a in range(q)]
            self.mul = [[mul(a, b) for b in range(q)] for a in range(q)]
        self.neg = [next(b for b in range(q) if self.add[a][b] == 0) for a in range(q)]
        self.inv = [None] + [next(b for b in range(1, q) if self.mul[a][b] == 1)
                             for a in range(1, q)]
        self.primitive = next(g for g in range(1, q) if self._order(g) == q - 1)

    def _order(self, g: int) -> int:
        x, n = g, 1
        while x != 1:
            x, n = self.mul[x][g], n + 1
        return n


@dataclass(frozen=True)
class FiniteGroupSpec:
    """AGL1(q): pairs (a, b) with a in F_q, b in F_q^*, (a,b)(a',b') = (a + b a', b b').

    The monolith is the translation subgroup {(a, 1)}.
    """

    q: int
    kind: str = "AGL1"

    def __post_init__(self):
        if self.kind != "AGL1":
            raise ValueError(f"unsupported group kind {self.kind!r}")
        if not 2 < self.q <= 121:
            raise ValueError("q must satisfy 2 < q <= 121 (the monolith is central for q = 2)")
        object.__setattr__(self, "_field", _Field(self.q))

    @property
    def field(self) -> _Field:
        return self._field

    @property
    def order(self) -> int:
        return self.q * (self.q - 1)

    def elements(self) -> list[tuple[int, int]]:
        return [(a, b) for a in range(self.q) for b in range(1, self.q)]

    def identity(self) -> tuple[int, int]:
        return (0, 1)

    def mul(self, x, y):
        F = self.field
        return (F.add[x[0]][F.mul[x[1]][y[0]]], F.mul[x[1]][y[1]])

    def inv(self, x):
        F = self.field
        bi = F.inv[x[1]]
        return (F.neg[F.mul[bi][x[0]]], bi)

    def generators(self) -> list[tuple[int, int]]:
        return [(1, 1), (0, self.field.primitive)]

    def in_monolith(self, x) -> bool:
        return x[1] == 1

    def monolith(self) -> list[tuple[int, int]]:
        return [(a, 1) for a in range(self.q)]

    def to_json(self) -> dict[str, Any]:
        return {"kind": self.kind, "q": self.q}


class _Wreath:
    """F^(C_k) x| C_k, elements (f, s) with (f,s)(g,t) = (f * shift_s(g), s+t)."""

    def __init__(self, F: FiniteGroupSpec, k: int):
        self.F, self.k = F, k
        self.e = (tuple(F.identity() for _ in range(k)), 0)

    def mul(self, x, y):
        (f, s), (g, t) = x, y
        k, m = self.k, self.F.mul
        return (tuple(m(f[i], g[(i - s) % k]) for i in range(k)), (s + t) % k)

    def inv(self, x):
        f, s = x
        k = self.k
        finv = [self.F.inv(a) for a in f]
        return (tuple(finv[(i + s) % k] for i in range(k)), (-s) % k)

    def conj(self, g, x):
        return self.mul(self.mul(g, x), self.inv(g))

    def generators(self):
        one = self.F.identity()
        gens = [((a,) + (one,) * (self.k - 1), 0) for a in self.F.generators()]
        gens.append((self.e[0], 1))
        return gens

    def random_element(self, rng: random.Random):
        elems = self.F.elements()
        return (tuple(rng.choice(elems) for _ in range(self.k)), rng.randrange(self.k))

    def target(self):
        for f in product(self.F.monolith(), repeat=self.k):
            yield (f, 0)


def normal_closure(group, x, budget: int = DEFAULT_BUDGET) -> set:
    """Elements of the normal closure of ``x``, built by breadth-first search.

    The subgroup is grown from a generating set; any conjugate of a generator
    by a group generator that falls outside is added as a new generator.
    """
    elems = {group.e}
    order = [group.e]
    gens: list = []
    work = 0

    def extend(g):
        nonlocal work
        gens.append(g)
        new = []
        for h in order:
            t = group.mul(h, g)
            if t not in elems:
                elems.add(t)
                new.append(t)
        i = 0
        while i < len(new):
            h = new[i]
            i += 1
            for s in gens:
                t = group.mul(h, s)
                if t not in elems:
                    elems.add(t)
                    new.append(t)
        order.extend(new)
        work += len(order)
        if work > budget:
            raise BudgetExceededError(f"normal closure exceeded {budget} elements")

    extend(x)
    G = group.generators()
    changed = True
    while changed:
        changed = False
        for s in list(gens):
            for g in G:
                c = group.conj(g, s)
                if c not in elems:
                    extend(c)
                    changed = True
    return elems


def wreath_monolith_window(F: FiniteGroupSpec, k: int, trials: int = 100, seed: int = 0,
                           budget: int = DEFAULT_BUDGET, start=None) -> ClosureReport:
    """Check that normal closures of nontrivial elements contain M^(C_k).

    ``start`` fixes the element instead of drawing random ones; it is given
    as ``(f, s)`` with ``f`` a length-k sequence of F-elements.
    """
    if k < 2:
        raise ValueError("window size k must be at least 2")
    size = F.order ** k * k
    if size > budget:
        raise BudgetExceededError(f"group of order {size} exceeds budget {budget}")
    W = _Wreath(F, k)
    window = {"group": F.to_json(), "k": k, "order": size, "seed": seed}
    if start is not None:
        f, s = start
        elements = [(tuple(tuple(a) for a in f), s % k)]
    else:
        elements = []
        for i in range(trials):
            rng = trial_rng(seed, i)
            x = W.random_element(rng)
            while x == W.e:
                x = W.random_element(rng)
            elements.append(x)
    target = list(W.target())
    sizes = []
    for idx, x in enumerate(elements):
        if x == W.e:
            raise ValueError("start element must be nontrivial")
        closure = normal_closure(W, x, budget)
        sizes.append(len(closure))
        missing = next((t for t in target if t not in closure), None)
        if missing is not None:
            return ClosureReport(False, len(elements), window,
                                 witness={"trial": idx, "element": _wjson(x),
                                          "unreached": _wjson(missing)},
                                 details={"closure_sizes": sizes})
    return ClosureReport(True, len(elements), window,
                         details={"closure_sizes": sizes, "target_size": len(target)})


def _wjson(x):
    f, s = x
    return {"f": [list(a) for a in f], "s": s}


# -- Laurent shift span --------------------------------------------------------


def laurent_ideal_density(p: int, N: int, trials: int = 1, seed: int = 0,
                          g: LaurentElt | None = None) -> ClosureReport:
    """Rank of {t^k g : |k| <= N} projected to exponents [-N/2, N/2] over F_p."""
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    if N < 2:
        raise ValueError("window N must be at least 2")
    h = N // 2
    dim = 2 * h + 1
    window = {"p": p, "N": N, "low": -h, "high": h, "seed": seed}
    if g is not None:
        if g.is_zero:
            raise ValueError("g must be nonzero")
        samples = [g]
    else:
        samples = []
        for i in range(trials):
            rng = trial_rng(seed, i)
            while True:
                cs = {e: rng.randrange(p) for e in range(-h, h + 1)}
                if any(cs.values()):
                    break
            samples.append(LaurentElt.from_dict(p, cs, precision_high=3 * N + 2))
    ranks = []
    for idx, x in enumerate(samples):
        support = [e for e in x.to_dict() if -h <= e <= h]
        if not support or any(e < -h or e > h for e in x.to_dict()):
            raise ValueError("g must be supported in the window [-N/2, N/2]")
        rows = []
        for k in range(-N, N + 1):
            s = x.shift(k).to_dict()
            rows.append([s.get(e, 0) for e in range(-h, h + 1)])
        r = rank_mod_p(rows, p)
        ranks.append(r)
        if r < dim:
            return ClosureReport(False, len(rows), window,
                                 witness={"trial": idx, "g": str(x), "rank": r},
                                 details={"dimension": dim, "ranks": ranks})
    return ClosureReport(True, 2 * N + 1, window, details={"dimension": dim, "ranks": ranks})


# -- Q_p x| <s>, s acting by p --------------------------------------------------


def _padic(x, p: int, precision: int) -> PAdic:
    if isinstance(x, PAdic):
        if x.p != p:
            raise ValueError(f"expected a {p}-adic number, got a {x.p}-adic one")
        return x
    return PAdic.from_rational(Fraction(x), p, precision)


def qp_semidirect_monolith(p: int, K: int, a, precision: int = DEFAULT_PRECISION) -> ClosureReport:
    """Valuation floor of the Z_p-module spanned by {p^k a : |k| <= K}.

    A Z_p-submodule generated by finitely many elements is p^m Z_p with m
    the least valuation among them, so the span contains p^(v(a)-K) Z_p and
    grows to Q_p as K does.
    """
    a = _padic(a, p, precision)
    if a.is_zero:
        raise ValueError("a must be nonzero")
    if K < 0:
        raise ValueError("K must be non-negative")
    orbit = [a * PAdic.from_rational(Fraction(p) ** k, p, a.precision) for k in range(-K, K + 1)]
    if any(x.is_zero for x in orbit):
        raise PrecisionError("an orbit element vanished at the working precision")
    floor = min(x.valuation for x in orbit)
    expected = a.valuation - K
    window = {"p": p, "K": K, "precision": a.precision}
    details = {"floor_valuation": floor, "a_valuation": a.valuation}
    if floor != expected:
        return ClosureReport(False, len(orbit), window, witness={"floor": floor}, details=details)
    return ClosureReport(True, len(orbit), window, details=details)


# -- Hall's module on a cyclic window ---------------------------------------------


def hall_window_minimality(k: int, prime_assignment: Sequence[int], v: Sequence,
                           require_distinct: bool = True) -> ClosureReport:
    """Q-span of the orbit of v under the shift and the diagonal prime scaling.

    The span is the least subspace containing v and stable under both maps,
    found by saturating a spanning set. ``require_distinct=False`` admits
    repeated primes, which is how the negative control is run.
    """
    primes = list(prime_assignment)
    if len(primes) != k or k < 1:
        raise ValueError("need exactly k primes")
    if any(not isprime(q) for q in primes):
        raise ValueError("prime_assignment must contain primes")
    if require_distinct and len(set(primes)) != k:
        raise ValueError("primes must be distinct")
    v = [Fraction(x) for x in v]
    if len(v) != k or not any(v):
        raise ValueError("v must be a nonzero vector of length k")

    def xi(w):
        return [w[(i - 1) % k] for i in range(k)]

    def eta(w):
        return [q * x for q, x in zip(primes, w)]

    span = [v]
    rank = 1
    frontier = [v]
    while frontier and rank < k:
        nxt = []
        for w in frontier:
            for image in (xi(w), eta(w)):
                if rational_rank(span + [image]) > rank:
                    span.append(image)
                    rank += 1
                    nxt.append(image)
        frontier = nxt
    window = {"k": k, "primes": primes}
    details = {"span_dimension": rank}
    if rank < k:
        return ClosureReport(False, len(span), window,
                             witness={"v": [str(x) for x in v], "dimension": rank},
                             details=details)
    return ClosureReport(True, len(span), window, details=details)


# -- rational no-go ------------------------------------------------------------------


@dataclass(frozen=True)
class NoGoCertificate:
    prime_set: tuple[int, ...]
    excluded_prime: int
    matrices: tuple[tuple[tuple[Fraction, ...], ...], ...]
    inverses: tuple[tuple[tuple[Fraction, ...], ...], ...]
    statement: str

    def __post_init__(self):
        for m in self.matrices + self.inverses:
            for row in m:
                for x in row:
                    if x.denominator % self.excluded_prime == 0:
                        raise ValueError("excluded prime divides a generator denominator")

    def to_json(self) -> dict[str, Any]:
        def mj(m):
            return [[str(x) for x in row] for row in m]
        return {
            "prime_set": list(self.prime_set),
            "excluded_prime": self.excluded_prime,
            "matrices": [mj(m) for m in self.matrices],
            "inverses": [mj(m) for m in self.inverses],
            "statement": self.statement,
        }


def _denominator_primes(m) -> set[int]:
    out: set[int] = set()
    for row in m:
        for x in row:
            out.update(primefactors(Fraction(x).denominator))
    return out


def rational_no_go(matrices: Iterable[Sequence[Sequence]]) -> NoGoCertificate:
    """Certificate that the generated module misses some denominator prime.

    Words in the matrices and their inverses only involve the finitely many
    primes pi found in their denominators, so the module they generate from
    the standard basis has coordinates in Z[1/pi] and is a proper subgroup.
    """
    mats = [tuple(tuple(Fraction(x) for x in row) for row in m) for m in matrices]
    if not mats:
        raise ValueError("need at least one matrix")
    n = len(mats[0])
    if n < 1 or any(len(m) != n or any(len(r) != n for r in m) for m in mats):
        raise ValueError("matrices must be square of a common size")
    invs = []
    for m in mats:
        try:
            invs.append(tuple(tuple(r) for r in rational_inverse(m)))
        except ZeroDivisionError:
            raise ValueError("singular matrix") from None
    pi: set[int] = set()
    for m in mats + invs:
        pi |= _denominator_primes(m)
    q = 2
    while q in pi:
        q = int(nextprime(q))
    statement = (f"the module generated from the standard basis of Q^{n} has coordinates in "
                 f"Z[1/p : p in {sorted(pi)}], which excludes 1/{q}")
    return NoGoCertificate(tuple(sorted(pi)), q, tuple(mats), tuple(invs), statement)


def _scaled(m) -> tuple[list[list[int]], int]:
    """Integer matrix A and denominator d with m = A / d."""
    d = math.lcm(*(x.denominator for row in m for x in row))
    return [[int(x * d) for x in row] for row in m], d


def _int_mul(a, b):
    return [[sum(x * y for x, y in zip(row, col)) for col in zip(*b)] for row in a]


def check_no_go_words(cert: NoGoCertificate, words: int = 1000, max_length: int = 6,
                      seed: int = 0) -> tuple[bool, Any]:
    """Spot-check random words of length <= max_length in generators and inverses.

    Returns ``(True, None)`` or ``(False, word)`` for a word whose product has
    a denominator divisible by the excluded prime. Products are formed
    exactly over the integers with a separate common denominator.
    """
    letters = [_scaled(m) for m in list(cert.matrices) + list(cert.inverses)]
    q = cert.excluded_prime
    for i in range(words):
        rng = trial_rng(seed, i)
        word = [rng.randrange(len(letters)) for _ in range(rng.randint(1, max_length))]
        acc, den = letters[word[0]]
        for w in word[1:]:
            a, d = letters[w]
            acc, den = _int_mul(acc, a), den * d
        if any((den // math.gcd(x, den)) % q == 0 for row in acc for x in row):
            return False, word
    return True, None


# -- diagonal subgroups of Q_p x Q_p -----------------------------------------------------


def diagonal_minimals(p: int, lambdas: Sequence, K: int,
                      precision: int = DEFAULT_PRECISION) -> ClosureReport:
    """Check the diagonals L_lambda = {(a, lambda a)} in (Q_p x Q_p) x| <s>.

    (a) each L_lambda is stable under s (multiplication by p) and Z_p-scaling;
    (b) distinct lambdas give distinct subgroups, witnessed by (1, lambda);
    (c) the orbit of (a, lambda a) under p^k, |k| <= K, stays in L_lambda with
        first-coordinate valuations filling [v(a) - K, v(a) + K].
    """
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    lams = [_padic(x, p, precision) for x in lambdas]
    lams = [x.with_precision(min(x.precision, precision)) if not x.is_zero
            else PAdic.zero(p, min(x.precision, precision)) for x in lams]
    for i in range(len(lams)):
        for j in range(i):
            if lams[i].equal_at_precision(lams[j]):
                raise ValueError(f"duplicate lambda at positions {j} and {i}")

    def member(x: PAdic, y: PAdic, lam: PAdic) -> bool:
        return (y - lam * x).is_zero

    one = PAdic.from_rational(1, p, precision)
    samples = [one, PAdic.from_rational(Fraction(1, p), p, precision),
               PAdic.from_rational(1 + p, p, precision)]
    scalars = [PAdic.from_rational(c, p, precision) for c in (p, 1 + p, 2 + p * p)]
    s = PAdic.from_rational(p, p, precision)
    per_lambda = []
    for idx, lam in enumerate(lams):
        for a in samples:
            x, y = a, lam * a
            for c in [s] + scalars:
                if not member(c * x, c * y, lam):
                    return ClosureReport(False, len(lams), {"p": p, "K": K, "precision": precision},
                                         witness={"lambda": str(lam), "check": "invariance"})
        vals = []
        for k in range(-K, K + 1):
            c = PAdic.from_rational(Fraction(p) ** k, p, precision)
            x, y = c * one, c * (lam * one)
            if not member(x, y, lam):
                return ClosureReport(False, len(lams), {"p": p, "K": K, "precision": precision},
                                     witness={"lambda": str(lam), "check": "orbit"})
            vals.append(x.valuation)
        if sorted(vals) != list(range(-K, K + 1)):
            raise PrecisionError("orbit valuations do not fill the window")
        per_lambda.append({"lambda": str(lam), "valuation_window": [min(vals), max(vals)]})
    for i, li in enumerate(lams):
        for j, lj in enumerate(lams):
            if i != j and member(one, li * one, lj):
                return ClosureReport(False, len(lams), {"p": p, "K": K, "precision": precision},
                                     witness={"lambda_i": str(li), "lambda_j": str(lj),
                                              "check": "distinct"})
    return ClosureReport(True, len(lams), {"p": p, "K": K, "precision": precision},
                         details={"diagonals": per_lambda, "pairs_separated":
                                  len(lams) * (len(lams) - 1) // 2})
