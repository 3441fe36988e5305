"""Structural predicates of terms, computed by recursion over the term tree.

The atom table below is the only place group-theoretic facts enter; every
constructor rule is a distribution law. Products and sums of dense subsets
are dense in the product (resp. direct sum) topology, which justifies
passing density-type predicates through Power and RestrictedPower
coordinatewise.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Iterable, Mapping

from sympy import isprime, nextprime, primefactors

from .terms import (
    Atom, AtomKind, DirectSum, GroupExpr, LocalProd, Power, RestrictedPower,
    is_compact, is_discrete, is_trivial, require_valid,
)

__all__ = [
    "PStatus", "PrimeSet", "PrimeMap", "PredicateVector", "predicate_vector",
    "nondense_primes", "torsion_primes", "densely_divisible",
]


class PStatus(enum.Enum):
    """Whether the closed subgroup of compact elements is 0, everything, or neither."""

    TRIVIAL = "Trivial"
    ALL = "All"
    MIXED = "Mixed"


@dataclass(frozen=True)
class PrimeSet:
    """A finite set of primes, or the complement of one."""

    cofinite: bool
    primes: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "primes", tuple(sorted(set(self.primes))))

    @classmethod
    def finite(cls, primes: Iterable[int] = ()) -> PrimeSet:
        return cls(False, tuple(primes))

    @classmethod
    def all_except(cls, primes: Iterable[int] = ()) -> PrimeSet:
        return cls(True, tuple(primes))

    def __contains__(self, p: int) -> bool:
        return (p in self.primes) != self.cofinite

    def is_empty(self) -> bool:
        return not self.cofinite and not self.primes

    def union(self, other: PrimeSet) -> PrimeSet:
        a, b = set(self.primes), set(other.primes)
        if not self.cofinite and not other.cofinite:
            return PrimeSet.finite(a | b)
        if self.cofinite and other.cofinite:
            return PrimeSet.all_except(a & b)
        excluded, included = (a, b) if self.cofinite else (b, a)
        return PrimeSet.all_except(excluded - included)

    __or__ = union

    def smallest(self) -> int | None:
        if not self.cofinite:
            return self.primes[0] if self.primes else None
        p = 2
        while p in self.primes:
            p = nextprime(p)
        return p

    def to_json(self) -> dict[str, Any]:
        return {"kind": "CoFinite" if self.cofinite else "Finite",
                "primes": list(self.primes)}

    def __str__(self) -> str:
        kind = "CoFinite" if self.cofinite else "Finite"
        return f"{kind}{list(self.primes)}"


@dataclass(frozen=True)
class PrimeMap:
    """prime -> bool with finitely many exceptions to ``default``."""

    default: bool
    exceptions: Mapping[int, bool] = field(default_factory=dict)

    def __post_init__(self):
        cleaned = {p: v for p, v in sorted(self.exceptions.items()) if v != self.default}
        object.__setattr__(self, "exceptions", cleaned)

    def __getitem__(self, p: int) -> bool:
        return self.exceptions.get(p, self.default)

    def __hash__(self):
        return hash((self.default, tuple(self.exceptions.items())))

    def support(self) -> list[int]:
        return list(self.exceptions)

    def primes_with(self, value: bool) -> list[int]:
        """Exceptional primes mapped to ``value`` (the finite side only)."""
        return [p for p, v in self.exceptions.items() if v == value]

    def conjoin(self, other: PrimeMap) -> PrimeMap:
        keys = set(self.exceptions) | set(other.exceptions)
        return PrimeMap(self.default and other.default,
                        {p: self[p] and other[p] for p in keys})

    def to_json(self) -> dict[str, Any]:
        return {"default": self.default,
                "exceptions": {str(p): v for p, v in self.exceptions.items()}}


@dataclass(frozen=True)
class PredicateVector:
    compact: bool
    discrete: bool
    connected: bool
    totally_disconnected: bool
    torsion_free: bool
    exponent_p: int | None
    p_status: PStatus
    pp_all: PrimeMap
    densely_divisible: bool

    def to_json(self) -> dict[str, Any]:
        return {
            "compact": self.compact,
            "discrete": self.discrete,
            "connected": self.connected,
            "totally_disconnected": self.totally_disconnected,
            "torsion_free": self.torsion_free,
            "exponent_p": self.exponent_p,
            "P_status": self.p_status.value,
            "Pp_all": self.pp_all.to_json(),
            "densely_divisible": self.densely_divisible,
        }


# Per-atom facts: (connected, torsion_free, exponent, P status).
# exponent 0 means unbounded.
_ATOM_FACTS: dict[AtomKind, tuple[bool, bool, int, PStatus]] = {
    AtomKind.R: (True, True, 0, PStatus.TRIVIAL),
    AtomKind.Z: (False, True, 0, PStatus.TRIVIAL),
    AtomKind.T: (True, False, 0, PStatus.ALL),
    AtomKind.Q: (False, True, 0, PStatus.TRIVIAL),
    AtomKind.QHAT: (True, True, 0, PStatus.ALL),
    AtomKind.PRUFER: (False, False, 0, PStatus.ALL),
    AtomKind.ZP: (False, True, 0, PStatus.ALL),
    AtomKind.QP: (False, True, 0, PStatus.ALL),
}


def _atom_facts(atom: Atom) -> tuple[bool, bool, int, PStatus]:
    if atom.kind is AtomKind.CYC:
        return (False, False, atom.arg, PStatus.ALL)
    return _ATOM_FACTS[atom.kind]


def _atom_pp(atom: Atom) -> PrimeMap:
    if atom.kind in (AtomKind.ZP, AtomKind.QP, AtomKind.PRUFER):
        return PrimeMap(False, {atom.arg: True})
    if atom.kind is AtomKind.CYC:
        ps = primefactors(atom.arg)
        return PrimeMap(False, {ps[0]: True} if len(ps) == 1 else {})
    return PrimeMap(False)


def _join_status(statuses: list[PStatus]) -> PStatus:
    distinct = set(statuses)
    if len(distinct) == 1:
        return distinct.pop()
    return PStatus.MIXED


def _lcm_exponent(a: int, b: int) -> int:
    if a == 0 or b == 0:
        return 0
    return math.lcm(a, b)


_TRIVIAL_VECTOR = PredicateVector(
    compact=True, discrete=True, connected=True, totally_disconnected=True,
    torsion_free=True, exponent_p=None, p_status=PStatus.ALL,
    pp_all=PrimeMap(True), densely_divisible=True,
)


@lru_cache(maxsize=4096)
def _raw(expr: GroupExpr) -> tuple[bool, bool, bool, int, PStatus, PrimeMap]:
    """(connected, totally_disconnected, torsion_free, exponent, P, P_p) for a
    nontrivial term."""
    if isinstance(expr, Atom):
        conn, tf, exp, status = _atom_facts(expr)
        return conn, not conn, tf, exp, status, _atom_pp(expr)
    if isinstance(expr, DirectSum):
        parts = [_raw(t) for t in expr.terms if not is_trivial(t)]
        exponent = 1
        pp = PrimeMap(True)
        for part in parts:
            exponent = _lcm_exponent(exponent, part[3])
            pp = pp.conjoin(part[5])
        return (
            all(x[0] for x in parts),
            all(x[1] for x in parts),
            all(x[2] for x in parts),
            exponent,
            _join_status([x[4] for x in parts]),
            pp,
        )
    if isinstance(expr, (Power, RestrictedPower)):
        return _raw(expr.base)
    if isinstance(expr, LocalProd):
        return False, True, True, 0, PStatus.ALL, PrimeMap(False, {expr.p: True})
    raise TypeError(f"not a group expression: {expr!r}")


def predicate_vector(expr: GroupExpr) -> PredicateVector:
    require_valid(expr)
    if is_trivial(expr):
        return _TRIVIAL_VECTOR
    conn, td, tf, exponent, status, pp = _raw(expr)
    exponent_p = exponent if isprime(exponent) else None
    return PredicateVector(
        compact=is_compact(expr),
        discrete=is_discrete(expr),
        connected=conn,
        totally_disconnected=td,
        torsion_free=tf,
        exponent_p=exponent_p,
        p_status=status,
        pp_all=pp,
        densely_divisible=_nondense(expr).is_empty(),
    )


_EMPTY = PrimeSet.finite()
_EVERY = PrimeSet.all_except()


@lru_cache(maxsize=4096)
def _nondense(expr: GroupExpr) -> PrimeSet:
    if isinstance(expr, Atom):
        if expr.kind is AtomKind.ZP:
            return PrimeSet.finite([expr.arg])
        if expr.kind is AtomKind.Z:
            return _EVERY
        if expr.kind is AtomKind.CYC:
            return PrimeSet.finite(primefactors(expr.arg))
        return _EMPTY
    if isinstance(expr, DirectSum):
        out = _EMPTY
        for t in expr.terms:
            out = out | _nondense(t)
        return out
    if is_trivial(expr):
        return _EMPTY
    if isinstance(expr, (Power, RestrictedPower)):
        return _nondense(expr.base)
    return _EMPTY


def nondense_primes(expr: GroupExpr) -> PrimeSet:
    """Primes p for which pA is not dense in A."""
    require_valid(expr)
    return _nondense(expr)


@lru_cache(maxsize=4096)
def _torsion(expr: GroupExpr) -> PrimeSet:
    if isinstance(expr, Atom):
        if expr.kind is AtomKind.T:
            return _EVERY
        if expr.kind is AtomKind.CYC:
            return PrimeSet.finite(primefactors(expr.arg))
        if expr.kind is AtomKind.PRUFER:
            return PrimeSet.finite([expr.arg])
        return _EMPTY
    if isinstance(expr, DirectSum):
        out = _EMPTY
        for t in expr.terms:
            out = out | _torsion(t)
        return out
    if is_trivial(expr):
        return _EMPTY
    if isinstance(expr, (Power, RestrictedPower)):
        return _torsion(expr.base)
    return _EMPTY


def torsion_primes(expr: GroupExpr) -> PrimeSet:
    """Primes p for which the p-torsion subgroup {a : pa = 0} is nonzero."""
    require_valid(expr)
    return _torsion(expr)


def densely_divisible(expr: GroupExpr) -> bool:
    """Whether the largest divisible subgroup is dense.

    Divisibility is dense exactly when pA is dense for every prime p. For
    connected compact atoms this is the compact case (divisible iff
    connected); for the totally disconnected torsion-free atoms with
    P_p = A it is the pA-density criterion; the remaining atoms (R, Q,
    Prufer) are divisible outright. All constructors preserve both sides.
    """
    return nondense_primes(expr).is_empty()
