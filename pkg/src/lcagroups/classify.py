"""Decide topological characteristic simplicity and name the canonical family.

A nontrivial abelian l.c.s.c. group is topologically characteristically
simple exactly when it passes five structural conditions:

1. prime exponent, or torsion-free;
2. if torsion-free, pA is dense for every prime p;
3. connected or totally disconnected;
4. the subgroup of compact elements is 0 or everything;
5. if totally disconnected with every element compact, P_p(A) = A for some p.

The simple ones fall into five families, each with uniquely determined
parameters, so isomorphism of canonical forms is parameter equality.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, ClassVar

from sympy import isprime

from .errors import NotSimpleError, TrivialGroupError
from .predicates import PStatus, nondense_primes, predicate_vector, torsion_primes
from .terms import (
    ALEPH0, Atom, AtomKind, Cardinal, CardinalLike, Cyc, DirectSum, GroupExpr,
    LocalProd, Power, QHAT, Q, R, RestrictedPower, is_trivial, normal_form,
    require_valid,
)

__all__ = [
    "CanonicalForm", "ElemAbelian", "Reals", "RationalsSum",
    "RationalsDualPower", "QpLocal", "SimplicityVerdict",
    "characteristically_simple", "canonical_form", "iso_canonical",
    "dual_canonical", "CONDITIONS",
]

CONDITIONS = {
    1: "prime exponent or torsion-free",
    2: "torsion-free implies pA dense for every prime p",
    3: "connected or totally disconnected",
    4: "P(A) trivial or all of A",
    5: "totally disconnected with P(A) = A implies P_p(A) = A for some p",
}


def _finite_positive(n: int, what: str):
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ValueError(f"{what} must be a positive integer, got {n!r}")


def _nonzero_cardinal(k: CardinalLike, what: str) -> Cardinal:
    k = Cardinal.of(k)
    if k.value == 0:
        raise ValueError(f"{what} must be at least 1")
    return k


def _prime(p: int):
    if not isprime(p):
        raise ValueError(f"{p} is not prime")


class CanonicalForm:
    """Base class of the five canonical families."""

    family: ClassVar[str]

    def params(self) -> dict[str, Any]:
        raise NotImplementedError

    @property
    def cg_realizable(self) -> bool:
        """Occurs as a minimal closed normal subgroup of a compactly generated group."""
        return True

    def to_term(self) -> GroupExpr:
        raise NotImplementedError

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {"family": self.family}
        for k, v in self.params().items():
            out[k] = v.to_json() if isinstance(v, Cardinal) else v
        out["cg_realizable"] = self.cg_realizable
        return out

    def __str__(self) -> str:
        args = ", ".join(str(v) for v in self.params().values())
        return f"{self.family}({args})"


@dataclass(frozen=True)
class ElemAbelian(CanonicalForm):
    """C_p^kappa + C_p^(kappa'), with kappa' in {0, aleph_0}."""

    p: int
    kappa: Cardinal
    kappa_prime: Cardinal

    family: ClassVar[str] = "ElemAbelian"

    def __post_init__(self):
        _prime(self.p)
        object.__setattr__(self, "kappa", Cardinal.of(self.kappa))
        object.__setattr__(self, "kappa_prime", Cardinal.of(self.kappa_prime))
        if self.kappa_prime not in (Cardinal(0), ALEPH0):
            raise ValueError("kappa' must be 0 or aleph_0")
        if self.kappa == Cardinal(0) and self.kappa_prime == Cardinal(0):
            raise ValueError("the trivial group has no canonical form")
        if self.kappa.is_finite and self.kappa_prime == ALEPH0:
            # C_p^n + C_p^(aleph_0) is again C_p^(aleph_0)
            object.__setattr__(self, "kappa", Cardinal(0))

    @classmethod
    def from_multiplicities(cls, p: int, product: Cardinal, restricted: Cardinal) -> ElemAbelian:
        """Absorb finitely many summands using G^(k+n) x G^(k') = G^k x G^(k'+n)."""
        if restricted.is_finite:
            return cls(p, product + restricted, Cardinal(0))
        return cls(p, product if not product.is_finite else Cardinal(0), ALEPH0)

    def params(self):
        return {"p": self.p, "kappa": self.kappa, "kappa_prime": self.kappa_prime}

    def to_term(self) -> GroupExpr:
        parts: list[GroupExpr] = []
        if self.kappa.value != 0:
            parts.append(Cyc(self.p) if self.kappa.value == 1 else Power(Cyc(self.p), self.kappa))
        if self.kappa_prime == ALEPH0:
            parts.append(RestrictedPower(Cyc(self.p), ALEPH0))
        return parts[0] if len(parts) == 1 else DirectSum(parts)


@dataclass(frozen=True)
class Reals(CanonicalForm):
    n: int

    family: ClassVar[str] = "Reals"

    def __post_init__(self):
        _finite_positive(self.n, "n")

    def params(self):
        return {"n": self.n}

    def to_term(self):
        return R if self.n == 1 else Power(R, self.n)


@dataclass(frozen=True)
class RationalsSum(CanonicalForm):
    kappa: Cardinal

    family: ClassVar[str] = "RationalsSum"

    def __post_init__(self):
        object.__setattr__(self, "kappa", _nonzero_cardinal(self.kappa, "kappa"))

    def params(self):
        return {"kappa": self.kappa}

    @property
    def cg_realizable(self):
        return not self.kappa.is_finite

    def to_term(self):
        return Q if self.kappa.value == 1 else RestrictedPower(Q, self.kappa)


@dataclass(frozen=True)
class RationalsDualPower(CanonicalForm):
    kappa: Cardinal

    family: ClassVar[str] = "RationalsDualPower"

    def __post_init__(self):
        object.__setattr__(self, "kappa", _nonzero_cardinal(self.kappa, "kappa"))

    def params(self):
        return {"kappa": self.kappa}

    @property
    def cg_realizable(self):
        return not self.kappa.is_finite

    def to_term(self):
        return QHAT if self.kappa.value == 1 else Power(QHAT, self.kappa)


@dataclass(frozen=True)
class QpLocal(CanonicalForm):
    p: int
    kappa: Cardinal

    family: ClassVar[str] = "QpLocal"

    def __post_init__(self):
        _prime(self.p)
        object.__setattr__(self, "kappa", _nonzero_cardinal(self.kappa, "kappa"))

    def params(self):
        return {"p": self.p, "kappa": self.kappa}

    def to_term(self):
        return normal_form(LocalProd(self.p, self.kappa))


@dataclass(frozen=True)
class SimplicityVerdict:
    simple: bool
    canonical: CanonicalForm | None = None
    failed_condition: int | None = None
    witness: Any = None

    def __post_init__(self):
        if self.simple != (self.canonical is not None) or self.simple == (self.failed_condition is not None):
            raise ValueError("inconsistent verdict")

    def to_json(self) -> dict[str, Any]:
        if self.simple:
            return {"simple": True, **self.canonical.to_json()}
        return {"simple": False, "failed_condition": self.failed_condition,
                "condition": CONDITIONS[self.failed_condition], "witness": self.witness}

    def __str__(self) -> str:
        if self.simple:
            return f"simple {self.canonical}"
        suffix = "" if self.witness is None else f" witness={self.witness}"
        return f"fail({self.failed_condition}){suffix}"


def characteristically_simple(expr: GroupExpr) -> SimplicityVerdict:
    """Evaluate conditions 1-5 in order and stop at the first failure."""
    require_valid(expr)
    if is_trivial(expr):
        raise TrivialGroupError("the trivial group has no simplicity verdict")
    vec = predicate_vector(expr)
    if vec.exponent_p is None and not vec.torsion_free:
        return SimplicityVerdict(False, failed_condition=1,
                                 witness=torsion_primes(expr).smallest())
    if vec.torsion_free:
        bad = nondense_primes(expr)
        if not bad.is_empty():
            return SimplicityVerdict(False, failed_condition=2, witness=bad.smallest())
    if not (vec.connected or vec.totally_disconnected):
        return SimplicityVerdict(False, failed_condition=3)
    if vec.p_status is PStatus.MIXED:
        return SimplicityVerdict(False, failed_condition=4, witness="Mixed")
    if vec.totally_disconnected and vec.p_status is PStatus.ALL \
            and not vec.pp_all.primes_with(True) and not vec.pp_all.default:
        return SimplicityVerdict(False, failed_condition=5)
    return SimplicityVerdict(True, canonical=_canonical(expr, vec))


def _multiplicity(expr: GroupExpr, hit) -> Cardinal:
    """Number of copies of atoms satisfying ``hit``, counting through powers."""
    if isinstance(expr, Atom):
        return Cardinal(1 if hit(expr) else 0)
    if isinstance(expr, DirectSum):
        total = Cardinal(0)
        for t in expr.terms:
            total = total + _multiplicity(t, hit)
        return total
    if isinstance(expr, (Power, RestrictedPower)):
        return _multiplicity(expr.base, hit) * expr.kappa
    if isinstance(expr, LocalProd):
        return expr.kappa if hit(Atom(AtomKind.QP, expr.p)) else Cardinal(0)
    raise TypeError(f"not a group expression: {expr!r}")


def _elementary_split(expr: GroupExpr) -> tuple[Cardinal, Cardinal]:
    """(product multiplicity, restricted multiplicity) of C_p factors."""
    if isinstance(expr, Atom):
        return Cardinal(1), Cardinal(0)
    if isinstance(expr, DirectSum):
        prod, rest = Cardinal(0), Cardinal(0)
        for t in expr.terms:
            a, b = _elementary_split(t)
            prod, rest = prod + a, rest + b
        return prod, rest
    a, b = _elementary_split(expr.base)
    if expr.kappa.is_finite:
        return a * expr.kappa, b * expr.kappa
    # infinite powers have compact (resp. discrete) bases, which are finite here
    if isinstance(expr, Power):
        return (a + b) * expr.kappa, Cardinal(0)
    return Cardinal(0), (a + b) * expr.kappa


def _canonical(expr: GroupExpr, vec) -> CanonicalForm:
    expr = normal_form(expr)
    if vec.exponent_p is not None:
        prod, rest = _elementary_split(expr)
        return ElemAbelian.from_multiplicities(vec.exponent_p, prod, rest)
    if vec.connected:
        if vec.p_status is PStatus.TRIVIAL:
            n = _multiplicity(expr, lambda a: a.kind is AtomKind.R)
            return Reals(n.value)
        return RationalsDualPower(_multiplicity(expr, lambda a: a.kind is AtomKind.QHAT))
    if vec.p_status is PStatus.TRIVIAL:
        return RationalsSum(_multiplicity(expr, lambda a: a.kind is AtomKind.Q))
    (p,) = vec.pp_all.primes_with(True)
    return QpLocal(p, _multiplicity(expr, lambda a: a.kind is AtomKind.QP))


def canonical_form(expr: GroupExpr) -> CanonicalForm:
    verdict = characteristically_simple(expr)
    if not verdict.simple:
        raise NotSimpleError(f"{expr} is not characteristically simple: {verdict}")
    return verdict.canonical


def iso_canonical(a: CanonicalForm, b: CanonicalForm) -> bool:
    return a == b


def dual_canonical(c: CanonicalForm) -> CanonicalForm:
    if isinstance(c, ElemAbelian):
        return ElemAbelian.from_multiplicities(c.p, c.kappa_prime, c.kappa)
    if isinstance(c, RationalsSum):
        return RationalsDualPower(c.kappa)
    if isinstance(c, RationalsDualPower):
        return RationalsSum(c.kappa)
    if isinstance(c, (Reals, QpLocal)):
        return c
    raise TypeError(f"not a canonical form: {c!r}")
