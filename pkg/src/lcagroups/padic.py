"""Fixed-precision p-adic numbers, adeles and the adele character of Q.

A nonzero :class:`PAdic` stores ``u * p**v`` where the unit ``u`` is known
modulo ``p**precision``; the value is therefore known modulo
``p**(v + precision)``. A zero stores only its absolute precision.
"""
from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Union

from sympy import isprime, primefactors

from .errors import PrecisionError, PrimeMismatchError

__all__ = [
    "DEFAULT_PRECISION", "PAdic", "Adele", "qp_arith", "qp_frac_part",
    "adele_character", "adele_phase", "valuation",
]

DEFAULT_PRECISION = 64

Rational = Union[int, Fraction]


def valuation(x: Rational, p: int) -> int:
    """p-adic valuation of a nonzero rational."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("valuation of zero")
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


@dataclass(frozen=True)
class PAdic:
    p: int
    valuation: int | None
    unit: int | None
    precision: int

    def __post_init__(self):
        if self.precision < 0 and self.unit is not None:
            raise ValueError("relative precision must be non-negative")
        if self.unit is None:
            if self.valuation is not None:
                raise ValueError("zero carries no valuation")
            return
        if self.precision == 0:
            raise ValueError("a nonzero p-adic number needs precision >= 1")
        mod = self.p ** self.precision
        u = self.unit % mod
        if u % self.p == 0:
            raise ValueError(f"unit {self.unit} is divisible by {self.p}")
        object.__setattr__(self, "unit", u)

    # -- construction ------------------------------------------------------

    @classmethod
    def zero(cls, p: int, abs_precision: int = DEFAULT_PRECISION) -> PAdic:
        """Zero known modulo ``p**abs_precision``."""
        return cls(p, None, None, abs_precision)

    @classmethod
    def from_rational(cls, x: Rational, p: int, precision: int = DEFAULT_PRECISION) -> PAdic:
        x = Fraction(x)
        if x == 0:
            return cls.zero(p, precision)
        v = valuation(x, p)
        scaled = x / Fraction(p) ** v
        mod = p ** precision
        u = scaled.numerator * pow(scaled.denominator, -1, mod) % mod
        return cls(p, v, u, precision)

    @classmethod
    def _from_scaled(cls, p: int, x: int, low: int, abs_prec: int) -> PAdic:
        """Value ``x * p**low`` known modulo ``p**abs_prec``."""
        width = abs_prec - low
        if width <= 0:
            return cls.zero(p, abs_prec)
        x %= p ** width
        if x == 0:
            return cls.zero(p, abs_prec)
        w = 0
        while x % p == 0:
            x //= p
            w += 1
        return cls(p, low + w, x, width - w)

    # -- queries -------------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.unit is None

    @property
    def abs_precision(self) -> int:
        """Exponent N such that the value is known modulo p**N."""
        if self.is_zero:
            return self.precision
        return self.valuation + self.precision

    def to_rational(self) -> Fraction:
        """The representative ``u * p**v`` with ``0 < u < p**precision``."""
        if self.is_zero:
            return Fraction(0)
        return Fraction(self.unit) * Fraction(self.p) ** self.valuation

    def with_precision(self, precision: int) -> PAdic:
        """Truncate to a smaller relative (absolute, for zero) precision."""
        if precision > self.precision:
            raise PrecisionError("cannot raise precision")
        if self.is_zero:
            return PAdic.zero(self.p, precision)
        return PAdic(self.p, self.valuation, self.unit, precision)

    def _check(self, other: PAdic):
        if self.p != other.p:
            raise PrimeMismatchError(f"primes differ: {self.p} vs {other.p}")

    def _coerce(self, other) -> PAdic:
        if isinstance(other, PAdic):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            prec = max(self.precision, DEFAULT_PRECISION)
            if other != 0:
                prec = max(prec, self.abs_precision - valuation(other, self.p))
            return PAdic.from_rational(other, self.p, prec)
        return NotImplemented

    # -- arithmetic ----------------------------------------------------------

    def __neg__(self) -> PAdic:
        if self.is_zero:
            return self
        return PAdic(self.p, self.valuation, -self.unit, self.precision)

    def __add__(self, other) -> PAdic:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        abs_prec = min(self.abs_precision, other.abs_precision)
        if self.is_zero and other.is_zero:
            return PAdic.zero(self.p, abs_prec)
        low = min(x.valuation for x in (self, other) if not x.is_zero)
        total = 0
        for x in (self, other):
            if not x.is_zero:
                total += x.unit * self.p ** (x.valuation - low)
        return PAdic._from_scaled(self.p, total, low, abs_prec)

    __radd__ = __add__

    def __sub__(self, other) -> PAdic:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> PAdic:
        return (-self) + other

    def __mul__(self, other) -> PAdic:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero and other.is_zero:
            return PAdic.zero(self.p, self.precision + other.precision)
        if self.is_zero or other.is_zero:
            z, nz = (self, other) if self.is_zero else (other, self)
            return PAdic.zero(self.p, z.precision + nz.valuation)
        prec = min(self.precision, other.precision)
        mod = self.p ** prec
        return PAdic(self.p, self.valuation + other.valuation,
                     self.unit * other.unit % mod, prec)

    __rmul__ = __mul__

    def __truediv__(self, other) -> PAdic:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_zero:
            raise ZeroDivisionError("p-adic division by zero")
        if self.is_zero:
            return PAdic.zero(self.p, self.precision - other.valuation)
        prec = min(self.precision, other.precision)
        mod = self.p ** prec
        return PAdic(self.p, self.valuation - other.valuation,
                     self.unit * pow(other.unit, -1, mod) % mod, prec)

    def __rtruediv__(self, other) -> PAdic:
        return self._coerce(other) / self

    def equal_at_precision(self, other: PAdic) -> bool:
        """Whether the two values agree modulo the coarser of their precisions."""
        return (self - other).is_zero

    # -- text ----------------------------------------------------------------

    def __str__(self) -> str:
        if self.is_zero:
            return f"0 (mod {self.p}^{self.precision})"
        return f"{self.p}^{self.valuation} * {self.unit} (mod {self.p}^{self.precision})"

    _LITERAL = re.compile(
        r"^\s*(?:(?P<zero>0)|(?P<p>\d+)\^(?P<v>-?\d+)\s*\*\s*(?P<u>-?\d+))"
        r"\s*\(mod\s+(?P<mp>\d+)\^(?P<m>\d+)\)\s*$")

    @classmethod
    def parse(cls, text: str) -> PAdic:
        """Parse ``p^v * u (mod p^M)`` or ``0 (mod p^N)``."""
        m = cls._LITERAL.match(text)
        if not m:
            raise ValueError(f"not a p-adic literal: {text!r}")
        p, prec = int(m["mp"]), int(m["m"])
        if not isprime(p):
            raise ValueError(f"{p} is not prime")
        if m["zero"]:
            return cls.zero(p, prec)
        if int(m["p"]) != p:
            raise PrimeMismatchError("literal mixes two primes")
        return cls(p, int(m["v"]), int(m["u"]), prec)


def qp_arith(op: str, a: PAdic, b: PAdic) -> PAdic:
    if a.p != b.p:
        raise PrimeMismatchError(f"primes differ: {a.p} vs {b.p}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def qp_frac_part(a: PAdic) -> Fraction:
    """The unique r in Z[1/p] with 0 <= r < 1 and a - r in Z_p."""
    if a.is_zero:
        if a.precision < 0:
            raise PrecisionError("zero known only modulo a negative power of p")
        return Fraction(0)
    if a.valuation >= 0:
        return Fraction(0)
    if a.abs_precision < 0:
        raise PrecisionError(
            f"digits below p^{a.abs_precision} unknown; need valuation >= -precision")
    k = -a.valuation
    return Fraction(a.unit % a.p ** k, a.p ** k)


@dataclass(frozen=True)
class Adele:
    """A finite-desk adele: rational archimedean part, listed p-adic parts,
    and a rational ``default`` used at every unlisted prime.

    ``default`` must be integral at every unlisted prime, so the adele lies
    in Z_p there; ``Adele.diagonal(q)`` is the principal adele of q.
    """

    real_part: Fraction
    finite_parts: Mapping[int, PAdic] = field(default_factory=dict)
    default: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "real_part", Fraction(self.real_part))
        object.__setattr__(self, "default", Fraction(self.default))
        parts = dict(sorted(self.finite_parts.items()))
        for p, x in parts.items():
            if x.p != p:
                raise PrimeMismatchError(f"component at {p} is a {x.p}-adic number")
        missing = [q for q in primefactors(self.default.denominator) if q not in parts]
        if missing:
            raise ValueError(f"default {self.default} is not integral at unlisted primes {missing}")
        object.__setattr__(self, "finite_parts", parts)

    def __hash__(self):
        return hash((self.real_part, tuple(self.finite_parts.items()), self.default))

    @classmethod
    def diagonal(cls, q: Rational, precision: int = DEFAULT_PRECISION) -> Adele:
        q = Fraction(q)
        parts = {p: PAdic.from_rational(q, p, precision) for p in primefactors(q.denominator)}
        return cls(q, parts, q)

    def component(self, p: int, precision: int = DEFAULT_PRECISION) -> PAdic:
        if p in self.finite_parts:
            return self.finite_parts[p]
        return PAdic.from_rational(self.default, p, precision)

    def to_json(self) -> dict[str, str]:
        out = {"inf": str(self.real_part)}
        for p, x in self.finite_parts.items():
            out[str(p)] = str(x)
        if self.default:
            out["default"] = str(self.default)
        return out

    @classmethod
    def from_json(cls, doc: Mapping[str, str]) -> Adele:
        parts = {}
        for key, val in doc.items():
            if key in ("inf", "default"):
                continue
            p = int(key)
            parts[p] = PAdic.parse(val) if "mod" in str(val) else PAdic.from_rational(Fraction(val), p)
        return cls(Fraction(doc.get("inf", "0")), parts, Fraction(doc.get("default", "0")))


def adele_phase(a: Adele, r: Rational) -> Fraction:
    """Exact phase in [0, 1) of the character value: -r a_inf + sum {r a_p}_p."""
    r = Fraction(r)
    phase = -r * a.real_part
    # unlisted primes only contribute where r * default has a denominator
    extra = [q for q in primefactors((r * a.default).denominator) if q not in a.finite_parts]
    for p in list(a.finite_parts) + extra:
        ap = a.component(p)
        if r == 0:
            continue
        prec = max(ap.precision, DEFAULT_PRECISION)
        phase += qp_frac_part(ap * PAdic.from_rational(r, p, prec))
    return phase - math.floor(phase)


def adele_character(a: Adele, r: Rational) -> complex:
    """Value of the character of Q attached to ``a``, evaluated at ``r``."""
    return cmath.exp(2j * math.pi * float(adele_phase(a, r)))
