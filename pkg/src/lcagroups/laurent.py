"""Truncated Laurent series over F_p.

An element stores coefficients for exponents ``low, low+1, ...`` and is known
modulo ``t**precision_high``: coefficients at exponents >= precision_high are
unknown. Zero is the empty coefficient vector.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping

from sympy import isprime

from .errors import PrimeMismatchError

__all__ = ["DEFAULT_WINDOW", "LaurentElt", "fps_arith", "shift_action"]

DEFAULT_WINDOW = 32


@dataclass(frozen=True)
class LaurentElt:
    p: int
    low: int
    coeffs: tuple[int, ...]
    precision_high: int

    def __post_init__(self):
        cs = [c % self.p for c in self.coeffs]
        cs = cs[: max(0, self.precision_high - self.low)]
        low = self.low
        while cs and cs[0] == 0:
            cs.pop(0)
            low += 1
        while cs and cs[-1] == 0:
            cs.pop()
        if not cs:
            low = self.precision_high
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "low", low)

    @classmethod
    def from_dict(cls, p: int, terms: Mapping[int, int],
                  precision_high: int = DEFAULT_WINDOW + 1) -> LaurentElt:
        terms = {e: c % p for e, c in terms.items() if c % p}
        if not terms:
            return cls.zero(p, precision_high)
        low, high = min(terms), max(terms)
        return cls(p, low, tuple(terms.get(e, 0) for e in range(low, high + 1)), precision_high)

    @classmethod
    def zero(cls, p: int, precision_high: int = DEFAULT_WINDOW + 1) -> LaurentElt:
        return cls(p, precision_high, (), precision_high)

    @classmethod
    def monomial(cls, p: int, exponent: int, coeff: int = 1,
                 precision_high: int = DEFAULT_WINDOW + 1) -> LaurentElt:
        return cls.from_dict(p, {exponent: coeff}, precision_high)

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, e: int) -> int:
        if e >= self.precision_high:
            raise ValueError(f"coefficient of t^{e} is beyond the known window")
        i = e - self.low
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def to_dict(self) -> dict[int, int]:
        return {self.low + i: c for i, c in enumerate(self.coeffs) if c}

    def _check(self, other: LaurentElt):
        if self.p != other.p:
            raise PrimeMismatchError(f"characteristics differ: {self.p} vs {other.p}")

    def __add__(self, other: LaurentElt) -> LaurentElt:
        self._check(other)
        prec = min(self.precision_high, other.precision_high)
        terms = self.to_dict()
        for e, c in other.to_dict().items():
            terms[e] = terms.get(e, 0) + c
        return LaurentElt.from_dict(self.p, {e: c for e, c in terms.items() if e < prec}, prec)

    def __neg__(self) -> LaurentElt:
        return LaurentElt(self.p, self.low, tuple(-c for c in self.coeffs), self.precision_high)

    def __sub__(self, other: LaurentElt) -> LaurentElt:
        return self + (-other)

    def __mul__(self, other: LaurentElt) -> LaurentElt:
        self._check(other)
        if self.is_zero and other.is_zero:
            return LaurentElt.zero(self.p, self.precision_high + other.precision_high)
        if self.is_zero or other.is_zero:
            z, nz = (self, other) if self.is_zero else (other, self)
            return LaurentElt.zero(self.p, z.precision_high + nz.low)
        rel = min(self.precision_high - self.low, other.precision_high - other.low)
        out = [0] * rel
        for i, a in enumerate(self.coeffs[:rel]):
            if a:
                for j, b in enumerate(other.coeffs[: rel - i]):
                    out[i + j] += a * b
        low = self.low + other.low
        return LaurentElt(self.p, low, tuple(out), low + rel)

    def inverse(self) -> LaurentElt:
        if self.is_zero:
            raise ZeroDivisionError("inverse of zero")
        rel = self.precision_high - self.low
        a = list(self.coeffs) + [0] * (rel - len(self.coeffs))
        inv0 = pow(a[0], -1, self.p)
        b = [0] * rel
        b[0] = inv0
        for n in range(1, rel):
            s = sum(a[k] * b[n - k] for k in range(1, n + 1))
            b[n] = -s * inv0 % self.p
        return LaurentElt(self.p, -self.low, tuple(b), -self.low + rel)

    def shift(self, k: int) -> LaurentElt:
        return LaurentElt(self.p, self.low + k, self.coeffs, self.precision_high + k)

    def equal_at_precision(self, other: LaurentElt) -> bool:
        return (self - other).is_zero

    def __str__(self) -> str:
        parts = []
        for e, c in self.to_dict().items():
            if e == 0:
                parts.append(str(c))
                continue
            mono = "t" if e == 1 else f"t^{e}"
            parts.append(mono if c == 1 else f"{c}*{mono}")
        return f"{' + '.join(parts) or '0'} (p={self.p})"

    _TERM = re.compile(r"^(?:(?P<c>\d+)\s*\*?\s*)?(?P<t>t(?:\^(?P<e>-?\d+))?)?$")

    @classmethod
    def parse(cls, text: str, precision_high: int = DEFAULT_WINDOW + 1) -> LaurentElt:
        """Parse e.g. ``t^-1 + 1 + 2*t^3 (p=3)``."""
        m = re.match(r"^\s*(?P<body>.*?)\s*\(p\s*=\s*(?P<p>\d+)\)\s*$", text)
        if not m:
            raise ValueError(f"missing '(p=...)' suffix in {text!r}")
        p = int(m["p"])
        if not isprime(p):
            raise ValueError(f"{p} is not prime")
        terms: dict[int, int] = {}
        for raw in m["body"].split("+"):
            tm = cls._TERM.match(raw.strip())
            if not raw.strip() or not tm or (tm["c"] is None and tm["t"] is None):
                raise ValueError(f"bad term {raw!r}")
            coeff = int(tm["c"]) if tm["c"] is not None else 1
            exp = 0 if tm["t"] is None else int(tm["e"] or 1)
            terms[exp] = terms.get(exp, 0) + coeff
        return cls.from_dict(p, terms, precision_high)


def fps_arith(op: str, a: LaurentElt, b: LaurentElt | None = None) -> LaurentElt:
    if op == "inv":
        if b is not None:
            raise ValueError("inv takes one operand")
        return a.inverse()
    if b is None:
        raise ValueError(f"{op} takes two operands")
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def shift_action(k: int, a: LaurentElt) -> LaurentElt:
    """Action of s^k in F_p((t)) x| <s>, where s g s^-1 = t g."""
    return a.shift(k)

