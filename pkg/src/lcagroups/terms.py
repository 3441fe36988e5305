"""Group-expression terms: the grammar, parser, printer and validity rules.

A term denotes an abelian locally compact second-countable group built from
a small set of atoms with finite direct sums, full powers (product topology),
restricted powers (direct sums with the discrete-on-coordinates topology) and
local direct products of copies of ``(Qp(p), Zp(p))``.

Text grammar::

    E ::= R | Z | T | Q | Qhat | C(n) | Prufer(p) | Zp(p) | Qp(p) | 0
        | prod(E, k) | sum(E, k) | lp(Qp(p), k) | E + E | (E)
    k ::= non-negative integer | w

``w`` stands for aleph_0 and ``0`` for the trivial group.
"""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Any, Iterator, Union

from sympy import isprime

from .errors import InvalidTermError, ParseError

__all__ = [
    "Cardinal", "ALEPH0", "AtomKind", "GroupExpr", "Atom", "DirectSum",
    "Power", "RestrictedPower", "LocalProd", "TRIVIAL", "R", "Z", "T", "Q",
    "QHAT", "Cyc", "Prufer", "Zp", "Qp", "parse_expr", "render", "validate",
    "require_valid", "flatten", "normal_form", "is_trivial", "is_compact",
    "is_discrete", "to_json", "from_json", "Violation", "ValidationReport",
]

_MAX_DIGITS = 100


@dataclass(frozen=True)
class Cardinal:
    """A cardinal in N ∪ {aleph_0}; ``value is None`` encodes aleph_0."""

    value: int | None

    def __post_init__(self):
        if self.value is not None:
            if isinstance(self.value, bool) or not isinstance(self.value, int):
                raise TypeError(f"cardinal value must be int or None, got {self.value!r}")
            if self.value < 0:
                raise ValueError("cardinals are non-negative")

    @classmethod
    def of(cls, x: CardinalLike) -> Cardinal:
        if isinstance(x, Cardinal):
            return x
        if x == "w" or x is None:
            return ALEPH0
        if isinstance(x, str):
            return cls(int(x))
        return cls(x)

    @property
    def is_finite(self) -> bool:
        return self.value is not None

    def __add__(self, other: CardinalLike) -> Cardinal:
        other = Cardinal.of(other)
        if self.value is None or other.value is None:
            return ALEPH0
        return Cardinal(self.value + other.value)

    __radd__ = __add__

    def __mul__(self, other: CardinalLike) -> Cardinal:
        other = Cardinal.of(other)
        if self.value == 0 or other.value == 0:
            return Cardinal(0)
        if self.value is None or other.value is None:
            return ALEPH0
        return Cardinal(self.value * other.value)

    __rmul__ = __mul__

    def sort_key(self) -> tuple[int, int]:
        return (1, 0) if self.value is None else (0, self.value)

    def __lt__(self, other: Cardinal) -> bool:
        return self.sort_key() < Cardinal.of(other).sort_key()

    def __le__(self, other: Cardinal) -> bool:
        return self.sort_key() <= Cardinal.of(other).sort_key()

    def to_json(self) -> int | str:
        return "w" if self.value is None else self.value

    def __str__(self) -> str:
        return "w" if self.value is None else str(self.value)

    def __repr__(self) -> str:
        return "ALEPH0" if self.value is None else f"Cardinal({self.value})"


ALEPH0 = Cardinal(None)
CardinalLike = Union[Cardinal, int, str, None]


class AtomKind(enum.Enum):
    R = "R"
    Z = "Z"
    T = "T"
    Q = "Q"
    QHAT = "QHat"
    CYC = "Cyc"
    PRUFER = "Prufer"
    ZP = "Zp"
    QP = "Qp"

    @property
    def has_arg(self) -> bool:
        return self in _ARG_KINDS


_ARG_KINDS = frozenset({AtomKind.CYC, AtomKind.PRUFER, AtomKind.ZP, AtomKind.QP})
_PRIME_KINDS = frozenset({AtomKind.PRUFER, AtomKind.ZP, AtomKind.QP})
_ATOM_ORDER = {k: i for i, k in enumerate(AtomKind)}
_TEXT_NAMES = {
    AtomKind.R: "R", AtomKind.Z: "Z", AtomKind.T: "T", AtomKind.Q: "Q",
    AtomKind.QHAT: "Qhat", AtomKind.CYC: "C", AtomKind.PRUFER: "Prufer",
    AtomKind.ZP: "Zp", AtomKind.QP: "Qp",
}
_BY_TEXT = {v: k for k, v in _TEXT_NAMES.items()}


class GroupExpr:
    """Base class of term nodes. All nodes are immutable and hashable."""

    __slots__ = ()

    def children(self) -> tuple[GroupExpr, ...]:
        return ()

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True, repr=False)
class Atom(GroupExpr):
    kind: AtomKind
    arg: int | None = None

    def __repr__(self) -> str:
        if self.arg is None:
            return self.kind.value
        return f"{self.kind.value}({self.arg})"


@dataclass(frozen=True, repr=False)
class DirectSum(GroupExpr):
    terms: tuple[GroupExpr, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))

    def children(self):
        return self.terms

    def __repr__(self) -> str:
        return f"DirectSum[{', '.join(map(repr, self.terms))}]"


@dataclass(frozen=True, repr=False)
class Power(GroupExpr):
    """Full product of ``kappa`` copies of ``base`` with the product topology."""

    base: GroupExpr
    kappa: Cardinal

    def __post_init__(self):
        object.__setattr__(self, "kappa", Cardinal.of(self.kappa))

    def children(self):
        return (self.base,)

    def __repr__(self) -> str:
        return f"Power({self.base!r}, {self.kappa})"


@dataclass(frozen=True, repr=False)
class RestrictedPower(GroupExpr):
    """Direct sum of ``kappa`` copies of ``base``."""

    base: GroupExpr
    kappa: Cardinal

    def __post_init__(self):
        object.__setattr__(self, "kappa", Cardinal.of(self.kappa))

    def children(self):
        return (self.base,)

    def __repr__(self) -> str:
        return f"RestrictedPower({self.base!r}, {self.kappa})"


@dataclass(frozen=True, repr=False)
class LocalProd(GroupExpr):
    """Local direct product of ``kappa`` copies of Qp(p) over Zp(p)."""

    p: int
    kappa: Cardinal

    def __post_init__(self):
        object.__setattr__(self, "kappa", Cardinal.of(self.kappa))

    @property
    def pair(self) -> tuple[Atom, Atom]:
        return Qp(self.p), Zp(self.p)

    def __repr__(self) -> str:
        return f"LocalProd((Qp({self.p}), Zp({self.p})), {self.kappa})"


TRIVIAL = DirectSum(())
R = Atom(AtomKind.R)
Z = Atom(AtomKind.Z)
T = Atom(AtomKind.T)
Q = Atom(AtomKind.Q)
QHAT = Atom(AtomKind.QHAT)


def Cyc(n: int) -> Atom:
    return Atom(AtomKind.CYC, n)


def Prufer(p: int) -> Atom:
    return Atom(AtomKind.PRUFER, p)


def Zp(p: int) -> Atom:
    return Atom(AtomKind.ZP, p)


def Qp(p: int) -> Atom:
    return Atom(AtomKind.QP, p)


# ---------------------------------------------------------------------------
# printing and parsing


def render(expr: GroupExpr) -> str:
    if isinstance(expr, Atom):
        name = _TEXT_NAMES[expr.kind]
        return name if expr.arg is None else f"{name}({expr.arg})"
    if isinstance(expr, DirectSum):
        if not expr.terms:
            return "0"
        return " + ".join(render(t) for t in expr.terms)
    if isinstance(expr, Power):
        return f"prod({render(expr.base)}, {expr.kappa})"
    if isinstance(expr, RestrictedPower):
        return f"sum({render(expr.base)}, {expr.kappa})"
    if isinstance(expr, LocalProd):
        return f"lp(Qp({expr.p}), {expr.kappa})"
    raise TypeError(f"not a group expression: {expr!r}")


class _Parser:
    def __init__(self, text: str):
        self.s = text
        self.i = 0

    def error(self, message: str, pos: int | None = None) -> ParseError:
        pos = self.i if pos is None else pos
        return ParseError(message, len(self.s[:pos].encode("utf-8")))

    def skip_ws(self):
        while self.i < len(self.s) and self.s[self.i] in " \t\r\n":
            self.i += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.s[self.i] if self.i < len(self.s) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            found = repr(self.s[self.i]) if self.i < len(self.s) else "end of input"
            raise self.error(f"expected {ch!r}, found {found}")
        self.i += 1

    def ident(self) -> str:
        self.skip_ws()
        start = self.i
        while self.i < len(self.s) and self.s[self.i].isascii() and self.s[self.i].isalpha():
            self.i += 1
        return self.s[start:self.i]

    def number(self) -> int:
        self.skip_ws()
        start = self.i
        while self.i < len(self.s) and self.s[self.i] in "0123456789":
            self.i += 1
        if start == self.i:
            raise self.error("expected a number")
        if self.i - start > _MAX_DIGITS:
            raise self.error("number too large", start)
        return int(self.s[start:self.i])

    def prime_arg(self) -> int:
        self.expect("(")
        self.skip_ws()
        pos = self.i
        p = self.number()
        if not isprime(p):
            raise self.error(f"{p} is not prime", pos)
        self.expect(")")
        return p

    def cardinal(self) -> Cardinal:
        if self.peek() == "w":
            self.i += 1
            return ALEPH0
        return Cardinal(self.number())

    def expr(self) -> GroupExpr:
        terms = [self.term()]
        while self.peek() == "+":
            self.i += 1
            terms.append(self.term())
        return terms[0] if len(terms) == 1 else DirectSum(terms)

    def term(self) -> GroupExpr:
        c = self.peek()
        if not c:
            raise self.error("unexpected end of input")
        if c == "(":
            self.i += 1
            e = self.expr()
            self.expect(")")
            return e
        if c in "0123456789":
            pos = self.i
            if self.number() != 0:
                raise self.error("only 0 may appear as a bare number", pos)
            return TRIVIAL
        pos = self.i
        name = self.ident()
        if not name:
            raise self.error(f"unexpected character {c!r}")
        if name in ("prod", "sum"):
            self.expect("(")
            base = self.expr()
            self.expect(",")
            kappa = self.cardinal()
            self.expect(")")
            return Power(base, kappa) if name == "prod" else RestrictedPower(base, kappa)
        if name == "lp":
            self.expect("(")
            inner = self.i
            if self.ident() != "Qp":
                raise self.error("lp takes the pair Qp(p) as first argument", inner)
            p = self.prime_arg()
            self.expect(",")
            kappa = self.cardinal()
            self.expect(")")
            return LocalProd(p, kappa)
        kind = _BY_TEXT.get(name)
        if kind is None:
            raise self.error(f"unknown name {name!r}", pos)
        if kind is AtomKind.CYC:
            self.expect("(")
            self.skip_ws()
            npos = self.i
            n = self.number()
            if n < 2:
                raise self.error("C(n) requires n >= 2", npos)
            self.expect(")")
            return Cyc(n)
        if kind in _PRIME_KINDS:
            return Atom(kind, self.prime_arg())
        return Atom(kind)


def parse_expr(text: str | bytes) -> GroupExpr:
    """Parse term text into a (flattened) AST.

    Raises :class:`ParseError` carrying a byte offset on any malformed input;
    never raises anything else.
    """
    if isinstance(text, (bytes, bytearray)):
        try:
            text = bytes(text).decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError("invalid utf-8", exc.start) from None
    parser = _Parser(text)
    try:
        expr = parser.expr()
    except RecursionError:
        raise parser.error("nesting too deep") from None
    if parser.peek():
        raise parser.error(f"unexpected character {parser.s[parser.i]!r}")
    return flatten(expr)


# ---------------------------------------------------------------------------
# structural helpers


def flatten(expr: GroupExpr) -> GroupExpr:
    """Flatten nested sums, drop trivial summands, unwrap singleton sums."""
    if isinstance(expr, DirectSum):
        out: list[GroupExpr] = []
        for t in expr.terms:
            t = flatten(t)
            if isinstance(t, DirectSum):
                out.extend(t.terms)
            else:
                out.append(t)
        return out[0] if len(out) == 1 else DirectSum(out)
    if isinstance(expr, Power):
        return Power(flatten(expr.base), expr.kappa)
    if isinstance(expr, RestrictedPower):
        return RestrictedPower(flatten(expr.base), expr.kappa)
    return expr


def _shape_key(expr: GroupExpr) -> tuple:
    if isinstance(expr, Atom):
        return (0, _ATOM_ORDER[expr.kind], expr.arg or 0)
    if isinstance(expr, Power):
        return (1, _shape_key(expr.base), expr.kappa.sort_key())
    if isinstance(expr, RestrictedPower):
        return (2, _shape_key(expr.base), expr.kappa.sort_key())
    if isinstance(expr, LocalProd):
        return (3, expr.p, expr.kappa.sort_key())
    return (4, tuple(_shape_key(t) for t in expr.terms))


def normal_form(expr: GroupExpr) -> GroupExpr:
    """Syntactic normal form: flattened, sorted sums; zero and finite
    local powers expanded. Not an isomorphism normal form."""
    if isinstance(expr, Atom):
        return expr
    if isinstance(expr, DirectSum):
        parts: list[GroupExpr] = []
        for t in expr.terms:
            t = normal_form(t)
            if isinstance(t, DirectSum):
                parts.extend(t.terms)
            else:
                parts.append(t)
        parts.sort(key=_shape_key)
        return parts[0] if len(parts) == 1 else DirectSum(parts)
    if isinstance(expr, (Power, RestrictedPower)):
        base = normal_form(expr.base)
        if expr.kappa.value == 0 or base == TRIVIAL:
            return TRIVIAL
        return type(expr)(base, expr.kappa)
    if isinstance(expr, LocalProd):
        if expr.kappa.value == 0:
            return TRIVIAL
        if expr.kappa.is_finite:
            return Power(Qp(expr.p), expr.kappa)
        return expr
    raise TypeError(f"not a group expression: {expr!r}")


def is_trivial(expr: GroupExpr) -> bool:
    if isinstance(expr, Atom):
        return False
    if isinstance(expr, DirectSum):
        return all(is_trivial(t) for t in expr.terms)
    if isinstance(expr, (Power, RestrictedPower)):
        return expr.kappa.value == 0 or is_trivial(expr.base)
    return expr.kappa.value == 0


_COMPACT_ATOMS = frozenset({AtomKind.T, AtomKind.QHAT, AtomKind.CYC, AtomKind.ZP})
_DISCRETE_ATOMS = frozenset({AtomKind.Z, AtomKind.Q, AtomKind.CYC, AtomKind.PRUFER})


def is_compact(expr: GroupExpr) -> bool:
    if is_trivial(expr):
        return True
    if isinstance(expr, Atom):
        return expr.kind in _COMPACT_ATOMS
    if isinstance(expr, DirectSum):
        return all(is_compact(t) for t in expr.terms)
    if isinstance(expr, Power):
        return is_compact(expr.base)
    if isinstance(expr, RestrictedPower):
        return expr.kappa.is_finite and is_compact(expr.base)
    return False


def is_discrete(expr: GroupExpr) -> bool:
    if is_trivial(expr):
        return True
    if isinstance(expr, Atom):
        return expr.kind in _DISCRETE_ATOMS
    if isinstance(expr, DirectSum):
        return all(is_discrete(t) for t in expr.terms)
    if isinstance(expr, Power):
        return expr.kappa.is_finite and is_discrete(expr.base)
    if isinstance(expr, RestrictedPower):
        return is_discrete(expr.base)
    return False


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Violation:
    path: str
    rule: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = field(default_factory=tuple)

    @property
    def valid(self) -> bool:
        return not self.violations

    def to_json(self) -> dict[str, Any]:
        return {
            "valid": self.valid,
            "violations": [
                {"path": v.path, "rule": v.rule, "message": v.message}
                for v in self.violations
            ],
        }


def _walk_violations(expr: GroupExpr, path: str) -> Iterator[Violation]:
    if isinstance(expr, Atom):
        if expr.kind.has_arg != (expr.arg is not None):
            yield Violation(path, "atom-arity", f"{expr.kind.value} has wrong arity")
        elif expr.kind is AtomKind.CYC and expr.arg < 2:
            yield Violation(path, "cyclic-order", "C(n) requires n >= 2")
        elif expr.kind in _PRIME_KINDS and not isprime(expr.arg):
            yield Violation(path, "prime-parameter", f"{expr.arg} is not prime")
        return
    if isinstance(expr, DirectSum):
        for i, t in enumerate(expr.terms):
            yield from _walk_violations(t, f"{path}/{i}")
        return
    if isinstance(expr, LocalProd):
        if not isprime(expr.p):
            yield Violation(path, "prime-parameter", f"{expr.p} is not prime")
        return
    yield from _walk_violations(expr.base, f"{path}/base")
    if expr.kappa.is_finite:
        return
    if isinstance(expr, Power) and not is_compact(expr.base):
        yield Violation(path, "infinite-power-compact",
                        "infinite full power of non-compact base")
    if isinstance(expr, RestrictedPower) and not is_discrete(expr.base):
        yield Violation(path, "infinite-restricted-power-discrete",
                        "infinite restricted power of non-discrete base")


def validate(expr: GroupExpr) -> ValidationReport:
    """Check the local-compactness side conditions at every node."""
    return ValidationReport(tuple(_walk_violations(expr, "$")))


def require_valid(expr: GroupExpr) -> GroupExpr:
    report = validate(expr)
    if not report.valid:
        raise InvalidTermError(report)
    return expr


# ---------------------------------------------------------------------------
# JSON


def to_json(expr: GroupExpr) -> dict[str, Any]:
    if isinstance(expr, Atom):
        return {"node": expr.kind.value, "args": [] if expr.arg is None else [expr.arg]}
    if isinstance(expr, DirectSum):
        return {"node": "DirectSum", "args": [to_json(t) for t in expr.terms]}
    if isinstance(expr, (Power, RestrictedPower)):
        return {"node": type(expr).__name__,
                "args": [to_json(expr.base), expr.kappa.to_json()]}
    if isinstance(expr, LocalProd):
        qp, zp = expr.pair
        return {"node": "LocalProd",
                "args": [to_json(qp), to_json(zp), expr.kappa.to_json()]}
    raise TypeError(f"not a group expression: {expr!r}")


def from_json(doc: dict[str, Any] | str) -> GroupExpr:
    if isinstance(doc, str):
        doc = json.loads(doc)
    node, args = doc["node"], doc.get("args", [])
    if node == "DirectSum":
        return DirectSum(from_json(a) for a in args)
    if node in ("Power", "RestrictedPower"):
        cls = Power if node == "Power" else RestrictedPower
        return cls(from_json(args[0]), Cardinal.of(args[1]))
    if node == "LocalProd":
        qp, zp = from_json(args[0]), from_json(args[1])
        if qp != Qp(zp.arg) or zp.kind is not AtomKind.ZP:
            raise ValueError("LocalProd is only defined over the pair (Qp(p), Zp(p))")
        return LocalProd(zp.arg, Cardinal.of(args[2]))
    kind = AtomKind(node)
    if kind.has_arg:
        (arg,) = args
        return Atom(kind, int(arg))
    if args:
        raise ValueError(f"{node} takes no arguments")
    return Atom(kind)
