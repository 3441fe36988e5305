"""Pontryagin duals of terms by structural rewriting.

The atom table holds the standard character-group facts; constructors are
handled by exchanging full and restricted powers (the dual of a product is
the sum of the duals and conversely) and by self-duality of the local
product over ``(Qp(p), Zp(p))``.
"""
from __future__ import annotations

from .terms import (
    Atom, AtomKind, DirectSum, GroupExpr, LocalProd, Power, RestrictedPower,
    normal_form, require_valid,
)

__all__ = ["DualRule", "ATOM_DUALS", "CONSTRUCTOR_RULES", "dual", "check_involution"]


class DualRule:
    """One row of the rewrite table: ``pattern`` rewrites to ``result``."""

    __slots__ = ("pattern", "result")

    def __init__(self, pattern: str, result: str):
        self.pattern = pattern
        self.result = result

    def __repr__(self):
        return f"DualRule({self.pattern!r} -> {self.result!r})"


# Externally sourced standard facts: R and Qp self-dual, Z <-> T, Q <-> QHat,
# cyclic groups self-dual, Zp <-> Prufer.
ATOM_DUALS: dict[AtomKind, AtomKind] = {
    AtomKind.R: AtomKind.R,
    AtomKind.Z: AtomKind.T,
    AtomKind.T: AtomKind.Z,
    AtomKind.Q: AtomKind.QHAT,
    AtomKind.QHAT: AtomKind.Q,
    AtomKind.CYC: AtomKind.CYC,
    AtomKind.ZP: AtomKind.PRUFER,
    AtomKind.PRUFER: AtomKind.ZP,
    AtomKind.QP: AtomKind.QP,
}

CONSTRUCTOR_RULES = (
    DualRule("DirectSum[A_i]", "DirectSum[dual(A_i)]"),
    DualRule("Power(A, k)", "RestrictedPower(dual(A), k)"),
    DualRule("RestrictedPower(A, k)", "Power(dual(A), k)"),
    DualRule("LocalProd((Qp(p), Zp(p)), k)", "LocalProd((Qp(p), Zp(p)), k)"),
)


def _dual(expr: GroupExpr) -> GroupExpr:
    if isinstance(expr, Atom):
        return Atom(ATOM_DUALS[expr.kind], expr.arg)
    if isinstance(expr, DirectSum):
        return DirectSum(_dual(t) for t in expr.terms)
    if isinstance(expr, Power):
        return RestrictedPower(_dual(expr.base), expr.kappa)
    if isinstance(expr, RestrictedPower):
        return Power(_dual(expr.base), expr.kappa)
    if isinstance(expr, LocalProd):
        return expr
    raise TypeError(f"not a group expression: {expr!r}")


def dual(expr: GroupExpr) -> GroupExpr:
    """Return the normal-form term for the character group of ``expr``."""
    require_valid(expr)
    return normal_form(_dual(normal_form(expr)))


def check_involution(expr: GroupExpr) -> bool:
    return dual(dual(expr)) == normal_form(expr)
