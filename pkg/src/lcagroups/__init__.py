"""Abelian locally compact groups: terms, duality, classification of the
topologically characteristically simple ones, and exact desk-scale models
of the related monolith constructions."""
from .classify import (
    CanonicalForm, ElemAbelian, QpLocal, RationalsDualPower, RationalsSum, Reals,
    SimplicityVerdict, canonical_form, characteristically_simple, dual_canonical,
    iso_canonical,
)
from .duality import dual
from .errors import (
    BudgetExceededError, ImpureSubmoduleError, InvalidTermError, LCAError,
    LinearDependenceError, NoUnitPivotError, NotSimpleError, ParseError,
    PrecisionError, PrimeMismatchError, TrivialGroupError,
)
from .laurent import LaurentElt, fps_arith, shift_action
from .padic import Adele, PAdic, adele_character, qp_arith, qp_frac_part
from .predicates import PredicateVector, PrimeSet, predicate_vector
from .terms import (
    ALEPH0, Cardinal, GroupExpr, normal_form, parse_expr, render, validate,
)
from .zpmodule import complete_to_summand, has_root, is_pure, triangular_basis

__version__ = "0.1.0"
