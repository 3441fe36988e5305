import pytest
from hypothesis import given

from lcagroups.duality import ATOM_DUALS, check_involution, dual
from lcagroups.errors import InvalidTermError
from lcagroups.predicates import predicate_vector
from lcagroups.terms import (
    ALEPH0, QHAT, Atom, Cyc, DirectSum, LocalProd, Power, Prufer, Q, Qp, R, RestrictedPower,
    T, Z, Zp, normal_form,
)

from termgen import valid_terms


def test_atom_table_is_an_involution():
    for kind, image in ATOM_DUALS.items():
        assert ATOM_DUALS[image] is kind


@pytest.mark.parametrize("expr,expected", [
    (Q, QHAT),
    (Z, T),
    (Power(Zp(2), ALEPH0), RestrictedPower(Prufer(2), ALEPH0)),
    (LocalProd(3, ALEPH0), LocalProd(3, ALEPH0)),
    (LocalProd(3, 2), RestrictedPower(Qp(3), 2)),
    (Cyc(10), Cyc(10)),
])
def test_examples(expr, expected):
    assert dual(expr) == expected


@pytest.mark.parametrize("expr", [R, DirectSum([Z, Qp(2)]), Power(Cyc(5), ALEPH0)])
def test_involution_examples(expr):
    assert check_involution(expr)


def test_invalid_input_rejected():
    with pytest.raises(InvalidTermError):
        dual(Power(Z, ALEPH0))


@given(valid_terms)
def test_involution(e):
    assert dual(dual(e)) == normal_form(e)


@given(valid_terms)
def test_compact_discrete_exchange(e):
    a, b = predicate_vector(e), predicate_vector(dual(e))
    assert a.compact == b.discrete
    assert a.discrete == b.compact


@given(valid_terms)
def test_torsion_free_dense_divisibility_exchange(e):
    a, b = predicate_vector(e), predicate_vector(dual(e))
    assert a.torsion_free == b.densely_divisible
    assert a.densely_divisible == b.torsion_free


@given(valid_terms)
def test_compact_connected_iff_dual_torsion_free(e):
    a = predicate_vector(e)
    if a.compact:
        assert a.connected == predicate_vector(dual(e)).torsion_free
