import pytest
from hypothesis import given, strategies as st

from lcagroups.errors import PrimeMismatchError
from lcagroups.laurent import LaurentElt, fps_arith, shift_action


def L(text, prec=40):
    return LaurentElt.parse(text, precision_high=prec)


def elements(p):
    return st.builds(
        lambda low, cs: LaurentElt(p, low, tuple(cs), 30),
        st.integers(-5, 5), st.lists(st.integers(0, p - 1), max_size=8))


class TestArith:
    def test_frobenius_square(self):
        assert fps_arith("mul", L("1 + t (p=2)"), L("1 + t (p=2)")).equal_at_precision(L("1 + t^2 (p=2)"))

    def test_inverse_of_t(self):
        assert fps_arith("inv", L("t (p=3)")).to_dict() == {-1: 1}

    def test_geometric_series(self):
        inv = fps_arith("inv", L("1 + t (p=2)", 20))
        assert inv.to_dict() == {e: 1 for e in range(20)}
        assert (inv * L("1 + t (p=2)", 20)).equal_at_precision(LaurentElt.monomial(2, 0, 1, 20))

    def test_errors(self):
        with pytest.raises(ZeroDivisionError):
            fps_arith("inv", LaurentElt.zero(5))
        with pytest.raises(PrimeMismatchError):
            L("1 (p=2)") + L("1 (p=3)")

    def test_literal(self):
        a = L("t^-1 + 1 + 2*t^3 (p=3)")
        assert a.to_dict() == {-1: 1, 0: 1, 3: 2}
        assert str(a) == "t^-1 + 1 + 2*t^3 (p=3)"
        assert LaurentElt.parse(str(a), a.precision_high) == a

    def test_truncation_tracks_window(self):
        a = LaurentElt.monomial(2, -3, 1, 10)
        b = LaurentElt.monomial(2, 2, 1, 10)
        # (t^-3 + O(t^10)) * (t^2 + O(t^10)) = t^-1 + O(t^7)
        assert (a * b).precision_high == 7
        with pytest.raises(ValueError):
            a.coeff(10)


@given(elements(3), elements(3), elements(3))
def test_ring_axioms(a, b, c):
    assert ((a + b) + c).equal_at_precision(a + (b + c))
    assert (a + b).equal_at_precision(b + a)
    assert (a * b).equal_at_precision(b * a)
    assert ((a * b) * c).equal_at_precision(a * (b * c))
    assert (a * (b + c)).equal_at_precision(a * b + a * c)
    assert (a - a).is_zero


@given(elements(5))
def test_inverse_two_sided(a):
    if a.is_zero:
        return
    one = LaurentElt.monomial(5, 0)
    inv = a.inverse()
    assert (a * inv).equal_at_precision(one)
    assert (inv * a).equal_at_precision(one)


class TestShift:
    def test_examples(self):
        one = LaurentElt.monomial(2, 0)
        assert shift_action(1, one).to_dict() == {1: 1}
        a = L("1 + t^2 (p=2)")
        assert shift_action(0, a) == a
        assert shift_action(-2, LaurentElt.monomial(7, 3)).to_dict() == {1: 1}

    @given(elements(2), st.integers(-10, 10), st.integers(-10, 10))
    def test_composition(self, a, j, k):
        assert shift_action(j, shift_action(k, a)) == shift_action(j + k, a)

    @given(elements(3), st.integers(-6, 6))
    def test_shift_is_multiplication_by_monomial(self, a, k):
        assert shift_action(k, a).to_dict() == (LaurentElt.monomial(3, k, 1, 100) * a).to_dict()
