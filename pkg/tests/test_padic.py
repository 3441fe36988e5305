import cmath
import math
from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from lcagroups.errors import PrecisionError, PrimeMismatchError
from lcagroups.padic import (
    Adele, PAdic, adele_character, adele_phase, qp_arith, qp_frac_part, valuation,
)

PRIMES = st.sampled_from([2, 3, 5, 7])
rationals = st.fractions(max_denominator=500).filter(lambda x: abs(x) < 10 ** 6)
nonzero = rationals.filter(lambda x: x != 0)


class TestArith:
    def test_add_carries(self):
        r = qp_arith("add", PAdic(5, 0, 1, 8), PAdic(5, 0, 4, 8))
        assert (r.valuation, r.unit) == (1, 1)

    def test_mul_valuations(self):
        r = qp_arith("mul", PAdic(3, -2, 1, 8), PAdic(3, 2, 1, 8))
        assert (r.valuation, r.unit) == (0, 1)

    def test_division_inverse(self):
        r = qp_arith("div", PAdic(2, 0, 1, 4), PAdic(2, 0, 3, 4))
        assert (r.valuation, r.unit, r.precision) == (0, 11, 4)
        assert 3 * 11 % 16 == 1

    def test_cancellation_loses_precision(self):
        a = PAdic.from_rational(1, 3, 5)
        b = PAdic.from_rational(1 + 3 ** 3, 3, 5)
        d = b - a
        assert d.valuation == 3 and d.abs_precision == 5

    def test_errors(self):
        with pytest.raises(ZeroDivisionError):
            qp_arith("div", PAdic.from_rational(1, 2), PAdic.zero(2))
        with pytest.raises(PrimeMismatchError):
            qp_arith("add", PAdic.from_rational(1, 2), PAdic.from_rational(1, 3))
        with pytest.raises(ValueError):
            PAdic(3, 0, 3, 4)

    def test_literal_round_trip(self):
        a = PAdic.from_rational(Fraction(7, 18), 3, 10)
        assert str(a) == f"3^-2 * {a.unit} (mod 3^10)"
        assert PAdic.parse(str(a)) == a
        assert PAdic.parse("0 (mod 5^6)") == PAdic.zero(5, 6)

    @given(PRIMES, nonzero, nonzero)
    def test_field_ops_match_rationals(self, p, x, y):
        M = 30
        a, b = PAdic.from_rational(x, p, M), PAdic.from_rational(y, p, M)
        for op, exact in (("add", x + y), ("sub", x - y), ("mul", x * y), ("div", x / y)):
            got = qp_arith(op, a, b)
            if exact == 0:
                assert got.is_zero
                continue
            want = PAdic.from_rational(exact, p, M)
            assert got.equal_at_precision(want)

    @given(PRIMES, nonzero, nonzero, nonzero)
    def test_field_axioms(self, p, x, y, z):
        a, b, c = (PAdic.from_rational(t, p, 40) for t in (x, y, z))
        assert ((a + b) + c).equal_at_precision(a + (b + c))
        assert (a * (b + c)).equal_at_precision(a * b + a * c)
        assert ((a * b) * c).equal_at_precision(a * (b * c))
        assert (a * (1 / a)).equal_at_precision(PAdic.from_rational(1, p, 40))

    @given(PRIMES, nonzero, nonzero)
    def test_valuation_laws(self, p, x, y):
        a, b = PAdic.from_rational(x, p), PAdic.from_rational(y, p)
        assert (a * b).valuation == a.valuation + b.valuation
        s = a + b
        if not s.is_zero:
            assert s.valuation >= min(a.valuation, b.valuation)
            if a.valuation != b.valuation:
                assert s.valuation == min(a.valuation, b.valuation)
        assert a.valuation == valuation(x, p)


class TestFracPart:
    def test_examples(self):
        assert qp_frac_part(PAdic(2, -1, 1, 10)) == Fraction(1, 2)
        assert qp_frac_part(PAdic.from_rational(7, 3)) == 0
        assert qp_frac_part(PAdic.from_rational(Fraction(7, 25), 5)) == Fraction(7, 25)

    def test_insufficient_precision(self):
        with pytest.raises(PrecisionError):
            qp_frac_part(PAdic(2, -5, 1, 3))

    @given(PRIMES, rationals)
    def test_difference_is_integral(self, p, x):
        r = qp_frac_part(PAdic.from_rational(x, p))
        assert 0 <= r < 1
        assert r.denominator == p ** round(math.log(r.denominator, p))
        d = x - r
        assert d == 0 or valuation(d, p) >= 0


class TestAdele:
    def test_diagonal_kernel(self):
        a = Adele.diagonal(Fraction(5, 12))
        assert abs(adele_character(a, 1) - 1) < 1e-12

    def test_real_half(self):
        a = Adele(Fraction(1))
        assert abs(adele_character(a, Fraction(1, 2)) + 1) < 1e-12

    def test_zero(self):
        assert adele_phase(Adele(0), Fraction(3, 7)) == 0

    def test_unlisted_prime_materialized(self):
        # r = 1/5 makes the coordinate at the unlisted prime 5 contribute
        third = Fraction(1, 3)
        parts = {3: PAdic.from_rational(third, 3)}
        assert adele_phase(Adele(third, parts, third), Fraction(1, 5)) == 0
        assert adele_phase(Adele(third, parts, 0), Fraction(1, 5)) != 0

    def test_default_must_be_integral_off_support(self):
        with pytest.raises(ValueError):
            Adele(0, {}, Fraction(1, 2))

    def test_json_round_trip(self):
        a = Adele(Fraction(1, 3), {2: PAdic.from_rational(Fraction(3, 4), 2, 20)})
        assert Adele.from_json(a.to_json()) == a

    @given(st.fractions(max_denominator=100), st.fractions(max_denominator=100),
           st.fractions(max_denominator=100), st.fractions(max_denominator=50),
           st.fractions(max_denominator=50))
    def test_multiplicative(self, a_inf, a2, a5, r, s):
        a = Adele(a_inf, {2: PAdic.from_rational(a2, 2), 5: PAdic.from_rational(a5, 5)})
        lhs = adele_character(a, r + s)
        rhs = adele_character(a, r) * adele_character(a, s)
        assert abs(lhs - rhs) < 1e-9
        assert abs(abs(lhs) - 1) < 1e-12

    @given(st.fractions(max_denominator=1000), st.fractions(max_denominator=1000))
    def test_kernel(self, q, r):
        assert adele_phase(Adele.diagonal(q), r) == 0
