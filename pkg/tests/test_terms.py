import json

import pytest
from hypothesis import given, settings, strategies as st

from lcagroups.errors import InvalidTermError, ParseError
from lcagroups.predicates import predicate_vector
from lcagroups.terms import (
    ALEPH0, QHAT, TRIVIAL, Cardinal, Cyc, DirectSum, LocalProd, Power, Prufer, Q, Qp, R,
    RestrictedPower, Z, Zp, flatten, from_json, is_compact, is_discrete, normal_form,
    parse_expr, render, require_valid, to_json, validate,
)

from termgen import raw_terms, valid_terms


class TestCardinal:
    def test_addition(self):
        assert ALEPH0 + Cardinal(3) == ALEPH0
        assert Cardinal(2) + Cardinal(3) == Cardinal(5)

    def test_multiplication_by_zero(self):
        assert Cardinal(0) * ALEPH0 == Cardinal(0)

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            Cardinal(-1)

    def test_parse_forms(self):
        assert Cardinal.of("w") == ALEPH0
        assert Cardinal.of(4) == Cardinal(4)


class TestParse:
    def test_field_of_laurent_series(self):
        e = parse_expr("prod(C(3), w) + sum(C(3), w)")
        assert e == DirectSum([Power(Cyc(3), ALEPH0), RestrictedPower(Cyc(3), ALEPH0)])

    def test_single_atom(self):
        assert parse_expr("R") == R

    def test_finite_local_product_normalizes(self):
        e = parse_expr("lp(Qp(2), 4)")
        assert e == LocalProd(2, 4)
        assert normal_form(e) == Power(Qp(2), 4)
        assert predicate_vector(e) == predicate_vector(Power(Qp(2), 4))

    def test_plus_is_flattened(self):
        assert parse_expr("R + (Z + T)") == parse_expr("R + Z + T")
        assert len(parse_expr("R + Z + T").terms) == 3

    def test_whitespace_and_zero(self):
        assert parse_expr("  prod( Qhat ,w ) ") == Power(QHAT, ALEPH0)
        assert parse_expr("0") == TRIVIAL

    @pytest.mark.parametrize("text,offset", [
        ("", 0), ("R +", 3), ("C(1)", 2), ("Zp(4)", 3), ("prod(R 2)", 7),
        ("R R", 2), ("Prufer(9)", 7), ("sum(Z, -1)", 7),
    ])
    def test_errors_carry_offsets(self, text, offset):
        with pytest.raises(ParseError) as err:
            parse_expr(text)
        assert err.value.offset == offset

    @given(st.binary(max_size=40))
    @settings(max_examples=300)
    def test_fuzz_bytes_never_crash(self, data):
        try:
            parse_expr(data)
        except ParseError as exc:
            assert 0 <= exc.offset <= len(data)

    @given(st.text(alphabet="RZTQhatCPrufepodsumlwQp()0123456789,+ ", max_size=30))
    @settings(max_examples=300)
    def test_fuzz_grammar_alphabet(self, text):
        try:
            parse_expr(text)
        except ParseError as exc:
            assert exc.offset >= 0

    def test_deep_nesting_is_an_error_not_a_crash(self):
        with pytest.raises(ParseError):
            parse_expr("(" * 5000 + "R" + ")" * 5000)


class TestValidate:
    def test_infinite_power_of_noncompact(self):
        rep = validate(Power(Q, ALEPH0))
        assert not rep.valid
        assert rep.violations[0].message == "infinite full power of non-compact base"

    def test_infinite_sum_of_nondiscrete(self):
        rep = validate(RestrictedPower(Zp(2), ALEPH0))
        assert rep.violations[0].message == "infinite restricted power of non-discrete base"

    def test_solenoid_power_is_valid(self):
        assert validate(Power(QHAT, ALEPH0)).valid

    def test_violation_paths(self):
        rep = validate(DirectSum([R, Power(Z, ALEPH0)]))
        assert [v.path for v in rep.violations] == ["$/1"]
        rep = validate(Power(RestrictedPower(R, ALEPH0), 2))
        assert [v.path for v in rep.violations] == ["$/base"]

    def test_atom_rules(self):
        assert validate(Cyc(1)).violations[0].rule == "cyclic-order"
        assert validate(Zp(6)).violations[0].rule == "prime-parameter"

    def test_require_valid(self):
        with pytest.raises(InvalidTermError):
            require_valid(Power(R, ALEPH0))

    @given(raw_terms)
    def test_compositional(self, e):
        rep = validate(e)
        assert rep.valid == (not rep.violations)
        children = getattr(e, "terms", None) or ([e.base] if hasattr(e, "base") else [])
        if rep.valid:
            assert all(validate(c).valid for c in children)

    def test_compact_and_discrete(self):
        assert is_compact(Power(Zp(3), ALEPH0)) and not is_discrete(Power(Zp(3), ALEPH0))
        assert is_discrete(RestrictedPower(Prufer(3), ALEPH0))
        assert is_compact(TRIVIAL) and is_discrete(TRIVIAL)


class TestRender:
    def test_examples(self):
        assert render(DirectSum([R, R])) == "R + R"
        assert render(LocalProd(5, ALEPH0)) == "lp(Qp(5), w)"
        assert render(Power(Cyc(3), 2)) == "prod(C(3), 2)"
        assert render(TRIVIAL) == "0"

    @given(valid_terms)
    def test_round_trip(self, e):
        assert parse_expr(render(e)) == flatten(e)
        assert normal_form(parse_expr(render(normal_form(e)))) == normal_form(e)

    def test_zero_power_is_trivial(self):
        assert normal_form(Power(R, 0)) == TRIVIAL
        assert render(normal_form(parse_expr("R + sum(Q, 0)"))) == "R"


class TestJson:
    @given(valid_terms)
    def test_round_trip(self, e):
        doc = json.loads(json.dumps(to_json(e)))
        assert from_json(doc) == e

    def test_shape(self):
        assert to_json(Power(Zp(2), ALEPH0)) == {
            "node": "Power", "args": [{"node": "Zp", "args": [2]}, "w"]}
        assert to_json(LocalProd(3, 2))["args"][:2] == [
            {"node": "Qp", "args": [3]}, {"node": "Zp", "args": [3]}]
