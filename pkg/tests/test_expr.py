from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fidepia.errors import DomainError, ParseError, ValidationError
from fidepia.expr import (
    Const,
    Fredholm,
    IntPow,
    KernelMonomial,
    Product,
    Sum,
    TPow,
    Unknown,
    UnknownDeriv,
    Volterra,
    depends_on_unknowns,
    eval_expr,
    fredholm_apply,
    parse_expr,
    render,
    validate,
    volterra_apply,
)
from fidepia.fracseries import FracSeries

UK = ["u", "k"]
T = FracSeries.monomial(1.0, 1)


class TestParse:
    def test_second_example_rhs(self):
        e = parse_expr("1 - 0.5*d(k)^2", UK)
        assert e == Sum((Const(1.0), Product((Const(-0.5), IntPow(UnknownDeriv(1), 2)))))

    def test_t(self):
        assert parse_expr("t", UK) == TPow(Fraction(1))

    def test_fractional_power_of_t(self):
        assert parse_expr("t^(3/2)", UK) == TPow(Fraction(3, 2))

    def test_division_by_literal(self):
        assert eval_expr(parse_expr("t/4", []), []).allclose(FracSeries.monomial(0.25, 1))

    def test_parentheses_and_products(self):
        e = parse_expr("(u + 1)*k", UK)
        assert eval_expr(e, [T, FracSeries.constant(2.0)]).allclose(FracSeries([(2, 0), (2, 1)]))

    @pytest.mark.parametrize("src", ["d(u", "1 +", "u^", "2*)", "u^(1/2)", "t^0.5", "@"])
    def test_syntax_errors(self, src):
        with pytest.raises(ParseError):
            parse_expr(src, UK)

    def test_error_carries_offset(self):
        with pytest.raises(ParseError) as info:
            parse_expr("d(u", UK)
        assert info.value.offset == 3
        assert info.value.source == "d(u"

    def test_unknown_name(self):
        with pytest.raises(ValidationError):
            parse_expr("w + 1", UK)

    def test_reserved_names(self):
        with pytest.raises(ValidationError):
            parse_expr("1", ["t"])

    def test_dependency_detection(self):
        assert not depends_on_unknowns(parse_expr("2*t - 1", UK))
        assert depends_on_unknowns(parse_expr("d(k)", UK))


def _sources():
    atoms = st.sampled_from(["u", "k", "d(u)", "d(k)", "t", "t^(1/2)", "t^3", "2", "0.25", "1.5"])

    def extend(inner):
        return st.one_of(
            st.tuples(inner, st.sampled_from([" + ", " - ", "*"]), inner).map("".join),
            st.tuples(inner, st.integers(1, 3)).map(lambda x: f"({x[0]})^{x[1]}"),
            inner.map(lambda s: f"-({s})"),
        )

    return st.recursive(atoms, extend, max_leaves=8)


class TestRoundTrip:
    @settings(max_examples=200)
    @given(_sources())
    def test_parse_render_parse(self, src):
        e = parse_expr(src, UK)
        assert parse_expr(render(e, UK), UK) == e

    @settings(max_examples=100)
    @given(_sources(), st.floats(0.05, 1.0))
    def test_render_preserves_value(self, src, t):
        state = [FracSeries([(1, 1), (0.5, 2)]), FracSeries([(1, 0), (-1, 3)])]
        a = eval_expr(parse_expr(src, UK), state)(t)
        b = eval_expr(parse_expr(render(parse_expr(src, UK), UK), UK), state)(t)
        assert a == pytest.approx(b, rel=1e-12, abs=1e-12)


class TestKernels:
    def test_validation(self):
        with pytest.raises(ValidationError):
            KernelMonomial(0.0)
        with pytest.raises(ValidationError):
            KernelMonomial(1.0, tms_pow=-1)
        with pytest.raises(ValidationError):
            KernelMonomial(1.0, t_pow=-1)

    def test_fredholm_first_example(self):
        u1 = FracSeries([(1, 1), (-0.125, 2)])
        got = fredholm_apply([KernelMonomial(1.0, 1, 1, 0)], u1 * u1)
        assert got.allclose(FracSeries.monomial(389 / 1920, 1), rtol=1e-14)

    def test_volterra_linear_kernel_on_constant(self):
        got = volterra_apply([KernelMonomial(1.0, 0, 0, 1)], FracSeries.constant(1.0))
        assert got.allclose(FracSeries.monomial(0.5, 2))

    def test_fredholm_rejects_convolution_factor(self):
        with pytest.raises(DomainError):
            fredholm_apply([KernelMonomial(1.0, 0, 0, 1)], T)

    def test_volterra_rejects_nonintegrable(self):
        with pytest.raises(DomainError):
            volterra_apply([KernelMonomial(1.0)], FracSeries.monomial(1.0, "-3/2"))


class TestEvaluate:
    def test_second_example_u_rhs_at_initial_guess(self):
        rhs = Sum(
            (
                parse_expr("1 - 0.5*d(k)^2", UK),
                Volterra((KernelMonomial(1.0, 0, 0, 1),), Unknown(1)),
                Volterra((KernelMonomial(1.0),), Product((Unknown(0), Unknown(1)))),
            )
        )
        state = [FracSeries.zero(), FracSeries.constant(1.0)]
        assert eval_expr(rhs, state).allclose(FracSeries([(1, 0), (0.5, 2)]))

    def test_validate_rules(self):
        nested = Volterra((KernelMonomial(1.0),), Volterra((KernelMonomial(1.0),), Unknown(0)))
        with pytest.raises(ValidationError):
            validate(nested, 1)
        with pytest.raises(ValidationError):
            validate(Volterra((KernelMonomial(1.0),), UnknownDeriv(0)), 1)
        with pytest.raises(ValidationError):
            validate(Fredholm((KernelMonomial(1.0, tms_pow=1),), Unknown(0)), 1)
        with pytest.raises(ValidationError):
            validate(Unknown(2), 2)
        validate(Fredholm((KernelMonomial(1.0, 1, 1),), IntPow(Unknown(0), 2)), 1)
