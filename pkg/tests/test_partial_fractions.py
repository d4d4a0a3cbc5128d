import math
from fractions import Fraction

import pytest

from calcforge import expr as ex
from calcforge.exact_algebra import IrreducibleRemainder, Poly, poly_from_expr
from calcforge.partial_fractions import (
    LinearPower, QuadAtan, QuadLog, antiderivative, decompose,
    eval_antiderivative, to_expr,
)
from calcforge.quadrature import IntegralSpec, integrate_finite


def _polys(num_text, den_text):
    return poly_from_expr(ex.parse(num_text)), poly_from_expr(ex.parse(den_text))


def test_simple_poles_exact_coefficients():
    num, den = _polys("-3*x^2+2*x+13", "x^3+2*x^2-x-2")
    d = decompose(num, den)
    assert d.polynomial_part.is_zero()
    coefs = {(t.root, t.power): t.coef for t in d.terms}
    assert coefs == {(Fraction(1), 1): Fraction(2),
                     (Fraction(-1), 1): Fraction(-4),
                     (Fraction(-2), 1): Fraction(-1)}


def test_repeated_root_and_polynomial_part():
    num, den = _polys("3*x^3-32*x+56", "x^3-2*x^2-4*x+8")
    d = decompose(num, den)
    assert d.polynomial_part == Poly.constant(3)
    coefs = {(t.root, t.power): t.coef for t in d.terms}
    # the first-power term at the double root has coefficient zero and is dropped
    assert coefs == {(Fraction(2), 2): Fraction(4),
                     (Fraction(-2), 1): Fraction(6)}


def test_irreducible_quadratic_exact_coefficients():
    num, den = _polys("x^2-2*x-9", "(x^2+4*x+5)*(x-1)")
    d = decompose(num, den)
    linear = [t for t in d.terms if isinstance(t, LinearPower)]
    logs = [t for t in d.terms if isinstance(t, QuadLog)]
    atans = [t for t in d.terms if isinstance(t, QuadAtan)]
    assert linear == [LinearPower(Fraction(-1), Fraction(1), 1)]
    # numerator 2x+4 = (2/2)(2x+4): exact-differential multiple only
    assert logs == [QuadLog(Fraction(1), Fraction(4), Fraction(5))]
    assert atans == []


def test_recomposition_is_exact_identity():
    for num_text, den_text in [
        ("-3*x^2+2*x+13", "x^3+2*x^2-x-2"),
        ("3*x^3-32*x+56", "x^3-2*x^2-4*x+8"),
        ("x^2-2*x-9", "(x^2+4*x+5)*(x-1)"),
        ("2*x^3+3*x^2-x+12", "x^3+4*x^2"),
        ("1", "x^2+1"),
        ("x^5", "x^2-1"),
    ]:
        num, den = _polys(num_text, den_text)
        d = decompose(num, den)
        lead = den.leading()
        assert d.recompose_over(den * (1 / lead)) == num * (1 / lead)


def test_unsupported_denominator_raises():
    num, den = _polys("1", "(x^2+1)^2")
    with pytest.raises(IrreducibleRemainder):
        decompose(num, den)


def test_antiderivative_evaluates_and_has_poles():
    num, den = _polys("3*x^3-32*x+56", "x^3-2*x^2-4*x+8")
    form = antiderivative(decompose(num, den))
    assert math.isnan(eval_antiderivative(form, 2.0))
    assert math.isfinite(eval_antiderivative(form, 0.0))


def test_antiderivative_derivative_matches_fraction():
    num, den = _polys("x^2-2*x-9", "(x^2+4*x+5)*(x-1)")
    form = antiderivative(decompose(num, den))
    tree = to_expr(form, "x")
    d = ex.compile_single(ex.differentiate(tree, "x"), "x")
    f = ex.compile_single(ex.parse("(x^2-2*x-9)/((x^2+4*x+5)*(x-1))"), "x")
    for x in (-3.0, -1.2, 0.4, 2.5, 4.0):
        assert d(x) == pytest.approx(f(x), rel=1e-9, abs=1e-9)


def test_fundamental_theorem_consistency():
    cases = [
        ("1", "x^2+1", 0.0, 1.0),
        ("x", "x^2+4", -1.0, 1.0),
        ("x^2-2*x-9", "(x^2+4*x+5)*(x-1)", 2.0, 5.0),
        ("-3*x^2+2*x+13", "x^3+2*x^2-x-2", 3.0, 6.0),
        ("3*x^3-32*x+56", "x^3-2*x^2-4*x+8", 3.0, 7.0),
        ("1", "(x-1)*(x+1)", 2.0, 4.0),
        ("x^3", "x^2+1", 0.0, 2.0),
        ("5*x+1", "x^2+x+1", -1.0, 1.0),
        ("x^2", "(x^2+1)*(x-3)", 4.0, 8.0),
        ("7", "(x+2)^2", 0.0, 3.0),
    ]
    for num_text, den_text, lo, hi in cases:
        num, den = _polys(num_text, den_text)
        form = antiderivative(decompose(num, den))
        exact = eval_antiderivative(form, hi) - eval_antiderivative(form, lo)
        integrand = ex.Div(ex.parse(num_text), ex.parse(den_text))
        r = integrate_finite(IntegralSpec(integrand, "x", lo, hi))
        assert abs(r.value - exact) <= max(r.err_estimate * 10, 1e-10), \
            (num_text, den_text)
