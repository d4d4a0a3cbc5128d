import random
from fractions import Fraction

import pytest

from calcforge import expr as ex
from calcforge.exact_algebra import (
    DivisionByZeroPoly, Factorization, IrreducibleRemainder, Poly,
    SingularSystem, factorize, poly_divmod, poly_from_expr, rational_roots,
    solve_linear_exact,
)


def _random_poly(rng, max_deg=5):
    deg = rng.randint(0, max_deg)
    return Poly(tuple(Fraction(rng.randint(-5, 5), rng.randint(1, 4))
                      for _ in range(deg + 1)))


def test_divmod_identity_random():
    rng = random.Random(11)
    for _ in range(50):
        n = _random_poly(rng)
        d = _random_poly(rng)
        if d.is_zero():
            continue
        q, r = poly_divmod(n, d)
        assert q * d + r == n
        assert r.is_zero() or r.degree < d.degree


def test_divmod_by_zero():
    with pytest.raises(DivisionByZeroPoly):
        poly_divmod(Poly.constant(1), Poly.zero())


def test_rational_roots_with_multiplicity():
    # 3 * (x - 1) * (x + 2)^2
    p = Poly.x_minus(1) * (Poly.x_minus(-2) ** 2) * 3
    assert rational_roots(p) == [(Fraction(-2), 2), (Fraction(1), 1)]
    # fractional root: (2x - 1)(x + 3)
    p = Poly((Fraction(-1), Fraction(2))) * Poly.x_minus(-3)
    assert rational_roots(p) == [(Fraction(-3), 1), (Fraction(1, 2), 1)]


def test_factorize_irreducible_quadratic():
    p = Poly((Fraction(5), Fraction(4), Fraction(1)))  # x^2+4x+5
    f = factorize(p)
    assert f.quadratics == ((Fraction(4), Fraction(5), 1),)
    assert f.linear == ()
    assert f.expand() == p


def test_factorize_splits_square_discriminant():
    p = Poly((Fraction(-4), Fraction(0), Fraction(1)))  # x^2 - 4
    f = factorize(p)
    assert sorted(root for root, _ in f.linear) == [Fraction(-2), Fraction(2)]
    assert f.quadratics == ()


def test_factorize_unsupported_raises():
    # x^4 + 1 has no rational roots and an irrational factorization
    p = Poly((Fraction(1), Fraction(0), Fraction(0), Fraction(0), Fraction(1)))
    with pytest.raises(IrreducibleRemainder) as err:
        factorize(p)
    assert err.value.degree == 4


def test_factorization_expand_round_trip():
    f = Factorization(Fraction(2),
                      ((Fraction(1), 1), (Fraction(-2), 2)),
                      ((Fraction(0), Fraction(1), 1),))
    assert factorize(f.expand()).expand() == f.expand()


def test_solve_linear_exact():
    sol = solve_linear_exact(
        [[Fraction(2), Fraction(1)], [Fraction(1), Fraction(3)]],
        [Fraction(5), Fraction(10)])
    assert sol == [Fraction(1), Fraction(3)]
    with pytest.raises(SingularSystem):
        solve_linear_exact([[1, 2], [2, 4]], [1, 2])


def test_poly_from_expr():
    p = poly_from_expr(ex.parse("(x^2+4*x+5)*(x-1)"))
    assert p == Poly((Fraction(-5), Fraction(1), Fraction(3), Fraction(1)))
    assert poly_from_expr(ex.parse("x/2")) == Poly((Fraction(0), Fraction(1, 2)))
    with pytest.raises(ValueError):
        poly_from_expr(ex.parse("sin(x)"))
    with pytest.raises(ValueError):
        poly_from_expr(ex.parse("1/x"))
    with pytest.raises(ValueError):
        poly_from_expr(ex.parse("x^(1/2)"))


def test_poly_evaluation_exact_for_rationals():
    p = Poly((Fraction(1, 3), Fraction(2), Fraction(1)))
    v = p(Fraction(1, 2))
    assert isinstance(v, Fraction)
    assert v == Fraction(1, 3) + 1 + Fraction(1, 4)
    assert isinstance(p(0.5), float)


def test_derivative():
    p = Poly((Fraction(7), Fraction(0), Fraction(3)))  # 3x^2 + 7
    assert p.derivative() == Poly((Fraction(0), Fraction(6)))
