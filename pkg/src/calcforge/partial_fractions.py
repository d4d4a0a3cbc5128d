"""Rational-function integration: exact partial-fraction decomposition and
closed-form antiderivatives.

The pipeline is: split off the polynomial part, factor the denominator, set up
the unknown-coefficient ansatz, solve the full coefficient-comparison system
exactly, then integrate termwise.  A numerator (Ax+B) over an irreducible
quadratic is re-expressed at decomposition time as the exact-differential
multiple of (2x+b) plus a constant remainder, so integration yields a log and
an arctangent term directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from . import expr as ex
from .exact_algebra import (
    Factorization, Poly, factorize, poly_divmod, solve_linear_exact,
)

__all__ = [
    "PFTerm", "LinearPower", "QuadLog", "QuadAtan", "PFDecomposition",
    "AntiderivativeForm", "PolyTerm", "LogAbs", "PowerTerm", "QuadLogTerm",
    "AtanTerm", "RepeatedQuadratic", "decompose", "antiderivative",
    "eval_antiderivative", "to_expr",
]


class RepeatedQuadratic(ValueError):
    """Quadratic factor with multiplicity > 1; outside the supported class."""


@dataclass(frozen=True)
class LinearPower:
    coef: Fraction
    root: Fraction
    power: int  # coef / (x - root)^power


@dataclass(frozen=True)
class QuadLog:
    coef: Fraction
    b: Fraction
    c: Fraction  # coef * (2x + b) / (x^2 + bx + c)


@dataclass(frozen=True)
class QuadAtan:
    coef: Fraction
    b: Fraction
    c: Fraction  # coef / (x^2 + bx + c)


PFTerm = Union[LinearPower, QuadLog, QuadAtan]


@dataclass(frozen=True)
class PFDecomposition:
    polynomial_part: Poly
    terms: tuple

    def recompose_over(self, den: Poly) -> Poly:
        """Numerator of polynomial_part + sum(terms) over the denominator den.

        Exact polynomial identity check: the result must equal the original
        numerator when the decomposition is correct.
        """
        total = self.polynomial_part * den
        for term in self.terms:
            if isinstance(term, LinearPower):
                base = Poly.x_minus(term.root) ** term.power
                cofactor, rem = poly_divmod(den, base)
                assert rem.is_zero()
                total = total + cofactor * term.coef
            else:
                quad = Poly((term.c, term.b, Fraction(1)))
                cofactor, rem = poly_divmod(den, quad)
                assert rem.is_zero()
                if isinstance(term, QuadLog):
                    numer = Poly((term.b, Fraction(2))) * term.coef
                else:
                    numer = Poly.constant(term.coef)
                total = total + cofactor * numer
        return total


# Antiderivative summands

@dataclass(frozen=True)
class PolyTerm:
    poly: Poly  # already integrated


@dataclass(frozen=True)
class LogAbs:
    coef: Fraction
    root: Fraction  # coef * ln|x - root|


@dataclass(frozen=True)
class PowerTerm:
    coef: Fraction
    root: Fraction
    negpower: int  # coef * (x-root)^(1-k) / (1-k), k = negpower >= 2


@dataclass(frozen=True)
class QuadLogTerm:
    coef: Fraction
    b: Fraction
    c: Fraction  # coef * ln(x^2 + bx + c)


@dataclass(frozen=True)
class AtanTerm:
    coef: Fraction
    b: Fraction
    radicand: Fraction  # coef * arctan((x + b/2) / sqrt(radicand)), radicand = c - b^2/4


@dataclass(frozen=True)
class AntiderivativeForm:
    summands: tuple


def decompose(num: Poly, den: Poly) -> PFDecomposition:
    """Exact partial-fraction decomposition of num/den."""
    if den.is_zero():
        raise ZeroDivisionError("zero denominator")
    poly_part = Poly.zero()
    if not num.is_zero() and num.degree >= den.degree:
        poly_part, num = poly_divmod(num, den)
    fact = factorize(den)
    for _, _, mult in fact.quadratics:
        if mult > 1:
            raise RepeatedQuadratic("repeated irreducible quadratic factor")
    if num.is_zero():
        return PFDecomposition(poly_part, ())

    # columns of the coefficient-comparison system, one per unknown
    monic_den = fact.expand() * (1 / fact.constant)
    columns = []
    slots = []  # parallel description of each unknown
    for root, mult in fact.linear:
        for power in range(1, mult + 1):
            cofactor, rem = poly_divmod(monic_den, Poly.x_minus(root) ** power)
            assert rem.is_zero()
            columns.append(cofactor)
            slots.append(("linear", root, power))
    for b, c, _ in fact.quadratics:
        quad = Poly((c, b, Fraction(1)))
        cofactor, rem = poly_divmod(monic_den, quad)
        assert rem.is_zero()
        columns.append(cofactor * Poly((Fraction(0), Fraction(1))))  # A x
        slots.append(("quad_a", b, c))
        columns.append(cofactor)  # B
        slots.append(("quad_b", b, c))

    n = len(columns)
    target = num * (1 / fact.constant)
    matrix = [[Fraction(0)] * n for _ in range(n)]
    rhs = [Fraction(0)] * n
    for row in range(n):  # row = coefficient of x^row
        for col, poly in enumerate(columns):
            if row < len(poly.coeffs):
                matrix[row][col] = poly.coeffs[row]
        if row < len(target.coeffs):
            rhs[row] = target.coeffs[row]
    solution = solve_linear_exact(matrix, rhs)

    terms = []
    i = 0
    while i < len(slots):
        kind = slots[i][0]
        if kind == "linear":
            _, root, power = slots[i]
            coef = solution[i]
            if coef != 0:
                terms.append(LinearPower(coef, root, power))
            i += 1
        else:
            _, b, c = slots[i]
            a_coef = solution[i]
            b_coef = solution[i + 1]
            # (Ax + B)/(x^2+bx+c) = (A/2)(2x+b)/(x^2+bx+c) + (B - Ab/2)/(x^2+bx+c)
            log_coef = a_coef / 2
            atan_coef = b_coef - a_coef * b / 2
            if log_coef != 0:
                terms.append(QuadLog(log_coef, b, c))
            if atan_coef != 0:
                terms.append(QuadAtan(atan_coef, b, c))
            i += 2
    return PFDecomposition(poly_part, tuple(terms))


def antiderivative(d: PFDecomposition) -> AntiderivativeForm:
    """Termwise closed-form antiderivative; zero-coefficient terms dropped."""
    summands = []
    if not d.polynomial_part.is_zero():
        integrated = [Fraction(0)]
        for i, c in enumerate(d.polynomial_part.coeffs):
            integrated.append(c / (i + 1))
        summands.append(PolyTerm(Poly(tuple(integrated))))
    for term in d.terms:
        if isinstance(term, LinearPower):
            if term.coef == 0:
                continue
            if term.power == 1:
                summands.append(LogAbs(term.coef, term.root))
            else:
                summands.append(PowerTerm(term.coef, term.root, term.power))
        elif isinstance(term, QuadLog):
            if term.coef != 0:
                summands.append(QuadLogTerm(term.coef, term.b, term.c))
        elif isinstance(term, QuadAtan):
            if term.coef != 0:
                summands.append(AtanTerm(term.coef, term.b,
                                         term.c - term.b * term.b / 4))
    return AntiderivativeForm(tuple(summands))


def eval_antiderivative(f: AntiderivativeForm, x: float) -> float:
    """Numeric value of the closed form; NaN at poles of log/power arguments."""
    total = 0.0
    for s in f.summands:
        if isinstance(s, PolyTerm):
            total += s.poly(x)
        elif isinstance(s, LogAbs):
            arg = abs(x - float(s.root))
            total += float(s.coef) * (math.log(arg) if arg > 0 else math.nan)
        elif isinstance(s, PowerTerm):
            base = x - float(s.root)
            k = s.negpower
            if base == 0:
                total += math.nan
            else:
                total += float(s.coef) * base ** (1 - k) / (1 - k)
        elif isinstance(s, QuadLogTerm):
            q = x * x + float(s.b) * x + float(s.c)
            total += float(s.coef) * (math.log(q) if q > 0 else math.nan)
        elif isinstance(s, AtanTerm):
            scale = math.sqrt(float(s.radicand))
            total += float(s.coef) / scale * math.atan((x + float(s.b) / 2) / scale)
    return total


def to_expr(f: AntiderivativeForm, var: str = "x") -> ex.Expr:
    """Render the closed form into an expression tree."""
    v = ex.Var(var)
    pieces = []
    for s in f.summands:
        if isinstance(s, PolyTerm):
            pieces.append(s.poly.to_expr(var))
        elif isinstance(s, LogAbs):
            shifted = _shift(v, -s.root)
            piece = ex.Func("ln", ex.Func("abs", shifted))
            pieces.append(_scale(piece, s.coef))
        elif isinstance(s, PowerTerm):
            k = s.negpower
            shifted = _shift(v, -s.root)
            piece = ex.Pow(shifted, ex.Const(Fraction(1 - k)))
            pieces.append(_scale(piece, s.coef / (1 - k)))
        elif isinstance(s, QuadLogTerm):
            quad = Poly((s.c, s.b, Fraction(1))).to_expr(var)
            pieces.append(_scale(ex.Func("ln", quad), s.coef))
        elif isinstance(s, AtanTerm):
            root = ex.Func("sqrt", ex.Const(s.radicand))
            arg = ex.Div(_shift(v, s.b / 2), root)
            piece = ex.Div(ex.Func("arctan", arg), root)
            pieces.append(_scale(piece, s.coef))
    if not pieces:
        return ex.Const(Fraction(0))
    node = pieces[0]
    for p in pieces[1:]:
        node = ex.Add(node, p)
    return node


def _shift(v: ex.Expr, offset: Fraction) -> ex.Expr:
    if offset == 0:
        return v
    if offset > 0:
        return ex.Add(v, ex.Const(offset))
    return ex.Sub(v, ex.Const(-offset))


def _scale(e: ex.Expr, coef: Fraction) -> ex.Expr:
    if coef == 1:
        return e
    if coef == -1:
        return ex.Neg(e)
    return ex.Mul(ex.Const(coef), e)
