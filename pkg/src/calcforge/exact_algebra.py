"""Exact univariate polynomial arithmetic over the rationals.

Dense representation, lowest degree first; coefficients are
``fractions.Fraction`` so every operation here is exact.  Factorization only
promises success for products of rational-rooted linear factors and integer
irreducible quadratics; anything harder raises ``IrreducibleRemainder``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import expr as ex

__all__ = [
    "Poly", "Factorization", "DivisionByZeroPoly", "IrreducibleRemainder",
    "SingularSystem", "poly_divmod", "rational_roots", "factorize",
    "solve_linear_exact", "poly_from_expr",
]


class DivisionByZeroPoly(ZeroDivisionError):
    pass


class IrreducibleRemainder(ValueError):
    """The rational-root-free cofactor is outside the supported class."""

    def __init__(self, degree: int):
        super().__init__(f"irreducible cofactor of degree {degree}")
        self.degree = degree


class SingularSystem(ValueError):
    pass


def _as_fraction(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class Poly:
    """Dense polynomial; coeffs[i] multiplies x^i.  Zero polynomial has coeffs ()."""

    coeffs: tuple

    def __post_init__(self):
        cs = [_as_fraction(c) for c in self.coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def from_coeffs(cls, coeffs: Sequence) -> "Poly":
        return cls(tuple(coeffs))

    @classmethod
    def zero(cls) -> "Poly":
        return cls(())

    @classmethod
    def constant(cls, c) -> "Poly":
        return cls((_as_fraction(c),))

    @classmethod
    def x_minus(cls, root) -> "Poly":
        return cls((-_as_fraction(root), Fraction(1)))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self) -> Fraction:
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __add__(self, other: "Poly") -> "Poly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [Fraction(0)] * (n - len(self.coeffs))
        b = list(other.coeffs) + [Fraction(0)] * (n - len(other.coeffs))
        return Poly(tuple(x + y for x, y in zip(a, b)))

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __neg__(self) -> "Poly":
        return Poly(tuple(-c for c in self.coeffs))

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            other = Poly.constant(other)
        if self.is_zero() or other.is_zero():
            return Poly.zero()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        result = Poly.constant(1)
        for _ in range(k):
            result = result * self
        return result

    def __call__(self, x):
        acc = Fraction(0) if isinstance(x, (int, Fraction)) else 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + (c if isinstance(x, (int, Fraction)) else float(c))
        return acc

    def derivative(self) -> "Poly":
        return Poly(tuple(i * c for i, c in enumerate(self.coeffs) if i > 0))

    def to_expr(self, var: str = "x") -> ex.Expr:
        terms = []
        v = ex.Var(var)
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(ex.Const(c))
            else:
                power = v if i == 1 else ex.Pow(v, ex.Const(Fraction(i)))
                terms.append(power if c == 1 else ex.Mul(ex.Const(c), power))
        if not terms:
            return ex.Const(Fraction(0))
        node = terms[0]
        for t in terms[1:]:
            node = ex.Add(node, t)
        return node


@dataclass(frozen=True)
class Factorization:
    """constant * prod (x-root)^m * prod (x^2+bx+c)^m with negative discriminants."""

    constant: Fraction
    linear: tuple = ()      # ((root, multiplicity), ...)
    quadratics: tuple = ()  # ((b, c, multiplicity), ...)

    def expand(self) -> Poly:
        p = Poly.constant(self.constant)
        for root, mult in self.linear:
            p = p * (Poly.x_minus(root) ** mult)
        for b, c, mult in self.quadratics:
            p = p * (Poly((c, b, Fraction(1))) ** mult)
        return p


def poly_divmod(n: Poly, d: Poly) -> tuple:
    """Exact division with remainder: n = q*d + r, deg r < deg d."""
    if d.is_zero():
        raise DivisionByZeroPoly("polynomial division by zero")
    rem = list(n.coeffs)
    q = [Fraction(0)] * max(0, len(rem) - len(d.coeffs) + 1)
    dlead = d.leading()
    dd = d.coeffs
    while len(rem) >= len(dd) and any(c != 0 for c in rem):
        while rem and rem[-1] == 0:
            rem.pop()
        if len(rem) < len(dd):
            break
        shift = len(rem) - len(dd)
        factor = rem[-1] / dlead
        q[shift] = factor
        for i, c in enumerate(dd):
            rem[shift + i] -= factor * c
        rem.pop()
    return Poly(tuple(q)), Poly(tuple(rem))


def _divisors(n: int) -> list:
    n = abs(n)
    out = []
    i = 1
    while i * i <= n:
        if n % i == 0:
            out.append(i)
            if i != n // i:
                out.append(n // i)
        i += 1
    return sorted(out)


def rational_roots(p: Poly) -> list:
    """All rational roots with multiplicities, by the rational-root theorem.

    Coefficients are cleared to integers first; each candidate is verified by
    exact evaluation and multiplicities found by repeated synthetic division.
    """
    if p.is_zero():
        raise ValueError("zero polynomial")
    # strip x^k factor: root 0 with multiplicity k
    roots = []
    coeffs = list(p.coeffs)
    zero_mult = 0
    while coeffs and coeffs[0] == 0:
        coeffs.pop(0)
        zero_mult += 1
    if zero_mult:
        roots.append((Fraction(0), zero_mult))
    if len(coeffs) <= 1:
        return roots
    work = Poly(tuple(coeffs))
    # clear denominators
    lcm = 1
    for c in work.coeffs:
        lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
    ints = [int(c * lcm) for c in work.coeffs]
    a0, an = ints[0], ints[-1]
    candidates = set()
    for pnum in _divisors(a0):
        for qden in _divisors(an):
            candidates.add(Fraction(pnum, qden))
            candidates.add(Fraction(-pnum, qden))
    for cand in sorted(candidates):
        if work(cand) == 0:
            mult = 0
            while True:
                q, r = poly_divmod(work, Poly.x_minus(cand))
                if not r.is_zero():
                    break
                work = q
                mult += 1
            roots.append((cand, mult))
    return sorted(roots)


def _rational_sqrt(q: Fraction):
    """Exact square root of a nonnegative rational, or None."""
    if q < 0:
        return None
    num = math.isqrt(q.numerator)
    den = math.isqrt(q.denominator)
    if num * num == q.numerator and den * den == q.denominator:
        return Fraction(num, den)
    return None


def factorize(p: Poly) -> Factorization:
    """Split into rational linear factors and irreducible monic quadratics."""
    if p.is_zero():
        raise ValueError("zero polynomial")
    roots = rational_roots(p)
    work = p
    for root, mult in roots:
        for _ in range(mult):
            work, r = poly_divmod(work, Poly.x_minus(root))
            assert r.is_zero()
    linear = list(roots)
    quadratics = []
    if work.degree == 0:
        constant = work.leading()
    elif work.degree == 2:
        a, b, c = work.coeffs[2], work.coeffs[1], work.coeffs[0]
        bm, cm = b / a, c / a
        disc = bm * bm - 4 * cm
        if disc < 0:
            quadratics.append((bm, cm, 1))
            constant = a
        else:
            sqrt_disc = _rational_sqrt(disc)
            if sqrt_disc is None:
                raise IrreducibleRemainder(2)
            r1 = (-bm + sqrt_disc) / 2
            r2 = (-bm - sqrt_disc) / 2
            for r in (r1, r2):
                merged = False
                for i, (root, mult) in enumerate(linear):
                    if root == r:
                        linear[i] = (root, mult + 1)
                        merged = True
                        break
                if not merged:
                    linear.append((r, 1))
            constant = a
    else:
        raise IrreducibleRemainder(work.degree)
    return Factorization(constant, tuple(sorted(linear)), tuple(quadratics))


def solve_linear_exact(matrix: Sequence[Sequence], rhs: Sequence) -> list:
    """Exact Gaussian elimination with partial pivoting over the rationals."""
    n = len(rhs)
    aug = [[_as_fraction(matrix[i][j]) for j in range(n)] + [_as_fraction(rhs[i])]
           for i in range(n)]
    for col in range(n):
        pivot = max(range(col, n), key=lambda r: abs(aug[r][col]))
        if aug[pivot][col] == 0:
            raise SingularSystem(f"singular at column {col}")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        pv = aug[col][col]
        for r in range(col + 1, n):
            f = aug[r][col] / pv
            if f == 0:
                continue
            for c in range(col, n + 1):
                aug[r][c] -= f * aug[col][c]
    out = [Fraction(0)] * n
    for row in range(n - 1, -1, -1):
        acc = aug[row][n]
        for c in range(row + 1, n):
            acc -= aug[row][c] * out[c]
        out[row] = acc / aug[row][row]
    return out


def poly_from_expr(e: ex.Expr, var: str = "x") -> Poly:
    """Convert an expression that denotes a polynomial in ``var`` to a Poly.

    Supports +, -, *, / by constants, and ^ with nonnegative integer exponents.
    """
    if isinstance(e, ex.Const):
        return Poly.constant(e.value)
    if isinstance(e, ex.Var):
        if e.name != var:
            raise ValueError(f"unexpected variable {e.name!r}")
        return Poly((Fraction(0), Fraction(1)))
    if isinstance(e, ex.Neg):
        return -poly_from_expr(e.operand, var)
    if isinstance(e, ex.Add):
        return poly_from_expr(e.left, var) + poly_from_expr(e.right, var)
    if isinstance(e, ex.Sub):
        return poly_from_expr(e.left, var) - poly_from_expr(e.right, var)
    if isinstance(e, ex.Mul):
        return poly_from_expr(e.left, var) * poly_from_expr(e.right, var)
    if isinstance(e, ex.Div):
        den = poly_from_expr(e.right, var)
        if den.degree != 0:
            raise ValueError("polynomial division by non-constant")
        return poly_from_expr(e.left, var) * (1 / den.leading())
    if isinstance(e, ex.Pow):
        exponent = e.exponent
        neg = False
        if isinstance(exponent, ex.Neg):
            exponent, neg = exponent.operand, True
        if not (isinstance(exponent, ex.Const) and exponent.value.denominator == 1
                and not neg and exponent.value >= 0):
            raise ValueError("polynomial exponent must be a nonnegative integer")
        return poly_from_expr(e.base, var) ** int(exponent.value)
    raise ValueError(f"not a polynomial node: {e!r}")
