"""Expression trees in one real variable: parse, print, evaluate, differentiate, simplify.

Trees are immutable dataclasses with structural equality.  Function names are
drawn from a closed lexicon; the post-Soviet spellings (tg, ctg, sh, ch, ...)
normalise to canonical ids at parse time, so aliased and canonical input share
one code path everywhere downstream.

Exact rational constants are kept as ``fractions.Fraction``; ``pi`` and ``e``
stay symbolic until evaluation.  Numeric evaluation propagates NaN/inf on
domain violations instead of raising, so quadrature can probe singularities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Union

__all__ = [
    "Expr", "Const", "NamedConst", "Var", "Neg", "Add", "Sub", "Mul", "Div",
    "Pow", "Func", "ParseError", "UnboundVariable", "CANONICAL_FUNCTIONS",
    "FUNCTION_ALIASES", "parse", "to_text", "evaluate", "compile_single",
    "differentiate", "simplify", "variables",
]


@dataclass(frozen=True)
class Const:
    value: Fraction

    def __post_init__(self):
        if not isinstance(self.value, Fraction):
            object.__setattr__(self, "value", Fraction(self.value))


@dataclass(frozen=True)
class NamedConst:
    name: str  # "pi" | "e"


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class Add:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Sub:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Mul:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Div:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: "Expr"


@dataclass(frozen=True)
class Func:
    name: str  # canonical id, see CANONICAL_FUNCTIONS
    arg: "Expr"


Expr = Union[Const, NamedConst, Var, Neg, Add, Sub, Mul, Div, Pow, Func]

CANONICAL_FUNCTIONS = (
    "sin", "cos", "tan", "cot",
    "arcsin", "arccos", "arctan", "arccot",
    "sinh", "cosh", "tanh", "coth",
    "arcsinh", "arccosh", "arctanh", "arccoth",
    "exp", "ln", "log2", "sqrt", "cbrt", "abs",
)

FUNCTION_ALIASES = {
    "tg": "tan", "ctg": "cot", "arctg": "arctan", "arcctg": "arccot",
    "sh": "sinh", "ch": "cosh", "th": "tanh", "cth": "coth",
    "arcsh": "arcsinh", "arcch": "arccosh", "arcth": "arctanh",
    "arccth": "arccoth",
}

_LEXICON = {name: name for name in CANONICAL_FUNCTIONS}
_LEXICON.update(FUNCTION_ALIASES)


class ParseError(ValueError):
    """Lexical or syntactic error; carries the byte offset of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class UnboundVariable(KeyError):
    pass


# ---------------------------------------------------------------------------
# Lexer / parser
#
# Grammar:
#   expr   := term (('+'|'-') term)*
#   term   := factor (('*'|'/') factor)*
#   factor := ('-')? power
#   power  := atom ('^' factor)?
#   atom   := number | 'pi' | 'e' | ident '(' expr ')' | ident | '(' expr ')'
#
# No implicit multiplication; '^' is right-associative and binds tighter than
# unary minus.

_Token = tuple  # (kind, text, offset)


def _tokenize(text: str) -> list:
    tokens = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c in "+-*/^()":
            tokens.append(("op", c, i))
            i += 1
            continue
        if c.isdigit() or (c == "." and i + 1 < n and text[i + 1].isdigit()):
            start = i
            while i < n and text[i].isdigit():
                i += 1
            if i < n and text[i] == ".":
                i += 1
                if i >= n or not text[i].isdigit():
                    raise ParseError("malformed number", start)
                while i < n and text[i].isdigit():
                    i += 1
            tokens.append(("num", text[start:i], start))
            continue
        if c.isalpha() or c == "_":
            start = i
            while i < n and (text[i].isalnum() or text[i] == "_"):
                i += 1
            tokens.append(("ident", text[start:i], start))
            continue
        raise ParseError(f"unexpected character {c!r}", i)
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, tokens: list):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op: str) -> None:
        kind, text, offset = self.peek()
        if kind != "op" or text != op:
            raise ParseError(f"expected {op!r}", offset)
        self.advance()

    def expr(self) -> Expr:
        node = self.term()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "+-":
                self.advance()
                rhs = self.term()
                node = Add(node, rhs) if text == "+" else Sub(node, rhs)
            else:
                return node

    def term(self) -> Expr:
        node = self.factor()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "*/":
                self.advance()
                rhs = self.factor()
                node = Mul(node, rhs) if text == "*" else Div(node, rhs)
            else:
                return node

    def factor(self) -> Expr:
        kind, text, _ = self.peek()
        if kind == "op" and text == "-":
            self.advance()
            return Neg(self.power())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        kind, text, _ = self.peek()
        if kind == "op" and text == "^":
            self.advance()
            return Pow(base, self.factor())
        return base

    def atom(self) -> Expr:
        kind, text, offset = self.advance()
        if kind == "num":
            if "." in text:
                whole, frac = text.split(".")
                num = int(whole + frac)
                return Const(Fraction(num, 10 ** len(frac)))
            return Const(Fraction(int(text)))
        if kind == "ident":
            if text == "pi" or text == "e":
                return NamedConst(text)
            nkind, ntext, _ = self.peek()
            if nkind == "op" and ntext == "(":
                canonical = _LEXICON.get(text)
                if canonical is None:
                    raise ParseError(f"unknown function {text!r}", offset)
                self.advance()
                arg = self.expr()
                self.expect_op(")")
                return Func(canonical, arg)
            return Var(text)
        if kind == "op" and text == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        raise ParseError(f"unexpected token {text!r}" if text else "unexpected end of input", offset)


def parse(text: str) -> Expr:
    """Parse expression text into a tree; raises ParseError with byte offset."""
    parser = _Parser(_tokenize(text))
    node = parser.expr()
    kind, text_, offset = parser.peek()
    if kind != "end":
        raise ParseError(f"trailing tokens starting with {text_!r}", offset)
    return node


# ---------------------------------------------------------------------------
# Printing

def _const_text(q: Fraction) -> str:
    # Denominators of the form 2^a 5^b print as exact decimals so the text
    # re-parses to the same Const node; anything else falls back to a
    # parenthesised quotient (re-parses as Div, still eval-equal).
    if q.denominator == 1:
        return str(q.numerator)
    den = q.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den == 1:
        shift = max(twos, fives)
        scaled = q.numerator * 10 ** shift // q.denominator
        digits = str(abs(scaled)).rjust(shift + 1, "0")
        sign = "-" if scaled < 0 else ""
        text = f"{sign}{digits[:-shift]}.{digits[-shift:]}"
        return f"({text})" if scaled < 0 else text
    return f"({q.numerator}/{q.denominator})"


def to_text(e: Expr) -> str:
    """Emit fully parenthesised canonical text; parse(to_text(e)) == e."""
    if isinstance(e, Const):
        if e.value < 0:
            return f"(-{_const_text(-e.value)})"
        return _const_text(e.value)
    if isinstance(e, NamedConst):
        return e.name
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Neg):
        return f"(-{to_text(e.operand)})"
    if isinstance(e, Add):
        return f"({to_text(e.left)}+{to_text(e.right)})"
    if isinstance(e, Sub):
        return f"({to_text(e.left)}-{to_text(e.right)})"
    if isinstance(e, Mul):
        return f"({to_text(e.left)}*{to_text(e.right)})"
    if isinstance(e, Div):
        return f"({to_text(e.left)}/{to_text(e.right)})"
    if isinstance(e, Pow):
        return f"({to_text(e.base)}^{to_text(e.exponent)})"
    if isinstance(e, Func):
        return f"{e.name}({to_text(e.arg)})"
    raise TypeError(f"not an Expr: {e!r}")


# ---------------------------------------------------------------------------
# Evaluation

_NAN = float("nan")


def _cbrt(x: float) -> float:
    return math.copysign(abs(x) ** (1.0 / 3.0), x)


def _guard(f: Callable[[float], float]) -> Callable[[float], float]:
    def wrapped(x: float) -> float:
        try:
            return f(x)
        except (ValueError, OverflowError, ZeroDivisionError):
            return _NAN
    return wrapped


_FUNC_EVAL: dict = {
    "sin": _guard(math.sin),
    "cos": _guard(math.cos),
    "tan": _guard(math.tan),
    "cot": _guard(lambda x: math.cos(x) / math.sin(x)),
    "arcsin": _guard(math.asin),
    "arccos": _guard(math.acos),
    "arctan": _guard(math.atan),
    "arccot": _guard(lambda x: math.pi / 2 - math.atan(x)),
    "sinh": _guard(math.sinh),
    "cosh": _guard(math.cosh),
    "tanh": _guard(math.tanh),
    "coth": _guard(lambda x: math.cosh(x) / math.sinh(x)),
    "arcsinh": _guard(math.asinh),
    "arccosh": _guard(math.acosh),
    "arctanh": _guard(math.atanh),
    "arccoth": _guard(lambda x: 0.5 * math.log((x + 1.0) / (x - 1.0))),
    "exp": _guard(math.exp),
    "ln": _guard(math.log),
    "log2": _guard(math.log2),
    "sqrt": _guard(math.sqrt),
    "cbrt": _guard(_cbrt),
    "abs": abs,
}


def _safe_div(a: float, b: float) -> float:
    if b == 0.0:
        if a == 0.0 or math.isnan(a):
            return _NAN
        return math.copysign(math.inf, a) * math.copysign(1.0, b)
    try:
        return a / b
    except OverflowError:
        return _NAN


def _safe_pow(a: float, b: float) -> float:
    try:
        return math.pow(a, b)
    except (ValueError, OverflowError):
        # negative base with non-integer exponent, or 0^negative
        if a == 0.0 and b < 0.0:
            return math.inf
        return _NAN


def compile_single(e: Expr, var: str) -> Callable[[float], float]:
    """Compile a single-variable expression into a float->float closure."""
    if isinstance(e, Const):
        v = float(e.value)
        return lambda x: v
    if isinstance(e, NamedConst):
        v = math.pi if e.name == "pi" else math.e
        return lambda x: v
    if isinstance(e, Var):
        if e.name != var:
            raise UnboundVariable(e.name)
        return lambda x: x
    if isinstance(e, Neg):
        f = compile_single(e.operand, var)
        return lambda x: -f(x)
    if isinstance(e, Add):
        f, g = compile_single(e.left, var), compile_single(e.right, var)
        return lambda x: f(x) + g(x)
    if isinstance(e, Sub):
        f, g = compile_single(e.left, var), compile_single(e.right, var)
        return lambda x: f(x) - g(x)
    if isinstance(e, Mul):
        f, g = compile_single(e.left, var), compile_single(e.right, var)
        def mul(x: float) -> float:
            try:
                return f(x) * g(x)
            except OverflowError:
                return _NAN
        return mul
    if isinstance(e, Div):
        f, g = compile_single(e.left, var), compile_single(e.right, var)
        return lambda x: _safe_div(f(x), g(x))
    if isinstance(e, Pow):
        f, g = compile_single(e.base, var), compile_single(e.exponent, var)
        return lambda x: _safe_pow(f(x), g(x))
    if isinstance(e, Func):
        fn = _FUNC_EVAL[e.name]
        f = compile_single(e.arg, var)
        return lambda x: fn(f(x))
    raise TypeError(f"not an Expr: {e!r}")


def evaluate(e: Expr, binding: dict | None = None) -> float:
    """Evaluate with a variable binding; domain violations give NaN/inf."""
    binding = binding or {}
    if isinstance(e, Const):
        return float(e.value)
    if isinstance(e, NamedConst):
        return math.pi if e.name == "pi" else math.e
    if isinstance(e, Var):
        if e.name not in binding:
            raise UnboundVariable(e.name)
        return float(binding[e.name])
    if isinstance(e, Neg):
        return -evaluate(e.operand, binding)
    if isinstance(e, Add):
        return evaluate(e.left, binding) + evaluate(e.right, binding)
    if isinstance(e, Sub):
        return evaluate(e.left, binding) - evaluate(e.right, binding)
    if isinstance(e, Mul):
        try:
            return evaluate(e.left, binding) * evaluate(e.right, binding)
        except OverflowError:
            return _NAN
    if isinstance(e, Div):
        return _safe_div(evaluate(e.left, binding), evaluate(e.right, binding))
    if isinstance(e, Pow):
        return _safe_pow(evaluate(e.base, binding), evaluate(e.exponent, binding))
    if isinstance(e, Func):
        return _FUNC_EVAL[e.name](evaluate(e.arg, binding))
    raise TypeError(f"not an Expr: {e!r}")


def variables(e: Expr) -> set:
    """Free variable names of the tree."""
    if isinstance(e, Var):
        return {e.name}
    if isinstance(e, (Const, NamedConst)):
        return set()
    if isinstance(e, Neg):
        return variables(e.operand)
    if isinstance(e, Func):
        return variables(e.arg)
    if isinstance(e, Pow):
        return variables(e.base) | variables(e.exponent)
    return variables(e.left) | variables(e.right)


# ---------------------------------------------------------------------------
# Differentiation

_ZERO = Const(Fraction(0))
_ONE = Const(Fraction(1))
_TWO = Const(Fraction(2))


def _is_const(e: Expr, q) -> bool:
    return isinstance(e, Const) and e.value == q


def _add(l: Expr, r: Expr) -> Expr:
    if _is_const(l, 0):
        return r
    if _is_const(r, 0):
        return l
    return Add(l, r)


def _sub(l: Expr, r: Expr) -> Expr:
    if _is_const(r, 0):
        return l
    if _is_const(l, 0):
        return Neg(r)
    return Sub(l, r)


def _mul(l: Expr, r: Expr) -> Expr:
    if _is_const(l, 0) or _is_const(r, 0):
        return _ZERO
    if _is_const(l, 1):
        return r
    if _is_const(r, 1):
        return l
    return Mul(l, r)


def _div(l: Expr, r: Expr) -> Expr:
    if _is_const(l, 0):
        return _ZERO
    if _is_const(r, 1):
        return l
    return Div(l, r)


def _func_derivative(name: str, u: Expr) -> Expr:
    """Derivative of the named function at argument u (chain factor excluded)."""
    if name == "sin":
        return Func("cos", u)
    if name == "cos":
        return Neg(Func("sin", u))
    if name == "tan":
        return _div(_ONE, Pow(Func("cos", u), _TWO))
    if name == "cot":
        return Neg(_div(_ONE, Pow(Func("sin", u), _TWO)))
    if name == "arcsin":
        return _div(_ONE, Func("sqrt", _sub(_ONE, Pow(u, _TWO))))
    if name == "arccos":
        return Neg(_div(_ONE, Func("sqrt", _sub(_ONE, Pow(u, _TWO)))))
    if name == "arctan":
        return _div(_ONE, _add(_ONE, Pow(u, _TWO)))
    if name == "arccot":
        return Neg(_div(_ONE, _add(_ONE, Pow(u, _TWO))))
    if name == "sinh":
        return Func("cosh", u)
    if name == "cosh":
        return Func("sinh", u)
    if name == "tanh":
        return _div(_ONE, Pow(Func("cosh", u), _TWO))
    if name == "coth":
        return Neg(_div(_ONE, Pow(Func("sinh", u), _TWO)))
    if name == "arcsinh":
        return _div(_ONE, Func("sqrt", _add(Pow(u, _TWO), _ONE)))
    if name == "arccosh":
        return _div(_ONE, Func("sqrt", _sub(Pow(u, _TWO), _ONE)))
    if name in ("arctanh", "arccoth"):
        return _div(_ONE, _sub(_ONE, Pow(u, _TWO)))
    if name == "exp":
        return Func("exp", u)
    if name == "ln":
        return _div(_ONE, u)
    if name == "log2":
        return _div(_ONE, _mul(u, Func("ln", _TWO)))
    if name == "sqrt":
        return _div(_ONE, _mul(_TWO, Func("sqrt", u)))
    if name == "cbrt":
        return _div(_ONE, _mul(Const(Fraction(3)), Pow(Func("cbrt", u), _TWO)))
    if name == "abs":
        # sign(u); evaluates to NaN at u = 0
        return _div(u, Func("abs", u))
    raise ValueError(f"no derivative rule for {name}")


def differentiate(e: Expr, var: str) -> Expr:
    """Symbolic derivative by structural recursion with the chain rule."""
    if isinstance(e, (Const, NamedConst)):
        return _ZERO
    if isinstance(e, Var):
        return _ONE if e.name == var else _ZERO
    if isinstance(e, Neg):
        return Neg(differentiate(e.operand, var))
    if isinstance(e, Add):
        return _add(differentiate(e.left, var), differentiate(e.right, var))
    if isinstance(e, Sub):
        return _sub(differentiate(e.left, var), differentiate(e.right, var))
    if isinstance(e, Mul):
        return _add(
            _mul(differentiate(e.left, var), e.right),
            _mul(e.left, differentiate(e.right, var)),
        )
    if isinstance(e, Div):
        num = _sub(
            _mul(differentiate(e.left, var), e.right),
            _mul(e.left, differentiate(e.right, var)),
        )
        return _div(num, Pow(e.right, _TWO))
    if isinstance(e, Pow):
        u, v = e.base, e.exponent
        du = differentiate(u, var)
        if var not in variables(v):
            # power rule: v * u^(v-1) * u'
            return _mul(_mul(v, Pow(u, _sub(v, _ONE))), du)
        dv = differentiate(v, var)
        if var not in variables(u):
            return _mul(e, _mul(Func("ln", u), dv))
        # general case: u^v * (v' ln u + v u' / u)
        return _mul(e, _add(_mul(dv, Func("ln", u)), _div(_mul(v, du), u)))
    if isinstance(e, Func):
        return _mul(_func_derivative(e.name, e.arg), differentiate(e.arg, var))
    raise TypeError(f"not an Expr: {e!r}")


# ---------------------------------------------------------------------------
# Simplification

def simplify(e: Expr) -> Expr:
    """Constant folding over exact rationals plus unit/zero/double-negation rules."""
    if isinstance(e, (Const, NamedConst, Var)):
        return e
    if isinstance(e, Neg):
        inner = simplify(e.operand)
        if isinstance(inner, Const):
            return Const(-inner.value)
        if isinstance(inner, Neg):
            return inner.operand
        return Neg(inner)
    if isinstance(e, Func):
        return Func(e.name, simplify(e.arg))
    if isinstance(e, Pow):
        base, exponent = simplify(e.base), simplify(e.exponent)
        if _is_const(exponent, 0):
            return _ONE
        if _is_const(exponent, 1):
            return base
        if (isinstance(base, Const) and isinstance(exponent, Const)
                and exponent.value.denominator == 1):
            k = int(exponent.value)
            if k >= 0 or base.value != 0:
                return Const(base.value ** k)
        return Pow(base, exponent)
    left = simplify(e.left)
    right = simplify(e.right)
    lc = left.value if isinstance(left, Const) else None
    rc = right.value if isinstance(right, Const) else None
    if isinstance(e, Add):
        if lc is not None and rc is not None:
            return Const(lc + rc)
        if lc == 0:
            return right
        if rc == 0:
            return left
        return Add(left, right)
    if isinstance(e, Sub):
        if lc is not None and rc is not None:
            return Const(lc - rc)
        if rc == 0:
            return left
        if lc == 0:
            return Neg(right)
        return Sub(left, right)
    if isinstance(e, Mul):
        if lc is not None and rc is not None:
            return Const(lc * rc)
        if lc == 0 or rc == 0:
            return _ZERO
        if lc == 1:
            return right
        if rc == 1:
            return left
        return Mul(left, right)
    if isinstance(e, Div):
        if lc is not None and rc is not None and rc != 0:
            return Const(lc / rc)
        if lc == 0:
            return _ZERO
        if rc == 1:
            return left
        return Div(left, right)
    raise TypeError(f"not an Expr: {e!r}")
