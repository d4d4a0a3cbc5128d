"""calcforge: a symbolic-numeric engine for one-dimensional integral calculus.

Expression trees with parsing, printing, differentiation, and guarded numeric
evaluation; adaptive Gauss-Kronrod quadrature with improper-integral
convergence classification; exact rational polynomial algebra and
partial-fraction integration; metric geometry of curves and regions; and a
problem-corpus verification harness with a command-line front end.
"""

from .expr import (
    Add, Const, Div, Expr, Func, Mul, NamedConst, Neg, ParseError, Pow, Sub,
    UnboundVariable, Var, compile_single, differentiate, evaluate, parse,
    simplify, to_text, variables,
)
from .quadrature import (
    Convergent, Divergent, ImproperResult, Inconclusive, IntegralSpec,
    NonFiniteSample, QuadResult, detect_singular_endpoints, integrate_finite,
    integrate_improper,
)
from .exact_algebra import (
    Factorization, IrreducibleRemainder, Poly, SingularSystem, factorize,
    poly_divmod, poly_from_expr, rational_roots, solve_linear_exact,
)
from .partial_fractions import (
    AntiderivativeForm, PFDecomposition, antiderivative, decompose,
    eval_antiderivative,
)
from .geometry import (
    Axis, BetweenCartesian, BetweenCartesianX, CartesianX, CartesianY,
    NegativeRadius, Parametric, Polar, PolarSector, ProfileOrderViolated,
    QuadConfig, TooManyRoots, arc_length, area, area_parametric,
    find_intersections, surface_of_revolution, volume_of_revolution,
)
from .corpus import Problem, Report, Row, load, verify

__version__ = "1.0.0"
